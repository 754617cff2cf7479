// Copyright 2026 The dsbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dsb/platform.hpp"

namespace dsb {

/// Observed access, ordered so that std::max is the union of two levels.
enum class Access { None, Read, ReadWrite, ReadWriteDelete };
std::string_view to_string(Access a);
Access access_from_string(std::string_view s);

using PathAccess = std::map<std::string, Access>;

struct PermissionMap {
  std::map<PermissionId, PathAccess> entries;

  /// Key-sorted: {"perm": {"path": "read", ...}, ...}.
  Json to_json() const;
  static PermissionMap from_json(const Json& j);
  friend bool operator==(const PermissionMap&, const PermissionMap&) = default;
};

struct DiffEntry {
  PermissionId permission;
  std::string path;
  Access documented = Access::None;
  Access observed = Access::None;

  friend bool operator==(const DiffEntry&, const DiffEntry&) = default;
};

struct MapDiff {
  std::vector<DiffEntry> entries;

  bool empty() const { return entries.empty(); }
  Json to_json() const;
};

/// Every path currently in the platform's store.
std::vector<std::string> path_universe(const Platform& platform);

/// Probes a principal holding exactly `permissions` with GET/PUT/DELETE on
/// every path. Each probe runs on a fresh scratch copy; `platform` is
/// never mutated.
PathAccess probe_permission_set(const Platform& platform, const std::set<PermissionId>& permissions);

/// One single-permission principal per entry of `permissions`.
PermissionMap derive_permission_map(const Platform& platform,
                                    const std::vector<PermissionId>& permissions);

/// What `doc` says each of its permissions can do on `universe`, evaluated
/// directly from its clauses.
PermissionMap documented_permission_map(const PolicyDocument& doc, const HomeSchema& schema,
                                        const std::vector<std::string>& universe);

/// Pointwise comparison ordered by (permission, path). Throws
/// Error{UniverseMismatch} when the permission or path sets differ.
MapDiff diff_permission_map(const PermissionMap& observed, const PermissionMap& documented);

}  // namespace dsb
