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

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dsb/path.hpp"
#include "dsb/predicate.hpp"
#include "dsb/value.hpp"

namespace dsb {

using PermissionId = std::string;
using ProductId = std::string;

enum class DeclaredIntent { Read, ReadWrite };

struct DeclaredScope {
  enum class Kind { HomeGlobal, DeviceLocal };
  Kind kind = Kind::HomeGlobal;
  std::string device_type;  // DeviceLocal only
};

/// One requested permission with the developer-provided description
/// metadata shown to the user at authorization time.
struct PermissionRequest {
  PermissionId permission;
  std::string description;
  DeclaredIntent intent = DeclaredIntent::ReadWrite;
  DeclaredScope scope;
  /// Permission the description is actually about; defaults to `permission`.
  std::optional<PermissionId> describes_permission;
  /// The description talks about the home's presence (home/away) state.
  bool refers_to_home_state = false;
};

struct ClientTls {
  bool validates_certificates = true;
  bool plaintext = false;
};

/// Internal effect on one of the product's own device variables: either a
/// fixed value or a copy of the triggering event's new value.
struct Effect {
  std::string variable;
  std::optional<Value> value;
  bool mirror = false;
};

struct BehaviorRule {
  PathPattern watch;
  Predicate when;
  std::vector<Effect> effects;
};

struct CommandSpec {
  std::string name;
  std::vector<Effect> effects;
};

struct ProductManifest {
  std::string name;
  std::vector<PermissionRequest> permissions;
  Integrity integrity = Integrity::Low;
  ClientTls client_tls;
  /// The device subtree this product embodies, e.g. devices/cameras/cam1.
  std::optional<Path> device;
  std::vector<BehaviorRule> behaviors;
  std::vector<CommandSpec> commands;
  /// Opt-in routines the product ships; the owner is the product itself.
  std::vector<Json> routines;
  /// Expected lint category, used by the lint fixture corpus.
  std::optional<std::string> expected_category;

  std::set<PermissionId> requested_permissions() const;

  /// Throws Error{InvalidManifest}.
  static ProductManifest from_json(const Json& j);
  Json to_json() const;
};

std::vector<ProductManifest> manifests_from_json(const Json& j);

}  // namespace dsb
