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

#include <string>
#include <vector>

#include "dsb/manifest.hpp"
#include "dsb/platform.hpp"

namespace dsb {

struct SpawnedProduct {
  ProductId id;
  Grant grant;
  std::vector<RoutineId> routines;
};

/// Registers, authorizes (with consent), attaches behaviors and installs
/// the manifest's routines. Errors propagate from the policy engine.
SpawnedProduct spawn_product(Platform& platform, const ProductManifest& manifest);

enum class ViolationCategory { VC1, VC2, VC3, VC4 };
std::string_view to_string(ViolationCategory c);

struct LintViolation {
  ViolationCategory category = ViolationCategory::VC1;
  PermissionId permission;
  std::string detail;

  friend bool operator==(const LintViolation&, const LintViolation&) = default;
};

/// Permissions granting write access (`*_rw`, `*_write`).
bool is_read_write_permission(const PermissionId& p);
/// Permissions whose variables affect the whole home rather than a device.
bool is_home_global_permission(const PermissionId& p);

/// Checks the declared intent/scope/subject metadata of each requested
/// permission. VC3 replaces a VC1+VC2 pair on the same permission.
std::vector<LintViolation> lint_manifest(const ProductManifest& manifest);

Json lint_to_json(const ProductManifest& manifest, const std::vector<LintViolation>& v);

}  // namespace dsb
