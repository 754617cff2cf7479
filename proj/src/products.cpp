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

#include "dsb/products.hpp"

#include <set>

namespace dsb {

SpawnedProduct spawn_product(Platform& platform, const ProductManifest& manifest) {
  SpawnedProduct out;
  out.id = platform.register_product(manifest);
  out.grant = platform.authorize(out.id, Consent::Granted);
  if (manifest.device) platform.behaviors().attach(manifest, manifest.integrity);
  for (const auto& rj : manifest.routines) {
    auto r = Routine::from_json(rj);
    if (r.owner.empty()) r.owner = out.id;
    out.routines.push_back(platform.routines().register_routine(std::move(r)));
  }
  return out;
}

std::string_view to_string(ViolationCategory c) {
  switch (c) {
    case ViolationCategory::VC1: return "VC1";
    case ViolationCategory::VC2: return "VC2";
    case ViolationCategory::VC3: return "VC3";
    case ViolationCategory::VC4: return "VC4";
  }
  return "?";
}

bool is_read_write_permission(const PermissionId& p) {
  auto ends_with = [&](std::string_view s) {
    return p.size() >= s.size() && p.compare(p.size() - s.size(), s.size(), s) == 0;
  };
  return ends_with("_rw") || ends_with("_write");
}

bool is_home_global_permission(const PermissionId& p) {
  static const std::set<PermissionId> global{"away_rw", "away_read", "structure_rw",
                                             "eta_read", "eta_write"};
  return global.count(p) > 0;
}

std::vector<LintViolation> lint_manifest(const ProductManifest& manifest) {
  std::vector<LintViolation> out;
  for (const auto& req : manifest.permissions) {
    const bool vc1 = is_read_write_permission(req.permission) && req.intent == DeclaredIntent::Read;
    const bool vc2 = req.scope.kind == DeclaredScope::Kind::DeviceLocal &&
                     (is_home_global_permission(req.permission) || req.refers_to_home_state);
    if (vc1 && vc2) {
      out.push_back({ViolationCategory::VC3, req.permission,
                     "read-write requested for a read-only need, and home-wide state described as "
                     "local to " + req.scope.device_type});
    } else if (vc1) {
      out.push_back({ViolationCategory::VC1, req.permission,
                     "read-write requested but the description only needs read"});
    } else if (vc2) {
      out.push_back({ViolationCategory::VC2, req.permission,
                     "home-wide state described as local to " + req.scope.device_type});
    }
    if (req.describes_permission && *req.describes_permission != req.permission) {
      out.push_back({ViolationCategory::VC4, req.permission,
                     "description is about " + *req.describes_permission});
    }
  }
  return out;
}

Json lint_to_json(const ProductManifest& manifest, const std::vector<LintViolation>& v) {
  Json list = Json::array();
  for (const auto& x : v) {
    list.push_back({{"category", std::string(to_string(x.category))},
                    {"permission", x.permission},
                    {"detail", x.detail}});
  }
  return Json{{"product", manifest.name}, {"violations", list}};
}

}  // namespace dsb
