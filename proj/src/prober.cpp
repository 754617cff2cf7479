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

#include "dsb/prober.hpp"

#include <algorithm>

namespace dsb {
namespace {

Access level(bool read, bool write, bool del) {
  if (read && write && del) return Access::ReadWriteDelete;
  if (read && write) return Access::ReadWrite;
  if (read) return Access::Read;
  return Access::None;
}

/// Scratch platform holding a fresh grant for `permissions`.
std::unique_ptr<Platform> probe_base(const Platform& platform,
                                     const std::set<PermissionId>& permissions, Token& token) {
  auto base = platform.scratch_copy();
  const bool hue_pairing = is_hue(base->mode()) && permissions.size() == 1 &&
                           *permissions.begin() == base->policy().hue_permission();
  if (hue_pairing) {
    base->press_link_button();
    token = base->hue_create_user("permission-probe").token;
    base->expire_link_button();
    return base;
  }
  ProductManifest m;
  m.name = "permission-probe";
  for (const auto& p : permissions) {
    m.permissions.push_back({p, "probe", DeclaredIntent::ReadWrite, {}, std::nullopt, false});
  }
  base->register_product(m);
  token = base->authorize(m.name).token;
  return base;
}

}  // namespace

std::string_view to_string(Access a) {
  switch (a) {
    case Access::None: return "none";
    case Access::Read: return "read";
    case Access::ReadWrite: return "read-write";
    case Access::ReadWriteDelete: return "read-write-delete";
  }
  return "?";
}

Access access_from_string(std::string_view s) {
  for (auto a : {Access::None, Access::Read, Access::ReadWrite, Access::ReadWriteDelete}) {
    if (to_string(a) == s) return a;
  }
  throw Error(Errc::InvalidPolicy, "unknown access level '" + std::string(s) + "'");
}

Json PermissionMap::to_json() const {
  Json j = Json::object();
  for (const auto& [perm, paths] : entries) {
    Json pj = Json::object();
    for (const auto& [path, a] : paths) pj[path] = std::string(to_string(a));
    j[perm] = std::move(pj);
  }
  return j;
}

PermissionMap PermissionMap::from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidPolicy, "permission map must be an object");
  PermissionMap m;
  for (const auto& [perm, paths] : j.items()) {
    auto& dst = m.entries[perm];
    for (const auto& [path, a] : paths.items()) dst[path] = access_from_string(a.get<std::string>());
  }
  return m;
}

Json MapDiff::to_json() const {
  Json list = Json::array();
  for (const auto& e : entries) {
    list.push_back({{"permission", e.permission},
                    {"path", e.path},
                    {"documented", std::string(to_string(e.documented))},
                    {"observed", std::string(to_string(e.observed))}});
  }
  return list;
}

std::vector<std::string> path_universe(const Platform& platform) {
  std::vector<std::string> out;
  for (const auto& [path, _] : platform.store().snapshot().values) out.push_back(path);
  return out;
}

PathAccess probe_permission_set(const Platform& platform, const std::set<PermissionId>& permissions) {
  Token token;
  const auto base = probe_base(platform, permissions, token);
  PathAccess out;
  for (const auto& path : path_universe(platform)) {
    const auto p = Path::parse(path);
    auto attempt = [&](Method m) {
      auto s = base->scratch_copy();
      std::optional<Value> body;
      if (m == Method::Put) body = dummy_value(s->store().spec(p).type);
      return s->handle_request({m, path, token, body}).ok();
    };
    out[path] = level(attempt(Method::Get), attempt(Method::Put), attempt(Method::Delete));
  }
  return out;
}

PermissionMap derive_permission_map(const Platform& platform,
                                    const std::vector<PermissionId>& permissions) {
  PermissionMap m;
  for (const auto& perm : permissions) m.entries[perm] = probe_permission_set(platform, {perm});
  return m;
}

PermissionMap documented_permission_map(const PolicyDocument& doc, const HomeSchema& schema,
                                        const std::vector<std::string>& universe) {
  const bool hardened = doc.mode == PolicyMode::HueHardened;
  PermissionMap m;
  for (const auto& rule : doc.permissions) {
    auto& dst = m.entries[rule.id];
    for (const auto& path : universe) {
      const auto p = Path::parse(path);
      const auto spec = schema.find(p);
      bool read = false;
      bool rw = false;
      for (const auto& c : rule.clauses) {
        if (!c.pattern.matches(p)) continue;
        read = true;
        rw = rw || c.access == ClauseAccess::ReadWrite;
      }
      const bool client_ro =
          hardened && std::any_of(hue_hardened_read_only().begin(), hue_hardened_read_only().end(),
                                  [&](const PathPattern& pp) { return pp.matches(p); });
      const bool write = rw && spec && !spec->read_only() && !client_ro;
      const bool del = write && spec->deletable;
      dst[path] = level(read, write, del);
    }
  }
  return m;
}

MapDiff diff_permission_map(const PermissionMap& observed, const PermissionMap& documented) {
  auto keys = [](const auto& m) {
    std::vector<std::string> out;
    for (const auto& [k, _] : m) out.push_back(k);
    return out;
  };
  if (keys(observed.entries) != keys(documented.entries)) {
    throw Error(Errc::UniverseMismatch, "permission sets differ");
  }
  MapDiff diff;
  for (const auto& [perm, obs] : observed.entries) {
    const auto& doc = documented.entries.at(perm);
    if (keys(obs) != keys(doc)) throw Error(Errc::UniverseMismatch, "path sets differ for " + perm);
    for (const auto& [path, a] : obs) {
      if (a != doc.at(path)) diff.entries.push_back({perm, path, doc.at(path), a});
    }
  }
  return diff;
}

}  // namespace dsb
