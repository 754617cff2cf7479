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

#include "dsb/manifest.hpp"

#include "dsb/error.hpp"

namespace dsb {
namespace {

Effect effect_from_json(const Json& j) {
  Effect e;
  e.variable = j.at("variable").get<std::string>();
  if (!is_valid_segment(e.variable)) {
    throw Error(Errc::InvalidManifest, "bad effect variable '" + e.variable + "'");
  }
  e.mirror = j.value("mirror", false);
  if (j.contains("value")) e.value = value_from_json(j["value"]);
  if (e.mirror == e.value.has_value()) {
    throw Error(Errc::InvalidManifest, "effect needs exactly one of value|mirror");
  }
  return e;
}

Json effect_to_json(const Effect& e) {
  Json j{{"variable", e.variable}};
  if (e.mirror) j["mirror"] = true;
  if (e.value) j["value"] = value_to_json(*e.value);
  return j;
}

}  // namespace

std::set<PermissionId> ProductManifest::requested_permissions() const {
  std::set<PermissionId> out;
  for (const auto& p : permissions) out.insert(p.permission);
  return out;
}

ProductManifest ProductManifest::from_json(const Json& j) {
  try {
    ProductManifest m;
    m.name = j.at("name").get<std::string>();
    if (!is_valid_segment(m.name)) {
      throw Error(Errc::InvalidManifest, "product name must match [a-z0-9_-]+: " + m.name);
    }
    m.integrity = integrity_from_string(j.value("integrity", std::string("low")));
    if (j.contains("client_tls")) {
      const auto& t = j["client_tls"];
      m.client_tls.validates_certificates = t.value("validates_certificates", true);
      m.client_tls.plaintext = t.value("plaintext", false);
    }
    if (j.contains("device")) m.device = Path::parse(j["device"].get<std::string>());

    std::set<PermissionId> seen;
    for (const auto& p : j.value("permissions", Json::array())) {
      PermissionRequest r;
      r.permission = p.at("permission").get<std::string>();
      if (!seen.insert(r.permission).second) {
        throw Error(Errc::InvalidManifest, "permission listed twice: " + r.permission);
      }
      r.description = p.at("description").get<std::string>();
      const auto intent = p.at("intent").get<std::string>();
      if (intent == "read") {
        r.intent = DeclaredIntent::Read;
      } else if (intent == "read-write") {
        r.intent = DeclaredIntent::ReadWrite;
      } else {
        throw Error(Errc::InvalidManifest, "intent must be read|read-write");
      }
      const auto& scope = p.at("scope");
      if (scope.is_string() && scope.get<std::string>() == "home-global") {
        r.scope.kind = DeclaredScope::Kind::HomeGlobal;
      } else if (scope.is_object() && scope.contains("device-local")) {
        r.scope.kind = DeclaredScope::Kind::DeviceLocal;
        r.scope.device_type = scope["device-local"].get<std::string>();
      } else {
        throw Error(Errc::InvalidManifest, "scope must be home-global or {device-local: type}");
      }
      if (p.contains("describes_permission")) {
        r.describes_permission = p["describes_permission"].get<std::string>();
      }
      r.refers_to_home_state = p.value("refers_to_home_state", false);
      m.permissions.push_back(std::move(r));
    }

    for (const auto& b : j.value("behaviors", Json::array())) {
      BehaviorRule rule;
      rule.watch = PathPattern::parse(b.at("watch").get<std::string>());
      rule.when = Predicate::from_json(b.at("when"));
      for (const auto& e : b.at("effects")) rule.effects.push_back(effect_from_json(e));
      m.behaviors.push_back(std::move(rule));
    }
    for (const auto& c : j.value("commands", Json::array())) {
      CommandSpec cmd;
      cmd.name = c.at("name").get<std::string>();
      for (const auto& e : c.at("effects")) cmd.effects.push_back(effect_from_json(e));
      m.commands.push_back(std::move(cmd));
    }
    for (const auto& r : j.value("routines", Json::array())) m.routines.push_back(r);
    if ((!m.behaviors.empty() || !m.commands.empty()) && !m.device) {
      throw Error(Errc::InvalidManifest, m.name + ": behaviors need a device");
    }
    if (j.contains("expected_category")) {
      m.expected_category = j["expected_category"].get<std::string>();
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidManifest, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidManifest) throw;
    throw Error(Errc::InvalidManifest, e.what());
  }
}

Json ProductManifest::to_json() const {
  Json j;
  j["name"] = name;
  j["integrity"] = std::string(to_string(integrity));
  j["client_tls"] = {{"validates_certificates", client_tls.validates_certificates},
                     {"plaintext", client_tls.plaintext}};
  if (device) j["device"] = device->str();
  Json perms = Json::array();
  for (const auto& p : permissions) {
    Json pj;
    pj["permission"] = p.permission;
    pj["description"] = p.description;
    pj["intent"] = p.intent == DeclaredIntent::Read ? "read" : "read-write";
    if (p.scope.kind == DeclaredScope::Kind::HomeGlobal) {
      pj["scope"] = "home-global";
    } else {
      pj["scope"] = {{"device-local", p.scope.device_type}};
    }
    if (p.describes_permission) pj["describes_permission"] = *p.describes_permission;
    if (p.refers_to_home_state) pj["refers_to_home_state"] = true;
    perms.push_back(std::move(pj));
  }
  j["permissions"] = std::move(perms);
  if (!behaviors.empty()) {
    Json bs = Json::array();
    for (const auto& b : behaviors) {
      Json effects = Json::array();
      for (const auto& e : b.effects) effects.push_back(effect_to_json(e));
      bs.push_back({{"watch", b.watch.str()}, {"when", b.when.to_json()}, {"effects", effects}});
    }
    j["behaviors"] = std::move(bs);
  }
  if (!commands.empty()) {
    Json cs = Json::array();
    for (const auto& c : commands) {
      Json effects = Json::array();
      for (const auto& e : c.effects) effects.push_back(effect_to_json(e));
      cs.push_back({{"name", c.name}, {"effects", effects}});
    }
    j["commands"] = std::move(cs);
  }
  if (!routines.empty()) j["routines"] = routines;
  if (expected_category) j["expected_category"] = *expected_category;
  return j;
}

std::vector<ProductManifest> manifests_from_json(const Json& j) {
  const Json& list = j.is_object() && j.contains("manifests") ? j["manifests"] : j;
  if (!list.is_array()) throw Error(Errc::InvalidManifest, "expected a list of manifests");
  std::vector<ProductManifest> out;
  for (const auto& m : list) out.push_back(ProductManifest::from_json(m));
  return out;
}

}  // namespace dsb
