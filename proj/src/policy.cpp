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

#include "dsb/policy.hpp"

#include <algorithm>
#include <cstdio>

#include "dsb/datastore.hpp"
#include "dsb/error.hpp"

namespace dsb {

std::string_view to_string(PolicyMode m) {
  switch (m) {
    case PolicyMode::NestFaithful: return "nest-faithful";
    case PolicyMode::NestIfc: return "nest-ifc";
    case PolicyMode::HueFaithful: return "hue-faithful";
    case PolicyMode::HueHardened: return "hue-hardened";
  }
  return "?";
}

PolicyMode policy_mode_from_string(std::string_view s) {
  if (s == "nest-faithful") return PolicyMode::NestFaithful;
  if (s == "nest-ifc") return PolicyMode::NestIfc;
  if (s == "hue-faithful") return PolicyMode::HueFaithful;
  if (s == "hue-hardened") return PolicyMode::HueHardened;
  throw Error(Errc::InvalidPolicy, "unknown mode '" + std::string(s) + "'");
}

std::string_view to_string(AccessKind k) {
  switch (k) {
    case AccessKind::Read: return "read";
    case AccessKind::Write: return "write";
    case AccessKind::Delete: return "delete";
  }
  return "?";
}

std::string_view to_string(DenyReason r) {
  switch (r) {
    case DenyReason::UnknownToken: return "unknown-token";
    case DenyReason::Revoked: return "revoked";
    case DenyReason::NoClause: return "no-clause";
    case DenyReason::ReadOnlyVariable: return "read-only-variable";
  }
  return "?";
}

const PermissionRule* PolicyDocument::find(const PermissionId& id) const {
  auto it = std::find_if(permissions.begin(), permissions.end(),
                         [&](const auto& r) { return r.id == id; });
  return it == permissions.end() ? nullptr : &*it;
}

std::vector<PermissionId> PolicyDocument::permission_ids() const {
  std::vector<PermissionId> out;
  for (const auto& r : permissions) out.push_back(r.id);
  return out;
}

void PolicyDocument::validate(const HomeSchema& schema) const {
  std::set<PermissionId> ids;
  for (const auto& rule : permissions) {
    if (!ids.insert(rule.id).second) {
      throw Error(Errc::InvalidPolicy, "duplicate permission " + rule.id);
    }
    for (const auto& clause : rule.clauses) {
      if (clause.access != ClauseAccess::ReadWrite) continue;
      for (const auto& v : schema.variables()) {
        if (v.read_only() && clause.pattern.matches(v.path)) {
          throw Error(Errc::InvalidPolicy, rule.id + " grants write on read-only " +
                                               v.path.str());
        }
      }
      for (const auto& c : schema.collections()) {
        if (c.mutability == Mutability::ReadOnly &&
            clause.pattern.matches(c.path.child("x"))) {
          throw Error(Errc::InvalidPolicy,
                      rule.id + " grants write on read-only collection " + c.path.str());
        }
      }
    }
  }
  if (is_hue(mode) && permissions.size() != 1) {
    throw Error(Errc::InvalidPolicy, "hue policies define exactly one flat permission");
  }
}

PolicyDocument PolicyDocument::from_json(const Json& j) {
  try {
    PolicyDocument doc;
    doc.mode = policy_mode_from_string(j.value("mode", std::string("nest-faithful")));
    for (const auto& p : j.at("permissions")) {
      PermissionRule rule;
      rule.id = p.at("id").get<std::string>();
      rule.provenance = p.value("provenance", std::string("fixture"));
      if (rule.provenance != "documented" && rule.provenance != "fixture") {
        throw Error(Errc::InvalidPolicy, "provenance must be documented|fixture");
      }
      for (const auto& c : p.at("clauses")) {
        Clause clause;
        clause.pattern = PathPattern::parse(c.at("path").get<std::string>());
        const auto access = c.at("access").get<std::string>();
        if (access == "read") {
          clause.access = ClauseAccess::Read;
        } else if (access == "read-write") {
          clause.access = ClauseAccess::ReadWrite;
        } else {
          throw Error(Errc::InvalidPolicy, "access must be read|read-write");
        }
        rule.clauses.push_back(std::move(clause));
      }
      doc.permissions.push_back(std::move(rule));
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidPolicy, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidPolicy) throw;
    throw Error(Errc::InvalidPolicy, e.what());
  }
}

Json PolicyDocument::to_json() const {
  Json perms = Json::array();
  for (const auto& r : permissions) {
    Json clauses = Json::array();
    for (const auto& c : r.clauses) {
      clauses.push_back({{"path", c.pattern.str()},
                         {"access", c.access == ClauseAccess::Read ? "read" : "read-write"}});
    }
    perms.push_back({{"id", r.id}, {"provenance", r.provenance}, {"clauses", clauses}});
  }
  return Json{{"mode", std::string(to_string(mode))}, {"permissions", perms}};
}

AccessContext access_context(const DataStore& store) {
  static const Path linkbutton = Path::parse("config/linkbutton");
  AccessContext ctx;
  if (store.contains(linkbutton)) {
    const auto v = store.get(linkbutton);
    ctx.link_window_open = std::holds_alternative<bool>(v) && std::get<bool>(v);
  }
  return ctx;
}

const std::vector<PathPattern>& hue_hardened_read_only() {
  static const std::vector<PathPattern> patterns = {
      PathPattern::parse("config/linkbutton"),
      PathPattern::parse("config/whitelist/*"),
  };
  return patterns;
}

PolicyEngine::PolicyEngine(PolicyDocument doc, std::shared_ptr<const HomeSchema> schema,
                           std::uint64_t seed)
    : doc_(std::move(doc)), schema_(std::move(schema)), rng_(seed) {
  doc_.validate(*schema_);
}

ProductId PolicyEngine::register_product(const ProductManifest& manifest) {
  for (const auto& p : manifest.requested_permissions()) {
    if (!doc_.find(p)) throw Error(Errc::UnknownPermission, p);
  }
  if (products_.count(manifest.name)) {
    throw Error(Errc::InvalidManifest, "product already registered: " + manifest.name);
  }
  products_[manifest.name] = ProductRecord{manifest, manifest.integrity};
  return manifest.name;
}

Grant PolicyEngine::authorize(const ProductId& product, Consent consent) {
  const auto* rec = this->product(product);
  if (!rec) throw Error(Errc::UnknownProduct, product);
  if (consent == Consent::Denied) throw Error(Errc::ConsentDenied, product);
  return issue(product, rec->manifest.requested_permissions());
}

Grant PolicyEngine::issue(const ProductId& product, std::set<PermissionId> permissions,
                          Token token) {
  if (!this->product(product)) throw Error(Errc::UnknownProduct, product);
  for (const auto& p : permissions) {
    if (!doc_.find(p)) throw Error(Errc::UnknownPermission, p);
  }
  if (token.empty()) {
    token = fresh_token();
  } else if (grants_.count(token)) {
    throw Error(Errc::InvalidSchema, "token already issued: " + token);
  }
  Grant g;
  g.token = token;
  g.product = product;
  g.permissions = std::move(permissions);
  g.structure = schema_->structure_ids().empty() ? "bridge" : schema_->structure_ids().front();
  grants_[token] = g;
  issue_order_.push_back(token);
  return g;
}

Token PolicyEngine::fresh_token() {
  while (true) {
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx",
                  static_cast<unsigned long long>(rng_()),
                  static_cast<unsigned long long>(rng_()));
    Token t(buf);
    if (!grants_.count(t)) return t;
  }
}

Decision PolicyEngine::check_access(const Token& token, const Path& path, AccessKind kind,
                                    const AccessContext& ctx) const {
  const auto* g = find_grant(token);
  if (!g) return Decision::deny(DenyReason::UnknownToken);
  return check_grant(*g, path, kind, ctx);
}

Decision PolicyEngine::check_grant(const Grant& grant, const Path& path, AccessKind kind,
                                   const AccessContext& ctx) const {
  if (grant.revoked) return Decision::deny(DenyReason::Revoked);

  const auto spec = schema_->find(path);
  const bool hardened_ro =
      doc_.mode == PolicyMode::HueHardened &&
      std::any_of(hue_hardened_read_only().begin(), hue_hardened_read_only().end(),
                  [&](const auto& p) { return p.matches(path); });

  if (kind == AccessKind::Write && spec && (spec->read_only() || hardened_ro)) {
    return Decision::deny(DenyReason::ReadOnlyVariable);
  }
  if (kind == AccessKind::Delete) {
    if (!spec || !spec->deletable) return Decision::deny(DenyReason::NoClause);
    if (hardened_ro && !ctx.link_window_open) {
      return Decision::deny(DenyReason::ReadOnlyVariable);
    }
  }

  const bool need_write = kind != AccessKind::Read;
  for (const auto& pid : grant.permissions) {
    const auto* rule = doc_.find(pid);
    if (!rule) continue;
    for (const auto& clause : rule->clauses) {
      if (need_write && clause.access != ClauseAccess::ReadWrite) continue;
      if (clause.pattern.matches(path)) return Decision::allow();
    }
  }
  return Decision::deny(DenyReason::NoClause);
}

void PolicyEngine::revoke(const Token& token) {
  auto it = grants_.find(token);
  if (it == grants_.end() || it->second.revoked) throw Error(Errc::UnknownToken, token);
  it->second.revoked = true;
}

const Grant* PolicyEngine::find_grant(const Token& token) const {
  auto it = grants_.find(token);
  return it == grants_.end() ? nullptr : &it->second;
}

const Grant* PolicyEngine::active_grant(const ProductId& product) const {
  for (auto it = issue_order_.rbegin(); it != issue_order_.rend(); ++it) {
    const auto& g = grants_.at(*it);
    if (g.product == product && !g.revoked) return &g;
  }
  return nullptr;
}

const ProductRecord* PolicyEngine::product(const ProductId& id) const {
  auto it = products_.find(id);
  return it == products_.end() ? nullptr : &it->second;
}

std::vector<const Grant*> PolicyEngine::grants() const {
  std::vector<const Grant*> out;
  for (const auto& t : issue_order_) out.push_back(&grants_.at(t));
  return out;
}

const PermissionId& PolicyEngine::hue_permission() const {
  if (!is_hue(doc_.mode)) throw Error(Errc::WrongPlatformMode, "not a hue policy");
  return doc_.permissions.front().id;
}

}  // namespace dsb
