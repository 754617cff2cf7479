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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dsb/manifest.hpp"
#include "dsb/path.hpp"
#include "dsb/schema.hpp"

namespace dsb {

enum class PolicyMode { NestFaithful, NestIfc, HueFaithful, HueHardened };

std::string_view to_string(PolicyMode m);
PolicyMode policy_mode_from_string(std::string_view s);
inline bool is_hue(PolicyMode m) {
  return m == PolicyMode::HueFaithful || m == PolicyMode::HueHardened;
}

enum class AccessKind { Read, Write, Delete };
std::string_view to_string(AccessKind k);

enum class ClauseAccess { Read, ReadWrite };

enum class DenyReason { UnknownToken, Revoked, NoClause, ReadOnlyVariable };
std::string_view to_string(DenyReason r);

struct Decision {
  bool allowed = false;
  std::optional<DenyReason> reason;

  static Decision allow() { return {true, std::nullopt}; }
  static Decision deny(DenyReason r) { return {false, r}; }
  explicit operator bool() const { return allowed; }
};

struct Clause {
  PathPattern pattern;
  ClauseAccess access = ClauseAccess::Read;
};

struct PermissionRule {
  PermissionId id;
  std::vector<Clause> clauses;
  /// "documented" when the rule reproduces documented platform behavior,
  /// "fixture" when invented to pad the permission set.
  std::string provenance = "fixture";
};

/// Rule table plus mode. The same format serves as the documented policy
/// the prober diffs against.
struct PolicyDocument {
  PolicyMode mode = PolicyMode::NestFaithful;
  std::vector<PermissionRule> permissions;

  const PermissionRule* find(const PermissionId& id) const;
  std::vector<PermissionId> permission_ids() const;

  /// Throws Error{InvalidPolicy}: duplicate ids, or a read-write clause
  /// that matches a read-only variable of `schema`.
  void validate(const HomeSchema& schema) const;

  static PolicyDocument from_json(const Json& j);
  Json to_json() const;
};

/// Paths clients may never write in hue-hardened mode; whitelist entries
/// become deletable only while the link-button window is open.
const std::vector<PathPattern>& hue_hardened_read_only();

using Token = std::string;

struct Grant {
  Token token;
  ProductId product;
  std::set<PermissionId> permissions;
  std::string structure;
  bool revoked = false;
};

struct ProductRecord {
  ProductManifest manifest;
  Integrity integrity = Integrity::Low;
};

enum class Consent { Granted, Denied };

/// Inputs to an access decision that live outside the grant table.
struct AccessContext {
  bool link_window_open = false;
};

class DataStore;

/// Link-button state read from the store.
AccessContext access_context(const DataStore& store);

/// Access-control engine: product registry, grant issuance/revocation, and
/// the pure check_access decision.
class PolicyEngine {
 public:
  PolicyEngine(PolicyDocument doc, std::shared_ptr<const HomeSchema> schema,
               std::uint64_t seed);

  PolicyMode mode() const { return doc_.mode; }
  const PolicyDocument& document() const { return doc_; }

  /// Throws Error{UnknownPermission} or Error{InvalidManifest} (duplicate).
  ProductId register_product(const ProductManifest& manifest);
  /// Throws Error{ConsentDenied} or Error{UnknownProduct}.
  Grant authorize(const ProductId& product, Consent consent);
  /// Issues a grant for `permissions` without a consent prompt; used for
  /// Hue pairing and fixture-preloaded tokens. `token` empty = generate.
  Grant issue(const ProductId& product, std::set<PermissionId> permissions,
              Token token = {});

  Decision check_access(const Token& token, const Path& path, AccessKind kind,
                        const AccessContext& ctx = {}) const;
  Decision check_grant(const Grant& grant, const Path& path, AccessKind kind,
                       const AccessContext& ctx = {}) const;

  /// Throws Error{UnknownToken} for unknown or already-revoked tokens.
  void revoke(const Token& token);

  const Grant* find_grant(const Token& token) const;
  /// Most recently issued unrevoked grant of `product`.
  const Grant* active_grant(const ProductId& product) const;
  const ProductRecord* product(const ProductId& id) const;
  const std::map<ProductId, ProductRecord>& products() const { return products_; }
  /// Grants in issuance order.
  std::vector<const Grant*> grants() const;

  /// Hue: the single flat permission every whitelisted client holds.
  const PermissionId& hue_permission() const;

 private:
  Token fresh_token();

  PolicyDocument doc_;
  std::shared_ptr<const HomeSchema> schema_;
  std::mt19937_64 rng_;
  std::map<ProductId, ProductRecord> products_;
  std::map<Token, Grant> grants_;
  std::vector<Token> issue_order_;
};

}  // namespace dsb
