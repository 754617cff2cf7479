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

// Randomized property checks shared by the gtest suite and the acceptance
// binary. Each returns an empty string when the property holds for `seed`,
// otherwise a description of the counterexample.

#include <random>
#include <sstream>
#include <string>

#include "support.hpp"

namespace dsb::test {

inline std::vector<Token> product_tokens(const Platform& p) {
  std::vector<Token> out;
  for (const auto* g : p.policy().grants()) {
    if (!g->revoked) out.push_back(g->token);
  }
  return out;
}

/// Revisions only grow, every commit advances them by exactly one, and
/// refused requests commit nothing.
inline std::string check_revision_monotonicity(std::uint64_t seed) {
  auto home = random_home(seed);
  auto p = build_home(home, PolicyMode::NestFaithful);
  std::mt19937_64 rng(seed ^ 0x5eed);
  const auto paths = path_universe(*p);
  auto tokens = product_tokens(*p);
  tokens.push_back("forged-token");
  Revision last = p->store().revision();
  for (int i = 0; i < 40; ++i) {
    const auto& path = paths[rng() % paths.size()];
    const auto& tok = tokens[rng() % tokens.size()];
    Response r;
    switch (rng() % 3) {
      case 0: r = p->get(path, tok); break;
      case 1: r = p->put(path, Value(static_cast<bool>(rng() % 2)), tok); break;
      default: r = p->del(path, tok); break;
    }
    const auto now = p->store().revision();
    if (now < last) return "revision went backwards at op " + std::to_string(i);
    if (!r.ok() && now != last) return "refused request committed at op " + std::to_string(i);
    last = now;
  }
  const auto& log = p->store().log();
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (log[i].revision != i + 1) return "log gap at index " + std::to_string(i);
  }
  if (!log.empty() && log.back().revision != p->store().revision()) return "log/revision mismatch";
  return {};
}

/// Every decision is explained by some clause of some held permission;
/// holders of nothing and unknown tokens get nothing.
inline std::string check_deny_by_default(std::uint64_t seed) {
  auto home = random_home(seed);
  auto p = build_home(home, PolicyMode::NestFaithful);
  const auto schema = p->schema();
  const auto paths = path_universe(*p);
  const auto& policy = p->policy();
  for (const auto& [id, rec] : policy.products()) {
    const auto* g = policy.active_grant(id);
    for (const auto& path : paths) {
      for (auto kind : {AccessKind::Read, AccessKind::Write, AccessKind::Delete}) {
        bool expected = false;
        for (const auto& perm : g->permissions) {
          expected = expected || oracle_allows(home.policy, schema, perm, path, kind);
        }
        const auto d = policy.check_access(g->token, Path::parse(path), kind);
        if (static_cast<bool>(d) != expected) {
          return id + " " + path + ": decision " + (d ? "allow" : "deny") + " disagrees with clauses";
        }
        if (g->permissions.empty() && d) return id + " holds nothing but was allowed " + path;
      }
    }
  }
  std::mt19937_64 rng(seed);
  const Token forged = "tok-" + std::to_string(rng());
  for (const auto& path : paths) {
    const auto r = p->get(path, forged);
    if (!r.denied() || r.reason != DenyReason::UnknownToken) return "unknown token read " + path;
  }
  return {};
}

/// Routines with arbitrary writes and triggers, including cycles, always
/// quiesce within the depth limit with each routine firing at most once.
inline std::string check_cascade_termination(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto home = random_home(seed);
  const auto nvars = home.schema["home"].size();
  home.routines.clear();
  const int nroutines = 4 + static_cast<int>(rng() % 12);
  for (int r = 0; r < nroutines; ++r) {
    Json trigger{{"path", "home/v" + std::to_string(rng() % nvars)}};
    if (rng() % 2) {
      trigger["predicate"] = "changed";
    } else {
      trigger["predicate"] = "equals";
      trigger["value"] = static_cast<bool>(rng() % 2);
    }
    Json actions = Json::array();
    for (int a = 1 + static_cast<int>(rng() % 3); a > 0; --a) {
      actions.push_back({{"type", "write"},
                         {"path", "home/v" + std::to_string(rng() % nvars)},
                         {"value", static_cast<bool>(rng() % 2)}});
    }
    home.routines.push_back({{"id", "c" + std::to_string(r)},
                             {"owner", home.products[rng() % home.products.size()].name},
                             {"trigger", trigger},
                             {"actions", actions}});
  }
  auto p = build_home(home, PolicyMode::NestFaithful);
  const auto paths = path_universe(*p);
  const auto tokens = product_tokens(*p);
  for (int i = 0; i < 20; ++i) {
    const auto r = p->put(paths[rng() % paths.size()], Value(static_cast<bool>(rng() % 2)),
                          tokens[rng() % tokens.size()]);
    if (!r.cascade) continue;
    const auto& c = *r.cascade;
    if (c.depth_reached > p->routines().depth_limit()) return "depth exceeded limit";
    std::set<RoutineId> fired;
    for (const auto& e : c.entries) {
      if (!fired.insert(e.routine).second) return "routine " + e.routine + " fired twice";
      if (e.depth < 1 || e.depth > p->routines().depth_limit()) return "entry depth out of range";
    }
  }
  return {};
}

/// Probing never changes the platform it probes.
inline std::string check_probe_non_destructive(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::unique_ptr<Platform> p;
  if (seed % 3 == 0) {
    p = hue_platform(seed % 2 ? PolicyMode::HueHardened : PolicyMode::HueFaithful, seed);
  } else {
    p = build_home(random_home(seed), PolicyMode::NestFaithful);
  }
  const auto ids = p->policy().document().permission_ids();
  std::set<PermissionId> perms;
  for (const auto& id : ids) {
    if (rng() % 2) perms.insert(id);
  }
  const auto snap = p->store().snapshot();
  const auto log_size = p->store().log().size();
  const auto trace_size = p->trace().size();
  const auto grants = p->policy().grants().size();
  const auto products = p->policy().products().size();
  probe_permission_set(*p, perms);
  if (!(p->store().snapshot() == snap)) return "store changed";
  if (p->store().log().size() != log_size) return "events committed";
  if (p->trace().size() != trace_size) return "requests recorded";
  if (p->policy().grants().size() != grants) return "grants issued";
  if (p->policy().products().size() != products) return "products registered";
  return {};
}

/// Probing a union of permission sets observes the pointwise maximum of
/// probing each set alone.
inline std::string check_permission_union(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::unique_ptr<Platform> p;
  if (seed % 2) {
    p = nest_platform(PolicyMode::NestFaithful, seed);
  } else {
    p = build_home(random_home(seed), PolicyMode::NestFaithful);
  }
  const auto ids = p->policy().document().permission_ids();
  std::set<PermissionId> a, b;
  for (const auto& id : ids) {
    const auto roll = rng() % 4;
    if (roll == 0) a.insert(id);
    if (roll == 1) b.insert(id);
    if (roll == 2) {
      a.insert(id);
      b.insert(id);
    }
  }
  std::set<PermissionId> both = a;
  both.insert(b.begin(), b.end());
  const auto ma = probe_permission_set(*p, a);
  const auto mb = probe_permission_set(*p, b);
  const auto mu = probe_permission_set(*p, both);
  for (const auto& [path, level] : mu) {
    if (level != std::max(ma.at(path), mb.at(path))) {
      return path + ": union " + std::string(to_string(level)) + " != max(" +
             std::string(to_string(ma.at(path))) + ", " + std::string(to_string(mb.at(path))) + ")";
    }
  }
  return {};
}

/// With every TLS client validating certificates, no interceptor ever
/// learns a token, whether or not it forges a certificate.
inline std::string check_netsim_secrecy(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Network net;
  std::vector<ChannelId> channels;
  const int n = 1 + static_cast<int>(rng() % 6);
  for (int i = 0; i < n; ++i) {
    channels.push_back(net.open_channel("client" + std::to_string(i), "cloud", ChannelKind::Tls, true));
    if (rng() % 4 != 0) net.attach_interceptor(channels.back(), rng() % 2);
  }
  std::set<std::string> secrets;
  for (int i = 0; i < 30; ++i) {
    const auto secret = "tok-" + std::to_string(rng());
    secrets.insert(secret);
    const auto ch = channels[rng() % channels.size()];
    try {
      if (net.transmit(ch, account_status_request(secret, "cloud")).captured) {
        return "captured on validating channel " + std::to_string(ch);
      }
    } catch (const Error& e) {
      if (e.code() != Errc::HandshakeRejected) return e.what();
    }
  }
  if (!net.extract_tokens().empty()) return "tokens extracted";
  for (auto ch : channels) {
    const auto* icpt = net.interceptor(ch);
    if (!icpt) continue;
    for (const auto& m : icpt->captured) {
      for (const auto& s : secrets) {
        if (m.body.find(s) != std::string::npos) return "secret in captured message";
      }
    }
  }
  return {};
}

struct Property {
  const char* name;
  std::string (*check)(std::uint64_t);
};

inline void PrintTo(const Property& p, std::ostream* os) { *os << p.name; }

inline const std::vector<Property>& properties() {
  static const std::vector<Property> all = {
      {"revision-monotonicity", check_revision_monotonicity},
      {"deny-by-default", check_deny_by_default},
      {"cascade-termination", check_cascade_termination},
      {"probe-non-destructive", check_probe_non_destructive},
      {"permission-union", check_permission_union},
      {"netsim-secrecy", check_netsim_secrecy},
  };
  return all;
}

inline constexpr int kPropertyCases = 120;

}  // namespace dsb::test
