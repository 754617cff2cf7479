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

// Shared fixtures and independent oracles for the test suites.

#include <algorithm>
#include <deque>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dsb/flowgraph.hpp"
#include "dsb/netsim.hpp"
#include "dsb/products.hpp"
#include "dsb/prober.hpp"
#include "dsb/scenarios.hpp"

namespace dsb::test {

using ::dsb::load_fixture;

inline std::shared_ptr<const HomeSchema> schema_fixture(const std::string& name) {
  return std::make_shared<const HomeSchema>(HomeSchema::from_json(load_fixture(name)));
}

inline PolicyDocument policy_fixture(const std::string& name, PolicyMode mode) {
  auto doc = PolicyDocument::from_json(load_fixture(name));
  doc.mode = mode;
  return doc;
}

inline std::unique_ptr<Platform> nest_platform(PolicyMode mode = PolicyMode::NestFaithful,
                                               std::uint64_t seed = 1) {
  return std::make_unique<Platform>(schema_fixture("nest_home.json"),
                                    policy_fixture("nest_policy.json", mode), seed);
}

inline std::unique_ptr<Platform> hue_platform(PolicyMode mode = PolicyMode::HueFaithful,
                                              std::uint64_t seed = 1) {
  return std::make_unique<Platform>(schema_fixture("hue_home.json"),
                                    policy_fixture("hue_policy.json", mode), seed);
}

inline ProductManifest catalog_product(const std::string& name) {
  for (auto& m : manifests_from_json(load_fixture("nest_products.json"))) {
    if (m.name == name) return m;
  }
  throw std::runtime_error("no catalog product " + name);
}

/// Nest fixture plus the example products and the camera-off-when-home
/// routine. Returns each product's grant token by name.
inline std::map<std::string, Token> install_example_home(Platform& p,
                                                         const std::string& routines = "nest_routines.json") {
  std::map<std::string, Token> tokens;
  for (const auto& m : manifests_from_json(load_fixture("nest_products.json"))) {
    tokens[m.name] = spawn_product(p, m).grant.token;
  }
  for (auto& r : routines_from_json(load_fixture(routines))) p.routines().register_routine(r);
  return tokens;
}

inline ProductManifest manifest_with(const std::string& name, const std::set<PermissionId>& perms,
                                     Integrity integrity = Integrity::Low) {
  ProductManifest m;
  m.name = name;
  m.integrity = integrity;
  for (const auto& p : perms) {
    m.permissions.push_back({p, "test", DeclaredIntent::ReadWrite, {}, std::nullopt, false});
  }
  return m;
}

inline Value str(const char* s) { return Value(std::string(s)); }

// ---------------------------------------------------------------------------
// Access oracle: evaluates a policy document's clauses with its own
// segment matcher, independent of PathPattern and PolicyEngine.

inline bool oracle_match(const std::string& pattern, const std::string& path) {
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == '/') {
        out.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    return out;
  };
  const auto a = split(pattern);
  const auto b = split(path);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != "*" && a[i] != b[i]) return false;
  }
  return true;
}

/// Expected decision for a holder of exactly `perm` (window closed).
inline bool oracle_allows(const Json& policy, const HomeSchema& schema, const std::string& perm,
                          const std::string& path, AccessKind kind, bool hardened = false) {
  const auto spec = schema.find(Path::parse(path));
  for (const auto& p : policy["permissions"]) {
    if (p["id"] != perm) continue;
    bool read = false;
    bool rw = false;
    for (const auto& c : p["clauses"]) {
      if (!oracle_match(c["path"].get<std::string>(), path)) continue;
      read = true;
      rw = rw || c["access"] == "read-write";
    }
    const bool client_ro =
        hardened && (path == "config/linkbutton" || path.rfind("config/whitelist/", 0) == 0);
    switch (kind) {
      case AccessKind::Read: return read;
      case AccessKind::Write: return rw && !spec->read_only() && !client_ro;
      case AccessKind::Delete: return rw && !spec->read_only() && !client_ro && spec->deletable;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Randomized homes for the flow-graph oracle over boolean variables. Each
// variable is watched either by `changed` triggers or by `equals <flipped>`
// triggers. Routines mostly write the flipped value; low-integrity
// variables watched by `equals` may also get writes of their initial
// value, which can never satisfy a trigger and so exercise value-aware
// edges. This keeps every statically found path executable.

struct RandomHome {
  Json schema;
  Json policy;
  std::vector<ProductManifest> products;
  std::vector<Json> routines;
};

inline RandomHome random_home(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  RandomHome h;
  const int nvars = pick(3, 6);
  std::vector<bool> initial(nvars), high(nvars), watch_changed(nvars);
  Json vars = Json::object();
  for (int i = 0; i < nvars; ++i) {
    initial[i] = coin(0.5);
    high[i] = coin(0.4);
    watch_changed[i] = coin(0.4);
    vars["v" + std::to_string(i)] = {{"type", "bool"},
                                     {"initial", static_cast<bool>(initial[i])},
                                     {"integrity", high[i] ? "high" : "low"}};
  }
  h.schema = {{"home", vars}};

  const int nperms = pick(2, 6);
  Json perms = Json::array();
  for (int p = 0; p < nperms; ++p) {
    Json clauses = Json::array();
    for (int i = 0; i < nvars; ++i) {
      if (coin(0.5)) clauses.push_back({{"path", "home/v" + std::to_string(i)}, {"access", "read-write"}});
      else if (coin(0.2)) clauses.push_back({{"path", "home/v" + std::to_string(i)}, {"access", "read"}});
    }
    perms.push_back({{"id", "p" + std::to_string(p)}, {"clauses", clauses}});
  }
  h.policy = {{"mode", "nest-faithful"}, {"permissions", perms}};

  const int nproducts = pick(1, 8);
  for (int k = 0; k < nproducts; ++k) {
    std::set<PermissionId> ps;
    for (int p = 0; p < nperms; ++p) {
      if (coin(0.4)) ps.insert("p" + std::to_string(p));
    }
    h.products.push_back(manifest_with("prod" + std::to_string(k), ps,
                                       coin(0.5) ? Integrity::High : Integrity::Low));
  }

  const int nroutines = pick(1, 8);
  for (int r = 0; r < nroutines; ++r) {
    const int t = pick(0, nvars - 1);
    Json trigger{{"path", "home/v" + std::to_string(t)}};
    if (watch_changed[t]) {
      trigger["predicate"] = "changed";
    } else {
      trigger["predicate"] = "equals";
      trigger["value"] = !initial[t];
    }
    Json actions = Json::array();
    for (int a = pick(1, 2); a > 0; --a) {
      const int v = pick(0, nvars - 1);
      const bool keep = !high[v] && !watch_changed[v] && coin(0.4);
      actions.push_back({{"type", "write"},
                         {"path", "home/v" + std::to_string(v)},
                         {"value", keep ? static_cast<bool>(initial[v]) : !initial[v]}});
    }
    h.routines.push_back({{"id", "r" + std::to_string(r)},
                          {"owner", "prod" + std::to_string(pick(0, nproducts - 1))},
                          {"trigger", trigger},
                          {"actions", actions}});
  }
  return h;
}

inline std::unique_ptr<Platform> build_home(const RandomHome& h, PolicyMode mode) {
  auto doc = PolicyDocument::from_json(h.policy);
  doc.mode = mode;
  auto p = std::make_unique<Platform>(
      std::make_shared<const HomeSchema>(HomeSchema::from_json(h.schema)), std::move(doc), 7);
  for (const auto& m : h.products) spawn_product(*p, m);
  for (const auto& r : h.routines) p->routines().register_routine(Routine::from_json(r));
  return p;
}

/// Brute force: breadth-first expansion of every alternating
/// principal/variable/routine sequence, straight from policy decisions
/// and routine definitions. Paths are rendered as "a>b>c" label strings.
inline std::vector<std::string> brute_force_escalations(const Platform& p) {
  const auto& policy = p.policy();
  std::vector<std::string> vars;
  for (const auto& [path, _] : p.store().snapshot().values) vars.push_back(path);
  auto high = [&](const std::string& v) {
    return p.store().spec(Path::parse(v)).integrity == Integrity::High;
  };
  auto can_write = [&](const Grant& g, const std::string& v) {
    return static_cast<bool>(policy.check_grant(g, Path::parse(v), AccessKind::Write));
  };

  struct Partial {
    std::vector<std::string> labels;
    std::string source;
    std::optional<Value> carried;  // value written into the last variable
  };
  std::deque<Partial> queue;
  for (const auto& [id, rec] : policy.products()) {
    const auto* g = policy.active_grant(id);
    if (!g || rec.integrity != Integrity::Low) continue;
    for (const auto& v : vars) {
      if (can_write(*g, v)) queue.push_back({{id, v}, id, std::nullopt});
    }
  }
  std::vector<std::string> found;
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    const auto& last = cur.labels.back();
    if (cur.labels.size() >= 4 && high(last) &&
        !can_write(*policy.active_grant(cur.source), last)) {
      std::string s;
      for (const auto& l : cur.labels) s += (s.empty() ? "" : ">") + l;
      found.push_back(s);
    }
    for (const auto& r : p.routines().routines()) {
      if (r.trigger.path.str() != last) continue;
      if (std::find(cur.labels.begin(), cur.labels.end(), "routine:" + r.id) != cur.labels.end()) continue;
      const auto& pred = r.trigger.predicate;
      if (cur.carried && pred.kind == Predicate::Kind::Equals && !values_equal(*cur.carried, *pred.value)) {
        continue;
      }
      const auto* g = policy.find_grant(r.grant_token);
      for (const auto& a : r.actions) {
        const auto& w = std::get<WriteAction>(a);
        const auto target = w.path.str();
        if (!can_write(*g, target)) continue;
        if (std::find(cur.labels.begin(), cur.labels.end(), target) != cur.labels.end()) continue;
        auto next = cur;
        next.labels.push_back("routine:" + r.id);
        next.labels.push_back(target);
        next.carried = w.value;
        queue.push_back(std::move(next));
      }
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  return found;
}

inline std::vector<std::string> render_paths(const FlowGraph& g, const std::vector<EscalationPath>& paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) {
    std::string s;
    for (auto n : p.nodes) {
      const auto& node = g.nodes[n];
      s += (s.empty() ? "" : ">") + (node.kind == NodeKind::Routine ? "routine:" + node.id : node.id);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace dsb::test
