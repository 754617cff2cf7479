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

#include "dsb/scenarios.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dsb/fixtures.hpp"
#include "dsb/netsim.hpp"
#include "dsb/products.hpp"

namespace dsb {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kScenarioDir = "scenarios/";

Json parse_json(std::string_view text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidScenario, what + ": " + e.what());
  }
}

class Runner {
 public:
  Runner(const Scenario& s, const ScenarioOverrides& o) : doc_(s.doc), base_(s.base_dir), ov_(o) {}

  ScenarioReport run();

 private:
  std::string interpolate(const std::string& s) const;
  Json interpolate(const Json& j) const;
  const std::string& bound(const std::string& name) const;

  void setup();
  StepResult execute(const Json& step);
  void from_response(StepResult& r, const Response& resp);
  AssertionResult evaluate(const Json& a) const;

  const Json& doc_;
  std::string base_;
  const ScenarioOverrides& ov_;
  ScenarioReport report_;
  std::unique_ptr<Platform> platform_;
  Network net_;
  std::map<std::string, std::string> bindings_;
};

std::string Runner::interpolate(const std::string& s) const {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto start = s.find("${", i);
    if (start == std::string::npos) {
      out += s.substr(i);
      break;
    }
    const auto end = s.find('}', start);
    if (end == std::string::npos) throw Error(Errc::InvalidScenario, "unterminated ${ in " + s);
    out += s.substr(i, start - i);
    out += bound(s.substr(start + 2, end - start - 2));
    i = end + 1;
  }
  return out;
}

Json Runner::interpolate(const Json& j) const {
  if (j.is_string()) return interpolate(j.get<std::string>());
  if (j.is_array() || j.is_object()) {
    Json out = j;
    for (auto& [k, v] : out.items()) v = interpolate(v);
    return out;
  }
  return j;
}

const std::string& Runner::bound(const std::string& name) const {
  auto it = bindings_.find(name);
  if (it == bindings_.end()) throw Error(Errc::InvalidScenario, "unbound variable ${" + name + "}");
  return it->second;
}

void Runner::setup() {
  report_.name = doc_.value("name", std::string("unnamed"));
  const auto schema =
      std::make_shared<const HomeSchema>(HomeSchema::from_json(load_fixture(doc_.at("home"), base_)));
  auto policy = PolicyDocument::from_json(load_fixture(doc_.at("policy"), base_));
  if (ov_.mode) {
    policy.mode = *ov_.mode;
  } else if (doc_.contains("mode")) {
    policy.mode = policy_mode_from_string(doc_["mode"].get<std::string>());
  }
  report_.mode = policy.mode;
  report_.seed = ov_.seed.value_or(doc_.value("seed", std::uint64_t{0}));
  platform_ = std::make_unique<Platform>(schema, std::move(policy), report_.seed);

  std::vector<ProductManifest> catalog;
  if (doc_.contains("catalog")) catalog = manifests_from_json(load_fixture(doc_["catalog"], base_));
  for (const auto& p : doc_.value("products", Json::array())) {
    ProductManifest m;
    if (p.is_string()) {
      auto it = std::find_if(catalog.begin(), catalog.end(),
                             [&](const auto& c) { return c.name == p.get<std::string>(); });
      if (it == catalog.end()) throw Error(Errc::InvalidScenario, "no product " + p.dump() + " in catalog");
      m = *it;
    } else {
      m = ProductManifest::from_json(p);
    }
    const auto spawned = spawn_product(*platform_, m);
    bindings_[spawned.id] = spawned.grant.token;
  }

  std::vector<Routine> routine_catalog;
  if (doc_.contains("routine_catalog")) {
    routine_catalog = routines_from_json(load_fixture(doc_["routine_catalog"], base_));
  }
  for (const auto& r : doc_.value("routines", Json::array())) {
    if (r.is_string()) {
      auto it = std::find_if(routine_catalog.begin(), routine_catalog.end(),
                             [&](const auto& c) { return c.id == r.get<std::string>(); });
      if (it == routine_catalog.end()) {
        throw Error(Errc::InvalidScenario, "no routine " + r.dump() + " in catalog");
      }
      platform_->routines().register_routine(*it);
    } else {
      platform_->routines().register_routine(Routine::from_json(r));
    }
  }
}

void Runner::from_response(StepResult& r, const Response& resp) {
  r.status = std::string(to_string(resp.status));
  r.reason = resp.reason;
  r.error = resp.error;
  r.result = resp.payload;
  r.cascade = resp.cascade;
}

StepResult Runner::execute(const Json& raw) {
  StepResult r;
  r.id = raw.value("id", std::string());
  r.op = raw.value("op", std::string());
  if (raw.contains("only_if") && !ov_.flags.count(raw["only_if"].get<std::string>())) {
    r.status = "skipped";
    return r;
  }
  if (raw.contains("unless") && ov_.flags.count(raw["unless"].get<std::string>())) {
    r.status = "skipped";
    return r;
  }
  try {
    const Json step = interpolate(raw);
    const auto& op = r.op;
    auto bind = [&](const std::string& value) {
      if (step.contains("bind")) bindings_[step["bind"].get<std::string>()] = value;
    };
    if (op == "request") {
      Request req;
      req.method = method_from_string(step.at("method").get<std::string>());
      req.path = step.at("path").get<std::string>();
      req.token = step.at("token").get<std::string>();
      if (step.contains("body")) req.body = value_from_json(step["body"]);
      from_response(r, platform_->handle_request(req));
    } else if (op == "press_link_button") {
      platform_->press_link_button();
    } else if (op == "expire_link_button") {
      platform_->expire_link_button();
    } else if (op == "hue_create_user") {
      const auto grant = platform_->hue_create_user(step.at("devicetype").get<std::string>());
      r.result = {{"token", grant.token}, {"product", grant.product}};
      bind(grant.token);
    } else if (op == "hue_delete_user") {
      from_response(r, platform_->hue_delete_user(step.at("caller").get<std::string>(),
                                                  step.at("target").get<std::string>()));
    } else if (op == "revoke") {
      platform_->revoke(step.at("token").get<std::string>());
    } else if (op == "open_channel") {
      const auto client = step.at("client").get<std::string>();
      const auto* product = platform_->policy().product(client);
      const ClientTls tls = product ? product->manifest.client_tls : ClientTls{};
      const auto kind_str = step.value("kind", std::string(tls.plaintext ? "plaintext" : "tls"));
      const auto kind = kind_str == "plaintext" ? ChannelKind::Plaintext : ChannelKind::Tls;
      bool validates = step.value("validates", tls.validates_certificates);
      if (ov_.tls_strict) validates = *ov_.tls_strict;
      const auto id = net_.open_channel(client, step.at("server").get<std::string>(), kind, validates);
      r.result = {{"channel", id}, {"kind", kind_str}, {"client_validates", net_.channel(id).client_validates}};
      bind(std::to_string(id));
    } else if (op == "attach_interceptor") {
      net_.attach_interceptor(std::stoull(step.at("channel").get<std::string>()),
                              step.value("forged_certificate", true));
    } else if (op == "transmit") {
      const auto ch = std::stoull(step.at("channel").get<std::string>());
      Message msg;
      if (step.value("message", std::string()) == "account_status") {
        msg = account_status_request(step.at("token").get<std::string>(),
                                     step.value("host", std::string("cloud.example")));
      } else {
        msg.body = step.at("body").get<std::string>();
        if (step.contains("token")) msg.contains_token = step["token"].get<std::string>();
      }
      const auto res = net_.transmit(ch, msg);
      r.result = {{"delivered", res.delivered}, {"captured", res.captured}};
    } else if (op == "extract_tokens") {
      const auto tokens = step.contains("channel")
                              ? net_.extract_token(std::stoull(step["channel"].get<std::string>()))
                              : net_.extract_tokens();
      r.result = {{"tokens", tokens}};
      if (!tokens.empty()) bind(tokens.front());
    } else if (op == "probe") {
      std::vector<PermissionId> perms;
      const auto& p = step.at("permissions");
      if (p.is_string() && p.get<std::string>() == "all") {
        perms = platform_->policy().document().permission_ids();
      } else {
        perms = p.get<std::vector<PermissionId>>();
      }
      r.map = derive_permission_map(*platform_, perms);
      if (step.contains("documented")) {
        const auto documented = PolicyDocument::from_json(load_fixture(step["documented"], base_));
        r.diff = diff_permission_map(
            *r.map, documented_permission_map(documented, platform_->schema(), path_universe(*platform_)));
        r.result = {{"diff", r.diff->to_json()}};
      }
    } else {
      throw Error(Errc::InvalidScenario, "unknown op '" + op + "'");
    }
  } catch (const Error& e) {
    r.status = "error";
    r.error = e.code();
    r.detail = e.what();
  } catch (const nlohmann::json::exception& e) {
    r.status = "error";
    r.error = Errc::InvalidScenario;
    r.detail = e.what();
  } catch (const std::invalid_argument& e) {
    r.status = "error";
    r.error = Errc::InvalidScenario;
    r.detail = e.what();
  }
  return r;
}

AssertionResult Runner::evaluate(const Json& a) const {
  AssertionResult res;
  res.id = a.value("id", std::string());
  res.description = a.value("description", std::string());
  auto fail = [&](std::string why) {
    res.passed = false;
    res.detail = std::move(why);
    return res;
  };
  try {
    const Json j = interpolate(a);
    const auto check = j.at("check").get<std::string>();
    auto step = [&]() -> const StepResult& {
      const auto* s = report_.step(j.at("step").get<std::string>());
      if (!s) throw Error(Errc::InvalidScenario, "no step " + j["step"].dump());
      return *s;
    };

    if (check == "value") {
      const auto path = Path::parse(j.at("path").get<std::string>());
      if (!platform_->store().contains(path)) return fail(path.str() + " does not exist");
      const auto actual = platform_->store().get(path);
      res.passed = values_equal(actual, value_from_json(j.at("equals")));
      res.detail = path.str() + " = " + describe(actual);
    } else if (check == "exists") {
      const auto path = Path::parse(j.at("path").get<std::string>());
      res.passed = platform_->store().contains(path) == j.value("equals", true);
      res.detail = path.str() + (platform_->store().contains(path) ? " exists" : " absent");
    } else if (check == "step") {
      const auto& s = step();
      res.passed = s.status == j.at("status").get<std::string>();
      if (j.contains("reason")) {
        res.passed = res.passed && s.reason && to_string(*s.reason) == j["reason"].get<std::string>();
      }
      if (j.contains("error")) {
        res.passed = res.passed && s.error && to_string(*s.error) == j["error"].get<std::string>();
      }
      res.detail = "status " + s.status + (s.reason ? " (" + std::string(to_string(*s.reason)) + ")" : "") +
                   (s.error ? " (" + std::string(to_string(*s.error)) + ")" : "");
    } else if (check == "cascade") {
      const auto& s = step();
      if (!s.cascade) return fail("step produced no cascade");
      const auto* e = s.cascade->find(j.at("routine").get<std::string>());
      if (!e) return fail("routine did not fire");
      const auto want = j.at("outcome").get<std::string>();
      res.passed = !e->actions.empty() &&
                   std::all_of(e->actions.begin(), e->actions.end(),
                               [&](const auto& x) { return to_string(x.outcome) == want; });
      res.detail = e->actions.empty() ? "no actions" : std::string(to_string(e->actions.front().outcome));
    } else if (check == "revoked") {
      const auto* g = platform_->policy().find_grant(j.at("token").get<std::string>());
      if (!g) return fail("unknown token");
      res.passed = g->revoked == j.value("equals", true);
      res.detail = g->revoked ? "revoked" : "active";
    } else if (check == "link_presses") {
      res.passed = platform_->link_button_presses() == j.at("equals").get<int>();
      res.detail = std::to_string(platform_->link_button_presses()) + " presses";
    } else if (check == "captured") {
      const auto* icpt = net_.interceptor(std::stoull(j.at("channel").get<std::string>()));
      const std::size_t n = icpt ? icpt->captured.size() : 0;
      res.passed = n >= j.value("min", std::size_t{1});
      res.detail = std::to_string(n) + " captured";
    } else if (check == "bound") {
      const auto name = j.at("name").get<std::string>();
      auto it = bindings_.find(name);
      if (it == bindings_.end()) return fail(name + " is unbound");
      res.passed = it->second == j.at("equals").get<std::string>();
      res.detail = name + " bound";
    } else if (check == "diff_empty") {
      const auto& s = step();
      if (!s.diff) return fail("step has no diff");
      res.passed = s.diff->empty();
      res.detail = std::to_string(s.diff->entries.size()) + " differences";
    } else if (check == "map") {
      const auto& s = step();
      if (!s.map) return fail("step has no permission map");
      const auto& m = s.map->entries.at(j.at("permission").get<std::string>());
      const auto actual = m.at(j.at("path").get<std::string>());
      res.passed = to_string(actual) == j.at("access").get<std::string>();
      res.detail = std::string(to_string(actual));
    } else if (check == "writers") {
      const auto& s = step();
      if (!s.map) return fail("step has no permission map");
      const auto path = j.at("path").get<std::string>();
      std::vector<std::string> writers;
      for (const auto& [perm, paths] : s.map->entries) {
        if (paths.at(path) >= Access::ReadWrite) writers.push_back(perm);
      }
      res.passed = writers == j.at("equals").get<std::vector<std::string>>();
      res.detail = Json(writers).dump();
    } else {
      return fail("unknown check '" + check + "'");
    }
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return res;
}

ScenarioReport Runner::run() {
  setup();
  for (const auto& s : doc_.value("steps", Json::array())) report_.steps.push_back(execute(s));
  for (const auto& a : doc_.value("assertions", Json::array())) {
    report_.assertions.push_back(evaluate(a));
  }
  report_.event_log = platform_->store().log();
  report_.request_trace = platform_->trace();
  report_.cascades = platform_->cascades();
  report_.captured_tokens = net_.extract_tokens();
  report_.bindings = bindings_;
  return std::move(report_);
}

}  // namespace

Json StepResult::to_json() const {
  Json j{{"id", id}, {"op", op}, {"status", status}};
  if (reason) j["reason"] = std::string(to_string(*reason));
  if (error) j["error"] = std::string(to_string(*error));
  if (!detail.empty()) j["detail"] = detail;
  if (!result.is_null()) j["result"] = result;
  if (cascade) j["cascade"] = cascade->to_json();
  if (map) j["permission_map"] = map->to_json();
  return j;
}

bool ScenarioReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.passed; });
}

const StepResult* ScenarioReport::step(const std::string& id) const {
  auto it = std::find_if(steps.begin(), steps.end(), [&](const auto& s) { return s.id == id; });
  return it == steps.end() ? nullptr : &*it;
}

const AssertionResult* ScenarioReport::assertion(const std::string& id) const {
  auto it = std::find_if(assertions.begin(), assertions.end(), [&](const auto& a) { return a.id == id; });
  return it == assertions.end() ? nullptr : &*it;
}

Json ScenarioReport::to_json() const {
  Json as = Json::array();
  for (const auto& a : assertions) {
    as.push_back({{"id", a.id}, {"description", a.description}, {"passed", a.passed}, {"detail", a.detail}});
  }
  Json steps_json = Json::array();
  for (const auto& s : steps) steps_json.push_back(s.to_json());
  Json events = Json::array();
  for (const auto& e : event_log) events.push_back(event_to_json(e));
  Json trace = Json::array();
  for (const auto& t : request_trace) trace.push_back(trace_record_to_json(t));
  Json cs = Json::array();
  for (const auto& c : cascades) cs.push_back(c.to_json());
  return Json{{"name", name},
              {"mode", std::string(to_string(mode))},
              {"seed", seed},
              {"passed", passed()},
              {"assertions", as},
              {"steps", steps_json},
              {"event_log", events},
              {"request_trace", trace},
              {"cascades", cs},
              {"captured_tokens", captured_tokens}};
}

Scenario Scenario::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidScenario, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return {parse_json(ss.str(), path), fs::path(path).parent_path().string()};
}

Scenario Scenario::builtin(const std::string& name) {
  const auto text = builtin_fixture(std::string(kScenarioDir) + name + ".json");
  if (!text) throw Error(Errc::UnknownScenario, name);
  return {parse_json(*text, name), {}};
}

std::vector<std::string> builtin_scenarios() {
  std::vector<std::string> out;
  for (const auto& f : builtin_fixture_names()) {
    if (f.rfind(kScenarioDir, 0) == 0) {
      out.push_back(f.substr(kScenarioDir.size(), f.size() - kScenarioDir.size() - 5));
    }
  }
  return out;
}

Json load_fixture(const Json& ref, const std::string& base_dir) {
  if (ref.is_object()) return ref;
  if (!ref.is_string()) throw Error(Errc::InvalidScenario, "fixture reference must be a string or object");
  const auto name = ref.get<std::string>();
  if (!base_dir.empty()) {
    const auto p = fs::path(base_dir) / name;
    if (fs::exists(p)) {
      std::ifstream in(p);
      std::stringstream ss;
      ss << in.rdbuf();
      return parse_json(ss.str(), p.string());
    }
  }
  if (const auto text = builtin_fixture(name)) return parse_json(*text, name);
  throw Error(Errc::InvalidScenario, "fixture not found: " + name);
}

ScenarioReport run_scenario(const Scenario& scenario, const ScenarioOverrides& overrides) {
  return Runner(scenario, overrides).run();
}

ScenarioReport run_scenario(const std::string& name, const ScenarioOverrides& overrides) {
  return run_scenario(Scenario::builtin(name), overrides);
}

}  // namespace dsb
