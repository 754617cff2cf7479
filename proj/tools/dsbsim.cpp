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

// dsbsim: command-line front end for probing, flow analysis and scenario runs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "dsb/flowgraph.hpp"
#include "dsb/netsim.hpp"
#include "dsb/products.hpp"
#include "dsb/prober.hpp"
#include "dsb/scenarios.hpp"

namespace {

using dsb::Json;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dsb::Error(dsb::Errc::InvalidScenario, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw dsb::Error(dsb::Errc::InvalidScenario, path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw dsb::Error(dsb::Errc::InvalidScenario, "cannot write " + path);
  out << j.dump(2) << '\n';
}

int cmd_probe(const std::string& policy_file, const std::string& schema_file,
              const std::string& out_file, const std::string& diff_file,
              const std::string& diff_out) {
  const auto schema = std::make_shared<const dsb::HomeSchema>(
      dsb::HomeSchema::from_json(read_json(schema_file)));
  auto doc = dsb::PolicyDocument::from_json(read_json(policy_file));
  const auto perms = doc.permission_ids();
  dsb::Platform platform(schema, std::move(doc), 0);
  const auto observed = dsb::derive_permission_map(platform, perms);
  write_json(out_file, observed.to_json());
  std::cout << "probed " << perms.size() << " permissions over "
            << dsb::path_universe(platform).size() << " paths -> " << out_file << '\n';
  if (diff_file.empty()) return 0;

  const auto documented_json = read_json(diff_file);
  const auto documented =
      documented_json.contains("permissions") && documented_json["permissions"].is_array()
          ? dsb::documented_permission_map(dsb::PolicyDocument::from_json(documented_json),
                                           *schema, dsb::path_universe(platform))
          : dsb::PermissionMap::from_json(documented_json);
  const auto diff = dsb::diff_permission_map(observed, documented);
  if (diff_out.empty()) {
    std::cout << diff.to_json().dump(2) << '\n';
  } else {
    write_json(diff_out, diff.to_json());
  }
  std::cout << diff.entries.size() << " differences from documentation\n";
  return diff.empty() ? 0 : 1;
}

int cmd_analyze(const std::string& home, const std::string& policy_file,
                const std::string& apps, const std::string& routines_file,
                const std::string& mode, const std::string& report) {
  const auto schema =
      std::make_shared<const dsb::HomeSchema>(dsb::HomeSchema::from_json(read_json(home)));
  auto doc = dsb::PolicyDocument::from_json(policy_file.empty()
                                                ? dsb::load_fixture("nest_policy.json")
                                                : read_json(policy_file));
  if (!mode.empty()) doc.mode = dsb::policy_mode_from_string(mode);
  dsb::Platform platform(schema, std::move(doc), 0);

  Json lint = Json::array();
  for (const auto& m : dsb::manifests_from_json(read_json(apps))) {
    dsb::spawn_product(platform, m);
    lint.push_back(dsb::lint_to_json(m, dsb::lint_manifest(m)));
  }
  if (!routines_file.empty()) {
    for (auto& r : dsb::routines_from_json(read_json(routines_file))) {
      platform.routines().register_routine(std::move(r));
    }
  }
  const auto graph = dsb::build_graph(platform);
  const auto paths = dsb::find_escalations(graph);
  Json out = dsb::escalation_report(graph, paths);
  out["graph"] = graph.to_json();
  out["lint"] = lint;
  write_json(report, out);
  for (const auto& p : paths) {
    std::string line;
    for (auto n : p.nodes) line += (line.empty() ? "" : " -> ") + graph.nodes[n].id;
    std::cout << (p.blocked_by_ifc ? "[blocked-by-ifc] " : "[escalation] ") << line << '\n';
  }
  std::cout << paths.size() << " escalation path(s) -> " << report << '\n';
  return 0;
}

int cmd_lint(const std::string& apps, const std::string& report) {
  Json out = Json::array();
  std::size_t total = 0;
  for (const auto& m : dsb::manifests_from_json(read_json(apps))) {
    const auto v = dsb::lint_manifest(m);
    for (const auto& x : v) {
      std::cout << m.name << ": " << dsb::to_string(x.category) << " " << x.permission << " ("
                << x.detail << ")\n";
    }
    total += v.size();
    out.push_back(dsb::lint_to_json(m, v));
  }
  if (!report.empty()) write_json(report, out);
  std::cout << total << " violation(s)\n";
  return 0;
}

int cmd_scenario(const std::string& name, const std::string& mode, const std::string& tls,
                 const std::string& report, const std::optional<std::uint64_t>& seed,
                 const std::vector<std::string>& flags, const std::string& events,
                 const std::string& trace) {
  dsb::ScenarioOverrides ov;
  if (!mode.empty()) ov.mode = dsb::policy_mode_from_string(mode);
  if (!tls.empty()) ov.tls_strict = tls == "strict";
  ov.seed = seed;
  ov.flags.insert(flags.begin(), flags.end());

  const bool is_file = name.size() > 5 && name.substr(name.size() - 5) == ".json";
  const auto scenario = is_file ? dsb::Scenario::load_file(name) : dsb::Scenario::builtin(name);
  const auto r = dsb::run_scenario(scenario, ov);

  for (const auto& s : r.steps) {
    std::cout << "  step " << s.id << " [" << s.op << "]: " << s.status;
    if (s.reason) std::cout << " (" << dsb::to_string(*s.reason) << ")";
    if (s.error) std::cout << " (" << dsb::to_string(*s.error) << ")";
    std::cout << '\n';
  }
  for (const auto& a : r.assertions) {
    std::cout << (a.passed ? "PASS " : "FAIL ") << a.id << ": " << a.description << " — "
              << a.detail << '\n';
  }
  std::cout << r.name << " [" << dsb::to_string(r.mode) << "]: "
            << (r.passed() ? "all assertions hold" : "assertions failed") << '\n';
  if (!report.empty()) write_json(report, r.to_json());
  if (!events.empty()) {
    std::ofstream out(events);
    dsb::write_jsonl(out, r.event_log);
  }
  if (!trace.empty()) {
    std::ofstream out(trace);
    for (const auto& t : r.request_trace) out << dsb::trace_record_to_json(t).dump() << '\n';
  }
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dsbsim: smart-home data-store platform simulator"};
  app.require_subcommand(1);

  std::string policy, schema, out, diff, diff_out;
  auto* probe = app.add_subcommand("probe", "derive a permission map by black-box probing");
  probe->add_option("--policy", policy, "policy document")->required()->check(CLI::ExistingFile);
  probe->add_option("--schema", schema, "home schema")->required()->check(CLI::ExistingFile);
  probe->add_option("--out", out, "permission map output")->required();
  probe->add_option("--diff", diff, "documented policy or map to compare against")
      ->check(CLI::ExistingFile);
  probe->add_option("--diff-out", diff_out, "write the diff here instead of stdout");

  std::string home, apps, routines, report, mode;
  auto* analyze = app.add_subcommand("analyze", "find lateral privilege escalation paths");
  analyze->add_option("--home", home, "home schema")->required()->check(CLI::ExistingFile);
  analyze->add_option("--apps", apps, "product manifests")->required()->check(CLI::ExistingFile);
  analyze->add_option("--routines", routines, "routine definitions")->check(CLI::ExistingFile);
  analyze->add_option("--policy", policy, "policy document (default: built-in Nest policy)")
      ->check(CLI::ExistingFile);
  analyze->add_option("--mode", mode, "policy mode override")
      ->check(CLI::IsMember({"nest-faithful", "nest-ifc", "hue-faithful", "hue-hardened"}));
  analyze->add_option("--report", report, "JSON report output")->required();

  auto* lint = app.add_subcommand("lint", "check permission descriptions in manifests");
  lint->add_option("--apps", apps, "product manifests")->required()->check(CLI::ExistingFile);
  lint->add_option("--report", report, "JSON report output");

  std::string name, tls, events, trace;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> flags;
  auto* scenario = app.add_subcommand("scenario", "run a built-in or file scenario");
  scenario->add_option("name", name, "built-in scenario name or path to a .json script")->required();
  scenario->add_option("--mode", mode, "policy mode override")
      ->check(CLI::IsMember({"nest-faithful", "nest-ifc", "hue-faithful", "hue-hardened"}));
  scenario->add_option("--tls", tls, "client certificate validation")
      ->check(CLI::IsMember({"broken", "strict"}));
  scenario->add_option("--report", report, "JSON report output");
  scenario->add_option("--seed", seed, "RNG seed override");
  scenario->add_option("--set", flags, "enable gated steps (e.g. revoke-stolen)");
  scenario->add_option("--events", events, "event log output (JSON Lines)");
  scenario->add_option("--trace", trace, "request/response trace output (JSON Lines)");

  auto* list = app.add_subcommand("list", "list built-in scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*probe) return cmd_probe(policy, schema, out, diff, diff_out);
    if (*analyze) return cmd_analyze(home, policy, apps, routines, mode, report);
    if (*lint) return cmd_lint(apps, report);
    if (*scenario) return cmd_scenario(name, mode, tls, report, seed, flags, events, trace);
    if (*list) {
      for (const auto& s : dsb::builtin_scenarios()) std::cout << s << '\n';
      return 0;
    }
  } catch (const dsb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
