// Command-line front end over the C API.
#include "jacobi/jacobi_c.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

using Json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;

const char* const kTolNames[] = {"sympl", "step", "rank", "iso", "loc", "frame"};

// Raised on a C API error; carries the exit code.
struct ApiFailure {
  int exit_code;
  std::string message;
};

int exit_code_for(jacobi_status s) {
  switch (s) {
    case JACOBI_OK: return kExitOk;
    case JACOBI_ERR_INVALID_ARGUMENT:
    case JACOBI_ERR_SCHEMA:
    case JACOBI_ERR_DOMAIN: return kExitInput;
    default: return kExitFailure;
  }
}

void check(jacobi_status s) {
  if (s != JACOBI_OK)
    throw ApiFailure{exit_code_for(s), std::string(jacobi_status_name(s)) + ": " + jacobi_last_error()};
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { jacobi_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct ScenarioHandle {
  jacobi_scenario* s = nullptr;
  ~ScenarioHandle() { jacobi_scenario_destroy(s); }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw ApiFailure{kExitInput, "cannot write '" + path + "'"};
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

bool is_builtin(const std::string& name) {
  for (const char* b : {"sphere", "flat", "hyperbolic", "hopf", "explosion"})
    if (name == b) return true;
  return false;
}

// Options shared by the scenario-driven commands.
struct Common {
  std::string scenario;
  std::string subspace;
  std::vector<double> interval;
  std::string json_out;
  std::map<std::string, double> tol;
};

void add_tolerance_flags(CLI::App* cmd, Common& c) {
  for (const char* name : kTolNames) {
    const std::string key = name;
    cmd->add_option_function<double>(
        "--tol-" + key, [&c, key](double v) { c.tol[key] = v; }, "override tolerance '" + key + "'");
  }
}

void add_scenario_flags(CLI::App* cmd, Common& c, bool scenario_required) {
  auto* opt = cmd->add_option("--scenario", c.scenario, "scenario JSON file, or a built-in name");
  if (scenario_required) opt->required();
  cmd->add_option("--interval", c.interval, "interval a b")->expected(2);
  cmd->add_option("--json", c.json_out, "write the JSON report to this file instead of stdout");
  add_tolerance_flags(cmd, c);
}

void open_scenario(const Common& c, ScenarioHandle& h) {
  if (std::filesystem::exists(c.scenario) || !is_builtin(c.scenario))
    check(jacobi_scenario_load(c.scenario.c_str(), &h.s));
  else
    check(jacobi_scenario_builtin(c.scenario.c_str(), &h.s));
  for (const auto& [name, value] : c.tol) check(jacobi_scenario_set_tolerance(h.s, name.c_str(), value));
}

std::pair<double, double> resolve_interval(const Common& c, const ScenarioHandle& h) {
  if (c.interval.size() == 2) return {c.interval[0], c.interval[1]};
  double lo = 0.0, hi = 0.0;
  check(jacobi_scenario_domain(h.s, &lo, &hi));
  return {lo, hi};
}

int run_focal(const Common& c, const std::string& csv_out, bool index_only) {
  ScenarioHandle h;
  open_scenario(c, h);
  const auto [lo, hi] = resolve_interval(c, h);
  OwnedString json, csv;
  check(jacobi_focal_report(h.s, c.subspace.c_str(), lo, hi, &json.p, csv_out.empty() ? nullptr : &csv.p));
  Json report = Json::parse(json.str());
  if (index_only) report["index"] = report["total"];
  write_text(c.json_out, report.dump(2));
  if (!csv_out.empty()) write_text(csv_out, csv.str());
  if (!c.json_out.empty()) std::cout << "index " << report["total"].get<int>() << '\n';
  return kExitOk;
}

int run_maslov(const Common& c) {
  ScenarioHandle h;
  open_scenario(c, h);
  const auto [lo, hi] = resolve_interval(c, h);
  OwnedString json;
  check(jacobi_maslov(h.s, c.subspace.c_str(), lo, hi, &json.p));
  Json report = Json::parse(json.str());
  const int maslov = report["index"].get<int>();
  const int winding = report["winding"].get<int>();
  report["consistent"] = maslov == winding;
  write_text(c.json_out, report.dump(2));
  if (!c.json_out.empty()) std::cout << "maslov " << maslov << " winding " << winding << '\n';
  if (maslov != winding) {
    std::cerr << "error: crossing-form index " << maslov << " differs from winding index " << winding << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

struct TransversalFlags {
  std::string out;
  std::string frames_csv;
  std::string oneill_csv;
  std::string lagrangian;
  bool check_decomposition = false;
};

int run_transversal(const Common& c, const TransversalFlags& t) {
  if (t.check_decomposition && t.lagrangian.empty())
    throw ApiFailure{kExitInput, "--check-decomposition requires --lagrangian NAME"};
  ScenarioHandle h;
  open_scenario(c, h);
  const auto [lo, hi] = resolve_interval(c, h);
  OwnedString scenario, frames, oneill, decomposition;
  check(jacobi_transversal(h.s, c.subspace.c_str(), lo, hi, t.lagrangian.empty() ? nullptr : t.lagrangian.c_str(),
                           &scenario.p, t.frames_csv.empty() ? nullptr : &frames.p,
                           t.oneill_csv.empty() ? nullptr : &oneill.p,
                           t.check_decomposition ? &decomposition.p : nullptr));
  write_text(t.out, scenario.str());
  if (!t.frames_csv.empty()) write_text(t.frames_csv, frames.str());
  if (!t.oneill_csv.empty()) write_text(t.oneill_csv, oneill.str());
  if (!t.check_decomposition) return kExitOk;

  const Json d = Json::parse(decomposition.str());
  if (!c.json_out.empty()) write_text(c.json_out, d.dump(2));
  // Keep stdout a clean scenario document when the reduced system goes there.
  std::ostream& log = (t.out.empty() || t.out == "-") ? std::cerr : std::cout;
  log << "decomposition ind_W " << d["ind_w"] << " + ind_quotient " << d["ind_quotient"] << " = ind_Lambda "
      << d["ind_lambda"] << (d["equal"].get<bool>() ? " holds" : " FAILS") << '\n';
  return d["equal"].get<bool>() ? kExitOk : kExitFailure;
}

struct VerifyFlags {
  std::string check;
  std::optional<int> trials;
  std::optional<int> dim;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string other;
  std::string lagrangian;
  std::vector<std::string> params;
};

int run_verify(const Common& c, const VerifyFlags& v) {
  Json p = Json::object();
  if (v.trials) p["trials"] = *v.trials;
  if (v.dim) p["dim"] = *v.dim;
  if (v.seed) p["seed"] = *v.seed;
  if (v.jobs) p["jobs"] = *v.jobs;
  if (c.interval.size() == 2) p["interval"] = c.interval;
  if (!c.subspace.empty()) p["subspace"] = c.subspace;
  if (!v.other.empty()) p["other"] = v.other;
  if (!v.lagrangian.empty()) p["lagrangian"] = v.lagrangian;
  for (const std::string& kv : v.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ApiFailure{kExitInput, "--param expects KEY=JSON, got '" + kv + "'"};
    const std::string key = kv.substr(0, eq);
    try {
      p[key] = Json::parse(kv.substr(eq + 1));
    } catch (const Json::parse_error&) {
      p[key] = kv.substr(eq + 1);
    }
  }

  ScenarioHandle h;
  if (!c.scenario.empty()) {
    open_scenario(c, h);
  } else if (!c.tol.empty()) {
    for (const auto& [name, value] : c.tol) p["tolerances"][name] = value;
  }

  OwnedString report;
  int passed = 0;
  check(jacobi_verify(v.check.c_str(), h.s, p.dump().c_str(), &report.p, &passed));
  const Json r = Json::parse(report.str());
  write_text(c.json_out, r.dump(2));
  const std::string summary = v.check + ": " + (passed ? "PASS" : "FAIL") + " (" + std::to_string(r["trials"].get<int>()) +
                              " trials, " + std::to_string(r["violations"].get<int>()) + " violations, " +
                              std::to_string(r["errors"].get<int>()) + " errors)";
  (c.json_out.empty() ? std::cerr : std::cout) << summary << '\n';
  return passed ? kExitOk : kExitFailure;
}

int run_sample(const std::string& name, const std::string& out) {
  ScenarioHandle h;
  check(jacobi_scenario_builtin(name.c_str(), &h.s));
  OwnedString json;
  check(jacobi_scenario_to_json(h.s, &json.p));
  write_text(out, json.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Focal points, indices and transversal reductions of Jacobi equations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(jacobi_version()));

  Common focal_c, index_c, maslov_c, trans_c, verify_c;
  std::string focal_csv, index_csv, sample_name = "sphere", sample_out;
  TransversalFlags trans_f;
  VerifyFlags verify_f;

  auto* focal = app.add_subcommand("focal", "list focal events of a subspace");
  add_scenario_flags(focal, focal_c, true);
  focal->add_option("--subspace", focal_c.subspace, "subspace name")->required();
  focal->add_option("--csv", focal_csv, "write the event table as CSV");

  auto* index = app.add_subcommand("index", "interval index of a subspace");
  add_scenario_flags(index, index_c, true);
  index->add_option("--subspace", index_c.subspace, "subspace name")->required();
  index->add_option("--csv", index_csv, "write the event table as CSV");

  auto* maslov = app.add_subcommand("maslov", "Maslov index of a Lagrangian by crossing forms and winding");
  add_scenario_flags(maslov, maslov_c, true);
  maslov->add_option("--subspace", maslov_c.subspace, "Lagrangian subspace name")->required();

  auto* trans = app.add_subcommand("transversal", "write the transversal reduction of an isotropic subspace");
  add_scenario_flags(trans, trans_c, true);
  trans->add_option("--subspace", trans_c.subspace, "isotropic subspace name")->required();
  trans->add_option("--out", trans_f.out, "reduced scenario file (default stdout)");
  trans->add_option("--frames-csv", trans_f.frames_csv, "write the parallel horizontal frame as CSV");
  trans->add_option("--oneill-csv", trans_f.oneill_csv, "write the O'Neill operator as CSV");
  trans->add_option("--lagrangian", trans_f.lagrangian, "Lagrangian containing the subspace, projected to the quotient");
  trans->add_flag("--check-decomposition", trans_f.check_decomposition, "check ind_W + ind_quotient = ind_Lambda");

  auto* verify = app.add_subcommand("verify", "run a verification check");
  add_scenario_flags(verify, verify_c, false);
  verify->add_option("check", verify_f.check,
                     "bound, decomposition, semicontinuity, conjugate-monotonic, no-conjugate-bound, estimates, "
                     "omega, maslov, defects")
      ->required();
  verify->add_option("--subspace", verify_c.subspace, "subspace name in the scenario");
  verify->add_option("--other", verify_f.other, "second Lagrangian for a single bound check");
  verify->add_option("--lagrangian", verify_f.lagrangian, "Lagrangian for a single decomposition check");
  verify->add_option("--trials", verify_f.trials, "number of randomized trials");
  verify->add_option("--dim", verify_f.dim, "dimension m (0 cycles through 1..4)");
  verify->add_option("--seed", verify_f.seed, "base seed")->envname("JACOBI_INDEX_SEED");
  verify->add_option("--jobs", verify_f.jobs, "worker threads (default: hardware concurrency)");
  verify->add_option("--param", verify_f.params, "extra parameter KEY=JSON (deltas, n_list, a, b, a_bars, ...)");

  auto* sample = app.add_subcommand("sample-scenario", "print a built-in scenario as JSON");
  sample->add_option("name", sample_name, "sphere, flat, hyperbolic, hopf or explosion");
  sample->add_option("--out", sample_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*focal) return run_focal(focal_c, focal_csv, false);
    if (*index) return run_focal(index_c, index_csv, true);
    if (*maslov) return run_maslov(maslov_c);
    if (*trans) return run_transversal(trans_c, trans_f);
    if (*verify) return run_verify(verify_c, verify_f);
    if (*sample) return run_sample(sample_name, sample_out);
  } catch (const ApiFailure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.exit_code;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed report: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitInput;
}
