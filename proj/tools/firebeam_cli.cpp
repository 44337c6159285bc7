// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: Monte Carlo runs per scenario kind, radiation
// patterns of cognitive beamformers, and complexity estimates.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "firebeam/channels.hpp"
#include "firebeam/errors.hpp"
#include "firebeam/harness.hpp"
#include "json.hpp"

namespace {

using firebeam::ExperimentPlan;
using nlohmann::json;

struct Options {
  std::uint64_t seed = 1;
  int trials = 50;
  std::optional<int> fireflies;
  std::optional<int> generations;
  std::optional<int> antennas;
  std::optional<int> ris_elements;
  std::optional<int> users;
  std::vector<double> sinr_db;
  std::vector<double> power_dbm;
  std::vector<std::string> solvers;
  std::string out;
  std::string format = "csv";
  std::string config;
  // pattern
  double angle_step = 1.0;
  // complexity
  int lemma = 0;
  std::vector<std::string> params;
};

int fail(const std::string& message, const std::string& kind, int code = 1) {
  json err{{"error", message}, {"kind", kind}};
  std::cerr << err.dump() << '\n';
  return code;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw firebeam::ValidationError("cannot read config file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw firebeam::ValidationError("config file " + path + ": " + e.what());
  }
}

void set_scenario_key(json& scenario, const char* key, const json& value, const char* flag) {
  if (!scenario.contains(key)) {
    throw firebeam::ValidationError(std::string(flag) + " does not apply to " +
                                    scenario["kind"].get<std::string>() + " scenarios");
  }
  scenario[key] = value;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw firebeam::Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw firebeam::Error("failed writing " + path);
}

ExperimentPlan make_plan(firebeam::ScenarioKind kind, const Options& o, const json& file) {
  ExperimentPlan plan;
  plan.scenario = firebeam::default_config(kind);
  plan.scenario["kind"] = firebeam::to_string(kind);
  plan.trials = o.trials;
  plan.base_seed = o.seed;
  if (o.fireflies) plan.fa.population = *o.fireflies;
  if (o.generations) plan.fa.generations = *o.generations;
  if (o.antennas) set_scenario_key(plan.scenario, "antennas", *o.antennas, "--antennas");
  if (o.ris_elements) {
    set_scenario_key(plan.scenario, "ris_elements", *o.ris_elements, "--ris-elements");
  }
  if (o.users) set_scenario_key(plan.scenario, "users", *o.users, "--users");
  if (o.sinr_db.size() == 1) {
    set_scenario_key(plan.scenario, "sinr_db", o.sinr_db.front(), "--sinr-db");
  } else if (o.sinr_db.size() > 1) {
    set_scenario_key(plan.scenario, "sinr_db", o.sinr_db.front(), "--sinr-db");
    plan.axis = firebeam::SweepAxis::SinrDb;
    plan.sweep_values = o.sinr_db;
  }
  if (o.power_dbm.size() == 1) {
    set_scenario_key(plan.scenario, "power_dbm", o.power_dbm.front(), "--power-dbm");
  } else if (o.power_dbm.size() > 1) {
    set_scenario_key(plan.scenario, "power_dbm", o.power_dbm.front(), "--power-dbm");
    plan.axis = firebeam::SweepAxis::PowerDbm;
    plan.sweep_values = o.power_dbm;
  }
  if (!o.solvers.empty()) {
    plan.solvers.clear();
    for (const auto& s : o.solvers) plan.solvers.push_back(firebeam::parse_solver(s));
  } else if (kind == firebeam::ScenarioKind::Classic) {
    plan.solvers = {firebeam::SolverKind::Fa, firebeam::SolverKind::IterativePrinted,
                    firebeam::SolverKind::IterativeRecovered};
  } else if (kind == firebeam::ScenarioKind::Wpt) {
    plan.solvers = {firebeam::SolverKind::Fa, firebeam::SolverKind::Sca};
  }

  // Values from the config file take precedence over flags.
  if (file.is_null()) return plan;
  if (!file.is_object()) throw firebeam::ValidationError("config file must hold a JSON object");
  for (const auto& [key, value] : file.items()) {
    if (key == "scenario") {
      for (const auto& [k, v] : value.items()) {
        if (k == "kind" && v != plan.scenario["kind"]) {
          throw firebeam::ValidationError("config scenario kind differs from the subcommand");
        }
        plan.scenario[k] = v;
      }
    } else if (key == "trials") {
      plan.trials = value.get<int>();
    } else if (key == "seed") {
      plan.base_seed = value.get<std::uint64_t>();
    } else if (key == "solvers") {
      plan.solvers.clear();
      for (const auto& s : value) plan.solvers.push_back(firebeam::parse_solver(s.get<std::string>()));
    } else if (key == "sweep") {
      plan.axis = firebeam::parse_sweep_axis(value.at("axis").get<std::string>());
      plan.sweep_values = value.at("values").get<std::vector<double>>();
    } else if (key == "fa") {
      for (const auto& [k, v] : value.items()) {
        if (k == "population") plan.fa.population = v.get<int>();
        else if (k == "generations") plan.fa.generations = v.get<int>();
        else if (k == "beta0") plan.fa.beta0 = {v.get<double>()};
        else if (k == "gamma") plan.fa.gamma = {v.get<double>()};
        else if (k == "alpha0") plan.fa.alpha0 = v.get<double>();
        else if (k == "alpha_decay") plan.fa.alpha_decay = v.get<double>();
        else if (k == "randomization") {
          const auto r = v.get<std::string>();
          if (r == "gaussian") plan.fa.randomization = firebeam::Randomization::Gaussian;
          else if (r == "uniform") plan.fa.randomization = firebeam::Randomization::Uniform;
          else throw firebeam::ValidationError("fa.randomization must be gaussian or uniform");
        } else {
          throw firebeam::ValidationError("unknown fa setting '" + k + "'");
        }
      }
    } else if (key == "duality_iterations") {
      plan.duality_iterations = value.get<int>();
    } else if (key == "sca_iterations") {
      plan.sca_iterations = value.get<int>();
    } else if (key == "threads") {
      plan.threads = value.get<int>();
    } else {
      throw firebeam::ValidationError("unknown config key '" + key + "'");
    }
  }
  return plan;
}

void run_kind(firebeam::ScenarioKind kind, const Options& o) {
  const json file = o.config.empty() ? json() : read_config(o.config);
  const ExperimentPlan plan = make_plan(kind, o, file);
  const auto rows = firebeam::run_experiment(plan);
  const auto format = firebeam::parse_format(o.format);
  if (o.out.empty()) {
    write_output(format == firebeam::OutputFormat::Csv ? firebeam::to_csv(rows)
                                                       : firebeam::to_json(rows).dump(2) + "\n",
                 "");
  } else {
    firebeam::emit(rows, format, o.out);
  }
}

void run_pattern(const Options& o) {
  const json file = o.config.empty() ? json() : read_config(o.config);
  Options single = o;
  single.trials = 1;
  if (o.solvers.empty()) single.solvers = {"fa"};
  if (!o.fireflies) single.fireflies = 100;
  if (!o.generations) single.generations = 80;
  const ExperimentPlan plan = make_plan(firebeam::ScenarioKind::Cognitive, single, file);
  if (plan.solvers.size() != 1 || plan.solvers.front() != firebeam::SolverKind::Fa) {
    throw firebeam::ValidationError("pattern: only the fa solver produces a beam pattern");
  }
  if (!(o.angle_step > 0.0)) throw firebeam::ValidationError("pattern: --step must be positive");

  firebeam::Rng rng(firebeam::derive_seed(plan.base_seed, 0, 0, 0));
  const firebeam::Scenario scenario = firebeam::build_scenario(plan.scenario, rng);
  const auto outcome = firebeam::run_solver(scenario, firebeam::SolverKind::Fa, plan,
                                            firebeam::derive_seed(plan.base_seed, 0, 1, 1));
  std::vector<double> angles;
  for (double a = -90.0; a <= 90.0 + 1e-9; a += o.angle_step) angles.push_back(std::min(a, 90.0));
  const double spacing = plan.scenario["spacing_ratio"].get<double>();
  const auto gains = firebeam::radiation_pattern(outcome.W, angles, spacing);

  std::ostringstream os;
  if (firebeam::parse_format(o.format) == firebeam::OutputFormat::Csv) {
    os << "angle_deg,gain_db\n";
    char buf[64];
    for (std::size_t i = 0; i < angles.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", angles[i], gains[i]);
      os << buf;
    }
  } else {
    nlohmann::ordered_json j;
    j["power_w"] = outcome.objective;
    j["max_violation"] = outcome.max_violation;
    j["feasible"] = outcome.feasible;
    j["angle_deg"] = angles;
    j["gain_db"] = gains;
    os << j.dump(2) << '\n';
  }
  write_output(os.str(), o.out);
}

void run_complexity(const Options& o) {
  std::map<std::string, double> params;
  for (const auto& p : o.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw firebeam::ValidationError("--param expects NAME=VALUE, got '" + p + "'");
    }
    try {
      params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    } catch (const std::exception&) {
      throw firebeam::ValidationError("--param " + p + ": value is not a number");
    }
  }
  const double estimate = firebeam::complexity_estimate(o.lemma, params);
  nlohmann::ordered_json j;
  j["lemma"] = o.lemma;
  j["estimate"] = estimate;
  j["order"] = firebeam::order_of_magnitude(estimate);
  write_output(j.dump() + "\n", o.out);
}

void add_run_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--trials", o.trials, "Channel realizations")->check(CLI::PositiveNumber);
  cmd->add_option("--fireflies", o.fireflies, "Firefly population N");
  cmd->add_option("--generations", o.generations, "Firefly generations T");
  cmd->add_option("--antennas", o.antennas, "BS antennas M_t");
  cmd->add_option("--ris-elements", o.ris_elements, "RIS elements N_t");
  cmd->add_option("--users", o.users, "Users or energy receivers");
  cmd->add_option("--sinr-db", o.sinr_db, "SINR target(s) in dB; several values sweep")
      ->delimiter(',');
  cmd->add_option("--power-dbm", o.power_dbm, "Power budget(s) in dBm; several values sweep")
      ->delimiter(',');
  cmd->add_option("--solvers", o.solvers,
                  "fa, iterative_printed, iterative_recovered, sca, ao")
      ->delimiter(',');
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json");
  cmd->add_option("--config", o.config, "JSON config; its values override flags");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Firefly beamforming experiments"};
  app.require_subcommand(1);
  Options o;

  auto* classic = app.add_subcommand("classic", "SINR-constrained power minimization");
  auto* cognitive = app.add_subcommand("cognitive", "Power minimization with interference caps");
  auto* ris = app.add_subcommand("ris", "RIS-aided power minimization");
  auto* wpt = app.add_subcommand("wpt", "RIS-aided wireless power transfer");
  auto* pattern = app.add_subcommand("pattern", "Radiation pattern of a cognitive FA solution");
  auto* complexity = app.add_subcommand("complexity", "Operation-count estimate");
  for (auto* cmd : {classic, cognitive, ris, wpt, pattern}) add_run_flags(cmd, o);
  pattern->add_option("--step", o.angle_step, "Angle step in degrees");
  complexity->add_option("--lemma", o.lemma, "Formula index 1..8")->required();
  complexity->add_option("--param", o.params, "NAME=VALUE (T, N, U, K, M_t, N_t, n0, m0, epsilon)");
  complexity->add_option("--out", o.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(e.what(), "usage", 2);
  }

  try {
    if (*classic) run_kind(firebeam::ScenarioKind::Classic, o);
    else if (*cognitive) run_kind(firebeam::ScenarioKind::Cognitive, o);
    else if (*ris) run_kind(firebeam::ScenarioKind::Ris, o);
    else if (*wpt) run_kind(firebeam::ScenarioKind::Wpt, o);
    else if (*pattern) run_pattern(o);
    else if (*complexity) run_complexity(o);
  } catch (const firebeam::Error& e) {
    return fail(e.what(), e.kind());
  } catch (const json::exception& e) {
    return fail(e.what(), "validation_error");
  } catch (const std::exception& e) {
    return fail(e.what(), "error");
  }
  return 0;
}
