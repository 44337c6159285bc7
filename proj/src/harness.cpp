// SPDX-License-Identifier: Apache-2.0
#include "firebeam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <type_traits>

#include "firebeam/baselines.hpp"
#include "firebeam/errors.hpp"
#include "firebeam/problems.hpp"

namespace firebeam {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

double to_db(double linear) { return 10.0 * std::log10(linear); }

FAConfig fa_config_for(const ExperimentPlan& plan, std::size_t users, Eigen::Index antennas,
                       Eigen::Index elements, std::uint64_t seed) {
  const bool with_phases = elements > 0;
  FAConfig cfg = plan.fa;
  cfg.rng_seed = seed;
  // Normalized problems need about unit total power.
  const double beam = std::sqrt(1.0 / (static_cast<double>(users) * static_cast<double>(antennas)));
  cfg.init_scale = with_phases ? std::vector<double>{beam, 1.0} : std::vector<double>{beam};
  // A firefly can move N - 1 times per generation; the per-move noise is
  // shrunk so that its accumulated spread per generation is alpha times
  // the variable scale.
  const double per_move = 1.0 / std::sqrt(static_cast<double>(cfg.population - 1));
  cfg.noise_scale = cfg.init_scale;
  for (double& v : cfg.noise_scale) v *= per_move;
  // Distances are measured against each variable's expected norm, which is
  // 1 for the beamformers and sqrt(N_t) for the phases.
  cfg.distance_scale = with_phases
                           ? std::vector<double>{1.0, std::sqrt(static_cast<double>(elements))}
                           : std::vector<double>{1.0};
  return cfg;
}

void finish_minimization(SolverOutcome& out, double raw_violation, double repaired_violation) {
  out.max_violation = std::max(raw_violation, repaired_violation);
  out.feasible = out.max_violation <= kFeasibilityThreshold;
}

SolverOutcome fa_classic(const ClassicScenario& s, const ExperimentPlan& plan,
                         std::uint64_t seed) {
  const auto n = normalize(s);
  const ProblemSpec problem = classic_problem(n.scenario);
  const FAConfig cfg = fa_config_for(plan, s.users(), s.antennas(), 0, seed);
  const SolveTrace trace = run_fa(problem, PenaltyWeights::quadratic(problem), cfg);
  const ComplexMatrix& W = trace.best[kBeamformers];
  const ComplexMatrix repaired = classic_repair(W, n.scenario);
  SolverOutcome out;
  out.W = std::sqrt(n.power_scale) * repaired;
  out.objective = n.power_scale * repaired.squaredNorm();
  finish_minimization(out, classic_violation(W, n.scenario),
                      classic_violation(repaired, n.scenario));
  out.trace = trace.best_penalized_objective;
  out.generations = convergence_generation(out.trace);
  return out;
}

SolverOutcome fa_cognitive(const CognitiveScenario& s, const ExperimentPlan& plan,
                           std::uint64_t seed) {
  const auto n = normalize(s);
  const ProblemSpec problem = cognitive_problem(n.scenario);
  const FAConfig cfg = fa_config_for(plan, s.users(), s.antennas(), 0, seed);
  const SolveTrace trace = run_fa(problem, PenaltyWeights::quadratic(problem), cfg);
  const ComplexMatrix& W = trace.best[kBeamformers];
  const ComplexMatrix repaired = cognitive_repair(W, n.scenario);
  SolverOutcome out;
  out.W = std::sqrt(n.power_scale) * repaired;
  out.objective = n.power_scale * repaired.squaredNorm();
  finish_minimization(out, cognitive_violation(W, n.scenario),
                      cognitive_violation(repaired, n.scenario));
  out.trace = trace.best_penalized_objective;
  out.generations = convergence_generation(out.trace);
  return out;
}

SolverOutcome fa_ris(const RisScenario& s, const ExperimentPlan& plan, std::uint64_t seed) {
  const auto n = normalize(s);
  const ProblemSpec problem = ris_problem(n.scenario);
  const FAConfig cfg = fa_config_for(plan, s.users(), s.antennas(), s.elements(), seed);
  const SolveTrace trace = run_fa(problem, PenaltyWeights::quadratic(problem), cfg);
  const ComplexMatrix& W = trace.best[kBeamformers];
  const ComplexMatrix& theta = trace.best[kPhases];
  const auto [repaired, clipped] = ris_repair(W, theta, n.scenario);
  SolverOutcome out;
  out.W = std::sqrt(n.power_scale) * repaired;
  out.theta = clipped;
  out.objective = n.power_scale * repaired.squaredNorm();
  finish_minimization(out, ris_violation(W, theta, n.scenario),
                      ris_violation(repaired, clipped, n.scenario));
  out.trace = trace.best_penalized_objective;
  out.generations = convergence_generation(out.trace);
  return out;
}

SolverOutcome fa_wpt(const WptScenario& s, const ExperimentPlan& plan, std::uint64_t seed) {
  const auto n = normalize(s);
  const ProblemSpec problem = wpt_problem(n.scenario);
  const FAConfig cfg = fa_config_for(plan, s.receivers(), s.antennas(), s.elements(), seed);
  const SolveTrace trace = run_fa(problem, PenaltyWeights::quadratic(problem), cfg);
  const ComplexMatrix& W = trace.best[kBeamformers];
  const ComplexMatrix& theta = trace.best[kPhases];
  const auto [projected, unit] = wpt_project(W, theta, n.scenario);
  SolverOutcome out;
  out.W = std::sqrt(n.power_scale) * projected;
  out.theta = unit;
  out.objective = n.objective_scale * wpt_objective(projected, unit, n.scenario);
  out.max_violation = wpt_violation(W, theta, n.scenario);
  out.feasible = out.max_violation <= kFeasibilityThreshold;
  out.trace = trace.best_penalized_objective;
  out.generations = convergence_generation(out.trace);
  return out;
}

SolverOutcome duality(const ClassicScenario& s, const ExperimentPlan& plan, bool recover) {
  const auto n = normalize(s);
  const DualityResult res = duality_solve(n.scenario, plan.duality_iterations);
  const ComplexMatrix W =
      recover ? downlink_power_recovery(n.scenario, res.state.w_hat) : res.W;
  SolverOutcome out;
  out.W = std::sqrt(n.power_scale) * W;
  out.objective = n.power_scale * W.squaredNorm();
  out.max_violation = classic_violation(W, n.scenario);
  out.feasible = out.max_violation <= kFeasibilityThreshold;
  out.generations = res.state.iteration;
  return out;
}

SolverOutcome sca(const WptScenario& s, const ExperimentPlan& plan) {
  const auto n = normalize(s);
  const ComplexMatrix theta0 = ComplexMatrix::Ones(s.elements(), 1);
  const ScaState st = sca_wpt_solve(n.scenario, theta0, plan.sca_iterations);
  SolverOutcome out;
  out.W = std::sqrt(n.power_scale) * st.w;
  out.theta = st.theta;
  out.objective = n.objective_scale * st.objective_history.back();
  out.max_violation = wpt_violation(st.w, st.theta, n.scenario);
  out.feasible = out.max_violation <= kFeasibilityThreshold;
  out.generations = static_cast<int>(st.objective_history.size());
  return out;
}

[[noreturn]] void not_applicable(SolverKind solver, const char* kind) {
  throw ValidationError("solver " + to_string(solver) + " does not apply to " + kind +
                        " scenarios");
}

nlohmann::json sweep_config(const ExperimentPlan& plan, double value, FAConfig& fa) {
  nlohmann::json config = plan.scenario;
  switch (plan.axis) {
    case SweepAxis::None: break;
    case SweepAxis::SinrDb: config["sinr_db"] = value; break;
    case SweepAxis::PowerDbm: config["power_dbm"] = value; break;
    case SweepAxis::Generations: fa.generations = static_cast<int>(value); break;
    case SweepAxis::Population: fa.population = static_cast<int>(value); break;
  }
  return config;
}

std::vector<ResultRow> run_trial(const ExperimentPlan& plan, int trial) {
  std::vector<double> sweeps = plan.axis == SweepAxis::None ? std::vector<double>{0.0}
                                                            : plan.sweep_values;
  std::vector<ResultRow> rows;
  for (std::size_t si = 0; si < sweeps.size(); ++si) {
    ExperimentPlan local = plan;
    const nlohmann::json config = sweep_config(plan, sweeps[si], local.fa);
    // The channel draw ignores the sweep index so that every sweep point
    // sees the same realization.
    Rng rng(derive_seed(plan.base_seed, static_cast<std::uint64_t>(trial), 0, 0));
    std::optional<Scenario> scenario;
    std::string build_error;
    try {
      scenario = build_scenario(config, rng);
    } catch (const std::exception& e) {
      build_error = e.what();
    }
    for (std::size_t k = 0; k < plan.solvers.size(); ++k) {
      ResultRow row;
      row.trial = trial;
      row.sweep = sweeps[si];
      row.solver = to_string(plan.solvers[k]);
      const auto started = std::chrono::steady_clock::now();
      try {
        if (!scenario) throw ValidationError(build_error);
        const SolverOutcome out =
            run_solver(*scenario, plan.solvers[k], local,
                       derive_seed(plan.base_seed, static_cast<std::uint64_t>(trial), si + 1,
                                   k + 1));
        row.objective_linear = out.objective;
        row.objective_db = to_db(out.objective);
        row.max_violation = out.max_violation;
        row.feasible = out.feasible;
        row.generations = out.generations;
      } catch (const std::exception& e) {
        row.objective_linear = kNaN;
        row.objective_db = kNaN;
        row.max_violation = kNaN;
        row.feasible = false;
        row.generations = 0;
        row.error = e.what();
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - started)
                        .count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void require_param(const std::map<std::string, double>& params, const char* name, double& out) {
  const auto it = params.find(name);
  if (it == params.end()) throw ValidationError(std::string("complexity: missing parameter ") + name);
  out = it->second;
}

}  // namespace

SolverKind parse_solver(const std::string& name) {
  if (name == "fa") return SolverKind::Fa;
  if (name == "iterative_printed") return SolverKind::IterativePrinted;
  if (name == "iterative_recovered") return SolverKind::IterativeRecovered;
  if (name == "sca") return SolverKind::Sca;
  if (name == "ao") return SolverKind::Ao;
  throw ValidationError("unknown solver '" + name + "'");
}

std::string to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::Fa: return "fa";
    case SolverKind::IterativePrinted: return "iterative_printed";
    case SolverKind::IterativeRecovered: return "iterative_recovered";
    case SolverKind::Sca: return "sca";
    case SolverKind::Ao: return "ao";
  }
  return "unknown";
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "none") return SweepAxis::None;
  if (name == "sinr_db") return SweepAxis::SinrDb;
  if (name == "generations") return SweepAxis::Generations;
  if (name == "population") return SweepAxis::Population;
  if (name == "power_dbm") return SweepAxis::PowerDbm;
  throw ValidationError("unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None: return "none";
    case SweepAxis::SinrDb: return "sinr_db";
    case SweepAxis::Generations: return "generations";
    case SweepAxis::Population: return "population";
    case SweepAxis::PowerDbm: return "power_dbm";
  }
  return "unknown";
}

void ExperimentPlan::validate() const {
  if (trials < 1) throw ValidationError("plan: trials must be at least 1");
  if (solvers.empty()) throw ValidationError("plan: at least one solver required");
  if (axis != SweepAxis::None && sweep_values.empty()) {
    throw ValidationError("plan: sweep axis " + to_string(axis) + " needs values");
  }
  if (!scenario.is_object() || !scenario.contains("kind")) {
    throw ValidationError("plan: scenario config must name its kind");
  }
  const ScenarioKind kind = parse_scenario_kind(scenario["kind"].get<std::string>());
  if (axis == SweepAxis::SinrDb && kind == ScenarioKind::Wpt) {
    throw ValidationError("plan: wpt scenarios have no SINR target to sweep");
  }
  if (axis == SweepAxis::PowerDbm && kind != ScenarioKind::Wpt) {
    throw ValidationError("plan: only wpt scenarios have a power budget to sweep");
  }
  if (axis == SweepAxis::Generations || axis == SweepAxis::Population) {
    for (double v : sweep_values) {
      if (v != std::floor(v) || v < 1) {
        throw ValidationError("plan: " + to_string(axis) + " values must be positive integers");
      }
    }
  }
  if (duality_iterations < 1 || sca_iterations < 1) {
    throw ValidationError("plan: baseline iteration counts must be positive");
  }
  if (threads < 0) throw ValidationError("plan: threads must be non-negative");
}

bool same_outcome(const ResultRow& a, const ResultRow& b) {
  return a.trial == b.trial && same_double(a.sweep, b.sweep) && a.solver == b.solver &&
         same_double(a.objective_linear, b.objective_linear) &&
         same_double(a.objective_db, b.objective_db) &&
         same_double(a.max_violation, b.max_violation) && a.feasible == b.feasible &&
         a.generations == b.generations && a.error == b.error;
}

SolverOutcome run_solver(const Scenario& scenario, SolverKind solver, const ExperimentPlan& plan,
                         std::uint64_t seed) {
  if (solver == SolverKind::Ao) {
    throw Error("ao: baseline unavailable (needs an interior-point conic solver)");
  }
  return std::visit(
      [&](const auto& s) -> SolverOutcome {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ClassicScenario>) {
          switch (solver) {
            case SolverKind::Fa: return fa_classic(s, plan, seed);
            case SolverKind::IterativePrinted: return duality(s, plan, false);
            case SolverKind::IterativeRecovered: return duality(s, plan, true);
            default: not_applicable(solver, "classic");
          }
        } else if constexpr (std::is_same_v<S, CognitiveScenario>) {
          if (solver == SolverKind::Fa) return fa_cognitive(s, plan, seed);
          not_applicable(solver, "cognitive");
        } else if constexpr (std::is_same_v<S, RisScenario>) {
          if (solver == SolverKind::Fa) return fa_ris(s, plan, seed);
          not_applicable(solver, "ris");
        } else {
          if (solver == SolverKind::Fa) return fa_wpt(s, plan, seed);
          if (solver == SolverKind::Sca) return sca(s, plan);
          not_applicable(solver, "wpt");
        }
      },
      scenario);
}

std::vector<ResultRow> run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const auto trials = static_cast<std::size_t>(plan.trials);
  std::vector<std::vector<ResultRow>> per_trial(trials);

  unsigned workers = plan.threads > 0 ? static_cast<unsigned>(plan.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(trials));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&]() {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        per_trial[t] = run_trial(plan, static_cast<int>(t));
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  for (auto& chunk : per_trial) {
    for (auto& row : chunk) rows.push_back(std::move(row));
  }
  return rows;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t sweep,
                          std::uint64_t stream) {
  std::uint64_t z = splitmix64(base);
  z = splitmix64(z ^ trial);
  z = splitmix64(z ^ sweep);
  return splitmix64(z ^ stream);
}

int convergence_generation(const std::vector<double>& trace, double rel_tol, int window) {
  const auto n = static_cast<int>(trace.size());
  for (int g = 1; g + window <= n; ++g) {
    bool settled = true;
    for (int k = g; k < g + window; ++k) {
      const double prev = trace[static_cast<std::size_t>(k - 1)];
      const double cur = trace[static_cast<std::size_t>(k)];
      const double scale = std::max(std::abs(prev), std::numeric_limits<double>::min());
      if (!(std::abs(cur - prev) / scale < rel_tol)) {
        settled = false;
        break;
      }
    }
    if (settled) return g;
  }
  return -1;
}

Aggregate aggregate(const std::vector<ResultRow>& rows, const std::string& solver,
                    std::optional<double> sweep) {
  Aggregate agg;
  std::vector<double> values;
  for (const auto& row : rows) {
    if (row.solver != solver) continue;
    if (sweep && row.sweep != *sweep) continue;
    const bool skip = !row.error.empty() || (solver == "fa" && !row.feasible) ||
                      !std::isfinite(row.objective_linear);
    if (skip) {
      ++agg.excluded;
      continue;
    }
    values.push_back(row.objective_linear);
  }
  agg.count = values.size();
  if (values.empty()) {
    agg.mean_linear = agg.mean_db = agg.median_linear = kNaN;
    return agg;
  }
  // Summing in sorted order makes the mean independent of row order.
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.mean_linear = sum / static_cast<double>(values.size());
  agg.mean_db = to_db(agg.mean_linear);
  const std::size_t mid = values.size() / 2;
  agg.median_linear =
      values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return agg;
}

std::vector<double> radiation_pattern(const ComplexMatrix& W, const std::vector<double>& angles_deg,
                                      double spacing_ratio) {
  if (W.rows() < 1 || W.cols() < 1) throw ContractViolation("radiation_pattern: empty W");
  require_finite(W, "radiation_pattern");
  std::vector<double> out;
  out.reserve(angles_deg.size());
  for (double deg : angles_deg) {
    if (!(deg >= -90.0 && deg <= 90.0)) {
      throw ContractViolation("radiation_pattern: angle outside [-90, 90] degrees");
    }
    const double s = std::sin(deg * std::numbers::pi / 180.0);
    Eigen::VectorXcd a(W.rows());
    for (Eigen::Index m = 0; m < W.rows(); ++m) {
      a(m) = std::polar(1.0, -2.0 * std::numbers::pi * spacing_ratio * static_cast<double>(m) * s);
    }
    const double power = (a.adjoint() * W).squaredNorm();
    out.push_back(std::max(10.0 * std::log10(power), -200.0));
  }
  return out;
}

double complexity_estimate(int lemma, const std::map<std::string, double>& params) {
  double T = 0, N = 0, U = 0, K = 0, M = 0, Nt = 0, n0 = 0, m0 = 0, eps = 0;
  auto log2 = [](double x) { return std::log2(x); };
  switch (lemma) {
    case 1:
      require_param(params, "T", T);
      require_param(params, "U", U);
      require_param(params, "M_t", M);
      return T * (U * (M * M * M + M * M + M * log2(M)) + U);
    case 2: {
      require_param(params, "T", T);
      require_param(params, "N", N);
      require_param(params, "U", U);
      require_param(params, "M_t", M);
      const double eval = N * U * M * (1 + U * M);
      return T * N * N * (M * M + eval) + T * N * log2(N) + N * M * U + eval + N * log2(N);
    }
    case 3: {
      require_param(params, "U", U);
      require_param(params, "K", K);
      require_param(params, "M_t", M);
      require_param(params, "epsilon", eps);
      const double M2 = M * M;
      return std::log(1.0 / eps) * std::sqrt(U * (M + 1) + K) *
             ((M2 + 1) * (U + K) + U * M2 * (M2 + M) + M2 * M2) * M2;
    }
    case 4: {
      require_param(params, "T", T);
      require_param(params, "N", N);
      require_param(params, "U", U);
      require_param(params, "K", K);
      require_param(params, "M_t", M);
      const double eval = N * U * M * (1 + U * M + K * M);
      return T * N * N * (M * M + eval) + T * N * log2(N) + N * M * U + eval + N * log2(N);
    }
    case 5: {
      require_param(params, "n0", n0);
      require_param(params, "U", U);
      require_param(params, "M_t", M);
      require_param(params, "N_t", Nt);
      require_param(params, "epsilon", eps);
      const double ln = std::log(1.0 / eps);
      const double M2 = M * M;
      const double N2 = Nt * Nt;
      const double tau1 =
          ln * std::sqrt(U * (M + 1)) * ((M2 + 1) * U + U * M2 * (M2 + M) + M2 * M2) * M2;
      const double tau2 = ln * std::sqrt(U + 2 * Nt) * ((N2 + 1) * (U + 2 * N2) + N2 * N2) * N2;
      return n0 * (tau1 + tau2);
    }
    case 6:
    case 8: {
      require_param(params, "T", T);
      require_param(params, "N", N);
      require_param(params, "U", U);
      require_param(params, "M_t", M);
      require_param(params, "N_t", Nt);
      const double eval = U * M + U * (Nt * Nt + M * Nt) + Nt;
      return T * N * N * (M * M + Nt + N * eval) + T * N * log2(N) + N * M * U + Nt * N +
             N * log2(N) + N * eval;
    }
    case 7:
      require_param(params, "m0", m0);
      require_param(params, "U", U);
      require_param(params, "M_t", M);
      require_param(params, "N_t", Nt);
      return m0 * (U * M * (M + Nt) + M * M * M + M * log2(M) + Nt * Nt * Nt + Nt * Nt * M);
    default:
      throw ValidationError("complexity: lemma must be 1..8, got " + std::to_string(lemma));
  }
}

int order_of_magnitude(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ContractViolation("order_of_magnitude: expected a positive finite value");
  }
  return static_cast<int>(std::floor(std::log10(x)));
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ValidationError("unknown output format '" + name + "'");
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "trial,sweep,solver,objective_db,objective_linear,max_violation,generations,wall_ms\n";
  for (const auto& r : rows) {
    os << r.trial << ',' << format_double(r.sweep) << ',' << r.solver << ','
       << format_double(r.objective_db) << ',' << format_double(r.objective_linear) << ','
       << format_double(r.max_violation) << ',' << r.generations << ','
       << format_double(r.wall_ms) << '\n';
  }
  return os.str();
}

nlohmann::ordered_json to_json(const std::vector<ResultRow>& rows) {
  auto number = [](double v) -> nlohmann::ordered_json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["trial"] = r.trial;
    row["sweep"] = number(r.sweep);
    row["solver"] = r.solver;
    row["objective_db"] = number(r.objective_db);
    row["objective_linear"] = number(r.objective_linear);
    row["max_violation"] = number(r.max_violation);
    row["generations"] = r.generations;
    row["wall_ms"] = number(r.wall_ms);
    row["feasible"] = r.feasible;
    row["error"] = r.error;
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<ResultRow> rows_from_json(const nlohmann::json& array) {
  if (!array.is_array()) throw ValidationError("result rows: expected a JSON array");
  auto number = [](const nlohmann::json& v) { return v.is_null() ? kNaN : v.get<double>(); };
  std::vector<ResultRow> rows;
  try {
    for (const auto& item : array) {
      ResultRow r;
      r.trial = item.at("trial").get<int>();
      r.sweep = number(item.at("sweep"));
      r.solver = item.at("solver").get<std::string>();
      r.objective_db = number(item.at("objective_db"));
      r.objective_linear = number(item.at("objective_linear"));
      r.max_violation = number(item.at("max_violation"));
      r.generations = item.at("generations").get<int>();
      r.wall_ms = number(item.at("wall_ms"));
      r.feasible = item.at("feasible").get<bool>();
      r.error = item.at("error").get<std::string>();
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("result rows: ") + e.what());
  }
  return rows;
}

void emit(const std::vector<ResultRow>& rows, OutputFormat format,
          const std::filesystem::path& path) {
  if (rows.empty()) throw ContractViolation("emit: no rows to write");
  const std::string text =
      format == OutputFormat::Csv ? to_csv(rows) : to_json(rows).dump(2) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace firebeam
