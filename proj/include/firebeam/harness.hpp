// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo experiment runner, result emitters, radiation patterns and
// operation-count estimates for the solvers.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "firebeam/channels.hpp"
#include "firebeam/firefly.hpp"

namespace firebeam {

enum class SolverKind { Fa, IterativePrinted, IterativeRecovered, Sca, Ao };

SolverKind parse_solver(const std::string& name);
std::string to_string(SolverKind solver);

enum class SweepAxis { None, SinrDb, Generations, Population, PowerDbm };

SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);

struct ExperimentPlan {
  /// Complete scenario config including "kind"; see default_config.
  nlohmann::json scenario;
  SweepAxis axis = SweepAxis::None;
  std::vector<double> sweep_values;  ///< ignored when axis is None
  int trials = 1;
  std::vector<SolverKind> solvers{SolverKind::Fa};
  std::uint64_t base_seed = 1;
  /// init_scale and rng_seed are filled in per run.
  FAConfig fa;
  int duality_iterations = 30;
  int sca_iterations = 10;
  int threads = 0;  ///< 0: hardware concurrency

  void validate() const;
};

struct ResultRow {
  int trial = 0;
  double sweep = 0.0;
  std::string solver;
  /// Total transmit power in W for minimization problems, received sum
  /// power in W for WPT. NaN when the solver failed.
  double objective_linear = 0.0;
  double objective_db = 0.0;  ///< 10 log10(objective_linear)
  double max_violation = 0.0;  ///< largest relative constraint violation
  bool feasible = true;
  /// Convergence generation for the firefly solver (-1 if it never
  /// settles), iterations run for the baselines.
  int generations = 0;
  double wall_ms = 0.0;
  std::string error;  ///< empty on success
};

/// Field-wise equality ignoring wall_ms; NaN objectives compare equal.
bool same_outcome(const ResultRow& a, const ResultRow& b);

/// Relative reporting threshold for the firefly solver.
inline constexpr double kFeasibilityThreshold = 1e-3;

/// One solver run on one scenario realization, in physical units.
struct SolverOutcome {
  ComplexMatrix W;
  ComplexMatrix theta;  ///< empty for scenarios without an RIS
  double objective = 0.0;
  double max_violation = 0.0;
  bool feasible = true;
  int generations = 0;
  /// Firefly best-so-far penalized objective per generation (normalized
  /// problem units); empty for the baselines.
  std::vector<double> trace;
};

/// Runs one solver. Firefly solutions are repaired (SINR scaling, phase
/// projection) before the objective is reported and flagged infeasible
/// when the violation exceeds kFeasibilityThreshold. Throws on solver
/// failure or when the solver does not apply to the scenario.
SolverOutcome run_solver(const Scenario& scenario, SolverKind solver, const ExperimentPlan& plan,
                         std::uint64_t seed);

/// Rows ordered by trial, then sweep point, then solver as listed in the
/// plan. Solver failures become rows with `error` set.
std::vector<ResultRow> run_experiment(const ExperimentPlan& plan);

/// 64-bit seed for one (trial, sweep point, stream) triple.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t sweep,
                          std::uint64_t stream);

/// First generation n (1-based) after which the next 5 relative changes
/// of the trace all stay below 1e-3; -1 if there is none.
int convergence_generation(const std::vector<double>& trace, double rel_tol = 1e-3,
                           int window = 5);

struct Aggregate {
  std::size_t count = 0;      ///< rows included in the mean
  std::size_t excluded = 0;   ///< errored or infeasible firefly rows
  double mean_linear = 0.0;
  double mean_db = 0.0;       ///< 10 log10(mean_linear)
  double median_linear = 0.0;
};

/// Summary over rows of one solver (and one sweep value, if given).
/// Rows with an error are skipped, as are firefly rows flagged infeasible.
Aggregate aggregate(const std::vector<ResultRow>& rows, const std::string& solver,
                    std::optional<double> sweep = std::nullopt);

/// 10 log10(sum_t |a(theta)^H w_t|^2) per angle with the ULA steering
/// a_m(theta) = exp(-j 2 pi s m sin theta), m = 0..M-1, floored at -200 dB.
std::vector<double> radiation_pattern(const ComplexMatrix& W, const std::vector<double>& angles_deg,
                                      double spacing_ratio);

/// Operation-count estimate of one of the eight solver complexity
/// formulas. Parameters: T, N, U, K, M_t, N_t, n0, m0, epsilon.
/// 1: duality iteration; 2: firefly, classic; 3: SDP, cognitive;
/// 4: firefly, cognitive; 5: alternating optimization, RIS;
/// 6: firefly, RIS; 7: SCA, WPT; 8: firefly, WPT.
double complexity_estimate(int lemma, const std::map<std::string, double>& params);

/// floor(log10(x)).
int order_of_magnitude(double x);

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(const std::string& name);

std::string to_csv(const std::vector<ResultRow>& rows);
nlohmann::ordered_json to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_json(const nlohmann::json& array);

/// Writes rows to `path`; throws Error naming the path on I/O failure.
void emit(const std::vector<ResultRow>& rows, OutputFormat format,
          const std::filesystem::path& path);

}  // namespace firebeam
