// SPDX-License-Identifier: Apache-2.0
//
// Generalized firefly algorithm over a set of complex-matrix decision
// variables. Constraints enter through a quadratic exterior penalty whose
// weights follow a generation-dependent schedule.
#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "firebeam/numerics.hpp"

namespace firebeam {

using Rng = std::mt19937_64;

enum class Sense { Minimize, Maximize };

/// UnitModulus variables (RIS phase vectors) are initialized on the unit
/// circle; the search itself treats them like any other variable.
enum class VariableKind { General, UnitModulus };

enum class Randomization { Gaussian, Uniform };

struct VariableShape {
  std::string name;
  Eigen::Index rows = 1;
  Eigen::Index cols = 1;
  VariableKind kind = VariableKind::General;
};

/// One firefly: an ordered, uniquely named list of matrices.
class DecisionSet {
public:
  struct Entry {
    std::string name;
    ComplexMatrix value;
  };

  DecisionSet() = default;

  void add(std::string name, ComplexMatrix value);

  const ComplexMatrix& operator[](std::string_view name) const;
  ComplexMatrix& operator[](std::string_view name);
  const ComplexMatrix& at(std::size_t index) const { return entries_.at(index).value; }
  ComplexMatrix& at(std::size_t index) { return entries_.at(index).value; }

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  bool conforms_to(const std::vector<VariableShape>& shapes) const;

  friend bool operator==(const DecisionSet& a, const DecisionSet& b);

private:
  std::vector<Entry> entries_;
};

using ObjectiveFn = std::function<double(const DecisionSet&)>;
using ConstraintFn = std::function<std::vector<double>(const DecisionSet&)>;

/// minimize (or maximize) f(x) s.t. g_l(x) <= 0, h_k(x) = 0.
struct ProblemSpec {
  std::vector<VariableShape> variables;
  ObjectiveFn objective;
  ConstraintFn inequalities;  ///< empty function means L = 0
  ConstraintFn equalities;    ///< empty function means K = 0
  Sense sense = Sense::Minimize;
  std::size_t inequality_count = 0;
  std::size_t equality_count = 0;
};

/// lambda_l(n) = lambda[l] * schedule(n), rho_k(n) = rho[k] * schedule(n).
struct PenaltyWeights {
  std::vector<double> lambda;
  std::vector<double> rho;
  std::function<double(int)> schedule;

  /// Unit base weights with the n^2 schedule.
  static PenaltyWeights quadratic(const ProblemSpec& problem);

  double lambda_at(std::size_t l, int generation) const;
  double rho_at(std::size_t k, int generation) const;
};

/// n -> n^2.
double quadratic_schedule(int generation);

/// Objective and constraint values of one decision set.
struct Evaluation {
  double objective = 0.0;
  std::vector<double> inequalities;
  std::vector<double> equalities;
};

/// Calls every evaluator once; throws NumericError on a non-finite value.
Evaluation evaluate(const ProblemSpec& problem, const DecisionSet& x);

double penalty(const Evaluation& eval, const PenaltyWeights& weights, int generation);
double penalty(const ProblemSpec& problem, const PenaltyWeights& weights, const DecisionSet& x,
               int generation);

/// f + P for minimization, -f + P for maximization. Smaller is brighter.
double penalized_objective(const ProblemSpec& problem, const Evaluation& eval,
                           const PenaltyWeights& weights, int generation);
double penalized_objective(const ProblemSpec& problem, const PenaltyWeights& weights,
                           const DecisionSet& x, int generation);

/// Reciprocal brightness 1/(f + P); empty when f + P <= 0. Reporting only:
/// the solver ranks on the penalized objective directly.
std::optional<double> brightness(double penalized);
std::optional<double> brightness(const ProblemSpec& problem, const PenaltyWeights& weights,
                                 const DecisionSet& x, int generation);

struct FAConfig {
  int population = 30;
  int generations = 50;
  /// Per-variable parameters; a single value applies to every variable.
  std::vector<double> beta0{1.0};
  std::vector<double> gamma{1.0};
  std::vector<double> init_scale{1.0};
  /// Multiplies the random term of every move.
  std::vector<double> noise_scale{1.0};
  /// Divides the distance r before the attraction factor exp(-gamma r^2).
  std::vector<double> distance_scale{1.0};
  double alpha0 = 0.9;
  double alpha_decay = 0.9;
  std::uint64_t rng_seed = 1;
  Randomization randomization = Randomization::Gaussian;

  void validate(std::size_t variable_count) const;

  double beta0_for(std::size_t v) const { return pick(beta0, v); }
  double gamma_for(std::size_t v) const { return pick(gamma, v); }
  double init_scale_for(std::size_t v) const { return pick(init_scale, v); }
  double noise_scale_for(std::size_t v) const { return pick(noise_scale, v); }
  double distance_scale_for(std::size_t v) const { return pick(distance_scale, v); }
  double alpha_at(int generation) const;

private:
  static double pick(const std::vector<double>& values, std::size_t v) {
    return values.size() == 1 ? values.front() : values.at(v);
  }
};

struct SolveTrace {
  DecisionSet best;
  /// Best-so-far penalized objective after each generation, scored with
  /// the final generation's penalty weights.
  std::vector<double> best_penalized_objective;
  double final_objective = 0.0;  ///< f(best), unsigned
  double max_inequality_violation = 0.0;
  double max_equality_violation = 0.0;
  int generations_run = 0;
  std::chrono::duration<double> wall_time{};
};

/// Moves firefly xi towards xj; returns the updated xi.
DecisionSet move(const DecisionSet& xi, const DecisionSet& xj, const FAConfig& config,
                 int generation, Rng& rng);

std::vector<DecisionSet> init_population(const ProblemSpec& problem, const FAConfig& config,
                                         Rng& rng);

/// Called after every generation with the ranked population.
using GenerationObserver = std::function<void(int generation, const std::vector<DecisionSet>&)>;

SolveTrace run_fa(const ProblemSpec& problem, const PenaltyWeights& weights,
                  const FAConfig& config, const GenerationObserver& observer = {});

}  // namespace firebeam
