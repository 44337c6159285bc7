// SPDX-License-Identifier: Apache-2.0
#include "firebeam/firefly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "firebeam/errors.hpp"

namespace firebeam {
namespace {

void require_all_finite(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite value");
  }
}

void require_positive(const std::vector<double>& values, std::size_t expected, const char* what,
                      bool allow_zero) {
  if (values.size() != 1 && values.size() != expected) {
    throw ContractViolation(std::string("FAConfig.") + what + ": expected 1 or " +
                            std::to_string(expected) + " values, got " +
                            std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0 || (!allow_zero && v == 0.0)) {
      throw ContractViolation(std::string("FAConfig.") + what + ": invalid value " +
                              std::to_string(v));
    }
  }
}

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Randomization kind, Rng& rng) {
  ComplexMatrix out(rows, cols);
  if (kind == Randomization::Gaussian) {
    // CN(0, 1): real and imaginary parts each carry variance 1/2.
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out(r, c) = Complex(re, im);
      }
    }
  } else {
    // Same per-entry variance as the Gaussian choice.
    const double half_width = std::sqrt(1.5);
    std::uniform_real_distribution<double> uni(-half_width, half_width);
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double re = uni(rng);
        const double im = uni(rng);
        out(r, c) = Complex(re, im);
      }
    }
  }
  return out;
}

struct Scored {
  Evaluation eval;
  double current = 0.0;   // penalized objective with this generation's weights
  double terminal = 0.0;  // penalized objective with the final weights
};

}  // namespace

void DecisionSet::add(std::string name, ComplexMatrix value) {
  for (const auto& e : entries_) {
    if (e.name == name) throw ContractViolation("DecisionSet: duplicate variable '" + name + "'");
  }
  entries_.push_back({std::move(name), std::move(value)});
}

const ComplexMatrix& DecisionSet::operator[](std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.name == name) return e.value;
  }
  throw ContractViolation("DecisionSet: no variable '" + std::string(name) + "'");
}

ComplexMatrix& DecisionSet::operator[](std::string_view name) {
  const auto& self = *this;
  return const_cast<ComplexMatrix&>(self[name]);
}

bool DecisionSet::conforms_to(const std::vector<VariableShape>& shapes) const {
  if (shapes.size() != entries_.size()) return false;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const auto& e = entries_[i];
    if (e.name != shapes[i].name || e.value.rows() != shapes[i].rows ||
        e.value.cols() != shapes[i].cols) {
      return false;
    }
  }
  return true;
}

bool operator==(const DecisionSet& a, const DecisionSet& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    const auto& x = a.entries_[i];
    const auto& y = b.entries_[i];
    if (x.name != y.name || x.value.rows() != y.value.rows() ||
        x.value.cols() != y.value.cols() || x.value != y.value) {
      return false;
    }
  }
  return true;
}

double quadratic_schedule(int generation) {
  const double n = static_cast<double>(generation);
  return n * n;
}

PenaltyWeights PenaltyWeights::quadratic(const ProblemSpec& problem) {
  PenaltyWeights w;
  w.lambda.assign(problem.inequality_count, 1.0);
  w.rho.assign(problem.equality_count, 1.0);
  w.schedule = quadratic_schedule;
  return w;
}

double PenaltyWeights::lambda_at(std::size_t l, int generation) const {
  const double s = schedule ? schedule(generation) : 1.0;
  return lambda.at(l) * s;
}

double PenaltyWeights::rho_at(std::size_t k, int generation) const {
  const double s = schedule ? schedule(generation) : 1.0;
  return rho.at(k) * s;
}

Evaluation evaluate(const ProblemSpec& problem, const DecisionSet& x) {
  if (!x.conforms_to(problem.variables)) {
    throw ContractViolation("evaluate: decision set does not match the problem's variables");
  }
  Evaluation out;
  out.objective = problem.objective(x);
  if (!std::isfinite(out.objective)) throw NumericError("objective: non-finite value");
  if (problem.inequalities) out.inequalities = problem.inequalities(x);
  if (problem.equalities) out.equalities = problem.equalities(x);
  if (out.inequalities.size() != problem.inequality_count ||
      out.equalities.size() != problem.equality_count) {
    throw ContractViolation("evaluate: constraint count differs from the problem declaration");
  }
  require_all_finite(out.inequalities, "inequality constraint");
  require_all_finite(out.equalities, "equality constraint");
  return out;
}

double penalty(const Evaluation& eval, const PenaltyWeights& weights, int generation) {
  require_all_finite(eval.inequalities, "inequality constraint");
  require_all_finite(eval.equalities, "equality constraint");
  if (weights.lambda.size() != eval.inequalities.size() ||
      weights.rho.size() != eval.equalities.size()) {
    throw ContractViolation("penalty: weight count differs from constraint count");
  }
  double p = 0.0;
  for (std::size_t l = 0; l < eval.inequalities.size(); ++l) {
    const double v = std::max(0.0, eval.inequalities[l]);
    p += weights.lambda_at(l, generation) * v * v;
  }
  for (std::size_t k = 0; k < eval.equalities.size(); ++k) {
    const double h = eval.equalities[k];
    p += weights.rho_at(k, generation) * h * h;
  }
  return p;
}

double penalty(const ProblemSpec& problem, const PenaltyWeights& weights, const DecisionSet& x,
               int generation) {
  return penalty(evaluate(problem, x), weights, generation);
}

double penalized_objective(const ProblemSpec& problem, const Evaluation& eval,
                           const PenaltyWeights& weights, int generation) {
  const double f = problem.sense == Sense::Maximize ? -eval.objective : eval.objective;
  return f + penalty(eval, weights, generation);
}

double penalized_objective(const ProblemSpec& problem, const PenaltyWeights& weights,
                           const DecisionSet& x, int generation) {
  return penalized_objective(problem, evaluate(problem, x), weights, generation);
}

std::optional<double> brightness(double penalized) {
  if (!(penalized > 0.0)) return std::nullopt;
  return 1.0 / penalized;
}

std::optional<double> brightness(const ProblemSpec& problem, const PenaltyWeights& weights,
                                 const DecisionSet& x, int generation) {
  return brightness(penalized_objective(problem, weights, x, generation));
}

void FAConfig::validate(std::size_t variable_count) const {
  if (population < 2) throw ContractViolation("FAConfig.population must be at least 2");
  if (generations < 1) throw ContractViolation("FAConfig.generations must be at least 1");
  require_positive(beta0, variable_count, "beta0", true);
  require_positive(gamma, variable_count, "gamma", true);
  require_positive(init_scale, variable_count, "init_scale", false);
  require_positive(noise_scale, variable_count, "noise_scale", true);
  require_positive(distance_scale, variable_count, "distance_scale", false);
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) {
    throw ContractViolation("FAConfig.alpha0 must lie in [0, 1]");
  }
  if (!(alpha_decay > 0.0 && alpha_decay < 1.0)) {
    throw ContractViolation("FAConfig.alpha_decay must lie in (0, 1)");
  }
}

double FAConfig::alpha_at(int generation) const {
  return alpha0 * std::pow(alpha_decay, generation);
}

DecisionSet move(const DecisionSet& xi, const DecisionSet& xj, const FAConfig& config,
                 int generation, Rng& rng) {
  if (xi.size() != xj.size()) throw ContractViolation("move: variable count mismatch");
  const double alpha = config.alpha_at(generation);
  DecisionSet out;
  for (std::size_t v = 0; v < xi.size(); ++v) {
    const auto& a = xi.entries()[v];
    const auto& b = xj.entries()[v];
    if (a.name != b.name || a.value.rows() != b.value.rows() ||
        a.value.cols() != b.value.cols()) {
      throw ContractViolation("move: variable '" + a.name + "' does not match");
    }
    const double r = frobenius_distance(b.value, a.value) / config.distance_scale_for(v);
    const double factor = config.beta0_for(v) * std::exp(-config.gamma_for(v) * r * r);
    const ComplexMatrix noise =
        random_matrix(a.value.rows(), a.value.cols(), config.randomization, rng);
    // (1 - f) V_i + f V_j is V_i + f (V_j - V_i) rearranged so that f = 1
    // lands exactly on V_j and f = 0 leaves V_i untouched.
    out.add(a.name, (1.0 - factor) * a.value + factor * b.value +
                      alpha * config.noise_scale_for(v) * noise);
  }
  return out;
}

std::vector<DecisionSet> init_population(const ProblemSpec& problem, const FAConfig& config,
                                         Rng& rng) {
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  std::vector<DecisionSet> population;
  population.reserve(static_cast<std::size_t>(std::max(config.population, 0)));
  for (int n = 0; n < config.population; ++n) {
    DecisionSet x;
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
      const auto& shape = problem.variables[v];
      ComplexMatrix value;
      if (shape.kind == VariableKind::UnitModulus) {
        value.resize(shape.rows, shape.cols);
        for (Eigen::Index c = 0; c < shape.cols; ++c) {
          for (Eigen::Index r = 0; r < shape.rows; ++r) value(r, c) = std::polar(1.0, phase(rng));
        }
      } else {
        value = config.init_scale_for(v) *
                random_matrix(shape.rows, shape.cols, Randomization::Gaussian, rng);
      }
      x.add(shape.name, std::move(value));
    }
    population.push_back(std::move(x));
  }
  return population;
}

SolveTrace run_fa(const ProblemSpec& problem, const PenaltyWeights& weights,
                  const FAConfig& config, const GenerationObserver& observer) {
  const auto started = std::chrono::steady_clock::now();
  config.validate(problem.variables.size());
  if (!problem.objective) throw ContractViolation("run_fa: problem has no objective");
  if (weights.lambda.size() != problem.inequality_count ||
      weights.rho.size() != problem.equality_count) {
    throw ContractViolation("run_fa: weight count differs from constraint count");
  }
  for (double w : weights.lambda) {
    if (!(w > 0.0)) throw ContractViolation("run_fa: penalty weights must be positive");
  }
  for (double w : weights.rho) {
    if (!(w > 0.0)) throw ContractViolation("run_fa: penalty weights must be positive");
  }

  const int T = config.generations;
  const auto N = static_cast<std::size_t>(config.population);
  Rng rng(config.rng_seed);

  std::vector<DecisionSet> pop = init_population(problem, config, rng);
  std::vector<Scored> score(N);

  auto full_score = [&](std::size_t i, int gen) {
    try {
      score[i].eval = evaluate(problem, pop[i]);
      score[i].current = penalized_objective(problem, score[i].eval, weights, gen);
      score[i].terminal = penalized_objective(problem, score[i].eval, weights, T);
    } catch (const SolveError&) {
      throw;
    } catch (const Error& e) {
      throw SolveError(e.what(), gen);
    }
  };

  auto rank = [&]() {
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return score[a].current < score[b].current;
    });
    std::vector<DecisionSet> p2;
    std::vector<Scored> s2;
    p2.reserve(N);
    s2.reserve(N);
    for (std::size_t k : order) {
      p2.push_back(std::move(pop[k]));
      s2.push_back(std::move(score[k]));
    }
    pop = std::move(p2);
    score = std::move(s2);
  };

  for (std::size_t i = 0; i < N; ++i) full_score(i, 1);
  rank();

  // Best-so-far is judged with the final generation's weights throughout,
  // so that the recorded sequence is comparable across generations.
  DecisionSet best = pop[0];
  double best_value = score[0].terminal;
  for (std::size_t i = 1; i < N; ++i) {
    if (score[i].terminal < best_value) {
      best_value = score[i].terminal;
      best = pop[i];
    }
  }
  auto consider = [&](std::size_t i) {
    if (score[i].terminal < best_value) {
      best_value = score[i].terminal;
      best = pop[i];
    }
  };

  SolveTrace trace;
  trace.best_penalized_objective.reserve(static_cast<std::size_t>(T));

  for (int gen = 1; gen <= T; ++gen) {
    // The weights grow with the generation index; rescore cached values.
    for (auto& s : score) {
      s.current = penalized_objective(problem, s.eval, weights, gen);
    }
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        consider(i);
        consider(j);
        if (score[j].current < score[i].current) {
          pop[i] = move(pop[i], pop[j], config, gen, rng);
          full_score(i, gen);
        }
      }
    }
    rank();
    for (std::size_t i = 0; i < N; ++i) consider(i);
    trace.best_penalized_objective.push_back(best_value);
    if (observer) observer(gen, pop);
  }

  Evaluation final_eval;
  try {
    final_eval = evaluate(problem, best);
  } catch (const Error& e) {
    throw SolveError(e.what(), T);
  }
  trace.final_objective = final_eval.objective;
  for (double g : final_eval.inequalities) {
    trace.max_inequality_violation = std::max(trace.max_inequality_violation, g);
  }
  for (double h : final_eval.equalities) {
    trace.max_equality_violation = std::max(trace.max_equality_violation, std::abs(h));
  }
  trace.best = std::move(best);
  trace.generations_run = T;
  trace.wall_time = std::chrono::steady_clock::now() - started;
  return trace;
}

}  // namespace firebeam
