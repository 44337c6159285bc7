// SPDX-License-Identifier: Apache-2.0
//
// Downlink beamforming problems expressed as ProblemSpec instances:
// classic SINR-constrained power minimization, its cognitive-radio variant
// with interference caps, RIS-aided power minimization, and RIS-aided
// wireless power transfer (WPT). All quantities are linear (W, ratios).
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "firebeam/firefly.hpp"
#include "firebeam/numerics.hpp"

namespace firebeam {

/// Variable names used by every problem builder.
inline constexpr const char* kBeamformers = "W";
inline constexpr const char* kPhases = "theta";

struct ClassicScenario {
  std::vector<ComplexMatrix> R;  ///< channel covariance per user, M_t x M_t
  std::vector<double> sigma2;
  std::vector<double> gamma;  ///< SINR targets

  std::size_t users() const { return R.size(); }
  Eigen::Index antennas() const { return R.empty() ? 0 : R.front().rows(); }
  void validate() const;
};

struct CognitiveScenario {
  std::vector<ComplexMatrix> R_s;  ///< secondary users
  std::vector<ComplexMatrix> R_p;  ///< primary users (may be empty)
  std::vector<double> sigma2;
  std::vector<double> eta;
  std::vector<double> I_to;  ///< interference cap per primary user

  std::size_t users() const { return R_s.size(); }
  std::size_t primaries() const { return R_p.size(); }
  Eigen::Index antennas() const { return R_s.empty() ? 0 : R_s.front().rows(); }
  void validate() const;
};

/// cascade[i] = G_i^H = diag(g_i^*) H^H, N_t x M_t, so that the effective
/// channel seen by beamformer w is theta^H cascade[i] w.
struct RisScenario {
  std::vector<ComplexMatrix> cascade;
  std::vector<double> sigma2;
  std::vector<double> eta;

  std::size_t users() const { return cascade.size(); }
  Eigen::Index antennas() const { return cascade.empty() ? 0 : cascade.front().cols(); }
  Eigen::Index elements() const { return cascade.empty() ? 0 : cascade.front().rows(); }
  void validate() const;
};

struct WptScenario {
  std::vector<ComplexMatrix> cascade;  ///< same layout as RisScenario
  std::vector<double> alpha;
  double power = 1.0;  ///< budget P

  std::size_t receivers() const { return cascade.size(); }
  Eigen::Index antennas() const { return cascade.empty() ? 0 : cascade.front().cols(); }
  Eigen::Index elements() const { return cascade.empty() ? 0 : cascade.front().rows(); }
  void validate() const;
};

double sinr_classic(const ComplexMatrix& W, const ClassicScenario& s, std::size_t i);
double sinr_cognitive(const ComplexMatrix& W, const CognitiveScenario& s, std::size_t t);
/// sum_j w_j^H R_p,k w_j
double interference_cognitive(const ComplexMatrix& W, const CognitiveScenario& s, std::size_t k);
double sinr_ris(const ComplexMatrix& W, const ComplexMatrix& theta, const RisScenario& s,
                std::size_t i);
double wpt_objective(const ComplexMatrix& W, const ComplexMatrix& theta, const WptScenario& s);

ProblemSpec classic_problem(const ClassicScenario& s);
ProblemSpec cognitive_problem(const CognitiveScenario& s);
ProblemSpec ris_problem(const RisScenario& s);
ProblemSpec wpt_problem(const WptScenario& s);

/// A rescaled copy of a scenario. Physical beamformers are
/// sqrt(power_scale) times the normalized ones; a physical objective is
/// objective_scale times the normalized one.
template <class Scenario>
struct Normalized {
  Scenario scenario;
  double power_scale = 1.0;
  double objective_scale = 1.0;
};

/// Noise powers and caps become 1 and the interference-free power
/// requirement becomes O(1); the feasible set maps one-to-one.
Normalized<ClassicScenario> normalize(const ClassicScenario& s);
Normalized<CognitiveScenario> normalize(const CognitiveScenario& s);
Normalized<RisScenario> normalize(const RisScenario& s);
/// Budget becomes 1 and the objective is divided by P * sum_i alpha_i ||G_i||_F^2.
Normalized<WptScenario> normalize(const WptScenario& s);

/// Largest relative constraint violation, e.g. (target - SINR) / target.
double classic_violation(const ComplexMatrix& W, const ClassicScenario& s);
double cognitive_violation(const ComplexMatrix& W, const CognitiveScenario& s);
double ris_violation(const ComplexMatrix& W, const ComplexMatrix& theta, const RisScenario& s);
double wpt_violation(const ComplexMatrix& W, const ComplexMatrix& theta, const WptScenario& s);

/// Scales W up by the smallest factor c >= 1 that meets every SINR
/// target. Returns W unchanged when no common factor can (a user whose
/// signal does not dominate its weighted interference).
ComplexMatrix classic_repair(const ComplexMatrix& W, const ClassicScenario& s);
/// As classic_repair, but never beyond the factor allowed by the caps.
ComplexMatrix cognitive_repair(const ComplexMatrix& W, const CognitiveScenario& s);
/// Clips |theta_k| to 1, then scales W as classic_repair does.
std::pair<ComplexMatrix, ComplexMatrix> ris_repair(const ComplexMatrix& W,
                                                   const ComplexMatrix& theta,
                                                   const RisScenario& s);
/// theta_k -> theta_k / |theta_k| (0 -> 1) and W scaled to ||W||_F^2 = P.
std::pair<ComplexMatrix, ComplexMatrix> wpt_project(const ComplexMatrix& W,
                                                    const ComplexMatrix& theta,
                                                    const WptScenario& s);

}  // namespace firebeam
