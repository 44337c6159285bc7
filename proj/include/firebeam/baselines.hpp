// SPDX-License-Identifier: Apache-2.0
//
// Deterministic reference solvers: the uplink-downlink duality iteration for
// the classic problem and the closed-form alternating ascent (SCA) for
// RIS-aided power transfer.
#pragma once

#include <vector>

#include "firebeam/numerics.hpp"
#include "firebeam/problems.hpp"

namespace firebeam {

struct DualityState {
  RealVector p;                      ///< dual uplink powers
  std::vector<ComplexMatrix> w_hat;  ///< unit-norm receive directions
  int iteration = 0;
  /// ||p_new - p_old|| / ||p_old|| per iteration.
  std::vector<double> residuals;
};

struct DualityResult {
  ComplexMatrix W;  ///< columns sqrt(p_i) w_hat_i
  DualityState state;
};

/// Fixed-point iteration p <- Gamma t(p) with, for every user,
/// Q_i = sum_{t != i} p_t R_t + sigma_i^2 I, w_hat_i the dominant
/// eigenvector of p_i Q_i^{-1} R_i and t_i = w_hat^H Q_i w_hat / w_hat^H R_i w_hat.
///
/// Runs `iterations` steps, or stops early once the residual drops below
/// `stop_tol` (pass 0 to always run every step). An empty p0 means all ones.
/// Throws DegenerateChannel when w_hat^H R_i w_hat vanishes.
DualityResult duality_solve(const ClassicScenario& s, int iterations,
                            const RealVector& p0 = RealVector(), double stop_tol = 1e-10);

/// Downlink powers that make every SINR constraint tight for the given
/// directions. Throws Infeasible when the linear system has a
/// non-positive solution.
ComplexMatrix downlink_power_recovery(const ClassicScenario& s,
                                      const std::vector<ComplexMatrix>& w_hat);

struct ScaState {
  ComplexMatrix w;      ///< single common energy beam, ||w||^2 = P
  ComplexMatrix theta;  ///< unit-modulus phases
  /// wpt_objective(w^(l), theta^(l)) after each iteration.
  std::vector<double> objective_history;
};

/// `iterations` rounds of: w = sqrt(P) * principal eigenvector of
/// sum_i alpha_i G_i theta theta^H G_i^H, then theta_k = mu_k / |mu_k|
/// (1 when mu_k = 0) with mu = sum_i alpha_i G_i^H w w^H G_i theta.
ScaState sca_wpt_solve(const WptScenario& s, const ComplexMatrix& theta0, int iterations);

}  // namespace firebeam
