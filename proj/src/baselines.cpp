// SPDX-License-Identifier: Apache-2.0
#include "firebeam/baselines.hpp"

#include <cmath>
#include <string>

#include "firebeam/errors.hpp"

namespace firebeam {

DualityResult duality_solve(const ClassicScenario& s, int iterations, const RealVector& p0,
                            double stop_tol) {
  s.validate();
  if (iterations < 1) throw ContractViolation("duality_solve: iterations must be positive");
  const auto U = static_cast<Eigen::Index>(s.users());
  const Eigen::Index M = s.antennas();

  RealVector p = p0.size() == 0 ? RealVector::Ones(U) : p0;
  if (p.size() != U) throw ContractViolation("duality_solve: p0 must have one entry per user");
  for (Eigen::Index i = 0; i < U; ++i) {
    if (!(std::isfinite(p(i)) && p(i) > 0.0)) {
      throw ContractViolation("duality_solve: p0 entries must be positive");
    }
  }

  DualityState state;
  state.w_hat.assign(static_cast<std::size_t>(U), ComplexMatrix());
  const ComplexMatrix identity = ComplexMatrix::Identity(M, M);

  for (int n = 1; n <= iterations; ++n) {
    RealVector next(U);
    for (Eigen::Index i = 0; i < U; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      ComplexMatrix Q = s.sigma2[ui] * identity;
      for (Eigen::Index t = 0; t < U; ++t) {
        if (t != i) Q += p(t) * s.R[static_cast<std::size_t>(t)];
      }
      const ComplexMatrix X = p(i) * solve_hpd(Q, s.R[ui]);
      const ComplexMatrix w = dominant_eigvec(X).vector;
      const double signal = detail::quad_form(s.R[ui], w.col(0));
      const double noise = detail::quad_form(Q, w.col(0));
      if (!(signal > 0.0)) {
        throw DegenerateChannel("duality_solve: user " + std::to_string(i) +
                                " has no gain along its receive direction");
      }
      next(i) = s.gamma[ui] * noise / signal;
      state.w_hat[ui] = w;
    }
    const double residual = (next - p).norm() / p.norm();
    p = next;
    state.iteration = n;
    state.residuals.push_back(residual);
    if (residual < stop_tol) break;
  }

  DualityResult out;
  out.W.resize(M, U);
  for (Eigen::Index i = 0; i < U; ++i) {
    out.W.col(i) = std::sqrt(p(i)) * state.w_hat[static_cast<std::size_t>(i)].col(0);
  }
  state.p = p;
  out.state = std::move(state);
  return out;
}

ComplexMatrix downlink_power_recovery(const ClassicScenario& s,
                                      const std::vector<ComplexMatrix>& w_hat) {
  s.validate();
  const auto U = static_cast<Eigen::Index>(s.users());
  const Eigen::Index M = s.antennas();
  if (w_hat.size() != s.users()) {
    throw ContractViolation("downlink_power_recovery: one direction per user required");
  }
  for (const auto& w : w_hat) {
    if (w.rows() != M || w.cols() != 1) {
      throw ContractViolation("downlink_power_recovery: directions must be columns of length " +
                              std::to_string(M));
    }
    require_finite(w, "downlink_power_recovery");
  }

  // Row i: q_i g_ii / gamma_i - sum_{j != i} q_j g_ij = sigma_i^2.
  Eigen::MatrixXd A(U, U);
  RealVector rhs(U);
  for (Eigen::Index i = 0; i < U; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j < U; ++j) {
      const double g = detail::quad_form(s.R[ui], w_hat[static_cast<std::size_t>(j)].col(0));
      A(i, j) = i == j ? g / s.gamma[ui] : -g;
    }
    rhs(i) = s.sigma2[ui];
  }
  const RealVector q = A.fullPivLu().solve(rhs);
  if (!q.allFinite() || (A * q - rhs).norm() > 1e-9 * rhs.norm()) {
    throw Infeasible("downlink_power_recovery: power system is singular");
  }
  ComplexMatrix W(M, U);
  for (Eigen::Index i = 0; i < U; ++i) {
    if (!(q(i) > 0.0)) {
      throw Infeasible("downlink_power_recovery: user " + std::to_string(i) +
                       " would need non-positive power");
    }
    W.col(i) = std::sqrt(q(i)) * w_hat[static_cast<std::size_t>(i)].col(0);
  }
  return W;
}

ScaState sca_wpt_solve(const WptScenario& s, const ComplexMatrix& theta0, int iterations) {
  s.validate();
  if (iterations < 1) throw ContractViolation("sca_wpt_solve: iterations must be positive");
  const Eigen::Index N = s.elements();
  const Eigen::Index M = s.antennas();
  if (theta0.rows() != N || theta0.cols() != 1) {
    throw ContractViolation("sca_wpt_solve: theta0 must be a column of length " +
                            std::to_string(N));
  }
  for (Eigen::Index k = 0; k < N; ++k) {
    if (std::abs(std::abs(theta0(k, 0)) - 1.0) > 1e-9) {
      throw ContractViolation("sca_wpt_solve: theta0 must have unit-modulus entries");
    }
  }

  ScaState state;
  state.theta = theta0;
  const double amplitude = std::sqrt(s.power);
  for (int l = 1; l <= iterations; ++l) {
    ComplexMatrix X = ComplexMatrix::Zero(M, M);
    for (std::size_t i = 0; i < s.receivers(); ++i) {
      const Eigen::VectorXcd v = s.cascade[i].adjoint() * state.theta.col(0);
      X += s.alpha[i] * (v * v.adjoint());
    }
    X = 0.5 * (X + X.adjoint()).eval();
    state.w = amplitude * max_eig_hermitian(X).vector;

    Eigen::VectorXcd mu = Eigen::VectorXcd::Zero(N);
    for (std::size_t i = 0; i < s.receivers(); ++i) {
      const Eigen::VectorXcd cw = s.cascade[i] * state.w.col(0);
      mu += s.alpha[i] * cw * cw.dot(state.theta.col(0));
    }
    for (Eigen::Index k = 0; k < N; ++k) {
      const double mag = std::abs(mu(k));
      state.theta(k, 0) = mag > 0.0 ? mu(k) / mag : Complex(1.0, 0.0);
    }
    state.objective_history.push_back(wpt_objective(state.w, state.theta, s));
  }
  return state;
}

}  // namespace firebeam
