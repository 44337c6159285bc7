// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "firebeam/baselines.hpp"
#include "firebeam/errors.hpp"

using namespace firebeam;

namespace {

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = Complex(n(rng), n(rng));
  }
  return m;
}

ClassicScenario random_classic(std::size_t users, Eigen::Index antennas, double gamma,
                               std::mt19937_64& rng) {
  ClassicScenario s;
  for (std::size_t i = 0; i < users; ++i) {
    const ComplexMatrix h = random_matrix(antennas, 1, rng);
    s.R.push_back(h * h.adjoint());
    s.sigma2.push_back(1.0);
    s.gamma.push_back(gamma);
  }
  return s;
}

// One application of the dual-uplink map, via a general eigensolver.
RealVector gamma_t(const ClassicScenario& s, const RealVector& p) {
  const auto U = static_cast<Eigen::Index>(s.users());
  const Eigen::Index M = s.antennas();
  RealVector out(U);
  for (Eigen::Index i = 0; i < U; ++i) {
    ComplexMatrix Q = s.sigma2[static_cast<std::size_t>(i)] * ComplexMatrix::Identity(M, M);
    for (Eigen::Index t = 0; t < U; ++t) {
      if (t != i) Q += p(t) * s.R[static_cast<std::size_t>(t)];
    }
    const ComplexMatrix X = p(i) * Q.inverse() * s.R[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<ComplexMatrix> es(X);
    Eigen::Index best = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&best);
    const ComplexMatrix w = es.eigenvectors().col(best).normalized();
    const double num = (w.adjoint() * Q * w)(0, 0).real();
    const double den = (w.adjoint() * s.R[static_cast<std::size_t>(i)] * w)(0, 0).real();
    out(i) = s.gamma[static_cast<std::size_t>(i)] * num / den;
  }
  return out;
}

ComplexMatrix random_phases(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  ComplexMatrix t(n, 1);
  for (Eigen::Index k = 0; k < n; ++k) t(k, 0) = std::polar(1.0, u(rng));
  return t;
}

WptScenario random_wpt(Eigen::Index mt, Eigen::Index nt, std::size_t users, std::mt19937_64& rng) {
  WptScenario s;
  const ComplexMatrix H = random_matrix(mt, nt, rng);
  for (std::size_t i = 0; i < users; ++i) {
    const ComplexMatrix g = random_matrix(nt, 1, rng);
    s.cascade.push_back(g.conjugate().asDiagonal() * H.adjoint());
    s.alpha.push_back(1.0);
  }
  s.power = 1.0;
  return s;
}

}  // namespace

TEST(Duality, SingleUserClosedForm) {
  std::mt19937_64 rng(1);
  const ClassicScenario s = random_classic(1, 4, 10.0, rng);
  const ComplexMatrix h = s.R[0].col(0) / std::sqrt(s.R[0](0, 0).real());
  const DualityResult r = duality_solve(s, 50);
  const double p = 10.0 * 1.0 / s.R[0].trace().real();
  EXPECT_NEAR(r.state.p(0), p, 1e-10 * p);
  EXPECT_NEAR(r.W.squaredNorm(), p, 1e-10 * p);
  // w is a phase rotation of sqrt(p) h / ||h||.
  EXPECT_NEAR(std::abs((h.adjoint() * r.W)(0, 0)), std::sqrt(p) * h.norm(), 1e-9);
}

TEST(Duality, OrthogonalUsersDecouple) {
  ComplexMatrix h1 = ComplexMatrix::Zero(3, 1), h2 = ComplexMatrix::Zero(3, 1);
  h1(0, 0) = 2.0;
  h2(1, 0) = Complex(0.0, 0.5);
  ClassicScenario s{{h1 * h1.adjoint(), h2 * h2.adjoint()}, {1.0, 2.0}, {3.0, 5.0}};
  const DualityResult r = duality_solve(s, 50);
  EXPECT_NEAR(r.state.p(0), 3.0 * 1.0 / 4.0, 1e-10);
  EXPECT_NEAR(r.state.p(1), 5.0 * 2.0 / 0.25, 1e-9);
  const ComplexMatrix rec = downlink_power_recovery(s, r.state.w_hat);
  EXPECT_NEAR((rec - r.W).cwiseAbs().maxCoeff(), 0.0, 1e-9);
}

TEST(Duality, RandomInstanceReachesFixedPoint) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const ClassicScenario s = random_classic(2, 4, 3.0, rng);
    const DualityResult r = duality_solve(s, 50, RealVector(), 0.0);
    const RealVector next = gamma_t(s, r.state.p);
    EXPECT_LE((r.state.p - next).norm() / r.state.p.norm(), 1e-8);
    for (const auto& w : r.state.w_hat) EXPECT_NEAR(w.norm(), 1.0, 1e-12);
    EXPECT_TRUE((r.state.p.array() > 0.0).all());
  }
}

// Single steps may overshoot on strongly coupled users (seed 3, trial 3
// goes 0.0355 -> 0.044), so contraction is checked over two steps.
TEST(Duality, ResidualContractsAfterBurnIn) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ClassicScenario s = random_classic(3, 4, 2.0, rng);
    const DualityResult r = duality_solve(s, 30, RealVector(), 0.0);
    const auto& res = r.state.residuals;
    for (std::size_t k = 5; k < res.size(); ++k) EXPECT_LE(res[k], res[k - 2] + 1e-6);
    EXPECT_LT(res.back(), 1e-6);
  }
}

TEST(Duality, EarlyExitStopsBeforeBudget) {
  std::mt19937_64 rng(4);
  const ClassicScenario s = random_classic(2, 4, 2.0, rng);
  const DualityResult r = duality_solve(s, 500);
  EXPECT_LT(r.state.iteration, 500);
  EXPECT_LT(r.state.residuals.back(), 1e-10);
}

TEST(Duality, RejectsBadInputs) {
  std::mt19937_64 rng(5);
  const ClassicScenario s = random_classic(2, 3, 2.0, rng);
  EXPECT_THROW(duality_solve(s, 0), ContractViolation);
  EXPECT_THROW(duality_solve(s, 5, RealVector::Constant(2, -1.0)), ContractViolation);
  EXPECT_THROW(duality_solve(s, 5, RealVector::Ones(3)), ContractViolation);
}

TEST(Duality, ZeroChannelIsDegenerate) {
  ClassicScenario s{{ComplexMatrix::Zero(2, 2)}, {1.0}, {1.0}};
  EXPECT_THROW(duality_solve(s, 5), DegenerateChannel);
}

TEST(Recovery, SingleUserMatchesDuality) {
  std::mt19937_64 rng(6);
  const ClassicScenario s = random_classic(1, 3, 4.0, rng);
  const DualityResult r = duality_solve(s, 20);
  const ComplexMatrix rec = downlink_power_recovery(s, r.state.w_hat);
  EXPECT_NEAR((rec - r.W).cwiseAbs().maxCoeff(), 0.0, 1e-9);
}

TEST(Recovery, AllSinrsTight) {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const ClassicScenario s = random_classic(2, 4, 10.0, rng);
    const DualityResult r = duality_solve(s, 30);
    const ComplexMatrix W = downlink_power_recovery(s, r.state.w_hat);
    for (std::size_t i = 0; i < 2; ++i) {
      EXPECT_NEAR(sinr_classic(W, s, i) / s.gamma[i], 1.0, 1e-8);
    }
    ++checked;
  }
  EXPECT_EQ(checked, 30);
}

TEST(Recovery, ImpossibleTargetsAreInfeasible) {
  // Identical channels, one shared direction: no power split meets 10 + 10.
  ComplexMatrix h(2, 1);
  h << 1.0, 0.0;
  ClassicScenario s{{h * h.adjoint(), h * h.adjoint()}, {1.0, 1.0}, {10.0, 10.0}};
  EXPECT_THROW(downlink_power_recovery(s, {h, h}), Infeasible);
}

TEST(Sca, ZeroMuKeepsUnitPhase) {
  std::mt19937_64 rng(8);
  WptScenario s = random_wpt(2, 3, 1, rng);
  s.cascade[0].row(1).setZero();
  ComplexMatrix theta = ComplexMatrix::Ones(3, 1);
  theta(1, 0) = -1.0;
  const ScaState st = sca_wpt_solve(s, theta, 1);
  EXPECT_EQ(st.theta(1, 0), Complex(1.0, 0.0));
}

TEST(Sca, ScalarCaseConvergesInOneStep) {
  const Complex g(0.6, -0.2), h(1.1, 0.9);
  WptScenario s;
  ComplexMatrix G(1, 1);
  G(0, 0) = std::conj(g) * std::conj(h);
  s.cascade = {G};
  s.alpha = {0.8};
  s.power = 3.0;
  const ScaState st = sca_wpt_solve(s, ComplexMatrix::Ones(1, 1), 1);
  EXPECT_NEAR(st.w.squaredNorm(), 3.0, 1e-12);
  EXPECT_NEAR(st.objective_history.back(), 3.0 * 0.8 * std::norm(g) * std::norm(h), 1e-12);
}

TEST(Sca, MonotoneAndUnitModulus) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const WptScenario s = random_wpt(3, 8, 2, rng);
    const ComplexMatrix theta0 = random_phases(8, rng);
    std::vector<double> history;
    for (int m = 1; m <= 10; ++m) {
      const ScaState st = sca_wpt_solve(s, theta0, m);
      for (Eigen::Index k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(st.theta(k, 0)), 1.0, 1e-12);
      EXPECT_LE(st.w.squaredNorm(), s.power * (1.0 + 1e-10));
      history = st.objective_history;
    }
    ASSERT_EQ(history.size(), 10u);
    for (std::size_t l = 1; l < history.size(); ++l) {
      EXPECT_GE(history[l], history[l - 1] * (1.0 - 1e-9));
    }
  }
}

TEST(Sca, RejectsNonUnitStart) {
  std::mt19937_64 rng(10);
  const WptScenario s = random_wpt(2, 3, 1, rng);
  EXPECT_THROW(sca_wpt_solve(s, 0.5 * ComplexMatrix::Ones(3, 1), 3), ContractViolation);
  EXPECT_THROW(sca_wpt_solve(s, ComplexMatrix::Ones(3, 1), 0), ContractViolation);
}
