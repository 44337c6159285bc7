// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "firebeam/errors.hpp"
#include "firebeam/numerics.hpp"

using namespace firebeam;

namespace {

ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

ComplexMatrix random_psd(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, rank, rng);
  return a * a.adjoint();
}

ComplexMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

double oracle_max_eig(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

TEST(HermQuadraticForm, IdentityCase) {
  ComplexMatrix w(2, 1);
  w << 1.0, 0.0;
  EXPECT_DOUBLE_EQ(herm_quadratic_form(w, ComplexMatrix::Identity(2, 2)), 1.0);
}

TEST(HermQuadraticForm, DiagonalExpansion) {
  ComplexMatrix w(2, 1);
  w << Complex(1, 0), Complex(0, 1);
  ComplexMatrix r = ComplexMatrix::Zero(2, 2);
  r(0, 0) = 2.0;
  r(1, 1) = 3.0;
  EXPECT_DOUBLE_EQ(herm_quadratic_form(w, r), 5.0);
}

TEST(HermQuadraticForm, MatchesTraceIdentity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix w = random_matrix(4, 1, rng);
    const ComplexMatrix r = random_psd(4, 3, rng);
    const double oracle = (r * w * w.adjoint()).trace().real();
    EXPECT_NEAR(herm_quadratic_form(w, r), oracle, 1e-12 * std::max(1.0, std::abs(oracle)));
  }
}

TEST(HermQuadraticForm, RankOneEqualsSquaredInnerProduct) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix w = random_matrix(5, 1, rng);
    const ComplexMatrix h = random_matrix(5, 1, rng);
    const double oracle = std::norm((h.adjoint() * w)(0, 0));
    EXPECT_NEAR(herm_quadratic_form(w, h * h.adjoint()), oracle, 1e-12 * std::max(1.0, oracle));
  }
}

TEST(HermQuadraticForm, NonNegativeOnPsd) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix w = random_matrix(4, 1, rng);
    const ComplexMatrix r = random_psd(4, 1, rng);
    EXPECT_GE(herm_quadratic_form(w, r), -1e-12 * r.norm() * w.squaredNorm());
  }
}

TEST(HermQuadraticForm, RejectsBadInput) {
  ComplexMatrix w(3, 1);
  w.setOnes();
  EXPECT_THROW(herm_quadratic_form(w, ComplexMatrix::Identity(2, 2)), ContractViolation);
  ComplexMatrix nonherm = ComplexMatrix::Identity(3, 3);
  nonherm(0, 1) = 1.0;
  EXPECT_THROW(herm_quadratic_form(w, nonherm), ContractViolation);
  w(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0);
  EXPECT_THROW(herm_quadratic_form(w, ComplexMatrix::Identity(3, 3)), NumericError);
}

TEST(FrobeniusDistance, Basics) {
  std::mt19937_64 rng(21);
  const ComplexMatrix a = random_matrix(3, 2, rng);
  EXPECT_EQ(frobenius_distance(a, a), 0.0);
  ComplexMatrix e = ComplexMatrix::Zero(2, 2);
  e(0, 0) = 1.0;
  EXPECT_DOUBLE_EQ(frobenius_distance(e, ComplexMatrix::Zero(2, 2)), 1.0);
  EXPECT_THROW(frobenius_distance(a, ComplexMatrix::Zero(2, 3)), ContractViolation);
}

TEST(FrobeniusDistance, MatchesElementwiseSum) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(3, 2, rng);
    const ComplexMatrix b = random_matrix(3, 2, rng);
    double sum = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 2; ++c) {
        const double dre = a(r, c).real() - b(r, c).real();
        const double dim = a(r, c).imag() - b(r, c).imag();
        sum += dre * dre + dim * dim;
      }
    EXPECT_NEAR(frobenius_distance(a, b), std::sqrt(sum), 1e-12);
    EXPECT_DOUBLE_EQ(frobenius_distance(a, b), frobenius_distance(b, a));
  }
}

TEST(FrobeniusDistance, TriangleInequality) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = random_matrix(2, 3, rng);
    const ComplexMatrix b = random_matrix(2, 3, rng);
    const ComplexMatrix c = random_matrix(2, 3, rng);
    EXPECT_LE(frobenius_distance(a, c),
              frobenius_distance(a, b) + frobenius_distance(b, c) + 1e-12);
  }
}

TEST(DominantEigvec, Diagonal) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  const EigenResult r = dominant_eigvec(m);
  EXPECT_NEAR(r.value, 3.0, 1e-10);
  EXPECT_NEAR(std::abs(r.vector(0, 0)), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(r.vector(1, 0)), 0.0, 1e-6);
  EXPECT_FALSE(r.degenerate);
}

TEST(DominantEigvec, IdentityIsDegenerate) {
  const EigenResult r = dominant_eigvec(ComplexMatrix::Identity(2, 2));
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(r.vector.norm(), 1.0, 1e-12);
  EXPECT_TRUE(r.degenerate);
}

TEST(DominantEigvec, HpdTimesPsdMatchesDenseOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix q = random_psd(4, 4, rng) + ComplexMatrix::Identity(4, 4);
    const ComplexMatrix s = random_psd(4, 2, rng);
    const ComplexMatrix m = q * s;
    Eigen::ComplexEigenSolver<ComplexMatrix> ces(m);
    double oracle = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i) oracle = std::max(oracle, ces.eigenvalues()(i).real());
    const EigenResult r = dominant_eigvec(m);
    EXPECT_NEAR(r.value, oracle, 1e-8 * oracle);
    EXPECT_NEAR(r.vector.norm(), 1.0, 1e-12);
    EXPECT_LE((m * r.vector - r.value * r.vector).norm(), 1e-10 * m.norm());
  }
}

TEST(DominantEigvec, AgreesWithMaxEigOnHermitianInput) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = random_psd(5, 5, rng);
    EXPECT_NEAR(dominant_eigvec(m).value, max_eig_hermitian(m).value, 1e-8 * m.norm());
  }
}

TEST(DominantEigvec, StartOrthogonalToDominantDirection) {
  // The all-ones start is orthogonal to the dominant eigenvector here.
  ComplexMatrix v(2, 1);
  v << 1.0, -1.0;
  const ComplexMatrix m = 5.0 * v * v.adjoint() + 0.5 * ComplexMatrix::Identity(2, 2);
  const EigenResult r = dominant_eigvec(m);
  EXPECT_NEAR(r.value, 10.5, 1e-9);
}

TEST(DominantEigvec, IterationLimitCarriesResidual) {
  std::mt19937_64 rng(33);
  const ComplexMatrix m = random_psd(6, 6, rng);
  try {
    dominant_eigvec(m, 1e-15, 1);
    FAIL() << "expected IterationLimit";
  } catch (const IterationLimit& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(MaxEigHermitian, Diagonal) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 1) = 5.0;
  const EigenResult r = max_eig_hermitian(m);
  EXPECT_NEAR(r.value, 5.0, 1e-10);
  EXPECT_NEAR(std::abs(r.vector(1, 0)), 1.0, 1e-10);
}

TEST(MaxEigHermitian, RankOne) {
  std::mt19937_64 rng(41);
  const ComplexMatrix v = random_matrix(4, 1, rng);
  const EigenResult r = max_eig_hermitian(v * v.adjoint());
  EXPECT_NEAR(r.value, v.squaredNorm(), 1e-10 * v.squaredNorm());
  EXPECT_NEAR(std::abs((v.adjoint() * r.vector)(0, 0)), v.norm(), 1e-8);
}

TEST(MaxEigHermitian, MatchesDenseOracleOnIndefiniteInput) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const ComplexMatrix m = random_hermitian(5, rng);
    const EigenResult r = max_eig_hermitian(m);
    EXPECT_NEAR(r.value, oracle_max_eig(m), 1e-8 * m.norm());
    EXPECT_NEAR(r.vector.norm(), 1.0, 1e-12);
    EXPECT_LE((m * r.vector - r.value * r.vector).norm(), 1e-10 * m.norm());
  }
}

TEST(MaxEigHermitian, NegativeDefiniteTargetsLargestAlgebraic) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = -1.0;
  m(1, 1) = -4.0;
  m(2, 2) = -9.0;
  EXPECT_NEAR(max_eig_hermitian(m).value, -1.0, 1e-9);
}

TEST(MaxEigHermitian, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 2.0;
  EXPECT_THROW(max_eig_hermitian(m), ContractViolation);
}

TEST(SolveHpd, Identity) {
  std::mt19937_64 rng(51);
  const ComplexMatrix b = random_matrix(3, 1, rng);
  EXPECT_LE((solve_hpd(ComplexMatrix::Identity(3, 3), b) - b).norm(), 1e-15);
}

TEST(SolveHpd, Diagonal) {
  ComplexMatrix q = ComplexMatrix::Zero(2, 2);
  q(0, 0) = 2.0;
  q(1, 1) = 4.0;
  ComplexMatrix b(2, 1);
  b << 2.0, 4.0;
  const ComplexMatrix x = solve_hpd(q, b);
  EXPECT_NEAR(std::abs(x(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(x(1, 0) - 1.0), 0.0, 1e-15);
}

TEST(SolveHpd, ResidualContract) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix q = random_psd(6, 6, rng) + 0.1 * ComplexMatrix::Identity(6, 6);
    const ComplexMatrix b = random_matrix(6, 1, rng);
    const ComplexMatrix x = solve_hpd(q, b);
    EXPECT_LE((q * x - b).norm(), 1e-10 * b.norm());
  }
}

TEST(SolveHpd, SingularRaises) {
  std::mt19937_64 rng(53);
  const ComplexMatrix q = random_psd(4, 2, rng);
  EXPECT_THROW(solve_hpd(q, random_matrix(4, 1, rng)), SingularMatrix);
  ComplexMatrix neg = -ComplexMatrix::Identity(2, 2);
  EXPECT_THROW(solve_hpd(neg, random_matrix(2, 1, rng)), SingularMatrix);
}

TEST(IsHermitian, RelativeTolerance) {
  std::mt19937_64 rng(61);
  ComplexMatrix m = random_hermitian(4, rng) * 1e-20;
  EXPECT_TRUE(is_hermitian(m));
  m(0, 1) += Complex(1e-25, 0);
  EXPECT_FALSE(is_hermitian(m));
}
