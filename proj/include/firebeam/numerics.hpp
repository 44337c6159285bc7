// SPDX-License-Identifier: Apache-2.0
//
// Dense complex-matrix kernels shared by the solver, the problem
// evaluators and the baselines. Everything here is pure and reentrant.
#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace firebeam {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Relative Frobenius tolerance used by every Hermitian precondition.
inline constexpr double kHermitianTolerance = 1e-10;

struct EigenResult {
  ComplexMatrix vector;  ///< unit-norm column
  double value = 0.0;
  /// Set when the leading eigenvalue is (numerically) repeated; `vector`
  /// is then one valid member of the eigenspace.
  bool degenerate = false;
  int iterations = 0;
  double residual = 0.0;  ///< ||M v - value v||
};

/// Throws NumericError when any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, std::string_view what);

/// True when ||M - M^H||_F <= tol * ||M||_F.
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTolerance);

/// Re(w^H R w) for a column w and Hermitian R.
double herm_quadratic_form(const ComplexMatrix& w, const ComplexMatrix& r);

/// sqrt(sum |A - B|^2) over all entries.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Power iteration for a square matrix with a real dominant eigenvalue.
///
/// The iteration starts from the normalized all-ones vector. A second,
/// seeded start is run to detect a repeated leading eigenvalue and to
/// recover when the all-ones vector misses the dominant eigenspace.
/// Convergence is declared once ||M v - lambda v|| <= tol * ||M||_F.
EigenResult dominant_eigvec(const ComplexMatrix& m, double tol = 1e-12,
                            int max_iter = 20000);

/// Largest (algebraic) eigenvalue and its unit eigenvector of a Hermitian
/// matrix. Uses a Gershgorin shift so that power iteration targets the
/// top of the spectrum rather than the largest magnitude.
EigenResult max_eig_hermitian(const ComplexMatrix& m, double tol = 1e-12,
                              int max_iter = 20000);

/// Solves Q x = b for Hermitian positive definite Q (Cholesky).
ComplexMatrix solve_hpd(const ComplexMatrix& q, const ComplexMatrix& b);

namespace detail {

/// Unchecked Re(w^H R w); callers validate shapes once up front.
inline double quad_form(const ComplexMatrix& r, const Eigen::Ref<const Eigen::VectorXcd>& w) {
  return (w.adjoint() * r * w)(0, 0).real();
}

}  // namespace detail

}  // namespace firebeam
