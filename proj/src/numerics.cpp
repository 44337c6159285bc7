// SPDX-License-Identifier: Apache-2.0
#include "firebeam/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "firebeam/errors.hpp"

namespace firebeam {
namespace {

constexpr std::uint64_t kRestartSeed = 0x9e3779b97f4a7c15ULL;

void require_square(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ContractViolation(std::string(what) + ": expected a non-empty square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// Rotates v so that its largest-magnitude entry is real and positive.
void fix_phase(Eigen::VectorXcd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  const double mag = std::abs(v(best));
  if (mag > 0.0) v *= std::conj(v(best)) / mag;
}

struct PowerRun {
  Eigen::VectorXcd v;
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

PowerRun power_iterate(const ComplexMatrix& m, Eigen::VectorXcd v, double shift, double tol,
                       int max_iter) {
  const double scale = m.norm();
  const double target = tol * scale;
  PowerRun run;
  v.normalize();

  auto assess = [&](const Eigen::VectorXcd& x) {
    const Eigen::VectorXcd mx = m * x;
    const Complex lambda = x.dot(mx);
    run.residual = (mx - lambda * x).norm();
    run.value = lambda.real();
    return run.residual <= target;
  };

  run.v = v;
  if (assess(v)) {
    run.converged = true;
    return run;
  }
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXcd y = m * v + shift * v;
    const double ny = y.norm();
    // Start vector annihilated: the caller restarts from a seeded vector.
    if (!(ny > 1e-300)) break;
    v = y / ny;
    run.v = v;
    run.iterations = it;
    if (assess(v)) {
      run.converged = true;
      break;
    }
  }
  return run;
}

Eigen::VectorXcd seeded_start(Eigen::Index n) {
  std::mt19937_64 rng(kRestartSeed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

EigenResult leading_pair(const ComplexMatrix& m, double shift, double tol, int max_iter,
                         std::string_view what) {
  const Eigen::Index n = m.rows();
  if (m.norm() == 0.0) {
    EigenResult zero;
    zero.vector = Eigen::VectorXcd::Ones(n) / std::sqrt(static_cast<double>(n));
    zero.degenerate = n > 1;
    return zero;
  }

  PowerRun primary = power_iterate(m, Eigen::VectorXcd::Ones(n), shift, tol, max_iter);
  PowerRun probe = power_iterate(m, seeded_start(n), shift, tol, max_iter);

  if (!primary.converged && !probe.converged) {
    throw IterationLimit(std::string(what) + ": power iteration did not converge in " +
                             std::to_string(max_iter) + " iterations",
                         std::min(primary.residual, probe.residual));
  }

  const PowerRun* chosen = &primary;
  bool degenerate = false;
  if (primary.converged && probe.converged) {
    const double a = std::abs(primary.value + shift);
    const double b = std::abs(probe.value + shift);
    const double spread = std::abs(a - b);
    const double tie_tol = 1e-8 * std::max({a, b, 1e-300});
    if (spread <= tie_tol) {
      const double overlap = std::abs(primary.v.dot(probe.v));
      degenerate = overlap < 1.0 - 1e-6;
    } else if (b > a) {
      chosen = &probe;
    }
  } else if (!primary.converged) {
    chosen = &probe;
  }

  EigenResult out;
  Eigen::VectorXcd v = chosen->v;
  fix_phase(v);
  out.vector = v;
  out.value = chosen->value;
  out.degenerate = degenerate;
  out.iterations = primary.iterations + probe.iterations;
  out.residual = chosen->residual;
  return out;
}

}  // namespace

void require_finite(const ComplexMatrix& m, std::string_view what) {
  if (!m.allFinite()) throw NumericError(std::string(what) + ": non-finite entry");
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol * m.norm();
}

double herm_quadratic_form(const ComplexMatrix& w, const ComplexMatrix& r) {
  require_square(r, "herm_quadratic_form");
  if (w.cols() != 1 || w.rows() != r.rows()) {
    throw ContractViolation("herm_quadratic_form: w must be a column of length " +
                            std::to_string(r.rows()));
  }
  require_finite(w, "herm_quadratic_form(w)");
  require_finite(r, "herm_quadratic_form(R)");
  if (!is_hermitian(r)) throw ContractViolation("herm_quadratic_form: R is not Hermitian");
  return detail::quad_form(r, w.col(0));
}

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractViolation("frobenius_distance: shape mismatch");
  }
  return (a - b).norm();
}

EigenResult dominant_eigvec(const ComplexMatrix& m, double tol, int max_iter) {
  require_square(m, "dominant_eigvec");
  require_finite(m, "dominant_eigvec");
  return leading_pair(m, 0.0, tol, max_iter, "dominant_eigvec");
}

EigenResult max_eig_hermitian(const ComplexMatrix& m, double tol, int max_iter) {
  require_square(m, "max_eig_hermitian");
  require_finite(m, "max_eig_hermitian");
  if (!is_hermitian(m)) throw ContractViolation("max_eig_hermitian: matrix is not Hermitian");

  // Gershgorin lower bound on the spectrum; shifting by it makes the
  // top eigenvalue the dominant one.
  double lower = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double radius = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j != i) radius += std::abs(m(i, j));
    }
    lower = std::min(lower, m(i, i).real() - radius);
  }
  const double shift = std::max(0.0, -lower);
  return leading_pair(m, shift, tol, max_iter, "max_eig_hermitian");
}

ComplexMatrix solve_hpd(const ComplexMatrix& q, const ComplexMatrix& b) {
  require_square(q, "solve_hpd");
  if (b.rows() != q.rows() || b.cols() == 0) {
    throw ContractViolation("solve_hpd: right-hand side has " + std::to_string(b.rows()) +
                            " rows, expected " + std::to_string(q.rows()));
  }
  require_finite(q, "solve_hpd(Q)");
  require_finite(b, "solve_hpd(b)");
  if (!is_hermitian(q)) throw ContractViolation("solve_hpd: Q is not Hermitian");

  Eigen::LLT<ComplexMatrix> llt(q);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrix("solve_hpd: Q is not positive definite");
  }
  ComplexMatrix x = llt.solve(b);
  // Backward error, so well-posed but ill-conditioned systems pass.
  const double scale = q.norm() * x.norm() + b.norm();
  if (!x.allFinite() || (q * x - b).norm() > 1e-10 * std::max(scale, 1e-300)) {
    throw SingularMatrix("solve_hpd: Q is numerically singular");
  }
  return x;
}

}  // namespace firebeam
