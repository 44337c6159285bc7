// SPDX-License-Identifier: Apache-2.0
#include "firebeam/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "firebeam/errors.hpp"

namespace firebeam {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ContractViolation(message);
}

void require_positive(const std::vector<double>& v, std::size_t n, const char* what) {
  require(v.size() == n, std::string(what) + ": expected " + std::to_string(n) + " values");
  for (double x : v) {
    require(std::isfinite(x) && x > 0.0, std::string(what) + ": values must be positive");
  }
}

void require_psd(const ComplexMatrix& r, Eigen::Index dim, const char* what) {
  require(r.rows() == dim && r.cols() == dim,
          std::string(what) + ": expected " + std::to_string(dim) + "x" + std::to_string(dim));
  require_finite(r, what);
  require(is_hermitian(r), std::string(what) + ": not Hermitian");
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -1e-10 * std::max(r.norm(), 1e-300),
          std::string(what) + ": not positive semidefinite");
}

void require_beamformers(const ComplexMatrix& W, Eigen::Index antennas, std::size_t users) {
  require(W.rows() == antennas && W.cols() == static_cast<Eigen::Index>(users),
          "beamformers: expected " + std::to_string(antennas) + "x" + std::to_string(users) +
              ", got " + std::to_string(W.rows()) + "x" + std::to_string(W.cols()));
}

void require_phases(const ComplexMatrix& theta, Eigen::Index elements) {
  require(theta.rows() == elements && theta.cols() == 1,
          "theta: expected a column of length " + std::to_string(elements));
}

// gains(i, j) = w_j^H R_i w_j.
Eigen::MatrixXd covariance_gains(const ComplexMatrix& W, const std::vector<ComplexMatrix>& R) {
  Eigen::MatrixXd g(static_cast<Eigen::Index>(R.size()), W.cols());
  for (std::size_t i = 0; i < R.size(); ++i) {
    const ComplexMatrix rw = R[i] * W;
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
      g(static_cast<Eigen::Index>(i), j) = W.col(j).dot(rw.col(j)).real();
    }
  }
  return g;
}

// gains(i, j) = |theta^H C_i w_j|^2.
Eigen::MatrixXd cascade_gains(const ComplexMatrix& W, const ComplexMatrix& theta,
                              const std::vector<ComplexMatrix>& C) {
  Eigen::MatrixXd g(static_cast<Eigen::Index>(C.size()), W.cols());
  for (std::size_t i = 0; i < C.size(); ++i) {
    const Eigen::RowVectorXcd row = theta.col(0).adjoint() * C[i] * W;
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
      g(static_cast<Eigen::Index>(i), j) = std::norm(row(j));
    }
  }
  return g;
}

double sinr_from_gains(const Eigen::MatrixXd& g, double sigma2, std::size_t i) {
  const auto ii = static_cast<Eigen::Index>(i);
  const double interference = g.row(ii).sum() - g(ii, ii);
  return g(ii, ii) / (interference + sigma2);
}

double sinr_violation(const Eigen::MatrixXd& g, const std::vector<double>& sigma2,
                      const std::vector<double>& target) {
  double worst = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double sinr = sinr_from_gains(g, sigma2[i], i);
    worst = std::max(worst, (target[i] - sinr) / target[i]);
  }
  return worst;
}

// Smallest c^2 with gains scaled by c^2 meeting every target; infinity
// when some user cannot be helped by a common scaling.
double required_power_factor(const Eigen::MatrixXd& g, const std::vector<double>& sigma2,
                             const std::vector<double>& target) {
  double need = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double interference = g.row(ii).sum() - g(ii, ii);
    const double margin = g(ii, ii) - target[i] * interference;
    if (!(margin > 0.0)) return std::numeric_limits<double>::infinity();
    need = std::max(need, target[i] * sigma2[i] / margin);
  }
  return need;
}

template <class T>
std::shared_ptr<const T> share(const T& value) {
  return std::make_shared<const T>(value);
}

VariableShape beamformer_shape(Eigen::Index antennas, std::size_t users) {
  return {kBeamformers, antennas, static_cast<Eigen::Index>(users), VariableKind::General};
}

double sum_power(const DecisionSet& x) { return x[kBeamformers].squaredNorm(); }

}  // namespace

void ClassicScenario::validate() const {
  require(!R.empty(), "ClassicScenario: at least one user required");
  const Eigen::Index m = R.front().rows();
  require(m >= 1, "ClassicScenario: empty covariance");
  for (const auto& r : R) require_psd(r, m, "ClassicScenario.R");
  require_positive(sigma2, R.size(), "ClassicScenario.sigma2");
  require_positive(gamma, R.size(), "ClassicScenario.gamma");
}

void CognitiveScenario::validate() const {
  require(!R_s.empty(), "CognitiveScenario: at least one secondary user required");
  const Eigen::Index m = R_s.front().rows();
  require(m >= 1, "CognitiveScenario: empty covariance");
  for (const auto& r : R_s) require_psd(r, m, "CognitiveScenario.R_s");
  for (const auto& r : R_p) require_psd(r, m, "CognitiveScenario.R_p");
  require_positive(sigma2, R_s.size(), "CognitiveScenario.sigma2");
  require_positive(eta, R_s.size(), "CognitiveScenario.eta");
  require_positive(I_to, R_p.size(), "CognitiveScenario.I_to");
}

void RisScenario::validate() const {
  require(!cascade.empty(), "RisScenario: at least one user required");
  const Eigen::Index n = cascade.front().rows();
  const Eigen::Index m = cascade.front().cols();
  require(n >= 1 && m >= 1, "RisScenario: empty cascade");
  for (const auto& c : cascade) {
    require(c.rows() == n && c.cols() == m, "RisScenario: cascade shapes differ");
    require_finite(c, "RisScenario.cascade");
  }
  require_positive(sigma2, cascade.size(), "RisScenario.sigma2");
  require_positive(eta, cascade.size(), "RisScenario.eta");
}

void WptScenario::validate() const {
  require(!cascade.empty(), "WptScenario: at least one receiver required");
  const Eigen::Index n = cascade.front().rows();
  const Eigen::Index m = cascade.front().cols();
  require(n >= 1 && m >= 1, "WptScenario: empty cascade");
  for (const auto& c : cascade) {
    require(c.rows() == n && c.cols() == m, "WptScenario: cascade shapes differ");
    require_finite(c, "WptScenario.cascade");
  }
  require(alpha.size() == cascade.size(), "WptScenario.alpha: one weight per receiver");
  for (double a : alpha) require(std::isfinite(a) && a >= 0.0, "WptScenario.alpha: negative");
  require(std::isfinite(power) && power > 0.0, "WptScenario.power must be positive");
}

double sinr_classic(const ComplexMatrix& W, const ClassicScenario& s, std::size_t i) {
  require_beamformers(W, s.antennas(), s.users());
  require(i < s.users(), "sinr_classic: user index out of range");
  return sinr_from_gains(covariance_gains(W, s.R), s.sigma2[i], i);
}

double sinr_cognitive(const ComplexMatrix& W, const CognitiveScenario& s, std::size_t t) {
  require_beamformers(W, s.antennas(), s.users());
  require(t < s.users(), "sinr_cognitive: user index out of range");
  return sinr_from_gains(covariance_gains(W, s.R_s), s.sigma2[t], t);
}

double interference_cognitive(const ComplexMatrix& W, const CognitiveScenario& s,
                              std::size_t k) {
  require_beamformers(W, s.antennas(), s.users());
  require(k < s.primaries(), "interference_cognitive: primary index out of range");
  return (W.adjoint() * s.R_p[k] * W).trace().real();
}

double sinr_ris(const ComplexMatrix& W, const ComplexMatrix& theta, const RisScenario& s,
                std::size_t i) {
  require_beamformers(W, s.antennas(), s.users());
  require_phases(theta, s.elements());
  require(i < s.users(), "sinr_ris: user index out of range");
  return sinr_from_gains(cascade_gains(W, theta, s.cascade), s.sigma2[i], i);
}

double wpt_objective(const ComplexMatrix& W, const ComplexMatrix& theta, const WptScenario& s) {
  require(W.rows() == s.antennas() && W.cols() >= 1,
          "wpt_objective: beamformers must have " + std::to_string(s.antennas()) + " rows");
  require_phases(theta, s.elements());
  const Eigen::MatrixXd g = cascade_gains(W, theta, s.cascade);
  double total = 0.0;
  for (std::size_t i = 0; i < s.receivers(); ++i) {
    total += s.alpha[i] * g.row(static_cast<Eigen::Index>(i)).sum();
  }
  return total;
}

ProblemSpec classic_problem(const ClassicScenario& s) {
  s.validate();
  auto sc = share(s);
  ProblemSpec p;
  p.variables = {beamformer_shape(s.antennas(), s.users())};
  p.objective = sum_power;
  p.inequalities = [sc](const DecisionSet& x) {
    const Eigen::MatrixXd g = covariance_gains(x[kBeamformers], sc->R);
    std::vector<double> d(sc->users());
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double interference = g.row(ii).sum() - g(ii, ii);
      d[i] = -g(ii, ii) + sc->gamma[i] * interference + sc->gamma[i] * sc->sigma2[i];
    }
    return d;
  };
  p.sense = Sense::Minimize;
  p.inequality_count = s.users();
  return p;
}

ProblemSpec cognitive_problem(const CognitiveScenario& s) {
  s.validate();
  auto sc = share(s);
  ProblemSpec p;
  p.variables = {beamformer_shape(s.antennas(), s.users())};
  p.objective = sum_power;
  p.inequalities = [sc](const DecisionSet& x) {
    const ComplexMatrix& W = x[kBeamformers];
    const Eigen::MatrixXd g = covariance_gains(W, sc->R_s);
    std::vector<double> phi;
    phi.reserve(sc->users() + sc->primaries());
    for (std::size_t t = 0; t < sc->users(); ++t) {
      const auto tt = static_cast<Eigen::Index>(t);
      const double interference = g.row(tt).sum() - g(tt, tt);
      phi.push_back(-g(tt, tt) + sc->eta[t] * interference + sc->eta[t] * sc->sigma2[t]);
    }
    const Eigen::MatrixXd gp = covariance_gains(W, sc->R_p);
    for (std::size_t k = 0; k < sc->primaries(); ++k) {
      phi.push_back(gp.row(static_cast<Eigen::Index>(k)).sum() - sc->I_to[k]);
    }
    return phi;
  };
  p.sense = Sense::Minimize;
  p.inequality_count = s.users() + s.primaries();
  return p;
}

ProblemSpec ris_problem(const RisScenario& s) {
  s.validate();
  auto sc = share(s);
  ProblemSpec p;
  p.variables = {beamformer_shape(s.antennas(), s.users()),
                 {kPhases, s.elements(), 1, VariableKind::UnitModulus}};
  p.objective = sum_power;
  p.inequalities = [sc](const DecisionSet& x) {
    const ComplexMatrix& theta = x[kPhases];
    const Eigen::MatrixXd g = cascade_gains(x[kBeamformers], theta, sc->cascade);
    std::vector<double> phi;
    phi.reserve(sc->users() + static_cast<std::size_t>(theta.rows()));
    for (std::size_t i = 0; i < sc->users(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double eta = sc->eta[i];
      const double s2 = sc->sigma2[i];
      phi.push_back(eta * g.row(ii).sum() / s2 + eta - (1.0 + eta) * g(ii, ii) / s2);
    }
    for (Eigen::Index k = 0; k < theta.rows(); ++k) phi.push_back(std::abs(theta(k, 0)) - 1.0);
    return phi;
  };
  p.sense = Sense::Minimize;
  p.inequality_count = s.users() + static_cast<std::size_t>(s.elements());
  return p;
}

ProblemSpec wpt_problem(const WptScenario& s) {
  s.validate();
  auto sc = share(s);
  ProblemSpec p;
  p.variables = {beamformer_shape(s.antennas(), s.receivers()),
                 {kPhases, s.elements(), 1, VariableKind::UnitModulus}};
  p.objective = [sc](const DecisionSet& x) {
    return wpt_objective(x[kBeamformers], x[kPhases], *sc);
  };
  p.inequalities = [sc](const DecisionSet& x) {
    return std::vector<double>{sum_power(x) - sc->power};
  };
  p.equalities = [](const DecisionSet& x) {
    const ComplexMatrix& theta = x[kPhases];
    std::vector<double> h(static_cast<std::size_t>(theta.rows()));
    for (Eigen::Index k = 0; k < theta.rows(); ++k) {
      h[static_cast<std::size_t>(k)] = std::abs(theta(k, 0)) - 1.0;
    }
    return h;
  };
  p.sense = Sense::Maximize;
  p.inequality_count = 1;
  p.equality_count = static_cast<std::size_t>(s.elements());
  return p;
}

Normalized<ClassicScenario> normalize(const ClassicScenario& s) {
  s.validate();
  double u = 0.0;
  for (std::size_t i = 0; i < s.users(); ++i) {
    const double tr = s.R[i].trace().real();
    if (tr > 0.0) u += s.gamma[i] * s.sigma2[i] / tr;
  }
  if (!(u > 0.0)) u = 1.0;
  Normalized<ClassicScenario> out{s, u, u};
  for (std::size_t i = 0; i < s.users(); ++i) {
    out.scenario.R[i] = (u / s.sigma2[i]) * s.R[i];
    out.scenario.sigma2[i] = 1.0;
  }
  return out;
}

Normalized<CognitiveScenario> normalize(const CognitiveScenario& s) {
  s.validate();
  double u = 0.0;
  for (std::size_t t = 0; t < s.users(); ++t) {
    const double tr = s.R_s[t].trace().real();
    if (tr > 0.0) u += s.eta[t] * s.sigma2[t] / tr;
  }
  if (!(u > 0.0)) u = 1.0;
  Normalized<CognitiveScenario> out{s, u, u};
  for (std::size_t t = 0; t < s.users(); ++t) {
    out.scenario.R_s[t] = (u / s.sigma2[t]) * s.R_s[t];
    out.scenario.sigma2[t] = 1.0;
  }
  for (std::size_t k = 0; k < s.primaries(); ++k) {
    out.scenario.R_p[k] = (u / s.I_to[k]) * s.R_p[k];
    out.scenario.I_to[k] = 1.0;
  }
  return out;
}

Normalized<RisScenario> normalize(const RisScenario& s) {
  s.validate();
  double u = 0.0;
  for (std::size_t i = 0; i < s.users(); ++i) {
    const double energy = s.cascade[i].squaredNorm();
    if (energy > 0.0) u += s.eta[i] * s.sigma2[i] / energy;
  }
  if (!(u > 0.0)) u = 1.0;
  Normalized<RisScenario> out{s, u, u};
  for (std::size_t i = 0; i < s.users(); ++i) {
    out.scenario.cascade[i] = std::sqrt(u / s.sigma2[i]) * s.cascade[i];
    out.scenario.sigma2[i] = 1.0;
  }
  return out;
}

Normalized<WptScenario> normalize(const WptScenario& s) {
  s.validate();
  double kappa = 0.0;
  for (std::size_t i = 0; i < s.receivers(); ++i) {
    kappa += s.alpha[i] * s.cascade[i].squaredNorm();
  }
  kappa *= s.power;
  if (!(kappa > 0.0)) kappa = 1.0;
  Normalized<WptScenario> out{s, s.power, kappa};
  const double c = std::sqrt(s.power / kappa);
  for (auto& g : out.scenario.cascade) g *= c;
  out.scenario.power = 1.0;
  return out;
}

double classic_violation(const ComplexMatrix& W, const ClassicScenario& s) {
  require_beamformers(W, s.antennas(), s.users());
  return std::max(0.0, sinr_violation(covariance_gains(W, s.R), s.sigma2, s.gamma));
}

double cognitive_violation(const ComplexMatrix& W, const CognitiveScenario& s) {
  require_beamformers(W, s.antennas(), s.users());
  double worst = sinr_violation(covariance_gains(W, s.R_s), s.sigma2, s.eta);
  for (std::size_t k = 0; k < s.primaries(); ++k) {
    worst = std::max(worst, (interference_cognitive(W, s, k) - s.I_to[k]) / s.I_to[k]);
  }
  return std::max(0.0, worst);
}

double ris_violation(const ComplexMatrix& W, const ComplexMatrix& theta, const RisScenario& s) {
  require_beamformers(W, s.antennas(), s.users());
  require_phases(theta, s.elements());
  double worst = sinr_violation(cascade_gains(W, theta, s.cascade), s.sigma2, s.eta);
  for (Eigen::Index k = 0; k < theta.rows(); ++k) {
    worst = std::max(worst, std::abs(theta(k, 0)) - 1.0);
  }
  return std::max(0.0, worst);
}

double wpt_violation(const ComplexMatrix& W, const ComplexMatrix& theta, const WptScenario& s) {
  require(W.rows() == s.antennas(), "wpt_violation: beamformer rows differ from antennas");
  require_phases(theta, s.elements());
  double worst = (W.squaredNorm() - s.power) / s.power;
  for (Eigen::Index k = 0; k < theta.rows(); ++k) {
    worst = std::max(worst, std::abs(std::abs(theta(k, 0)) - 1.0));
  }
  return std::max(0.0, worst);
}

ComplexMatrix classic_repair(const ComplexMatrix& W, const ClassicScenario& s) {
  require_beamformers(W, s.antennas(), s.users());
  const double need = required_power_factor(covariance_gains(W, s.R), s.sigma2, s.gamma);
  if (!std::isfinite(need) || need <= 1.0) return W;
  return std::sqrt(need) * W;
}

ComplexMatrix cognitive_repair(const ComplexMatrix& W, const CognitiveScenario& s) {
  require_beamformers(W, s.antennas(), s.users());
  const double need = required_power_factor(covariance_gains(W, s.R_s), s.sigma2, s.eta);
  if (!std::isfinite(need) || need <= 1.0) return W;
  double allowed = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.primaries(); ++k) {
    const double leak = interference_cognitive(W, s, k);
    if (leak > 0.0) allowed = std::min(allowed, s.I_to[k] / leak);
  }
  const double c2 = std::min(need, std::max(1.0, allowed));
  return std::sqrt(c2) * W;
}

std::pair<ComplexMatrix, ComplexMatrix> ris_repair(const ComplexMatrix& W,
                                                   const ComplexMatrix& theta,
                                                   const RisScenario& s) {
  require_beamformers(W, s.antennas(), s.users());
  require_phases(theta, s.elements());
  ComplexMatrix clipped = theta;
  for (Eigen::Index k = 0; k < clipped.rows(); ++k) {
    const double mag = std::abs(clipped(k, 0));
    if (mag > 1.0) clipped(k, 0) /= mag;
  }
  const double need =
      required_power_factor(cascade_gains(W, clipped, s.cascade), s.sigma2, s.eta);
  if (!std::isfinite(need) || need <= 1.0) return {W, clipped};
  return {std::sqrt(need) * W, clipped};
}

std::pair<ComplexMatrix, ComplexMatrix> wpt_project(const ComplexMatrix& W,
                                                    const ComplexMatrix& theta,
                                                    const WptScenario& s) {
  require(W.rows() == s.antennas(), "wpt_project: beamformer rows differ from antennas");
  require_phases(theta, s.elements());
  ComplexMatrix unit = theta;
  for (Eigen::Index k = 0; k < unit.rows(); ++k) {
    const double mag = std::abs(unit(k, 0));
    unit(k, 0) = mag > 0.0 ? unit(k, 0) / mag : Complex(1.0, 0.0);
  }
  const double norm2 = W.squaredNorm();
  if (!(norm2 > 0.0)) return {W, unit};
  return {std::sqrt(s.power / norm2) * W, unit};
}

}  // namespace firebeam
