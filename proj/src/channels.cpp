// SPDX-License-Identifier: Apache-2.0
#include "firebeam/channels.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "firebeam/errors.hpp"

namespace firebeam {
namespace {

using nlohmann::json;

constexpr double kDegree = std::numbers::pi / 180.0;

void require_positive_value(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ContractViolation(std::string(what) + " must be positive, got " + std::to_string(v));
  }
}

// Checks that `config` has exactly the keys of `defaults` (plus "kind").
void check_keys(const json& config, const json& defaults) {
  std::vector<std::string> missing;
  std::vector<std::string> unknown;
  for (const auto& [key, value] : defaults.items()) {
    if (!config.contains(key)) missing.push_back(key);
  }
  for (const auto& [key, value] : config.items()) {
    if (key != "kind" && !defaults.contains(key)) unknown.push_back(key);
  }
  if (missing.empty() && unknown.empty()) return;
  std::string msg = "scenario config";
  auto list = [](const std::vector<std::string>& keys) {
    std::string out;
    for (const auto& k : keys) out += (out.empty() ? "" : ", ") + k;
    return out;
  };
  if (!missing.empty()) msg += " missing: " + list(missing) + ";";
  if (!unknown.empty()) msg += " unknown: " + list(unknown) + ";";
  msg.pop_back();
  throw ValidationError(msg);
}

template <class T>
T get(const json& config, const char* key) {
  try {
    return config.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario config: bad value for '") + key + "': " +
                          e.what());
  }
}

int get_count(const json& config, const char* key) {
  const int n = get<int>(config, key);
  if (n < 1) throw ValidationError(std::string("scenario config: '") + key + "' must be >= 1");
  return n;
}

double get_positive(const json& config, const char* key) {
  const double v = get<double>(config, key);
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ValidationError(std::string("scenario config: '") + key + "' must be positive");
  }
  return v;
}

// A scalar applies to every user; an array gives one value per user.
std::vector<double> per_user(const json& config, const char* key, std::size_t users) {
  const json& v = config.at(key);
  if (v.is_array()) {
    auto values = get<std::vector<double>>(config, key);
    if (values.size() != users) {
      throw ValidationError(std::string("scenario config: '") + key + "' needs " +
                            std::to_string(users) + " entries");
    }
    return values;
  }
  return std::vector<double>(users, get<double>(config, key));
}

ClassicScenario build_classic(const json& c, Rng& rng) {
  const int users = get_count(c, "users");
  const int antennas = get_count(c, "antennas");
  const double dmin = get_positive(c, "min_distance_km");
  const double dmax = get_positive(c, "max_distance_km");
  if (dmin > dmax) throw ValidationError("scenario config: min_distance_km > max_distance_km");
  const double shadow_std = get<double>(c, "shadowing_std_db");
  if (!(shadow_std >= 0.0)) throw ValidationError("scenario config: negative shadowing_std_db");

  LinkBudget budget;
  budget.antenna_gain_db = get<double>(c, "antenna_gain_dbi");
  budget.noise_psd_dbm_hz = get<double>(c, "noise_psd_dbm_hz");
  budget.noise_figure_db = get<double>(c, "noise_figure_db");
  budget.bandwidth_hz = get_positive(c, "bandwidth_hz");
  const std::vector<double> sinr_db = per_user(c, "sinr_db", static_cast<std::size_t>(users));
  const double noise = dbm_to_watts(noise_power_dbm(budget));

  std::uniform_real_distribution<double> distance(dmin, dmax);
  std::normal_distribution<double> shadowing(0.0, shadow_std);
  ClassicScenario s;
  for (int i = 0; i < users; ++i) {
    budget.pathloss_db = classic_pathloss_db(distance(rng));
    budget.shadowing_db = shadow_std > 0.0 ? shadowing(rng) : 0.0;
    const ComplexMatrix h =
        std::sqrt(db_to_linear(channel_gain_db(budget))) * rayleigh_vector(antennas, rng);
    s.R.push_back(h * h.adjoint());
    s.sigma2.push_back(noise);
    s.gamma.push_back(db_to_linear(sinr_db[static_cast<std::size_t>(i)]));
  }
  return s;
}

CognitiveScenario build_cognitive(const json& c) {
  const int antennas = get_count(c, "antennas");
  const auto su = get<std::vector<double>>(c, "su_angles_deg");
  const auto pu = get<std::vector<double>>(c, "pu_angles_deg");
  const auto caps = get<std::vector<double>>(c, "interference_caps");
  if (su.empty()) throw ValidationError("scenario config: su_angles_deg is empty");
  if (caps.size() != pu.size()) {
    throw ValidationError("scenario config: interference_caps needs one entry per PU angle");
  }
  const double noise = get_positive(c, "noise_variance");
  const std::vector<double> sinr_db = per_user(c, "sinr_db", su.size());
  CovarianceParams params;
  params.antennas = antennas;
  params.spread_deg = get<double>(c, "spread_deg");
  params.spacing_ratio = get_positive(c, "spacing_ratio");

  CognitiveScenario s;
  for (std::size_t t = 0; t < su.size(); ++t) {
    params.angle_deg = su[t];
    s.R_s.push_back(angular_covariance(params));
    s.sigma2.push_back(noise);
    s.eta.push_back(db_to_linear(sinr_db[t]));
  }
  for (std::size_t k = 0; k < pu.size(); ++k) {
    params.angle_deg = pu[k];
    s.R_p.push_back(angular_covariance(params));
    if (!(caps[k] > 0.0)) throw ValidationError("scenario config: caps must be positive");
    s.I_to.push_back(caps[k]);
  }
  return s;
}

// Cascades for users at a fixed distance from the RIS, Rayleigh fading on
// both hops.
std::vector<ComplexMatrix> draw_cascades(const json& c, const char* user_distance_key,
                                         Rng& rng) {
  const int users = get_count(c, "users");
  const int antennas = get_count(c, "antennas");
  const int elements = get_count(c, "ris_elements");
  const double d_bs = get_positive(c, "bs_ris_distance_m");
  const double d_user = get_positive(c, user_distance_key);

  const double a_bs = std::sqrt(db_to_linear(ris_pathloss_db(d_bs)));
  const double a_user = std::sqrt(db_to_linear(ris_pathloss_db(d_user)));
  const ComplexMatrix H = a_bs * rayleigh_matrix(antennas, elements, rng);
  std::vector<ComplexMatrix> cascades;
  for (int i = 0; i < users; ++i) {
    const ComplexMatrix g = a_user * rayleigh_vector(elements, rng);
    cascades.push_back(ris_cascade(g, H));
  }
  return cascades;
}

RisScenario build_ris(const json& c, Rng& rng) {
  RisScenario s;
  s.cascade = draw_cascades(c, "user_distance_m", rng);
  const double noise = dbm_to_watts(get<double>(c, "noise_dbm"));
  s.sigma2.assign(s.cascade.size(), noise);
  const std::vector<double> sinr_db = per_user(c, "sinr_db", s.cascade.size());
  for (double v : sinr_db) s.eta.push_back(db_to_linear(v));
  return s;
}

WptScenario build_wpt(const json& c, Rng& rng) {
  WptScenario s;
  s.cascade = draw_cascades(c, "receiver_distance_m", rng);
  s.alpha = per_user(c, "weights", s.cascade.size());
  for (double a : s.alpha) {
    if (!(a >= 0.0)) throw ValidationError("scenario config: weights must be non-negative");
  }
  s.power = dbm_to_watts(get<double>(c, "power_dbm"));
  return s;
}

}  // namespace

ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "classic") return ScenarioKind::Classic;
  if (name == "cognitive") return ScenarioKind::Cognitive;
  if (name == "ris") return ScenarioKind::Ris;
  if (name == "wpt") return ScenarioKind::Wpt;
  throw ValidationError("unknown scenario kind '" + name + "'");
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Classic: return "classic";
    case ScenarioKind::Cognitive: return "cognitive";
    case ScenarioKind::Ris: return "ris";
    case ScenarioKind::Wpt: return "wpt";
  }
  return "unknown";
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

ComplexMatrix rayleigh_matrix(int rows, int cols, Rng& rng) {
  if (rows < 1 || cols < 1) throw ContractViolation("rayleigh_matrix: dimensions must be >= 1");
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ComplexMatrix out(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      out(r, c) = Complex(re, im);
    }
  }
  return out;
}

ComplexMatrix rayleigh_vector(int dim, Rng& rng) {
  if (dim < 1) throw ContractViolation("rayleigh_vector: dim must be >= 1");
  return rayleigh_matrix(dim, 1, rng);
}

double classic_pathloss_db(double l_km) {
  require_positive_value(l_km, "classic_pathloss_db: distance");
  return 35.0 + 34.5 * std::log10(l_km);
}

double ris_pathloss_db(double d_m) {
  require_positive_value(d_m, "ris_pathloss_db: distance");
  return -30.0 - 22.0 * std::log10(d_m);
}

double noise_power_dbm(const LinkBudget& budget) {
  require_positive_value(budget.bandwidth_hz, "noise_power_dbm: bandwidth");
  return budget.noise_psd_dbm_hz + 10.0 * std::log10(budget.bandwidth_hz) +
         budget.noise_figure_db;
}

double channel_gain_db(const LinkBudget& budget) {
  return budget.antenna_gain_db - budget.pathloss_db - budget.shadowing_db;
}

ComplexMatrix angular_covariance(const CovarianceParams& params) {
  if (params.antennas < 1) throw ContractViolation("angular_covariance: antennas must be >= 1");
  if (!(params.spread_deg >= 0.0) || !std::isfinite(params.spread_deg)) {
    throw ContractViolation("angular_covariance: spread must be non-negative");
  }
  if (!std::isfinite(params.angle_deg) || !std::isfinite(params.spacing_ratio)) {
    throw ContractViolation("angular_covariance: non-finite parameter");
  }
  const double zeta = params.angle_deg * kDegree;
  const double spread = params.spread_deg * kDegree;
  const double s = params.spacing_ratio;
  const int M = params.antennas;
  ComplexMatrix R(M, M);
  for (int m = 0; m < M; ++m) {
    for (int n = 0; n < M; ++n) {
      const double d = static_cast<double>(n - m);
      const double phase = 2.0 * std::numbers::pi * s * d * std::sin(zeta);
      const double x = std::numbers::pi * s * spread * d * std::cos(zeta);
      R(m, n) = std::polar(std::exp(-2.0 * x * x), phase);
    }
  }
  return R;
}

ComplexMatrix ris_cascade(const ComplexMatrix& g, const ComplexMatrix& H) {
  if (g.cols() != 1 || g.rows() < 1 || H.cols() != g.rows() || H.rows() < 1) {
    throw ContractViolation("ris_cascade: expected g of N_t x 1 and H of M_t x N_t");
  }
  return g.col(0).conjugate().asDiagonal() * H.adjoint();
}

nlohmann::json default_config(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Classic:
      return json{{"users", 2},
                  {"antennas", 4},
                  {"min_distance_km", 0.05},
                  {"max_distance_km", 2.0},
                  {"antenna_gain_dbi", 15.0},
                  {"shadowing_std_db", 8.0},
                  {"noise_psd_dbm_hz", -174.0},
                  {"noise_figure_db", 5.0},
                  {"bandwidth_hz", 15000.0},
                  {"sinr_db", 10.0}};
    case ScenarioKind::Cognitive:
      return json{{"antennas", 8},
                  {"su_angles_deg", {-5.0, 10.0, 25.0}},
                  {"pu_angles_deg", {30.0, 50.0}},
                  {"interference_caps", {0.001, 0.0001}},
                  {"noise_variance", 0.1},
                  {"sinr_db", 0.0},
                  {"spread_deg", 2.0},
                  {"spacing_ratio", 0.5}};
    case ScenarioKind::Ris:
      return json{{"users", 2},
                  {"antennas", 3},
                  {"ris_elements", 8},
                  {"bs_ris_distance_m", 10.0},
                  {"user_distance_m", 6.0},
                  {"noise_dbm", -124.0},
                  {"sinr_db", 10.0}};
    case ScenarioKind::Wpt:
      return json{{"users", 2},
                  {"antennas", 3},
                  {"ris_elements", 8},
                  {"bs_ris_distance_m", 10.0},
                  {"receiver_distance_m", 2.0},
                  {"power_dbm", 30.0},
                  {"weights", 1.0}};
  }
  throw ValidationError("unknown scenario kind");
}

Scenario build_scenario(const nlohmann::json& config, Rng& rng) {
  if (!config.is_object()) throw ValidationError("scenario config must be a JSON object");
  if (!config.contains("kind") || !config["kind"].is_string()) {
    throw ValidationError("scenario config missing: kind");
  }
  const ScenarioKind kind = parse_scenario_kind(config["kind"].get<std::string>());
  check_keys(config, default_config(kind));
  switch (kind) {
    case ScenarioKind::Classic: return build_classic(config, rng);
    case ScenarioKind::Cognitive: return build_cognitive(config);
    case ScenarioKind::Ris: return build_ris(config, rng);
    case ScenarioKind::Wpt: return build_wpt(config, rng);
  }
  throw ValidationError("unknown scenario kind");
}

}  // namespace firebeam
