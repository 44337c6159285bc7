// SPDX-License-Identifier: Apache-2.0
//
// Channel and scenario generation: Rayleigh fading, link budgets, angular
// covariance matrices of a uniform linear array and RIS cascades.
#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "firebeam/firefly.hpp"
#include "firebeam/numerics.hpp"
#include "firebeam/problems.hpp"

namespace firebeam {

enum class ScenarioKind { Classic, Cognitive, Ris, Wpt };

using Scenario = std::variant<ClassicScenario, CognitiveScenario, RisScenario, WptScenario>;

ScenarioKind parse_scenario_kind(const std::string& name);
std::string to_string(ScenarioKind kind);

struct LinkBudget {
  double pathloss_db = 0.0;
  double shadowing_db = 0.0;
  double antenna_gain_db = 0.0;
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 0.0;
  double bandwidth_hz = 1.0;
};

struct CovarianceParams {
  double angle_deg = 0.0;   ///< departure angle from broadside
  double spread_deg = 0.0;  ///< angular spread standard deviation
  double spacing_ratio = 0.5;  ///< element spacing over wavelength
  int antennas = 1;
};

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Column of i.i.d. CN(0, 1) entries (variance 1/2 per real component).
ComplexMatrix rayleigh_vector(int dim, Rng& rng);
ComplexMatrix rayleigh_matrix(int rows, int cols, Rng& rng);

/// 35 + 34.5 log10(l), l in km.
double classic_pathloss_db(double l_km);
/// -30 - 22 log10(d), d in m; a signed gain.
double ris_pathloss_db(double d_m);
/// psd + 10 log10(bandwidth) + noise figure.
double noise_power_dbm(const LinkBudget& budget);
/// antenna gain - pathloss - shadowing.
double channel_gain_db(const LinkBudget& budget);

/// Entry (m, n): exp(j 2 pi s (n - m) sin z) * exp(-2 [pi s d (n - m) cos z]^2)
/// with s the spacing ratio, z the angle and d the spread in radians.
ComplexMatrix angular_covariance(const CovarianceParams& params);

/// G_i^H = diag(conj(g_i)) H^H for g_i (N_t x 1) and H (M_t x N_t).
ComplexMatrix ris_cascade(const ComplexMatrix& g, const ComplexMatrix& H);

/// Complete configuration with every key of the given kind at its default.
nlohmann::json default_config(ScenarioKind kind);

/// Draws one realization. The config must contain exactly the keys of
/// default_config(kind) plus "kind"; anything missing or unknown raises a
/// ValidationError that names every offending key.
Scenario build_scenario(const nlohmann::json& config, Rng& rng);

}  // namespace firebeam
