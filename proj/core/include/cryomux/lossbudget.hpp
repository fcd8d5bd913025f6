#pragma once

// Two-level-system (TLS) power-dependent loss and participation-ratio loss
// budgets.

#include <optional>
#include <string>
#include <vector>

namespace cryomux::loss {

struct LossComponent {
  std::string name;
  double participation = 0.0;  // fraction of electric energy, [0, 1]
  double tan_delta = 0.0;
  double n_c = 1.0;            // saturation photon number
  double beta = 0.5;           // saturation exponent, (0, 1]

  void validate() const;
};

struct TlsModel {
  std::vector<LossComponent> components;
  double q0 = 0.0;  // power-independent Q; +inf means no such loss

  void validate() const;
};

/// 1/Q_i(n) = sum_i p_i tan(d_i) / (1 + n/n_ci)^beta_i + 1/Q_0.
double qi_inverse(const TlsModel& model, double n_photons);

struct BudgetEntry {
  double participation = 0.0;
  double tan_delta = 0.0;
};

struct BudgetResult {
  std::vector<double> component_loss;
  double total_loss = 0.0;
  // Empty when the total loss is zero.
  std::optional<double> q_factor;

  bool infinite_q() const { return !q_factor.has_value(); }
};

/// Unsaturated loss budget: loss_i = p_i tan(d_i), total = sum + 1/q0.
BudgetResult budget_total(const std::vector<BudgetEntry>& components,
                          std::optional<double> q0 = std::nullopt);

struct EnergyRegion {
  std::string name;
  double energy_fraction = 0.0;
  // Participation of each dielectric inside this region, keyed by name.
  std::vector<std::pair<std::string, double>> region_pr;
};

struct RegionEnergySplit {
  std::vector<EnergyRegion> regions;

  // Energy fractions must sum to one within this tolerance.
  static constexpr double sum_tolerance = 5e-3;
  void validate() const;
};

/// Energy-weighted participation of `dielectric` across all regions.
double weighted_participation(const RegionEnergySplit& split, const std::string& dielectric);

/// Loss tangent of one dielectric from a measured internal Q, given every
/// other loss channel lumped into other_losses (a 1/Q).
double extract_tan_delta(double measured_qi, double participation, double other_losses);

}  // namespace cryomux::loss
