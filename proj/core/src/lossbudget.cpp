#include "cryomux/lossbudget.hpp"

#include <algorithm>
#include <cmath>

#include "cryomux/error.hpp"

namespace cryomux::loss {

void LossComponent::validate() const {
  if (!(participation >= 0.0 && participation <= 1.0)) {
    throw Error(ErrorKind::invalid_input, "participation of '" + name + "' must be in [0, 1]");
  }
  if (!(tan_delta >= 0.0)) {
    throw Error(ErrorKind::invalid_input, "loss tangent of '" + name + "' must be >= 0");
  }
  if (!(n_c > 0.0)) {
    throw Error(ErrorKind::invalid_input, "saturation photon number of '" + name + "' must be > 0");
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorKind::invalid_input, "beta of '" + name + "' must be in (0, 1]");
  }
}

void TlsModel::validate() const {
  if (!(q0 > 0.0)) throw Error(ErrorKind::invalid_input, "Q_0 must be positive");
  if (components.empty() && std::isinf(q0)) {
    throw Error(ErrorKind::invalid_input, "TLS model has no loss at all");
  }
  for (const auto& c : components) c.validate();
}

double qi_inverse(const TlsModel& model, double n_photons) {
  if (!(n_photons >= 0.0)) throw Error(ErrorKind::invalid_input, "photon number must be >= 0");
  double inv = std::isinf(model.q0) ? 0.0 : 1.0 / model.q0;
  for (const auto& c : model.components) {
    inv += c.participation * c.tan_delta / std::pow(1.0 + n_photons / c.n_c, c.beta);
  }
  return inv;
}

BudgetResult budget_total(const std::vector<BudgetEntry>& components, std::optional<double> q0) {
  BudgetResult r;
  r.component_loss.reserve(components.size());
  for (const auto& c : components) {
    if (!(c.participation >= 0.0 && c.participation <= 1.0) || !(c.tan_delta >= 0.0)) {
      throw Error(ErrorKind::invalid_input, "budget entries need p in [0, 1] and tan(d) >= 0");
    }
    r.component_loss.push_back(c.participation * c.tan_delta);
    r.total_loss += r.component_loss.back();
  }
  if (q0) {
    if (!(*q0 > 0.0)) throw Error(ErrorKind::invalid_input, "Q_0 must be positive");
    if (!std::isinf(*q0)) r.total_loss += 1.0 / *q0;
  }
  if (r.total_loss > 0.0) r.q_factor = 1.0 / r.total_loss;
  return r;
}

void RegionEnergySplit::validate() const {
  if (regions.empty()) throw Error(ErrorKind::invalid_input, "no energy regions");
  double sum = 0.0;
  for (const auto& r : regions) {
    if (!(r.energy_fraction >= 0.0)) {
      throw Error(ErrorKind::invalid_input, "energy fraction of '" + r.name + "' is negative");
    }
    sum += r.energy_fraction;
  }
  if (std::abs(sum - 1.0) > sum_tolerance) {
    throw Error(ErrorKind::invalid_input,
                "energy fractions sum to " + std::to_string(sum) + ", expected 1");
  }
}

double weighted_participation(const RegionEnergySplit& split, const std::string& dielectric) {
  split.validate();
  double total = 0.0;
  for (const auto& region : split.regions) {
    const auto it = std::find_if(region.region_pr.begin(), region.region_pr.end(),
                                 [&](const auto& kv) { return kv.first == dielectric; });
    if (it == region.region_pr.end()) {
      throw Error(ErrorKind::invalid_input,
                  "region '" + region.name + "' has no participation for '" + dielectric + "'");
    }
    total += region.energy_fraction * it->second;
  }
  return total;
}

double extract_tan_delta(double measured_qi, double participation, double other_losses) {
  if (!(measured_qi > 0.0)) throw Error(ErrorKind::invalid_input, "measured Q_i must be positive");
  if (!(participation > 0.0 && participation <= 1.0)) {
    throw Error(ErrorKind::invalid_input, "participation must be in (0, 1]");
  }
  const double residual = 1.0 / measured_qi - other_losses;
  if (!(residual > 0.0)) {
    throw Error(ErrorKind::inconsistent_budget,
                "other losses already account for the measured Q_i");
  }
  return residual / participation;
}

}  // namespace cryomux::loss
