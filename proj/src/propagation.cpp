#include "mgb/propagation.hpp"

#include <cmath>
#include <limits>

#include "mgb/errors.hpp"

namespace mgb {

void PathLossModel::validate() const {
  if (!(slope_db_per_decade > 0.0)) throw ConfigError("slope must be > 0", "path_loss.slope_db_per_decade");
  if (!(excess_db_per_m >= 0.0)) throw ConfigError("excess loss must be >= 0", "path_loss.excess_db_per_m");
  if (!std::isfinite(margin_db)) throw ConfigError("margin must be finite", "path_loss.margin_db");
  if (!std::isfinite(intercept_db)) throw ConfigError("intercept must be finite", "path_loss.intercept_db");
}

void NoiseModel::validate() const {
  if (!(noise_figure_db >= 0.0)) throw ConfigError("noise figure must be >= 0", "noise.noise_figure_db");
  if (!(rx_impl_loss_db >= 0.0)) throw ConfigError("implementation loss must be >= 0", "noise.rx_impl_loss_db");
  if (!std::isfinite(thermal_density_dbm_per_hz))
    throw ConfigError("thermal density must be finite", "noise.thermal_density_dbm_per_hz");
}

double path_loss_db(const PathLossModel& model, double distance_m) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m))
    throw DomainError("path_loss_db: distance must be positive, got " + std::to_string(distance_m));
  return model.intercept_db + model.slope_db_per_decade * std::log10(distance_m) +
         model.excess_db_per_m * distance_m + model.margin_db;
}

double noise_power_dbm(const NoiseModel& model, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
    throw DomainError("noise_power_dbm: bandwidth must be positive, got " + std::to_string(bandwidth_hz));
  return model.thermal_density_dbm_per_hz + 10.0 * std::log10(bandwidth_hz) + model.noise_figure_db;
}

double linear_to_db(double lin) {
  if (lin <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(lin);
}

}  // namespace mgb
