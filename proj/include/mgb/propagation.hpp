#ifndef MGB_PROPAGATION_HPP
#define MGB_PROPAGATION_HPP

#include <cmath>

namespace mgb {

// Log-distance path loss with a linear excess term:
//   PL(d) = intercept + slope * log10(d) + excess * d      (d in meters)
// The defaults are free space at 39 GHz plus 15 dB/km of excess loss.
// `margin_db` adds a distance-independent loss on top.
struct PathLossModel {
  double intercept_db = 64.26;
  double slope_db_per_decade = 20.0;
  double excess_db_per_m = 0.015;
  double margin_db = 0.0;  // flat extra loss for margin studies

  void validate() const;
};

struct NoiseModel {
  double thermal_density_dbm_per_hz = -174.0;
  double noise_figure_db = 5.0;
  double rx_impl_loss_db = 3.0;

  void validate() const;
};

double path_loss_db(const PathLossModel& model, double distance_m);

// kTB + noise figure. Implementation loss is applied separately by callers.
double noise_power_dbm(const NoiseModel& model, double bandwidth_hz);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin);

}  // namespace mgb

#endif
