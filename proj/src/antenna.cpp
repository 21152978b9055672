#include "mgb/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mgb/errors.hpp"

namespace mgb {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// |sum_{m=0}^{M-1} exp(j m psi)|^2
double ula_power(int m, double psi) {
  const double half = 0.5 * psi;
  const double den = std::sin(half);
  if (std::abs(den) < 1e-12) return static_cast<double>(m) * m;
  const double num = std::sin(m * half);
  return (num * num) / (den * den);
}

}  // namespace

void ArrayConfig::validate() const {
  if (rows < 1 || cols < 1) throw ConfigError("array dimensions must be >= 1", "array.rows/cols");
  if (n_pa < 1) throw ConfigError("need at least one PA", "array.n_pa");
  if (elements() % n_pa != 0) throw ConfigError("element count must be divisible by PA count", "array.n_pa");
  if (subarray_rows < 1 || rows % subarray_rows != 0)
    throw ConfigError("rows must be divisible by sub-array rows", "array.subarray_rows");
  if (!(element_spacing_wavelengths > 0.0))
    throw ConfigError("element spacing must be > 0", "array.element_spacing_wavelengths");
  if (!std::isfinite(pa_power_dbm) || !std::isfinite(element_gain_db))
    throw ConfigError("PA power and element gain must be finite", "array");
}

ArrayConfig ArrayConfig::hub_default() { return ArrayConfig{}; }

ArrayConfig ArrayConfig::small_cell_default() {
  ArrayConfig c;
  c.rows = 8;
  c.cols = 8;
  c.n_pa = 16;
  return c;
}

void SectorPattern::validate() const {
  if (!(theta_3db_deg > 0.0 && theta_3db_deg < 180.0))
    throw ConfigError("theta_3db must be in (0, 180)", "pattern.theta_3db_deg");
  if (!(front_back_floor_db > 0.0)) throw ConfigError("floor must be > 0", "pattern.front_back_floor_db");
}

double total_tx_power_dbm(const ArrayConfig& cfg) {
  return cfg.pa_power_dbm + 10.0 * std::log10(static_cast<double>(cfg.n_pa));
}

double array_gain_db(const ArrayConfig& cfg) {
  return 10.0 * std::log10(static_cast<double>(cfg.elements())) + cfg.element_gain_db;
}

double eirp_dbm(const ArrayConfig& cfg) { return total_tx_power_dbm(cfg) + array_gain_db(cfg); }

double element_pattern_db(const SectorPattern& p, double offset_deg) {
  const double r = offset_deg / p.theta_3db_deg;
  return -std::min(12.0 * r * r, p.front_back_floor_db);
}

double element_pattern_db(const SectorPattern& p, const Direction& d) {
  const double h = d.azimuth_deg / p.theta_3db_deg;
  const double v = d.elevation_deg / p.theta_3db_deg;
  return -std::min(12.0 * (h * h + v * v), p.front_back_floor_db);
}

double array_factor_power(const ArrayConfig& cfg, const Direction& steer, const Direction& eval) {
  const double k = 2.0 * std::numbers::pi * cfg.element_spacing_wavelengths;
  const double el = eval.elevation_deg * kDegToRad;
  // Horizontal direction cosine along the array's column axis.
  const double u_eval = std::cos(el) * std::sin(eval.azimuth_deg * kDegToRad);
  const double u_steer = std::sin(steer.azimuth_deg * kDegToRad);
  const double psi_h = k * (u_eval - u_steer);
  const double psi_v = k * std::sin(el);
  return ula_power(cfg.cols, psi_h) * ula_power(cfg.rows, psi_v) / cfg.elements();
}

double beam_gain_db(const ArrayConfig& cfg, const SectorPattern& pattern, const Direction& steer,
                    const Direction& eval) {
  if (!(std::abs(steer.azimuth_deg) <= 90.0))
    throw DomainError("beam_gain_db: steering azimuth outside the front hemisphere");
  const double af = array_factor_power(cfg, steer, eval);
  if (af <= 0.0) return kBeamGainFloorDb;
  const double g = 10.0 * std::log10(af) + cfg.element_gain_db + element_pattern_db(pattern, eval);
  return std::max(g, kBeamGainFloorDb);
}

double stream_partition_penalty_db(int k_streams, bool splits_power, bool splits_aperture) {
  if (k_streams < 1) throw DomainError("stream_partition_penalty_db: k_streams must be >= 1");
  const int splits = static_cast<int>(splits_power) + static_cast<int>(splits_aperture);
  return splits * 10.0 * std::log10(static_cast<double>(k_streams));
}

}  // namespace mgb
