#ifndef MGB_ANTENNA_HPP
#define MGB_ANTENNA_HPP

namespace mgb {

// Planar phased array. Elements sit on a rows x cols grid in the plane
// normal to the array boresight; each vertical group of `subarray_rows`
// elements shares one RF chain and forms a fixed elevation beam.
struct ArrayConfig {
  int rows = 16;
  int cols = 16;
  int n_pa = 64;
  double pa_power_dbm = 10.0;
  double element_gain_db = 3.0;  // net of feed loss; matches the reference EIRP
  double element_spacing_wavelengths = 0.5;
  int subarray_rows = 4;

  int elements() const { return rows * cols; }
  void validate() const;

  static ArrayConfig hub_default();         // 16x16, 64 PAs
  static ArrayConfig small_cell_default();  // 8x8, 16 PAs
};

// 3GPP-style element pattern: -min(12 (theta/theta_3db)^2, floor).
struct SectorPattern {
  double theta_3db_deg = 70.0;
  double front_back_floor_db = 20.0;

  void validate() const;
};

// Direction in the array's local frame. Azimuth is measured from boresight
// in the horizontal plane, elevation from the horizontal plane. Degrees.
struct Direction {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
};

inline constexpr double kBeamGainFloorDb = -200.0;

double total_tx_power_dbm(const ArrayConfig& cfg);
double array_gain_db(const ArrayConfig& cfg);
double eirp_dbm(const ArrayConfig& cfg);

double element_pattern_db(const SectorPattern& p, double offset_deg);
// Joint azimuth/elevation form; reduces to element_pattern_db at elevation 0.
double element_pattern_db(const SectorPattern& p, const Direction& d);

// Normalized power array factor |AF|^2 / N in linear units, so that the
// peak equals N. Azimuth follows `steer`; elevation steering is fixed at
// broadside by the sub-array construction.
double array_factor_power(const ArrayConfig& cfg, const Direction& steer, const Direction& eval);

// Element gain + element pattern + array factor, in dB, floored at
// kBeamGainFloorDb. Throws DomainError if `steer` is outside the front
// hemisphere.
double beam_gain_db(const ArrayConfig& cfg, const SectorPattern& pattern, const Direction& steer,
                    const Direction& eval);

// Per-stream SNR reduction when an array splits its PA power and/or its
// aperture across k simultaneous streams.
double stream_partition_penalty_db(int k_streams, bool splits_power, bool splits_aperture);

}  // namespace mgb

#endif
