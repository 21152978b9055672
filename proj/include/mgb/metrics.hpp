#ifndef MGB_METRICS_HPP
#define MGB_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mgb {

struct CdfPoint {
  double value = 0.0;
  double prob = 0.0;
};

// Step CDF: one point per distinct sample value, carrying k/n where k
// counts samples <= value.
std::vector<CdfPoint> empirical_cdf(std::span<const double> samples);

// Keep at most `max_points` points (plus the anchors), always retaining the
// points at the 1st, 5th, 50th, 95th and 99th percentiles and both ends.
std::vector<CdfPoint> decimate_cdf(const std::vector<CdfPoint>& cdf, std::size_t max_points = 2000);

std::string cdf_csv(const std::vector<CdfPoint>& cdf, const std::string& comment = {});

// Nearest-rank percentile: the ceil(p*n)-th smallest sample (p = 0 gives
// the minimum).
double percentile(std::span<const double> samples, double p);

// Harmonic mean after dropping the floor(n * exclude_fraction) smallest
// samples. Throws DomainError if a retained sample is not positive.
double harmonic_mean_excluding_worst(std::span<const double> samples, double exclude_fraction = 0.01);

double arithmetic_mean(std::span<const double> samples);
double geometric_mean(std::span<const double> samples);
double fraction_above(std::span<const double> samples, double threshold);

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::int64_t drops = 0;
};

struct MetricsBundle {
  std::vector<double> sinr_samples;        // dB, one per measured cell
  std::vector<double> se_samples;          // bps/Hz per stream, one per measured cell
  std::vector<double> throughput_samples;  // Mbps, one per measured cell
  std::vector<double> sector_se_samples;   // bps/Hz, one per measured sector per drop
  std::vector<double> hub_throughput_samples;  // Gbps, one per measured hub per drop

  double mean_sinr_db = 0.0;
  double mean_cell_se_bps_hz = 0.0;
  double mean_sector_se_bps_hz = 0.0;
  double hub_throughput_gbps = 0.0;
  double mean_throughput_mbps = 0.0;
  double harmonic_mean_99_mbps = 0.0;
  double frac_above_2bpshz = 0.0;
  double se_p01_bps_hz = 0.0;
  double sinr_p01_db = 0.0;
  double sinr_p50_db = 0.0;

  Provenance provenance;

  // Recompute every summary scalar from the sample vectors.
  void summarize();
};

}  // namespace mgb

#endif
