#include "mgb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "mgb/errors.hpp"

namespace mgb {

std::vector<CdfPoint> empirical_cdf(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("empirical_cdf: empty sample set");
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  std::vector<CdfPoint> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    out.push_back({v[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

std::vector<CdfPoint> decimate_cdf(const std::vector<CdfPoint>& cdf, std::size_t max_points) {
  if (cdf.size() <= max_points || max_points < 2) return cdf;
  std::vector<bool> keep(cdf.size(), false);
  keep.front() = keep.back() = true;
  // First point reaching each anchor probability is the nearest-rank percentile.
  for (double p : {0.01, 0.05, 0.50, 0.95, 0.99}) {
    auto it = std::lower_bound(cdf.begin(), cdf.end(), p - 1e-12,
                               [](const CdfPoint& c, double x) { return c.prob < x; });
    if (it != cdf.end()) keep[static_cast<std::size_t>(it - cdf.begin())] = true;
  }
  const std::size_t stride = (cdf.size() + max_points - 8) / (max_points - 7);
  for (std::size_t i = 0; i < cdf.size(); i += stride) keep[i] = true;
  std::vector<CdfPoint> out;
  for (std::size_t i = 0; i < cdf.size(); ++i)
    if (keep[i]) out.push_back(cdf[i]);
  return out;
}

std::string cdf_csv(const std::vector<CdfPoint>& cdf, const std::string& comment) {
  std::ostringstream os;
  if (!comment.empty()) os << "# " << comment << '\n';
  os << "value,prob\n" << std::setprecision(10);
  for (const auto& c : cdf) os << c.value << ',' << c.prob << '\n';
  return os.str();
}

double percentile(std::span<const double> samples, double p) {
  if (samples.empty()) throw DomainError("percentile: empty sample set");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("percentile: p must lie in [0, 1]");
  std::vector<double> v(samples.begin(), samples.end());
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, v.size());
  auto it = v.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(v.begin(), it, v.end());
  return *it;
}

double harmonic_mean_excluding_worst(std::span<const double> samples, double exclude_fraction) {
  if (samples.empty()) throw DomainError("harmonic_mean_excluding_worst: empty sample set");
  if (!(exclude_fraction >= 0.0 && exclude_fraction < 1.0))
    throw DomainError("harmonic_mean_excluding_worst: exclude fraction must lie in [0, 1)");
  std::vector<double> v(samples.begin(), samples.end());
  std::sort(v.begin(), v.end());
  const auto drop = static_cast<std::size_t>(std::floor(static_cast<double>(v.size()) * exclude_fraction + 1e-9));
  double inv_sum = 0.0;
  for (std::size_t i = drop; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw DomainError("harmonic_mean_excluding_worst: non-positive sample in retained set");
    inv_sum += 1.0 / v[i];
  }
  return static_cast<double>(v.size() - drop) / inv_sum;
}

double arithmetic_mean(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("arithmetic_mean: empty sample set");
  return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double geometric_mean(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("geometric_mean: empty sample set");
  double s = 0.0;
  for (double x : samples) {
    if (!(x > 0.0)) throw DomainError("geometric_mean: non-positive sample");
    s += std::log(x);
  }
  return std::exp(s / static_cast<double>(samples.size()));
}

double fraction_above(std::span<const double> samples, double threshold) {
  if (samples.empty()) throw DomainError("fraction_above: empty sample set");
  const auto n = std::count_if(samples.begin(), samples.end(), [&](double x) { return x > threshold; });
  return static_cast<double>(n) / static_cast<double>(samples.size());
}

void MetricsBundle::summarize() {
  mean_sinr_db = arithmetic_mean(sinr_samples);
  mean_cell_se_bps_hz = arithmetic_mean(se_samples);
  mean_sector_se_bps_hz = arithmetic_mean(sector_se_samples);
  hub_throughput_gbps = arithmetic_mean(hub_throughput_samples);
  mean_throughput_mbps = arithmetic_mean(throughput_samples);
  frac_above_2bpshz = fraction_above(se_samples, 2.0);
  se_p01_bps_hz = percentile(se_samples, 0.01);
  sinr_p01_db = percentile(sinr_samples, 0.01);
  sinr_p50_db = percentile(sinr_samples, 0.50);
  // Cells whose SE is exactly zero would make the harmonic mean undefined;
  // they always fall inside the excluded worst 1% unless they dominate.
  try {
    harmonic_mean_99_mbps = harmonic_mean_excluding_worst(throughput_samples, 0.01);
  } catch (const DomainError&) {
    harmonic_mean_99_mbps = 0.0;
  }
}

}  // namespace mgb
