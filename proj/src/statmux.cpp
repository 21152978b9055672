#include "mgb/statmux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "mgb/errors.hpp"
#include "mgb/rng.hpp"

namespace mgb {

namespace {

constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;
constexpr std::int64_t kMcChunks = 64;

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("availability must lie strictly between 0 and 1");
}

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by the modified Lentz continued fraction.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Nearest-rank quantile, in place.
double nearest_rank(std::vector<double>& v, double p) {
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
  rank = std::clamp<std::size_t>(rank, 1, v.size());
  auto it = v.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(v.begin(), it, v.end());
  return *it;
}

// Sample means of n unit exponentials (optionally clipped at `clip`),
// filled chunk by chunk from per-chunk derived streams.
std::vector<double> sample_means(int n, std::int64_t samples, std::uint64_t seed, double clip, int workers) {
  std::vector<double> out(static_cast<std::size_t>(samples));
  const std::int64_t per_chunk = (samples + kMcChunks - 1) / kMcChunks;
  auto run_chunk = [&](std::int64_t c) {
    const std::int64_t begin = c * per_chunk;
    const std::int64_t end = std::min(samples, begin + per_chunk);
    Rng rng(seed, static_cast<std::uint64_t>(c));
    for (std::int64_t i = begin; i < end; ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += std::min(rng.exponential(), clip);
      out[static_cast<std::size_t>(i)] = s / n;
    }
  };
  workers = std::clamp<int>(workers, 1, static_cast<int>(kMcChunks));
  if (workers == 1) {
    for (std::int64_t c = 0; c < kMcChunks; ++c) run_chunk(c);
    return out;
  }
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::int64_t c = w; c < kMcChunks; c += workers) run_chunk(c);
    });
  pool.clear();
  return out;
}

}  // namespace

void HeadroomQuery::validate() const {
  if (n_cells < 1) throw ConfigError("cell count must be >= 1", "statmux.cells");
  if (!(availability > 0.0 && availability < 1.0))
    throw ConfigError("availability must lie strictly between 0 and 1", "statmux.availability");
  if (!(mean_rate_mbps >= 0.0)) throw ConfigError("mean rate must be >= 0", "statmux.mean_rate_mbps");
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized_gamma_p: shape must be > 0");
  if (x < 0.0 || std::isnan(x)) throw DomainError("regularized_gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double gamma_quantile(double shape, double p) {
  check_probability(p);
  if (!(shape > 0.0)) throw DomainError("gamma_quantile: shape must be > 0");
  double lo = 0.0;
  double hi = std::max(1.0, shape);
  while (regularized_gamma_p(shape, hi) < p) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_gamma_p(shape, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double headroom_factor(int n, double availability) {
  check_probability(availability);
  if (n < 1) throw DomainError("headroom_factor: n must be >= 1");
  if (n == 1) return -std::log1p(-availability);
  return gamma_quantile(n, availability) / n;
}

double headroom_factor_mc(int n, double availability, std::int64_t samples, std::uint64_t seed, int workers) {
  check_probability(availability);
  if (n < 1) throw DomainError("headroom_factor_mc: n must be >= 1");
  if (samples < 10000) throw DomainError("headroom_factor_mc: need at least 10^4 samples");
  auto means = sample_means(n, samples, seed, std::numeric_limits<double>::infinity(), workers);
  return nearest_rank(means, availability);
}

double required_capacity_mbps(const HeadroomQuery& q) {
  q.validate();
  return q.n_cells * q.mean_rate_mbps * headroom_factor(q.n_cells, q.availability);
}

double required_capacity_clipped_mbps(const HeadroomQuery& q, double peak_rate_mbps, std::int64_t samples,
                                      std::uint64_t seed) {
  q.validate();
  if (!(peak_rate_mbps > 0.0)) throw ConfigError("peak rate must be > 0", "statmux.peak_rate_mbps");
  if (samples < 10000) throw DomainError("required_capacity_clipped_mbps: need at least 10^4 samples");
  if (q.mean_rate_mbps == 0.0) return 0.0;
  auto means = sample_means(q.n_cells, samples, seed, peak_rate_mbps / q.mean_rate_mbps, 1);
  return q.n_cells * q.mean_rate_mbps * nearest_rank(means, q.availability);
}

std::vector<std::pair<int, double>> headroom_curve(double availability, std::span<const int> n_values) {
  std::vector<std::pair<int, double>> out;
  out.reserve(n_values.size());
  for (int n : n_values) out.emplace_back(n, headroom_factor(n, availability));
  return out;
}

}  // namespace mgb
