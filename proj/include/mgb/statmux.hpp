#ifndef MGB_STATMUX_HPP
#define MGB_STATMUX_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mgb {

// Backhaul capacity needed by n small cells whose instantaneous rates are
// i.i.d. exponential, such that the aggregate demand is met a fraction
// `availability` of the time with no buffering.
struct HeadroomQuery {
  int n_cells = 32;
  double availability = 0.99;
  double mean_rate_mbps = 100.0;

  void validate() const;
};

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

// p-quantile of Gamma(shape, 1) by bracketing and bisection on P.
double gamma_quantile(double shape, double p);

// Ratio of the availability-quantile of the aggregate rate to the mean
// aggregate rate: Gamma(n,1) quantile / n. For n == 1 this is -ln(1-p).
double headroom_factor(int n, double availability);

// Monte Carlo estimate of headroom_factor from `samples` sample means.
// Work is split into a fixed set of chunks with derived seeds, so the
// result depends only on (n, availability, samples, seed), never on
// `workers`.
double headroom_factor_mc(int n, double availability, std::int64_t samples, std::uint64_t seed,
                          int workers = 1);

double required_capacity_mbps(const HeadroomQuery& q);

// Variant in which each cell's rate is clipped at `peak_rate_mbps` before
// aggregation. Monte Carlo; reported as a secondary figure only.
double required_capacity_clipped_mbps(const HeadroomQuery& q, double peak_rate_mbps, std::int64_t samples,
                                      std::uint64_t seed);

std::vector<std::pair<int, double>> headroom_curve(double availability, std::span<const int> n_values);

}  // namespace mgb

#endif
