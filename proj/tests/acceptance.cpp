// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "mgb/antenna.hpp"
#include "mgb/linkbudget.hpp"
#include "mgb/metrics.hpp"
#include "mgb/simulator.hpp"
#include "mgb/statmux.hpp"
#include "mgb/topology.hpp"

using namespace mgb;

namespace {

int g_failed = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("%s  %-4s %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }
bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = build_table();
  const double eirp[] = {55.14, 43.10, 55.14, 43.10};
  const double pl[] = {139.26, 139.26, 131.86, 131.86};
  const double rx[] = {-84.12, -96.16, -76.71, -88.75};
  const double se[] = {5.34, 3.44, 15.45, 15.45};
  const double se_tol[] = {0.05, 0.05, 0.15, 0.15};
  const double tput[] = {2668, 1720, 7725, 7725};
  bool ok = rows.size() == 4;
  double worst_se = 0.0;
  for (std::size_t i = 0; ok && i < 4; ++i) {
    ok = within(rows[i].eirp_dbm, eirp[i], 0.05) && within(rows[i].path_loss_db, pl[i], 0.005) &&
         within(rows[i].received_power_dbm, rx[i], 0.05) && within(rows[i].se_total_bps_hz, se[i], se_tol[i]) &&
         within(rows[i].throughput_mbps, tput[i], 0.01 * tput[i]);
    worst_se = std::max(worst_se, std::abs(rows[i].se_total_bps_hz - se[i]));
  }
  const double ms = 1e3 * seconds_since(t0);
  report("1", ok && ms < 100.0,
         fmt("link budget table: EIRP %.2f/%.2f, PL %.2f/%.2f, Rx %.2f/%.2f/%.2f/%.2f, SE %.2f/%.2f/%.2f/%.2f, "
             "max |dSE| %.3f, %.2f ms",
             rows[0].eirp_dbm, rows[1].eirp_dbm, rows[0].path_loss_db, rows[2].path_loss_db,
             rows[0].received_power_dbm, rows[1].received_power_dbm, rows[2].received_power_dbm,
             rows[3].received_power_dbm, rows[0].se_total_bps_hz, rows[1].se_total_bps_hz, rows[2].se_total_bps_hz,
             rows[3].se_total_bps_hz, worst_se, ms));
}

void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const double h1 = headroom_factor(1, 0.99);
  const double h32 = headroom_factor(32, 0.99);
  bool ok = within(h1, 4.605, 0.005) && within(h32, 1.46, 0.01);
  double worst = 0.0;
  for (int n : {1, 2, 8, 32, 128}) {
    const double a = headroom_factor(n, 0.99);
    const double mc = headroom_factor_mc(n, 0.99, 1'000'000, 2024 + static_cast<std::uint64_t>(n), workers());
    worst = std::max(worst, std::abs(mc - a) / a);
  }
  ok = ok && worst <= 0.01;
  const double s = seconds_since(t0);
  report("2", ok && s < 10.0,
         fmt("headroom n=1 %.4f, n=32 %.4f, worst MC rel. diff %.4f%% (1e6 samples), %.2f s", h1, h32, 100 * worst, s));
}

struct CampaignCheck {
  bool sinr_le_snr = true;
  bool hub_identity = true;
  std::size_t links = 0;
};

MetricsBundle campaign(int per_sector, CampaignCheck& chk, double& secs) {
  SimConfig cfg;
  cfg.per_sector_cells = per_sector;
  cfg.n_drops = 10000;
  const auto t0 = std::chrono::steady_clock::now();
  auto m = run_campaign(cfg, workers(), [&](const DropResult& r) {
    for (const auto& c : r.cells) {
      chk.sinr_le_snr = chk.sinr_le_snr && c.sinr_db <= c.snr_db;
      ++chk.links;
    }
    const std::size_t sectors = static_cast<std::size_t>(cfg.sectors_per_hub);
    for (std::size_t h = 0; h < r.hub_throughput_gbps.size(); ++h) {
      double sum = 0.0;
      for (std::size_t s = 0; s < sectors; ++s) sum += r.sector_se_bps_hz[h * sectors + s];
      const double expect = sum * cfg.bandwidth_hz / 1e9;
      chk.hub_identity = chk.hub_identity && std::abs(r.hub_throughput_gbps[h] - expect) <= 1e-12 * expect;
    }
  });
  secs = seconds_since(t0);
  return m;
}

// Returns the two campaigns for the property criteria that reuse them.
std::pair<MetricsBundle, MetricsBundle> criterion_3(CampaignCheck& chk) {
  double s1 = 0.0, s32 = 0.0;
  auto m1 = campaign(1, chk, s1);
  auto m32 = campaign(32, chk, s32);
  const bool single = in_range(m1.mean_cell_se_bps_hz, 4.0, 5.5) && m1.frac_above_2bpshz >= 0.97;
  const bool grouped = in_range(m32.mean_sector_se_bps_hz, 6.3, 8.6) && in_range(m32.hub_throughput_gbps, 9.5, 12.9) &&
                       in_range(m32.harmonic_mean_99_mbps, 85.0, 130.0);
  report("3", single && grouped && s1 < 60.0 && s32 < 60.0,
         fmt("1 cell/sector: mean SE %.3f [4.0,5.5], frac SE>2 %.4f [>=0.97], %.1f s; "
             "32 cells/sector: sector SE %.3f [6.3,8.6], hub %.3f Gbps [9.5,12.9], hm99 %.1f Mbps [85,130], %.1f s",
             m1.mean_cell_se_bps_hz, m1.frac_above_2bpshz, s1, m32.mean_sector_se_bps_hz, m32.hub_throughput_gbps,
             m32.harmonic_mean_99_mbps, s32));
  return {std::move(m1), std::move(m32)};
}

constexpr double kDeg = std::numbers::pi / 180.0;

double brute_force_af(const ArrayConfig& cfg, Direction steer, Direction eval) {
  const double k = 2.0 * std::numbers::pi * cfg.element_spacing_wavelengths;
  const double ey = std::cos(eval.elevation_deg * kDeg) * std::sin(eval.azimuth_deg * kDeg);
  const double ez = std::sin(eval.elevation_deg * kDeg);
  const double sy = std::sin(steer.azimuth_deg * kDeg);
  std::complex<double> sum = 0.0;
  for (int r = 0; r < cfg.rows; ++r)
    for (int c = 0; c < cfg.cols; ++c) sum += std::polar(1.0, k * (c * (ey - sy) + r * ez));
  return std::norm(sum) / cfg.elements();
}

ArrayConfig square(int side) {
  ArrayConfig c;
  c.rows = c.cols = side;
  c.n_pa = 1;
  c.subarray_rows = side >= 4 ? 4 : 1;
  return c;
}

void criterion_4b() {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> az(-90.0, 90.0), any(-180.0, 180.0), el(-45.0, 45.0);
  const SectorPattern p;
  bool ok = true;
  double worst = -1e9;
  for (const auto& cfg : {ArrayConfig::hub_default(), ArrayConfig::small_cell_default()}) {
    ok = ok && beam_gain_db(cfg, p, {}, {}) == array_gain_db(cfg);
    for (int i = 0; i < 20000; ++i) {
      const double g = beam_gain_db(cfg, p, {az(gen), 0.0}, {any(gen), el(gen)}) - array_gain_db(cfg);
      worst = std::max(worst, g);
    }
  }
  ok = ok && worst <= 1e-9;
  report("4b", ok, fmt("beam gain <= array gain over 40000 random pairs (max excess %.3g dB), equal at boresight", worst));
}

void criterion_4c() {
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> az(-89.0, 89.0), any(-180.0, 180.0), el(-30.0, 30.0);
  double worst = 0.0;
  for (int side : {2, 8, 16}) {
    const auto cfg = square(side);
    for (int i = 0; i < 100; ++i) {
      const Direction steer{az(gen), 0.0}, eval{any(gen), el(gen)};
      const double d = 10.0 * std::log10(array_factor_power(cfg, steer, eval)) -
                       10.0 * std::log10(brute_force_af(cfg, steer, eval));
      worst = std::max(worst, std::abs(d));
    }
  }
  report("4c", worst < 1e-9, fmt("closed form vs phasor sum, N in {4,64,256}, 100 cases each: max %.3g dB", worst));
}

void criterion_4d() {
  double worst = 0.0;
  for (int per_sector : {1, 4}) {
    SimConfig cfg;
    cfg.interference = false;
    cfg.per_sector_cells = per_sector;
    const Simulator sim(cfg);
    SmallCellDrop d;
    const double ds[] = {120.0, 333.0, 707.0, 990.0};
    for (int s = 0; s < 3; ++s)
      for (int i = 0; i < per_sector; ++i) {
        const double r = ds[(i + s) % 4], a = sim.layout().sector_boresights_deg[static_cast<std::size_t>(s)] * kDeg;
        d.positions.push_back({r * std::cos(a), r * std::sin(a)});
        d.serving_hub.push_back(0);
        d.serving_sector.push_back(s);
      }
    for (const auto& c : sim.evaluate(d).cells) {
      auto in = default_table_inputs()[0];
      in.distance_m = c.distance_m;
      in.k_streams = per_sector;
      worst = std::max(worst, std::abs(c.se_bps_hz - evaluate(in).se_total_bps_hz / per_sector));
    }
  }
  report("4d", worst <= 1e-6, fmt("interference-free boresight SE vs link budget: max |diff| %.3g bps/Hz", worst));
}

void criterion_4f() {
  SimConfig cfg;
  cfg.per_sector_cells = 32;
  cfg.n_drops = 300;
  cfg.master_seed = 99;
  std::string a, b;
  const auto m1 = run_campaign(cfg, 1, [&](const DropResult& r) { a += drop_records_csv(r); });
  const auto m4 = run_campaign(cfg, 4, [&](const DropResult& r) { b += drop_records_csv(r); });
  const bool ok = a == b && cdf_csv(empirical_cdf(m1.se_samples)) == cdf_csv(empirical_cdf(m4.se_samples)) &&
                  m1.hub_throughput_gbps == m4.hub_throughput_gbps &&
                  m1.harmonic_mean_99_mbps == m4.harmonic_mean_99_mbps;
  report("4f", ok, fmt("300 drops, 1 vs 4 workers: per-drop records %zu bytes, identical=%s", a.size(), ok ? "yes" : "no"));
}

bool cdf_monotone(std::span<const double> samples) {
  const auto c = empirical_cdf(samples);
  for (std::size_t i = 1; i < c.size(); ++i)
    if (!(c[i].value > c[i - 1].value && c[i].prob > c[i - 1].prob)) return false;
  return !c.empty() && c.back().prob == 1.0;
}

void criterion_4g(const MetricsBundle& m1, const MetricsBundle& m32) {
  bool ok = true;
  for (const auto* m : {&m1, &m32}) {
    ok = ok && m->harmonic_mean_99_mbps <= arithmetic_mean(m->throughput_samples);
    ok = ok && cdf_monotone(m->sinr_samples) && cdf_monotone(m->se_samples) && cdf_monotone(m->throughput_samples);
  }
  report("4g", ok,
         fmt("harmonic <= arithmetic (%.1f <= %.1f, %.1f <= %.1f Mbps); SINR/SE/throughput CDFs strictly increasing",
             m1.harmonic_mean_99_mbps, m1.mean_throughput_mbps, m32.harmonic_mean_99_mbps, m32.mean_throughput_mbps));
}

void criterion_4h() {
  constexpr double R = 1000.0, kMin = 100.0;
  constexpr int kGrid = 10, kSub = 200;
  const double half_h = 0.5 * std::numbers::sqrt3 * R;
  const double wx = 2 * R / kGrid, wy = 2 * half_h / kGrid;
  std::vector<double> area(kGrid * kGrid, 0.0);
  double total = 0.0;
  for (int gx = 0; gx < kGrid; ++gx)
    for (int gy = 0; gy < kGrid; ++gy) {
      for (int i = 0; i < kSub; ++i)
        for (int j = 0; j < kSub; ++j) {
          const Vec2 p{-R + wx * (gx + (i + 0.5) / kSub), -half_h + wy * (gy + (j + 0.5) / kSub)};
          if (in_coverage_hexagon(p, R) && std::hypot(p.x, p.y) >= kMin) area[gx * kGrid + gy] += 1.0;
        }
      total += area[gx * kGrid + gy];
    }
  const auto layout = build_layout(R, 0);
  std::vector<double> obs(kGrid * kGrid, 0.0);
  std::size_t n = 0;
  for (std::uint64_t seed = 1000; n < 200000; ++seed)
    for (const auto& p : drop_small_cells(layout, 1, seed).positions) {
      obs[std::min(kGrid - 1, static_cast<int>((p.x + R) / wx)) * kGrid +
          std::min(kGrid - 1, static_cast<int>((p.y + half_h) / wy))] += 1.0;
      ++n;
    }
  double chi2 = 0.0, po = 0.0, pe = 0.0;
  int bins = 0;
  for (int b = 0; b < kGrid * kGrid; ++b) {
    const double e = n * area[b] / total;
    if (e < 5.0) {
      po += obs[b];
      pe += e;
      continue;
    }
    chi2 += (obs[b] - e) * (obs[b] - e) / e;
    ++bins;
  }
  if (pe >= 5.0) {
    chi2 += (po - pe) * (po - pe) / pe;
    ++bins;
  }
  const double crit = boost::math::quantile(boost::math::chi_squared(bins - 1), 0.99);
  report("4h", chi2 < crit, fmt("drop uniformity: chi2 %.1f < %.1f (%d bins, %zu points, 1%% level)", chi2, crit, bins, n));
}

void criterion_4i() {
  const auto l = build_layout(1000.0, 2);
  double lo = 1e18, hi = 0.0;
  for (std::size_t i = 0; i < l.hub_count(); ++i) {
    double nearest = 1e18;
    for (std::size_t j = 0; j < l.hub_count(); ++j)
      if (i != j) nearest = std::min(nearest, distance(l.hub_positions[i], l.hub_positions[j]));
    lo = std::min(lo, nearest);
    hi = std::max(hi, nearest);
  }
  const bool ok = l.hub_count() == 19 && within(lo, 1732.05, 0.005) && within(hi, 1732.05, 0.005);
  report("4i", ok, fmt("%zu hubs, nearest-neighbour spacing %.4f..%.4f m", l.hub_count(), lo, hi));
}

}  // namespace

int main() {
  std::printf("mgb acceptance (%d worker threads)\n", workers());
  criterion_1();
  criterion_2();
  CampaignCheck chk;
  const auto [m1, m32] = criterion_3(chk);
  report("4a", chk.sinr_le_snr, fmt("SINR <= SNR on all %zu links of both 10000-drop campaigns", chk.links));
  criterion_4b();
  criterion_4c();
  criterion_4d();
  const double identity = 3.0 * m32.mean_sector_se_bps_hz * 0.5;
  report("4e", chk.hub_identity && std::abs(m32.hub_throughput_gbps - identity) <= 1e-9 * identity,
         fmt("hub = 3 x sector SE x 0.5 GHz: %.6f vs %.6f Gbps, per-drop identity held", m32.hub_throughput_gbps,
             identity));
  criterion_4f();
  criterion_4g(m1, m32);
  criterion_4h();
  criterion_4i();
  std::printf("%d criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
