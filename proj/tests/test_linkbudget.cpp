#include <doctest.h>

#include <cmath>
#include <limits>

#include "mgb/errors.hpp"
#include "mgb/linkbudget.hpp"

using namespace mgb;

TEST_CASE("per-stream SNR of the cell-edge columns") {
  const auto in = default_table_inputs();
  // Oracle: the printed rows added by hand, e.g. 55.14 - 139.26 + 21.11 - 3 + 82.01.
  CHECK(std::abs(snr_per_stream_db(in[0]) - (55.14 - 139.26 + 21.11 - 3.0 + 82.01)) < 0.1);
  CHECK(std::abs(snr_per_stream_db(in[1]) - (43.10 - 139.26 + 27.13 - 3.0 + 82.01)) < 0.1);
}

TEST_CASE("zero-gain link at the noise floor has 0 dB SNR") {
  LinkBudgetInput in;
  ArrayConfig iso;
  iso.rows = iso.cols = iso.n_pa = iso.subarray_rows = 1;
  iso.element_gain_db = 0.0;
  in.tx_array = in.rx_array = iso;
  in.noise.rx_impl_loss_db = 0.0;
  in.noise.noise_figure_db = 0.0;
  in.distance_m = 100.0;
  in.bandwidth_hz = 1e6;
  // EIRP = noise + path loss.
  in.tx_array.pa_power_dbm = noise_power_dbm(in.noise, in.bandwidth_hz) + path_loss_db(in.path_loss, 100.0);
  CHECK(snr_per_stream_db(in) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spectral efficiency") {
  CHECK(spectral_efficiency_bps_hz(-std::numeric_limits<double>::infinity(), 1) == 0.0);
  CHECK(spectral_efficiency_bps_hz(-400.0, 4) == doctest::Approx(0.0));
  CHECK(spectral_efficiency_bps_hz(0.0, 1) == doctest::Approx(1.0));
  CHECK(spectral_efficiency_bps_hz(30.0, 1, 5.0) == doctest::Approx(5.0));
  CHECK(spectral_efficiency_bps_hz(30.0, 4, 5.0) == doctest::Approx(20.0));
  CHECK_THROWS_AS(spectral_efficiency_bps_hz(10.0, 0), DomainError);
  double prev = 0.0;
  for (double s = -20.0; s < 40.0; s += 0.5) {
    const double se = spectral_efficiency_bps_hz(s, 1);
    CHECK(se > prev);
    CHECK(spectral_efficiency_bps_hz(s, 1) == spectral_efficiency_bps_hz(s, 1, std::nullopt));
    prev = se;
  }
}

TEST_CASE("reference link budget table") {
  const auto rows = build_table();
  REQUIRE(rows.size() == 4);
  const double eirp[] = {55.14, 43.10, 55.14, 43.10};
  const double pl[] = {139.26, 139.26, 131.86, 131.86};
  const double rx[] = {-84.12, -96.16, -76.71, -88.75};
  const double se[] = {5.34, 3.44, 15.45, 15.45};
  const double se_tol[] = {0.05, 0.05, 0.15, 0.15};
  const double tput[] = {2668, 1720, 7725, 7725};
  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(std::abs(rows[i].eirp_dbm - eirp[i]) <= 0.05);
    CHECK(std::abs(rows[i].path_loss_db - pl[i]) <= 0.005);
    CHECK(std::abs(rows[i].received_power_dbm - rx[i]) <= 0.05);
    CHECK(std::abs(rows[i].se_total_bps_hz - se[i]) <= se_tol[i]);
    CHECK(std::abs(rows[i].throughput_mbps - tput[i]) <= 0.01 * tput[i]);
    CHECK(rows[i].throughput_mbps == doctest::Approx(rows[i].se_total_bps_hz * 500.0));
  }
}

TEST_CASE("SNR falls with distance and one stream equals the single-stream SE") {
  auto in = default_table_inputs()[0];
  double prev = std::numeric_limits<double>::infinity();
  for (double d = 50.0; d < 5000.0; d *= 1.2) {
    in.distance_m = d;
    const double s = snr_per_stream_db(in);
    CHECK(s < prev);
    prev = s;
    CHECK(evaluate(in).se_total_bps_hz == spectral_efficiency_bps_hz(s, 1));
  }
}

TEST_CASE("invalid inputs") {
  auto in = default_table_inputs()[0];
  in.distance_m = 0.0;
  CHECK_THROWS_AS(evaluate(in), ConfigError);
  in = default_table_inputs()[0];
  in.k_streams = 0;
  CHECK_THROWS_AS(evaluate(in), ConfigError);
}

TEST_CASE("rendering") {
  const auto rows = build_table();
  const auto text = render_table_text(rows);
  CHECK(text.find("139.26") != std::string::npos);
  CHECK(text.find("-84.12") != std::string::npos);
  CHECK(text.find("-96.16") != std::string::npos);
  const auto csv = render_table_csv(rows);
  CHECK(csv.rfind("label,direction,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
