#include "mgb/linkbudget.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "mgb/errors.hpp"

namespace mgb {

const char* to_string(LinkDirection d) { return d == LinkDirection::kDownlink ? "downlink" : "uplink"; }

void LinkBudgetInput::validate() const {
  if (!(distance_m > 0.0)) throw ConfigError("distance must be > 0", "linkbudget.distance_m");
  if (k_streams < 1) throw ConfigError("stream count must be >= 1", "linkbudget.k_streams");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be > 0", "linkbudget.bandwidth_hz");
  if (se_cap_bps_hz && !(*se_cap_bps_hz > 0.0)) throw ConfigError("SE cap must be > 0", "linkbudget.se_cap_bps_hz");
  tx_array.validate();
  rx_array.validate();
  path_loss.validate();
  noise.validate();
}

double link_partition_penalty_db(LinkDirection direction, int k_streams) {
  // Downlink: the hub transmitter divides both power and aperture.
  // Uplink: each small cell keeps its full power; only the hub receive
  // aperture is divided.
  return direction == LinkDirection::kDownlink ? stream_partition_penalty_db(k_streams, true, true)
                                               : stream_partition_penalty_db(k_streams, false, true);
}

double snr_per_stream_db(const LinkBudgetInput& in) {
  return eirp_dbm(in.tx_array) - path_loss_db(in.path_loss, in.distance_m) + array_gain_db(in.rx_array) -
         in.noise.rx_impl_loss_db - noise_power_dbm(in.noise, in.bandwidth_hz) -
         link_partition_penalty_db(in.direction, in.k_streams);
}

double spectral_efficiency_bps_hz(double snr_db, int k_streams, std::optional<double> cap) {
  if (k_streams < 1) throw DomainError("spectral_efficiency_bps_hz: k_streams must be >= 1");
  double per_stream = std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
  if (cap) per_stream = std::min(per_stream, *cap);
  return k_streams * per_stream;
}

LinkBudgetRow evaluate(const LinkBudgetInput& in) {
  in.validate();
  LinkBudgetRow r;
  r.label = in.label;
  r.direction = in.direction;
  r.k_streams = in.k_streams;
  r.distance_m = in.distance_m;
  r.bandwidth_hz = in.bandwidth_hz;
  r.total_power_dbm = total_tx_power_dbm(in.tx_array);
  r.eirp_dbm = eirp_dbm(in.tx_array);
  r.path_loss_db = path_loss_db(in.path_loss, in.distance_m);
  r.received_power_dbm = r.eirp_dbm - r.path_loss_db;
  r.noise_figure_db = in.noise.noise_figure_db;
  r.rx_impl_loss_db = in.noise.rx_impl_loss_db;
  r.snr_per_stream_db = snr_per_stream_db(in);
  r.se_total_bps_hz = spectral_efficiency_bps_hz(r.snr_per_stream_db, in.k_streams, in.se_cap_bps_hz);
  r.throughput_mbps = r.se_total_bps_hz * in.bandwidth_hz / 1e6;
  return r;
}

std::vector<LinkBudgetInput> default_table_inputs() {
  const auto hub = ArrayConfig::hub_default();
  const auto cell = ArrayConfig::small_cell_default();
  std::vector<LinkBudgetInput> v(4);
  v[0].label = "Downlink cell edge";
  v[0].direction = LinkDirection::kDownlink;
  v[0].tx_array = hub;
  v[0].rx_array = cell;
  v[1].label = "Uplink cell edge";
  v[1].direction = LinkDirection::kUplink;
  v[1].tx_array = cell;
  v[1].rx_array = hub;
  v[2] = v[0];
  v[2].label = "Downlink 4-Stream";
  v[3] = v[1];
  v[3].label = "Uplink 4-Stream";
  for (int i : {2, 3}) {
    v[i].distance_m = kMedianDistanceM;
    v[i].k_streams = 4;
  }
  return v;
}

std::vector<LinkBudgetRow> build_table(const std::vector<LinkBudgetInput>& inputs) {
  std::vector<LinkBudgetRow> rows;
  rows.reserve(inputs.size());
  for (const auto& in : inputs) rows.push_back(evaluate(in));
  return rows;
}

std::vector<LinkBudgetRow> build_table() { return build_table(default_table_inputs()); }

namespace {

struct Field {
  const char* name;
  const char* csv;
  double (*get)(const LinkBudgetRow&);
  int precision;
};

const Field kFields[] = {
    {"Total power (dBm)", "total_power_dbm", [](const LinkBudgetRow& r) { return r.total_power_dbm; }, 2},
    {"EIRP (dBm)", "eirp_dbm", [](const LinkBudgetRow& r) { return r.eirp_dbm; }, 2},
    {"Distance (m)", "distance_m", [](const LinkBudgetRow& r) { return r.distance_m; }, 0},
    {"Total path loss (dB)", "path_loss_db", [](const LinkBudgetRow& r) { return r.path_loss_db; }, 2},
    {"Received power (dBm)", "received_power_dbm", [](const LinkBudgetRow& r) { return r.received_power_dbm; }, 2},
    {"Bandwidth (MHz)", "bandwidth_mhz", [](const LinkBudgetRow& r) { return r.bandwidth_hz / 1e6; }, 0},
    {"Noise Figure (dB)", "noise_figure_db", [](const LinkBudgetRow& r) { return r.noise_figure_db; }, 2},
    {"# of MIMO streams", "k_streams", [](const LinkBudgetRow& r) { return double(r.k_streams); }, 0},
    {"Receiver loss (dB)", "rx_impl_loss_db", [](const LinkBudgetRow& r) { return r.rx_impl_loss_db; }, 2},
    {"SNR per stream (dB)", "snr_per_stream_db", [](const LinkBudgetRow& r) { return r.snr_per_stream_db; }, 2},
    {"Spectral efficiency", "se_bps_hz", [](const LinkBudgetRow& r) { return r.se_total_bps_hz; }, 2},
    {"Throughput (Mbps)", "throughput_mbps", [](const LinkBudgetRow& r) { return r.throughput_mbps; }, 0},
};

std::string fmt(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

std::string render_table_text(const std::vector<LinkBudgetRow>& rows) {
  constexpr int kNameWidth = 24;
  constexpr int kColWidth = 20;
  std::ostringstream os;
  os << std::left << std::setw(kNameWidth) << "39 GHz MGB link budget";
  for (const auto& r : rows) os << std::right << std::setw(kColWidth) << r.label;
  os << '\n';
  for (const auto& f : kFields) {
    os << std::left << std::setw(kNameWidth) << f.name;
    for (const auto& r : rows) os << std::right << std::setw(kColWidth) << fmt(f.get(r), f.precision);
    os << '\n';
  }
  return os.str();
}

std::string render_table_csv(const std::vector<LinkBudgetRow>& rows) {
  std::ostringstream os;
  os << "label,direction";
  for (const auto& f : kFields) os << ',' << f.csv;
  os << '\n';
  for (const auto& r : rows) {
    os << r.label << ',' << to_string(r.direction);
    for (const auto& f : kFields) os << ',' << fmt(f.get(r), f.csv == std::string("k_streams") ? 0 : 4);
    os << '\n';
  }
  return os.str();
}

}  // namespace mgb
