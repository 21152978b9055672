#ifndef MGB_LINKBUDGET_HPP
#define MGB_LINKBUDGET_HPP

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mgb/antenna.hpp"
#include "mgb/propagation.hpp"

namespace mgb {

enum class LinkDirection { kDownlink, kUplink };

const char* to_string(LinkDirection d);

// One hub <-> small-cell link. Downlink transmits from the hub array,
// uplink from the small-cell array; the hub is always the side that splits
// its aperture across multiple streams.
struct LinkBudgetInput {
  std::string label;
  LinkDirection direction = LinkDirection::kDownlink;
  ArrayConfig tx_array = ArrayConfig::hub_default();
  ArrayConfig rx_array = ArrayConfig::small_cell_default();
  double distance_m = 1000.0;
  int k_streams = 1;
  double bandwidth_hz = 500e6;
  PathLossModel path_loss;
  NoiseModel noise;
  std::optional<double> se_cap_bps_hz;  // per-stream ceiling, unset = Shannon

  void validate() const;
};

struct LinkBudgetRow {
  std::string label;
  LinkDirection direction = LinkDirection::kDownlink;
  int k_streams = 1;
  double distance_m = 0.0;
  double bandwidth_hz = 0.0;
  double total_power_dbm = 0.0;
  double eirp_dbm = 0.0;
  double path_loss_db = 0.0;
  double received_power_dbm = 0.0;  // EIRP - path loss, no receive gain
  double noise_figure_db = 0.0;
  double rx_impl_loss_db = 0.0;
  double snr_per_stream_db = 0.0;
  double se_total_bps_hz = 0.0;
  double throughput_mbps = 0.0;
};

// Partition penalty applied to a link of the given direction.
double link_partition_penalty_db(LinkDirection direction, int k_streams);

double snr_per_stream_db(const LinkBudgetInput& in);

// k * log2(1 + snr), each stream optionally capped at `cap` bps/Hz.
double spectral_efficiency_bps_hz(double snr_per_stream_db, int k_streams,
                                  std::optional<double> cap = std::nullopt);

LinkBudgetRow evaluate(const LinkBudgetInput& in);

// Downlink/uplink at the cell edge (1 km, one stream) and with four
// streams at the median distance (707 m).
inline const double kMedianDistanceM = 500.0 * std::numbers::sqrt2;
std::vector<LinkBudgetInput> default_table_inputs();
std::vector<LinkBudgetRow> build_table(const std::vector<LinkBudgetInput>& inputs);
std::vector<LinkBudgetRow> build_table();

// Aligned text with one column per row; values rounded to 2 decimals.
std::string render_table_text(const std::vector<LinkBudgetRow>& rows);
std::string render_table_csv(const std::vector<LinkBudgetRow>& rows);

}  // namespace mgb

#endif
