#ifndef MGB_SIMULATOR_HPP
#define MGB_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mgb/antenna.hpp"
#include "mgb/metrics.hpp"
#include "mgb/propagation.hpp"
#include "mgb/topology.hpp"

namespace mgb {

enum class MeasurementScope { kCenterHub, kAllHubs };

const char* to_string(MeasurementScope s);
MeasurementScope scope_from_string(const std::string& s);

// Geometric: the tiling hub serves, sector by bearing. MaxPower: each cell
// re-associates to the (hub, sector) with the strongest boresight-steered
// received power; sector loads then vary and the last group may be short.
enum class Association { kGeometric, kMaxPower };

const char* to_string(Association a);
Association association_from_string(const std::string& s);

// Downlink system-level campaign parameters. Defaults describe the 39 GHz,
// 19-hub, 3-sector deployment with one small cell per sector.
struct SimConfig {
  double hub_radius_m = 1000.0;
  int rings = 2;
  int sectors_per_hub = 3;
  double min_hub_cell_distance_m = 100.0;

  ArrayConfig hub_array = ArrayConfig::hub_default();
  ArrayConfig cell_array = ArrayConfig::small_cell_default();
  SectorPattern hub_pattern;
  SectorPattern cell_pattern;
  PathLossModel path_loss;
  NoiseModel noise;
  double bandwidth_hz = 500e6;

  int per_sector_cells = 1;
  int streams_per_slot = 4;
  std::int64_t n_drops = 10000;
  MeasurementScope scope = MeasurementScope::kCenterHub;
  Association association = Association::kGeometric;
  std::uint64_t master_seed = 1;
  bool interference = true;
  std::optional<double> se_cap_bps_hz;  // per-stream ceiling, unset = Shannon

  // Streams actually transmitted per sector per slot.
  int active_streams() const;
  int groups_per_sector() const;
  void validate() const;
};

struct CellRecord {
  int cell_id = 0;
  int hub = 0;
  int sector = 0;
  int group = 0;
  double distance_m = 0.0;
  double snr_db = 0.0;
  double sinr_db = 0.0;
  double se_bps_hz = 0.0;  // per stream
  double airtime = 0.0;
  double throughput_mbps = 0.0;
};

struct DropResult {
  std::int64_t drop_index = 0;
  std::uint64_t seed = 0;
  int groups_per_sector = 0;
  std::vector<CellRecord> cells;  // measured cells only
  std::vector<double> sector_se_bps_hz;  // measured sectors: sum of stream SE per slot, slot-averaged
  std::vector<double> hub_throughput_gbps;  // measured hubs
};

// Linear-domain S / (sum I + N). All powers in dBm.
double compute_sinr_db(double signal_dbm, std::span<const double> interference_dbm, double noise_dbm);

// Partition of a sector's cells into groups of `group_size` that are served
// together. Cells are ordered by azimuth as seen from the hub and dealt
// round-robin into groups, which spreads every group across the sector.
// Returns indices into `azimuths_deg`; group g holds the g-th smallest
// azimuth. Throws ConfigError if group_size does not divide the count.
std::vector<std::vector<int>> schedule_groups(std::span<const double> azimuths_deg, int group_size);

// Smallest pairwise azimuth separation inside any group.
double min_group_separation_deg(std::span<const double> azimuths_deg, const std::vector<std::vector<int>>& groups);

class Simulator {
 public:
  explicit Simulator(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  const NetworkLayout& layout() const { return layout_; }

  std::uint64_t drop_seed(std::int64_t drop_index) const;

  // Drop cells with the drop's derived seed and evaluate them.
  DropResult run_drop(std::int64_t drop_index) const;

  // Schedule and evaluate an explicit set of cells.
  DropResult evaluate(const SmallCellDrop& drop, std::int64_t drop_index = 0) const;

  // Rewrites serving hub/sector by strongest received power.
  void associate_max_power(SmallCellDrop& drop) const;

  // Received power (dBm, after implementation loss) at the small cell at
  // `cell` served by `hub`, from sector `sector` of hub `tx_hub` beaming at
  // `target`. Applies the per-stream partition penalty.
  double received_dbm(int tx_hub, int tx_sector, Vec2 target, Vec2 cell, int serving_hub) const;

  double noise_dbm() const { return noise_dbm_; }

 private:
  // Total interference (mW) at `victim` in `slot` from every sector other
  // than `victim_sector`.
  double interference_mw_at(const std::vector<std::vector<std::vector<int>>>& groups,
                            const std::vector<double>& steer_az, std::size_t slot, std::size_t victim_sector,
                            Vec2 victim, int serving_hub) const;

  SimConfig cfg_;
  NetworkLayout layout_;
  double noise_dbm_ = 0.0;
  double tx_dbm_ = 0.0;
  double penalty_db_ = 0.0;
};

// Runs every drop and pools the measured cells. Results depend only on the
// configuration, never on `workers`. `on_drop`, if set, sees each drop in
// drop-index order.
MetricsBundle run_campaign(const SimConfig& cfg, int workers = 1,
                           const std::function<void(const DropResult&)>& on_drop = {});

std::string drop_records_csv_header();
std::string drop_records_csv(const DropResult& r);

}  // namespace mgb

#endif
