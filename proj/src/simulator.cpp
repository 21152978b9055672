#include "mgb/simulator.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "mgb/errors.hpp"
#include "mgb/linkbudget.hpp"
#include "mgb/rng.hpp"

namespace mgb {

const char* to_string(MeasurementScope s) { return s == MeasurementScope::kCenterHub ? "center_hub" : "all_hubs"; }

MeasurementScope scope_from_string(const std::string& s) {
  if (s == "center_hub") return MeasurementScope::kCenterHub;
  if (s == "all_hubs") return MeasurementScope::kAllHubs;
  throw ConfigError("unknown scope '" + s + "' (expected center_hub or all_hubs)", "simulation.scope");
}

const char* to_string(Association a) { return a == Association::kGeometric ? "geometric" : "max_power"; }

Association association_from_string(const std::string& s) {
  if (s == "geometric") return Association::kGeometric;
  if (s == "max_power") return Association::kMaxPower;
  throw ConfigError("unknown association '" + s + "' (expected geometric or max_power)", "simulation.association");
}

int SimConfig::active_streams() const { return std::min(streams_per_slot, per_sector_cells); }

int SimConfig::groups_per_sector() const { return per_sector_cells / active_streams(); }

void SimConfig::validate() const {
  if (per_sector_cells < 1) throw ConfigError("must be >= 1", "simulation.per_sector_cells");
  if (streams_per_slot < 1) throw ConfigError("must be >= 1", "simulation.streams_per_slot");
  if (per_sector_cells % active_streams() != 0)
    throw ConfigError("streams per slot must divide cells per sector", "simulation.streams_per_slot");
  if (n_drops < 1) throw ConfigError("must be >= 1", "simulation.drops");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("must be > 0", "bandwidth_hz");
  hub_array.validate();
  cell_array.validate();
  hub_pattern.validate();
  cell_pattern.validate();
  path_loss.validate();
  noise.validate();
}

double compute_sinr_db(double signal_dbm, std::span<const double> interference_dbm, double noise_dbm) {
  if (interference_dbm.empty()) return signal_dbm - noise_dbm;
  double denom = db_to_linear(noise_dbm);
  for (double i : interference_dbm) denom += db_to_linear(i);
  return signal_dbm - linear_to_db(denom);
}

namespace {

// Deal azimuth-sorted cells round-robin into n_groups; neighbours in angle
// land in different groups.
std::vector<std::vector<int>> interleave(std::span<const double> azimuths_deg, int n_groups) {
  const int n = static_cast<int>(azimuths_deg.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return azimuths_deg[a] < azimuths_deg[b]; });
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(n_groups));
  for (int i = 0; i < n; ++i) groups[static_cast<std::size_t>(i % n_groups)].push_back(order[i]);
  return groups;
}

}  // namespace

std::vector<std::vector<int>> schedule_groups(std::span<const double> azimuths_deg, int group_size) {
  const int n = static_cast<int>(azimuths_deg.size());
  if (group_size < 1 || n == 0 || n % group_size != 0)
    throw ConfigError("group size must divide the number of cells in a sector", "simulation.streams_per_slot");
  return interleave(azimuths_deg, n / group_size);
}

double min_group_separation_deg(std::span<const double> azimuths_deg, const std::vector<std::vector<int>>& groups) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : groups)
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = i + 1; j < g.size(); ++j)
        best = std::min(best, std::abs(wrap_deg(azimuths_deg[g[i]] - azimuths_deg[g[j]])));
  return best;
}

Simulator::Simulator(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  layout_ = build_layout(cfg_.hub_radius_m, cfg_.rings, cfg_.sectors_per_hub, cfg_.min_hub_cell_distance_m);
  noise_dbm_ = noise_power_dbm(cfg_.noise, cfg_.bandwidth_hz);
  tx_dbm_ = total_tx_power_dbm(cfg_.hub_array);
  penalty_db_ = link_partition_penalty_db(LinkDirection::kDownlink, cfg_.active_streams());
}

std::uint64_t Simulator::drop_seed(std::int64_t drop_index) const {
  return derive_seed(cfg_.master_seed, static_cast<std::uint64_t>(drop_index));
}

double Simulator::received_dbm(int tx_hub, int tx_sector, Vec2 target, Vec2 cell, int serving_hub) const {
  const Vec2 hub = layout_.hub_positions[static_cast<std::size_t>(tx_hub)];
  const double boresight = layout_.sector_boresights_deg[static_cast<std::size_t>(tx_sector)];
  const Direction steer{wrap_deg(bearing_deg(hub, target) - boresight), 0.0};
  const Direction toward_cell{wrap_deg(bearing_deg(hub, cell) - boresight), 0.0};
  const double g_tx = beam_gain_db(cfg_.hub_array, cfg_.hub_pattern, steer, toward_cell);

  // The small-cell array faces its serving hub and keeps its beam there.
  const Vec2 serving = layout_.hub_positions[static_cast<std::size_t>(serving_hub)];
  const double rx_boresight = bearing_deg(cell, serving);
  const Direction toward_tx{wrap_deg(bearing_deg(cell, hub) - rx_boresight), 0.0};
  const double g_rx = beam_gain_db(cfg_.cell_array, cfg_.cell_pattern, Direction{}, toward_tx);

  return tx_dbm_ - penalty_db_ + g_tx - path_loss_db(cfg_.path_loss, distance(hub, cell)) + g_rx -
         cfg_.noise.rx_impl_loss_db;
}

DropResult Simulator::run_drop(std::int64_t drop_index) const {
  const auto seed = drop_seed(drop_index);
  auto drop = drop_small_cells(layout_, cfg_.per_sector_cells, seed);
  if (cfg_.association == Association::kMaxPower) associate_max_power(drop);
  return evaluate(drop, drop_index);
}

void Simulator::associate_max_power(SmallCellDrop& drop) const {
  // Array gains and Tx power are common to every candidate, so compare
  // element pattern minus path loss. Ties keep the geometric choice.
  const int sectors = layout_.sectors_per_hub;
  for (std::size_t i = 0; i < drop.size(); ++i) {
    const Vec2 p = drop.positions[i];
    auto score = [&](int h, int s) {
      const Vec2 hub = layout_.hub_positions[static_cast<std::size_t>(h)];
      const double off = wrap_deg(bearing_deg(hub, p) - layout_.sector_boresights_deg[static_cast<std::size_t>(s)]);
      if (std::abs(off) > 90.0) return -std::numeric_limits<double>::infinity();
      return element_pattern_db(cfg_.hub_pattern, off) - path_loss_db(cfg_.path_loss, distance(hub, p));
    };
    double best = score(drop.serving_hub[i], drop.serving_sector[i]);
    for (int h = 0; h < static_cast<int>(layout_.hub_count()); ++h)
      for (int s = 0; s < sectors; ++s) {
        const double v = score(h, s);
        if (v > best) {
          best = v;
          drop.serving_hub[i] = h;
          drop.serving_sector[i] = s;
        }
      }
  }
}

DropResult Simulator::evaluate(const SmallCellDrop& drop, std::int64_t drop_index) const {
  const int sectors = layout_.sectors_per_hub;
  const int k = cfg_.active_streams();
  const std::size_t n_sectors = layout_.sector_count();
  const std::size_t n_hubs = layout_.hub_count();

  // Cells per (hub, sector), then groups within each sector.
  std::vector<std::vector<int>> members(n_sectors);
  for (std::size_t i = 0; i < drop.size(); ++i)
    members[static_cast<std::size_t>(drop.serving_hub[i] * sectors + drop.serving_sector[i])].push_back(
        static_cast<int>(i));

  // Steering direction of every cell in its serving sector's frame.
  std::vector<double> steer_az(drop.size());
  for (std::size_t i = 0; i < drop.size(); ++i) {
    const Vec2 hub = layout_.hub_positions[static_cast<std::size_t>(drop.serving_hub[i])];
    steer_az[i] = wrap_deg(bearing_deg(hub, drop.positions[i]) -
                           layout_.sector_boresights_deg[static_cast<std::size_t>(drop.serving_sector[i])]);
  }

  int n_groups = 0;
  std::vector<std::vector<std::vector<int>>> groups(n_sectors);  // cell ids
  for (std::size_t s = 0; s < n_sectors; ++s) {
    if (members[s].empty()) continue;
    std::vector<double> az;
    az.reserve(members[s].size());
    for (int c : members[s]) az.push_back(steer_az[static_cast<std::size_t>(c)]);
    const int n = static_cast<int>(members[s].size());
    auto local = interleave(az, (n + k - 1) / k);
    for (auto& g : local)
      for (int& idx : g) idx = members[s][static_cast<std::size_t>(idx)];
    n_groups = std::max<int>(n_groups, static_cast<int>(local.size()));
    groups[s] = std::move(local);
  }

  DropResult out;
  out.drop_index = drop_index;
  out.seed = drop.rng_seed;
  out.groups_per_sector = n_groups;

  const int measured_hubs = cfg_.scope == MeasurementScope::kCenterHub ? 1 : static_cast<int>(n_hubs);
  for (int h = 0; h < measured_hubs; ++h) {
    double hub_se = 0.0;
    for (int s = 0; s < sectors; ++s) {
      const std::size_t sid = static_cast<std::size_t>(h * sectors + s);
      const auto& sector_groups = groups[sid];
      if (sector_groups.empty()) {
        out.sector_se_bps_hz.push_back(0.0);
        continue;
      }
      const double n_slots = static_cast<double>(sector_groups.size());
      double sector_se = 0.0;
      for (std::size_t t = 0; t < sector_groups.size(); ++t) {
        for (int c : sector_groups[t]) {
          const Vec2 pos = drop.positions[static_cast<std::size_t>(c)];
          const double signal = received_dbm(h, s, pos, pos, h);
          double interference_mw = 0.0;
          if (cfg_.interference) interference_mw = interference_mw_at(groups, steer_az, t, sid, pos, h);
          CellRecord rec;
          rec.cell_id = c;
          rec.hub = h;
          rec.sector = s;
          rec.group = static_cast<int>(t);
          rec.distance_m = distance(layout_.hub_positions[static_cast<std::size_t>(h)], pos);
          rec.snr_db = signal - noise_dbm_;
          rec.sinr_db = cfg_.interference ? signal - linear_to_db(interference_mw + db_to_linear(noise_dbm_))
                                          : rec.snr_db;
          rec.se_bps_hz = spectral_efficiency_bps_hz(rec.sinr_db, 1, cfg_.se_cap_bps_hz);
          rec.airtime = 1.0 / n_slots;
          rec.throughput_mbps = rec.se_bps_hz * cfg_.bandwidth_hz * rec.airtime / 1e6;
          sector_se += rec.se_bps_hz;
          out.cells.push_back(rec);
        }
      }
      sector_se /= n_slots;
      out.sector_se_bps_hz.push_back(sector_se);
      hub_se += sector_se;
    }
    out.hub_throughput_gbps.push_back(hub_se * cfg_.bandwidth_hz / 1e9);
  }
  return out;
}

double Simulator::interference_mw_at(const std::vector<std::vector<std::vector<int>>>& groups,
                                     const std::vector<double>& steer_az, std::size_t slot, std::size_t victim_sector,
                                     Vec2 victim, int serving_hub) const {
  // Same quantity as summing db_to_linear(received_dbm(...)) over every
  // active beam of every other sector, with the per-hub terms hoisted.
  const int sectors = layout_.sectors_per_hub;
  const Vec2 serving = layout_.hub_positions[static_cast<std::size_t>(serving_hub)];
  const double rx_boresight = bearing_deg(victim, serving);
  double total = 0.0;
  for (std::size_t oh = 0; oh < layout_.hub_count(); ++oh) {
    const Vec2 hub = layout_.hub_positions[oh];
    const Direction toward_tx{wrap_deg(bearing_deg(victim, hub) - rx_boresight), 0.0};
    const double g_rx = beam_gain_db(cfg_.cell_array, cfg_.cell_pattern, Direction{}, toward_tx);
    const double base_db = tx_dbm_ - penalty_db_ - path_loss_db(cfg_.path_loss, distance(hub, victim)) + g_rx -
                           cfg_.noise.rx_impl_loss_db + cfg_.hub_array.element_gain_db;
    const double bearing = bearing_deg(hub, victim);
    for (int os = 0; os < sectors; ++os) {
      const std::size_t o = oh * static_cast<std::size_t>(sectors) + static_cast<std::size_t>(os);
      if (o == victim_sector || groups[o].empty()) continue;
      // Every other sector is busy in every slot.
      const auto& active = groups[o][slot % groups[o].size()];
      const Direction eval{wrap_deg(bearing - layout_.sector_boresights_deg[static_cast<std::size_t>(os)]), 0.0};
      const double scale_mw = db_to_linear(base_db + element_pattern_db(cfg_.hub_pattern, eval));
      const double floor_mw = db_to_linear(kBeamGainFloorDb + base_db - cfg_.hub_array.element_gain_db);
      for (int target : active) {
        const Direction steer{steer_az[static_cast<std::size_t>(target)], 0.0};
        const double af = array_factor_power(cfg_.hub_array, steer, eval);
        total += std::max(scale_mw * af, floor_mw);
      }
    }
  }
  return total;
}

MetricsBundle run_campaign(const SimConfig& cfg, int workers, const std::function<void(const DropResult&)>& on_drop) {
  const Simulator sim(cfg);
  MetricsBundle m;
  workers = std::max(1, workers);
  constexpr std::int64_t kBatch = 256;
  std::vector<DropResult> batch;
  for (std::int64_t begin = 0; begin < cfg.n_drops; begin += kBatch) {
    const std::int64_t end = std::min(cfg.n_drops, begin + kBatch);
    batch.assign(static_cast<std::size_t>(end - begin), DropResult{});
    auto work = [&](int w) {
      for (std::int64_t d = begin + w; d < end; d += workers) batch[static_cast<std::size_t>(d - begin)] = sim.run_drop(d);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (const auto& r : batch) {
      for (const auto& c : r.cells) {
        m.sinr_samples.push_back(c.sinr_db);
        m.se_samples.push_back(c.se_bps_hz);
        m.throughput_samples.push_back(c.throughput_mbps);
      }
      m.sector_se_samples.insert(m.sector_se_samples.end(), r.sector_se_bps_hz.begin(), r.sector_se_bps_hz.end());
      m.hub_throughput_samples.insert(m.hub_throughput_samples.end(), r.hub_throughput_gbps.begin(),
                                      r.hub_throughput_gbps.end());
      if (on_drop) on_drop(r);
    }
  }
  m.provenance.seed = cfg.master_seed;
  m.provenance.drops = cfg.n_drops;
  m.summarize();
  return m;
}

std::string drop_records_csv_header() {
  return "drop,cell_id,hub,sector,group,distance_m,snr_db,sinr_db,se_bps_hz,airtime,throughput_mbps\n";
}

std::string drop_records_csv(const DropResult& r) {
  std::ostringstream os;
  os.precision(10);
  for (const auto& c : r.cells)
    os << r.drop_index << ',' << c.cell_id << ',' << c.hub << ',' << c.sector << ',' << c.group << ',' << c.distance_m
       << ',' << c.snr_db << ',' << c.sinr_db << ',' << c.se_bps_hz << ',' << c.airtime << ',' << c.throughput_mbps
       << '\n';
  return os.str();
}

}  // namespace mgb
