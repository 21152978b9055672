#ifndef MGB_CONFIG_HPP
#define MGB_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgb/antenna.hpp"
#include "mgb/linkbudget.hpp"
#include "mgb/propagation.hpp"
#include "mgb/simulator.hpp"
#include "mgb/statmux.hpp"

namespace mgb {

// Every tunable of the four workflows, with the 39 GHz reference system as
// defaults. Serialized as JSON; see `mgb config --keys` for the key list.
struct RunConfig {
  PathLossModel path_loss;
  NoiseModel noise;
  ArrayConfig hub_array = ArrayConfig::hub_default();
  ArrayConfig cell_array = ArrayConfig::small_cell_default();
  SectorPattern hub_pattern;
  SectorPattern cell_pattern;
  double bandwidth_hz = 500e6;

  struct LinkBudget {
    double cell_edge_distance_m = 1000.0;
    double multi_stream_distance_m = kMedianDistanceM;
    int multi_stream_count = 4;
    std::optional<double> se_cap_bps_hz;
  } linkbudget;

  struct Statmux {
    int cells = 32;
    double availability = 0.99;
    double mean_rate_mbps = 100.0;
    double peak_rate_mbps = 500.0;
    std::int64_t samples = 1000000;
    std::uint64_t seed = 1;
    std::vector<int> curve_cells{1, 2, 4, 8, 16, 32, 64, 128, 256};
  } statmux;

  struct Topology {
    double hub_radius_m = 1000.0;
    int rings = 2;
    int sectors_per_hub = 3;
    double min_distance_m = 100.0;
  } topology;

  struct Simulation {
    int per_sector_cells = 1;
    int streams_per_slot = 4;
    std::int64_t drops = 10000;
    MeasurementScope scope = MeasurementScope::kCenterHub;
    Association association = Association::kGeometric;
    std::uint64_t seed = 1;
    bool interference = true;
    std::optional<double> se_cap_bps_hz;
  } simulation;

  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);
// Strict: every key must be known and every value well typed.
RunConfig from_json(const nlohmann::json& j);

// Apply `patch` on top of `base`; unknown keys raise ConfigError naming
// the dotted key path.
void merge_strict(nlohmann::json& base, const nlohmann::json& patch, const std::string& prefix = {});

// `key=value` with a dotted key; the value is parsed as JSON, falling back
// to a plain string.
nlohmann::json override_patch(const std::string& assignment);

// Built-in defaults, then the optional file, then overrides in order.
RunConfig resolve_config(const std::optional<std::string>& file, const std::vector<std::string>& overrides);

// 64-bit FNV-1a of the canonical (sorted-key) JSON form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

SimConfig make_sim_config(const RunConfig& cfg);
std::vector<LinkBudgetInput> make_linkbudget_inputs(const RunConfig& cfg);
HeadroomQuery make_headroom_query(const RunConfig& cfg);

struct KeyDoc {
  std::string key;
  std::string default_value;
  std::string description;
};
std::vector<KeyDoc> key_docs();
std::string key_docs_text();

}  // namespace mgb

#endif
