#include "mgb/config.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "mgb/errors.hpp"

namespace mgb {

using nlohmann::json;

namespace {

json array_json(const ArrayConfig& a) {
  return {{"rows", a.rows},
          {"cols", a.cols},
          {"n_pa", a.n_pa},
          {"pa_power_dbm", a.pa_power_dbm},
          {"element_gain_db", a.element_gain_db},
          {"element_spacing_wavelengths", a.element_spacing_wavelengths},
          {"subarray_rows", a.subarray_rows}};
}

json pattern_json(const SectorPattern& p) {
  return {{"theta_3db_deg", p.theta_3db_deg}, {"front_back_floor_db", p.front_back_floor_db}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Typed lookup that reports the dotted key on failure.
template <typename T>
T get(const json& j, const std::string& section, const char* key) {
  const std::string path = section.empty() ? key : section + "." + key;
  const json& node = section.empty() ? j : j.at(section);
  if (!node.contains(key)) throw ConfigError("missing key", path);
  const json& v = node.at(key);
  try {
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError("expected an integer", path);
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("expected true or false", path);
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("expected a number", path);
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(e.what(), path);
  }
}

std::optional<double> get_optional(const json& j, const std::string& section, const char* key) {
  const json& v = j.at(section).at(key);
  if (v.is_null()) return std::nullopt;
  return get<double>(j, section, key);
}

ArrayConfig array_from(const json& j, const std::string& s) {
  ArrayConfig a;
  a.rows = get<int>(j, s, "rows");
  a.cols = get<int>(j, s, "cols");
  a.n_pa = get<int>(j, s, "n_pa");
  a.pa_power_dbm = get<double>(j, s, "pa_power_dbm");
  a.element_gain_db = get<double>(j, s, "element_gain_db");
  a.element_spacing_wavelengths = get<double>(j, s, "element_spacing_wavelengths");
  a.subarray_rows = get<int>(j, s, "subarray_rows");
  return a;
}

SectorPattern pattern_from(const json& j, const std::string& s) {
  SectorPattern p;
  p.theta_3db_deg = get<double>(j, s, "theta_3db_deg");
  p.front_back_floor_db = get<double>(j, s, "front_back_floor_db");
  return p;
}

// Re-raise validation errors with the section prefix on the key.
template <typename F>
void in_section(const std::string& section, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    const std::string k = e.key();
    const auto dot = k.find('.');
    const std::string leaf = dot == std::string::npos ? k : k.substr(dot + 1);
    const std::string what = e.what();
    throw ConfigError(what.substr(what.find(": ") == std::string::npos ? 0 : what.find(": ") + 2),
                      section + "." + leaf);
  }
}

}  // namespace

void RunConfig::validate() const {
  in_section("path_loss", [&] { path_loss.validate(); });
  in_section("noise", [&] { noise.validate(); });
  in_section("hub_array", [&] { hub_array.validate(); });
  in_section("cell_array", [&] { cell_array.validate(); });
  in_section("hub_pattern", [&] { hub_pattern.validate(); });
  in_section("cell_pattern", [&] { cell_pattern.validate(); });
  if (!(bandwidth_hz > 0.0)) throw ConfigError("must be > 0", "bandwidth_hz");

  if (!(linkbudget.cell_edge_distance_m > 0.0)) throw ConfigError("must be > 0", "linkbudget.cell_edge_distance_m");
  if (!(linkbudget.multi_stream_distance_m > 0.0))
    throw ConfigError("must be > 0", "linkbudget.multi_stream_distance_m");
  if (linkbudget.multi_stream_count < 1) throw ConfigError("must be >= 1", "linkbudget.multi_stream_count");
  if (linkbudget.se_cap_bps_hz && !(*linkbudget.se_cap_bps_hz > 0.0))
    throw ConfigError("must be > 0 or null", "linkbudget.se_cap_bps_hz");

  if (statmux.cells < 1) throw ConfigError("must be >= 1", "statmux.cells");
  if (!(statmux.availability > 0.0 && statmux.availability < 1.0))
    throw ConfigError("must lie strictly between 0 and 1", "statmux.availability");
  if (!(statmux.mean_rate_mbps >= 0.0)) throw ConfigError("must be >= 0", "statmux.mean_rate_mbps");
  if (!(statmux.peak_rate_mbps > 0.0)) throw ConfigError("must be > 0", "statmux.peak_rate_mbps");
  if (statmux.samples != 0 && statmux.samples < 10000)
    throw ConfigError("must be 0 (skip Monte Carlo) or >= 10000", "statmux.samples");
  for (int n : statmux.curve_cells)
    if (n < 1) throw ConfigError("entries must be >= 1", "statmux.curve_cells");

  if (!(topology.hub_radius_m > 0.0)) throw ConfigError("must be > 0", "topology.hub_radius_m");
  if (topology.rings < 0) throw ConfigError("must be >= 0", "topology.rings");
  if (topology.sectors_per_hub < 1) throw ConfigError("must be >= 1", "topology.sectors_per_hub");
  if (!(topology.min_distance_m >= 0.0 && topology.min_distance_m < topology.hub_radius_m))
    throw ConfigError("must lie in [0, hub_radius_m)", "topology.min_distance_m");

  if (simulation.per_sector_cells < 1) throw ConfigError("must be >= 1", "simulation.per_sector_cells");
  if (simulation.streams_per_slot < 1) throw ConfigError("must be >= 1", "simulation.streams_per_slot");
  if (simulation.per_sector_cells % std::min(simulation.streams_per_slot, simulation.per_sector_cells) != 0)
    throw ConfigError("must divide simulation.per_sector_cells", "simulation.streams_per_slot");
  if (simulation.drops < 1) throw ConfigError("must be >= 1", "simulation.drops");
  if (simulation.se_cap_bps_hz && !(*simulation.se_cap_bps_hz > 0.0))
    throw ConfigError("must be > 0 or null", "simulation.se_cap_bps_hz");
}

json to_json(const RunConfig& c) {
  json j;
  j["path_loss"] = {{"intercept_db", c.path_loss.intercept_db},
                    {"slope_db_per_decade", c.path_loss.slope_db_per_decade},
                    {"excess_db_per_m", c.path_loss.excess_db_per_m},
                    {"margin_db", c.path_loss.margin_db}};
  j["noise"] = {{"thermal_density_dbm_per_hz", c.noise.thermal_density_dbm_per_hz},
                {"noise_figure_db", c.noise.noise_figure_db},
                {"rx_impl_loss_db", c.noise.rx_impl_loss_db}};
  j["hub_array"] = array_json(c.hub_array);
  j["cell_array"] = array_json(c.cell_array);
  j["hub_pattern"] = pattern_json(c.hub_pattern);
  j["cell_pattern"] = pattern_json(c.cell_pattern);
  j["bandwidth_hz"] = c.bandwidth_hz;
  j["linkbudget"] = {{"cell_edge_distance_m", c.linkbudget.cell_edge_distance_m},
                     {"multi_stream_distance_m", c.linkbudget.multi_stream_distance_m},
                     {"multi_stream_count", c.linkbudget.multi_stream_count},
                     {"se_cap_bps_hz", optional_json(c.linkbudget.se_cap_bps_hz)}};
  j["statmux"] = {{"cells", c.statmux.cells},
                  {"availability", c.statmux.availability},
                  {"mean_rate_mbps", c.statmux.mean_rate_mbps},
                  {"peak_rate_mbps", c.statmux.peak_rate_mbps},
                  {"samples", c.statmux.samples},
                  {"seed", c.statmux.seed},
                  {"curve_cells", c.statmux.curve_cells}};
  j["topology"] = {{"hub_radius_m", c.topology.hub_radius_m},
                   {"rings", c.topology.rings},
                   {"sectors_per_hub", c.topology.sectors_per_hub},
                   {"min_distance_m", c.topology.min_distance_m}};
  j["simulation"] = {{"per_sector_cells", c.simulation.per_sector_cells},
                     {"streams_per_slot", c.simulation.streams_per_slot},
                     {"drops", c.simulation.drops},
                     {"scope", to_string(c.simulation.scope)},
                     {"association", to_string(c.simulation.association)},
                     {"seed", c.simulation.seed},
                     {"interference", c.simulation.interference},
                     {"se_cap_bps_hz", optional_json(c.simulation.se_cap_bps_hz)}};
  return j;
}

RunConfig from_json(const json& j) {
  // Reject unknown keys and fill missing ones from the defaults.
  json full = to_json(RunConfig{});
  merge_strict(full, j);

  RunConfig c;
  c.path_loss.intercept_db = get<double>(full, "path_loss", "intercept_db");
  c.path_loss.slope_db_per_decade = get<double>(full, "path_loss", "slope_db_per_decade");
  c.path_loss.excess_db_per_m = get<double>(full, "path_loss", "excess_db_per_m");
  c.path_loss.margin_db = get<double>(full, "path_loss", "margin_db");
  c.noise.thermal_density_dbm_per_hz = get<double>(full, "noise", "thermal_density_dbm_per_hz");
  c.noise.noise_figure_db = get<double>(full, "noise", "noise_figure_db");
  c.noise.rx_impl_loss_db = get<double>(full, "noise", "rx_impl_loss_db");
  c.hub_array = array_from(full, "hub_array");
  c.cell_array = array_from(full, "cell_array");
  c.hub_pattern = pattern_from(full, "hub_pattern");
  c.cell_pattern = pattern_from(full, "cell_pattern");
  c.bandwidth_hz = get<double>(full, "", "bandwidth_hz");

  c.linkbudget.cell_edge_distance_m = get<double>(full, "linkbudget", "cell_edge_distance_m");
  c.linkbudget.multi_stream_distance_m = get<double>(full, "linkbudget", "multi_stream_distance_m");
  c.linkbudget.multi_stream_count = get<int>(full, "linkbudget", "multi_stream_count");
  c.linkbudget.se_cap_bps_hz = get_optional(full, "linkbudget", "se_cap_bps_hz");

  c.statmux.cells = get<int>(full, "statmux", "cells");
  c.statmux.availability = get<double>(full, "statmux", "availability");
  c.statmux.mean_rate_mbps = get<double>(full, "statmux", "mean_rate_mbps");
  c.statmux.peak_rate_mbps = get<double>(full, "statmux", "peak_rate_mbps");
  c.statmux.samples = get<std::int64_t>(full, "statmux", "samples");
  c.statmux.seed = get<std::uint64_t>(full, "statmux", "seed");
  try {
    c.statmux.curve_cells = full.at("statmux").at("curve_cells").get<std::vector<int>>();
  } catch (const json::exception&) {
    throw ConfigError("expected a list of integers", "statmux.curve_cells");
  }

  c.topology.hub_radius_m = get<double>(full, "topology", "hub_radius_m");
  c.topology.rings = get<int>(full, "topology", "rings");
  c.topology.sectors_per_hub = get<int>(full, "topology", "sectors_per_hub");
  c.topology.min_distance_m = get<double>(full, "topology", "min_distance_m");

  c.simulation.per_sector_cells = get<int>(full, "simulation", "per_sector_cells");
  c.simulation.streams_per_slot = get<int>(full, "simulation", "streams_per_slot");
  c.simulation.drops = get<std::int64_t>(full, "simulation", "drops");
  c.simulation.scope = scope_from_string(get<std::string>(full, "simulation", "scope"));
  c.simulation.association = association_from_string(get<std::string>(full, "simulation", "association"));
  c.simulation.seed = get<std::uint64_t>(full, "simulation", "seed");
  c.simulation.interference = get<bool>(full, "simulation", "interference");
  c.simulation.se_cap_bps_hz = get_optional(full, "simulation", "se_cap_bps_hz");
  c.validate();
  return c;
}

void merge_strict(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) throw ConfigError("expected an object", prefix.empty() ? "<root>" : prefix);
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown configuration key", path);
    json& target = base[it.key()];
    if (target.is_object()) {
      merge_strict(target, it.value(), path);
    } else {
      if (it.value().is_object()) throw ConfigError("expected a scalar or list, got an object", path);
      target = it.value();
    }
  }
}

json override_patch(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json patch = value;
  std::string rest = key;
  std::vector<std::string> parts;
  for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest = rest.substr(pos + 1))
    parts.push_back(rest.substr(0, pos));
  parts.push_back(rest);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  return patch;
}

RunConfig resolve_config(const std::optional<std::string>& file, const std::vector<std::string>& overrides) {
  json j = to_json(RunConfig{});
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("cannot open configuration file '" + *file + "'", "--config");
    json patch = json::parse(in, nullptr, false, true);
    if (patch.is_discarded()) throw ConfigError("configuration file is not valid JSON", *file);
    merge_strict(j, patch);
  }
  for (const auto& o : overrides) merge_strict(j, override_patch(o));
  return from_json(j);
}

std::string config_hash(const RunConfig& cfg) {
  const std::string canonical = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

SimConfig make_sim_config(const RunConfig& c) {
  SimConfig s;
  s.hub_radius_m = c.topology.hub_radius_m;
  s.rings = c.topology.rings;
  s.sectors_per_hub = c.topology.sectors_per_hub;
  s.min_hub_cell_distance_m = c.topology.min_distance_m;
  s.hub_array = c.hub_array;
  s.cell_array = c.cell_array;
  s.hub_pattern = c.hub_pattern;
  s.cell_pattern = c.cell_pattern;
  s.path_loss = c.path_loss;
  s.noise = c.noise;
  s.bandwidth_hz = c.bandwidth_hz;
  s.per_sector_cells = c.simulation.per_sector_cells;
  s.streams_per_slot = c.simulation.streams_per_slot;
  s.n_drops = c.simulation.drops;
  s.scope = c.simulation.scope;
  s.association = c.simulation.association;
  s.master_seed = c.simulation.seed;
  s.interference = c.simulation.interference;
  s.se_cap_bps_hz = c.simulation.se_cap_bps_hz;
  return s;
}

std::vector<LinkBudgetInput> make_linkbudget_inputs(const RunConfig& c) {
  auto v = default_table_inputs();
  for (auto& in : v) {
    const bool down = in.direction == LinkDirection::kDownlink;
    in.tx_array = down ? c.hub_array : c.cell_array;
    in.rx_array = down ? c.cell_array : c.hub_array;
    in.bandwidth_hz = c.bandwidth_hz;
    in.path_loss = c.path_loss;
    in.noise = c.noise;
    in.se_cap_bps_hz = c.linkbudget.se_cap_bps_hz;
    if (in.k_streams == 1) {
      in.distance_m = c.linkbudget.cell_edge_distance_m;
    } else {
      in.distance_m = c.linkbudget.multi_stream_distance_m;
      in.k_streams = c.linkbudget.multi_stream_count;
      in.label = std::string(down ? "Downlink " : "Uplink ") + std::to_string(in.k_streams) + "-Stream";
    }
  }
  return v;
}

HeadroomQuery make_headroom_query(const RunConfig& c) {
  return HeadroomQuery{c.statmux.cells, c.statmux.availability, c.statmux.mean_rate_mbps};
}

std::vector<KeyDoc> key_docs() {
  const json d = to_json(RunConfig{});
  auto def = [&](const std::string& dotted) {
    const json* node = &d;
    std::string rest = dotted;
    for (std::size_t pos; (pos = rest.find('.')) != std::string::npos; rest = rest.substr(pos + 1))
      node = &node->at(rest.substr(0, pos));
    return node->at(rest).dump();
  };
  const std::vector<std::pair<std::string, std::string>> docs = {
      {"path_loss.intercept_db", "path-loss intercept at 1 m; free space at 39 GHz (reference simulation setup)"},
      {"path_loss.slope_db_per_decade", "log-distance slope (reference 20log10(d))"},
      {"path_loss.excess_db_per_m", "excess loss for rain/reflection/foliage, 15 dB/km (reference simulation setup)"},
      {"path_loss.margin_db", "extra flat loss for margin studies (0 = reference system)"},
      {"noise.thermal_density_dbm_per_hz", "thermal noise density kT"},
      {"noise.noise_figure_db", "receiver noise figure (reference link budget and simulation setup)"},
      {"noise.rx_impl_loss_db", "receiver implementation loss (reference link budget and simulation setup)"},
      {"hub_array.rows", "hub array rows, 16x16 patch array (reference simulation setup)"},
      {"hub_array.cols", "hub array columns"},
      {"hub_array.n_pa", "hub PA count (reference link budget)"},
      {"hub_array.pa_power_dbm", "per-PA output power (reference link budget)"},
      {"hub_array.element_gain_db", "net patch element gain; reproduces the reference EIRP"},
      {"hub_array.element_spacing_wavelengths", "element pitch in wavelengths"},
      {"hub_array.subarray_rows", "rows per fixed-elevation sub-array (4x1 sub-arrays)"},
      {"cell_array.rows", "small-cell array rows, 8x8 patch array (reference simulation setup)"},
      {"cell_array.cols", "small-cell array columns"},
      {"cell_array.n_pa", "small-cell PA count (reference link budget)"},
      {"cell_array.pa_power_dbm", "per-PA output power (reference link budget)"},
      {"cell_array.element_gain_db", "net patch element gain; reproduces the reference EIRP"},
      {"cell_array.element_spacing_wavelengths", "element pitch in wavelengths"},
      {"cell_array.subarray_rows", "rows per fixed-elevation sub-array"},
      {"hub_pattern.theta_3db_deg", "3GPP sector element pattern 3 dB width (reference simulation setup)"},
      {"hub_pattern.front_back_floor_db", "3GPP element pattern floor A_m"},
      {"cell_pattern.theta_3db_deg", "small-cell element pattern 3 dB width"},
      {"cell_pattern.front_back_floor_db", "small-cell element pattern floor"},
      {"bandwidth_hz", "system bandwidth, 500 MHz (reference link budget and simulation setup)"},
      {"linkbudget.cell_edge_distance_m", "single-stream column distance (reference link budget, cell edge)"},
      {"linkbudget.multi_stream_distance_m", "multi-stream column distance (reference link budget, median 707 m)"},
      {"linkbudget.multi_stream_count", "streams in the multi-stream columns (reference link budget)"},
      {"linkbudget.se_cap_bps_hz", "per-stream SE ceiling; null = Shannon as in the reference link budget"},
      {"statmux.cells", "aggregated small cells (32 in the headroom example)"},
      {"statmux.availability", "fraction of time demand must be met (0.99)"},
      {"statmux.mean_rate_mbps", "mean rate per small cell (100 Mbps)"},
      {"statmux.peak_rate_mbps", "peak-rate clip for the secondary clipped figure (500 Mbps)"},
      {"statmux.samples", "Monte Carlo samples for the cross-check; 0 disables"},
      {"statmux.seed", "Monte Carlo seed"},
      {"statmux.curve_cells", "cell counts for the headroom curve CSV"},
      {"topology.hub_radius_m", "hex circumradius; hubs sqrt(3)*radius apart (reference simulation setup)"},
      {"topology.rings", "hex rings around the centre hub; 2 rings = 19 hubs"},
      {"topology.sectors_per_hub", "sectors per hub (reference simulation setup)"},
      {"topology.min_distance_m", "minimum hub to small-cell distance (reference simulation setup)"},
      {"simulation.per_sector_cells", "small cells per sector (1 or 32)"},
      {"simulation.streams_per_slot", "simultaneous streams per sector per slot (4)"},
      {"simulation.drops", "Monte Carlo drops (10,000)"},
      {"simulation.scope", "center_hub or all_hubs: which hubs' cells are measured"},
      {"simulation.association", "geometric (tiling hub) or max_power"},
      {"simulation.seed", "master seed; drop k uses derive_seed(seed, k)"},
      {"simulation.interference", "include inter-sector interference"},
      {"simulation.se_cap_bps_hz", "per-stream SE ceiling; null = Shannon"},
  };
  std::vector<KeyDoc> out;
  for (const auto& [k, text] : docs) out.push_back({k, def(k), text});
  return out;
}

std::string key_docs_text() {
  std::ostringstream os;
  os << "Configuration keys (JSON file via --config, or --set key=value):\n";
  for (const auto& k : key_docs())
    os << "  " << std::left << std::setw(40) << k.key << std::setw(26) << k.default_value << k.description << '\n';
  return os.str();
}

}  // namespace mgb
