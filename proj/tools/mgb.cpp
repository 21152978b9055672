// mgb: link budget, statistical-multiplexing headroom, and system-level
// simulation for point-to-multipoint millimeter-wave backhaul.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mgb/config.hpp"
#include "mgb/errors.hpp"
#include "mgb/linkbudget.hpp"
#include "mgb/metrics.hpp"
#include "mgb/rng.hpp"
#include "mgb/simulator.hpp"
#include "mgb/statmux.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Common {
  std::optional<std::string> config_file;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_file, "JSON configuration file");
  cmd->add_option("--set", c.sets, "override a configuration key, e.g. --set simulation.drops=100")
      ->type_name("KEY=VALUE");
}

template <typename T>
void push_override(std::vector<std::string>& sets, const char* key, const std::optional<T>& v) {
  if (!v) return;
  std::ostringstream os;
  if constexpr (std::is_same_v<T, std::string>)
    os << key << '=' << json(*v).dump();
  else
    os << key << '=' << std::setprecision(17) << *v;
  sets.push_back(os.str());
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
}

std::string provenance_comment(const std::string& hash, std::uint64_t seed) {
  return "config_hash=" + hash + " seed=" + std::to_string(seed);
}

int run_linkbudget(const mgb::RunConfig& cfg, const std::string& format, const std::optional<std::string>& csv_path) {
  const auto rows = mgb::build_table(mgb::make_linkbudget_inputs(cfg));
  const std::string hash = mgb::config_hash(cfg);
  if (format == "csv") {
    std::cout << "# " << provenance_comment(hash, 0) << '\n' << mgb::render_table_csv(rows);
  } else {
    std::cout << mgb::render_table_text(rows) << "config_hash " << hash << '\n';
  }
  if (csv_path) write_file(*csv_path, "# " + provenance_comment(hash, 0) + "\n" + mgb::render_table_csv(rows));
  return 0;
}

int run_statmux(const mgb::RunConfig& cfg, int workers, const std::optional<std::string>& curve_csv) {
  const auto q = mgb::make_headroom_query(cfg);
  const std::string hash = mgb::config_hash(cfg);
  const double factor = mgb::headroom_factor(q.n_cells, q.availability);
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "cells                    " << q.n_cells << '\n'
            << "availability             " << q.availability << '\n'
            << "mean rate per cell       " << q.mean_rate_mbps << " Mbps\n"
            << "headroom factor          " << factor << '\n'
            << "required capacity        " << mgb::required_capacity_mbps(q) << " Mbps\n";
  if (cfg.statmux.samples > 0) {
    const double mc = mgb::headroom_factor_mc(q.n_cells, q.availability, cfg.statmux.samples, cfg.statmux.seed, workers);
    std::cout << "headroom factor (MC)     " << mc << "  (" << cfg.statmux.samples << " samples, seed "
              << cfg.statmux.seed << ")\n";
    std::cout << "[secondary] capacity with per-cell rate clipped at " << cfg.statmux.peak_rate_mbps << " Mbps: "
              << mgb::required_capacity_clipped_mbps(q, cfg.statmux.peak_rate_mbps, cfg.statmux.samples,
                                                     cfg.statmux.seed)
              << " Mbps\n";
  }
  std::cout << "config_hash              " << hash << '\n';
  if (curve_csv) {
    std::ostringstream os;
    os << "# " << provenance_comment(hash, cfg.statmux.seed) << '\n' << "cells,headroom_factor\n";
    os << std::setprecision(10);
    for (const auto& [n, f] : mgb::headroom_curve(q.availability, cfg.statmux.curve_cells)) os << n << ',' << f << '\n';
    write_file(*curve_csv, os.str());
  }
  return 0;
}

json summary_json(const mgb::RunConfig& cfg, const mgb::MetricsBundle& m, int groups_per_sector) {
  const auto& s = cfg.simulation;
  json j;
  j["config_hash"] = m.provenance.config_hash;
  j["seed"] = m.provenance.seed;
  j["drops"] = m.provenance.drops;
  j["per_sector_cells"] = s.per_sector_cells;
  j["streams_per_slot"] = std::min(s.streams_per_slot, s.per_sector_cells);
  j["groups_per_sector"] = groups_per_sector;
  j["scope"] = mgb::to_string(s.scope);
  j["samples"] = m.se_samples.size();
  j["mean_se_bps_hz"] = m.mean_sector_se_bps_hz;
  j["mean_cell_se_bps_hz"] = m.mean_cell_se_bps_hz;
  j["hub_throughput_gbps"] = m.hub_throughput_gbps;
  j["mean_throughput_mbps"] = m.mean_throughput_mbps;
  j["harmonic_mean_99_mbps"] = m.harmonic_mean_99_mbps;
  j["frac_above_2bpshz"] = m.frac_above_2bpshz;
  j["se_p01_bps_hz"] = m.se_p01_bps_hz;
  j["mean_sinr_db"] = m.mean_sinr_db;
  j["sinr_p01_db"] = m.sinr_p01_db;
  j["sinr_p50_db"] = m.sinr_p50_db;
  j["model"] = {
      {"direction", "downlink"},
      {"association", s.association == mgb::Association::kGeometric ? "geometric: tiling hub, sector by bearing"
                                                                    : "max_power: strongest boresight-steered hub sector"},
      {"scheduler", "azimuth-sorted round-robin groups, equal airtime per group"},
      {"interference", s.interference ? "all other sectors active every slot, beams steered at their own scheduled cells"
                                      : "disabled"},
      {"rx_beam", "small cell boresight and beam fixed on serving hub"},
      {"cdf", "pooled over all drops"},
      {"percentile", "nearest rank"},
      {"rng", mgb::kRngName},
  };
  j["config"] = mgb::to_json(cfg);
  return j;
}

int run_simulate(const mgb::RunConfig& cfg, int workers, const fs::path& out_dir, bool per_drop_csv) {
  fs::create_directories(out_dir);
  const std::string hash = mgb::config_hash(cfg);
  const auto sim_cfg = mgb::make_sim_config(cfg);
  const std::string comment = provenance_comment(hash, sim_cfg.master_seed);

  std::optional<std::ofstream> drops_out;
  if (per_drop_csv) {
    drops_out.emplace(out_dir / "drops.csv", std::ios::binary);
    *drops_out << "# " << comment << '\n' << mgb::drop_records_csv_header();
  }
  int groups = 0;
  auto m = mgb::run_campaign(sim_cfg, workers, [&](const mgb::DropResult& r) {
    groups = r.groups_per_sector;
    if (drops_out) *drops_out << mgb::drop_records_csv(r);
  });
  m.provenance.config_hash = hash;

  write_file(out_dir / "summary.json", summary_json(cfg, m, groups).dump(2) + "\n");
  write_file(out_dir / "cdf_sinr.csv", mgb::cdf_csv(mgb::decimate_cdf(mgb::empirical_cdf(m.sinr_samples)), comment));
  write_file(out_dir / "cdf_se.csv", mgb::cdf_csv(mgb::decimate_cdf(mgb::empirical_cdf(m.se_samples)), comment));
  write_file(out_dir / "cdf_throughput.csv",
             mgb::cdf_csv(mgb::decimate_cdf(mgb::empirical_cdf(m.throughput_samples)), comment));

  std::cout << std::fixed << std::setprecision(3) << "drops                    " << m.provenance.drops << '\n'
            << "cells per sector         " << sim_cfg.per_sector_cells << " (" << groups << " groups of "
            << sim_cfg.active_streams() << ")\n"
            << "mean sector SE           " << m.mean_sector_se_bps_hz << " bps/Hz\n"
            << "mean cell SE per stream  " << m.mean_cell_se_bps_hz << " bps/Hz\n"
            << "hub throughput           " << m.hub_throughput_gbps << " Gbps\n"
            << "harmonic mean (best 99%) " << m.harmonic_mean_99_mbps << " Mbps\n"
            << "fraction SE > 2 bps/Hz   " << m.frac_above_2bpshz << '\n'
            << "config_hash              " << hash << '\n'
            << "outputs                  " << out_dir.string() << '\n';
  return 0;
}

int run_dump_pattern(const mgb::RunConfig& cfg, const std::string& which, double steer, double step,
                     const std::optional<std::string>& out) {
  const bool hub = which == "hub";
  if (!hub && which != "cell") throw mgb::ConfigError("expected hub or cell", "--array");
  if (!(step > 0.0)) throw mgb::ConfigError("must be > 0", "--step");
  const auto& array = hub ? cfg.hub_array : cfg.cell_array;
  const auto& pattern = hub ? cfg.hub_pattern : cfg.cell_pattern;
  std::ostringstream os;
  os << "# " << provenance_comment(mgb::config_hash(cfg), 0) << " array=" << which << " steer_deg=" << steer << '\n'
     << "angle_deg,gain_db\n"
     << std::setprecision(10);
  for (double a = -180.0; a <= 180.0 + 1e-9; a += step)
    os << a << ',' << mgb::beam_gain_db(array, pattern, {steer, 0.0}, {a, 0.0}) << '\n';
  if (out)
    write_file(*out, os.str());
  else
    std::cout << os.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Millimeter-wave point-to-multipoint backhaul planner and system simulator"};
  app.require_subcommand(1);
  app.footer(mgb::key_docs_text());

  Common common;

  auto* lb = app.add_subcommand("linkbudget", "render the link budget table");
  add_common(lb, common);
  std::optional<double> lb_distance;
  std::optional<int> lb_streams;
  std::string lb_format = "text";
  std::optional<std::string> lb_csv;
  lb->add_option("--distance", lb_distance, "cell-edge column distance in meters");
  lb->add_option("--streams", lb_streams, "stream count of the multi-stream columns");
  lb->add_option("--format", lb_format, "stdout format")->check(CLI::IsMember({"text", "csv"}));
  lb->add_option("--csv", lb_csv, "also write the table as CSV to this path");

  auto* sm = app.add_subcommand("statmux", "backhaul headroom for bursty small-cell traffic");
  add_common(sm, common);
  std::optional<int> sm_cells;
  std::optional<double> sm_avail, sm_rate, sm_peak;
  std::optional<std::int64_t> sm_samples;
  std::optional<std::uint64_t> sm_seed;
  std::optional<std::string> sm_curve;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  sm->add_option("--cells", sm_cells, "number of aggregated small cells");
  sm->add_option("--availability", sm_avail, "fraction of time the demand must be met");
  sm->add_option("--mean-rate", sm_rate, "mean rate per cell (Mbps)");
  sm->add_option("--peak-rate", sm_peak, "peak-rate clip for the secondary figure (Mbps)");
  sm->add_option("--samples", sm_samples, "Monte Carlo samples (0 disables)");
  sm->add_option("--seed", sm_seed, "Monte Carlo seed");
  sm->add_option("--curve-csv", sm_curve, "write the headroom curve to this CSV");
  sm->add_option("--workers", workers, "worker threads (results do not depend on it)");

  auto* sim = app.add_subcommand("simulate", "run the Monte Carlo downlink campaign");
  add_common(sim, common);
  std::optional<std::int64_t> sim_drops;
  std::optional<std::uint64_t> sim_seed;
  std::optional<int> sim_per_sector;
  std::optional<std::string> sim_scope;
  std::string out_dir = "mgb-out";
  bool per_drop = false;
  bool no_interference = false;
  sim->add_option("--drops", sim_drops, "number of drops");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--per-sector", sim_per_sector, "small cells per sector");
  sim->add_option("--scope", sim_scope, "center_hub or all_hubs");
  sim->add_option("--workers", workers, "worker threads (results do not depend on it)");
  sim->add_option("-o,--out-dir", out_dir, "output directory");
  sim->add_flag("--per-drop-csv", per_drop, "also write every measured cell of every drop");
  sim->add_flag("--no-interference", no_interference, "disable inter-sector interference");

  auto* dp = app.add_subcommand("dump-pattern", "emit (angle, gain) CSV of a steered beam");
  add_common(dp, common);
  std::string dp_array = "hub";
  double dp_steer = 0.0;
  double dp_step = 0.5;
  std::optional<std::string> dp_out;
  dp->add_option("--array", dp_array, "hub or cell")->check(CLI::IsMember({"hub", "cell"}));
  dp->add_option("--steer", dp_steer, "steering azimuth from boresight (deg)");
  dp->add_option("--step", dp_step, "angle step (deg)");
  dp->add_option("-o,--out", dp_out, "output CSV (default stdout)");

  auto* cf = app.add_subcommand("config", "print the resolved configuration");
  add_common(cf, common);
  bool cf_keys = false;
  cf->add_flag("--keys", cf_keys, "list every key with its default and meaning");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  mgb::RunConfig cfg;
  try {
    auto sets = common.sets;
    push_override(sets, "linkbudget.cell_edge_distance_m", lb_distance);
    push_override(sets, "linkbudget.multi_stream_count", lb_streams);
    push_override(sets, "statmux.cells", sm_cells);
    push_override(sets, "statmux.availability", sm_avail);
    push_override(sets, "statmux.mean_rate_mbps", sm_rate);
    push_override(sets, "statmux.peak_rate_mbps", sm_peak);
    push_override(sets, "statmux.samples", sm_samples);
    push_override(sets, "statmux.seed", sm_seed);
    push_override(sets, "simulation.drops", sim_drops);
    push_override(sets, "simulation.seed", sim_seed);
    push_override(sets, "simulation.per_sector_cells", sim_per_sector);
    push_override(sets, "simulation.scope", sim_scope);
    if (no_interference) sets.push_back("simulation.interference=false");
    cfg = mgb::resolve_config(common.config_file, sets);
  } catch (const mgb::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*lb) return run_linkbudget(cfg, lb_format, lb_csv);
    if (*sm) return run_statmux(cfg, workers, sm_curve);
    if (*sim) return run_simulate(cfg, workers, out_dir, per_drop);
    if (*dp) return run_dump_pattern(cfg, dp_array, dp_steer, dp_step, dp_out);
    if (*cf) {
      if (cf_keys)
        std::cout << mgb::key_docs_text();
      else
        std::cout << mgb::to_json(cfg).dump(2) << "\nconfig_hash " << mgb::config_hash(cfg) << '\n';
      return 0;
    }
  } catch (const mgb::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mgb::DomainError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
