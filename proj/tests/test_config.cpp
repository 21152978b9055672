#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <set>

#include "mgb/config.hpp"
#include "mgb/errors.hpp"

using namespace mgb;
using nlohmann::json;

namespace {

std::string key_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("defaults survive a JSON round trip") {
  const RunConfig d;
  const auto j = to_json(d);
  const auto back = from_json(j);
  CHECK(to_json(back) == j);
  CHECK(config_hash(back) == config_hash(d));
  CHECK(config_hash(d).size() == 16);
  CHECK(from_json(json::object()).simulation.per_sector_cells == 1);
}

TEST_CASE("unknown and mistyped keys are rejected by name") {
  CHECK(key_of([] { from_json(json{{"simulation", {{"drop", 5}}}}); }) == "simulation.drop");
  CHECK(key_of([] { from_json(json{{"bogus", 1}}); }) == "bogus");
  CHECK(key_of([] { from_json(json{{"simulation", {{"drops", "many"}}}}); }) == "simulation.drops");
  CHECK(key_of([] { from_json(json{{"simulation", {{"interference", 1}}}}); }) == "simulation.interference");
  CHECK(key_of([] { from_json(json{{"noise", 3}}); }) == "noise");
  CHECK(key_of([] { from_json(json{{"statmux", {{"availability", 1.0}}}}); }) == "statmux.availability");
  CHECK(key_of([] { from_json(json{{"simulation", {{"per_sector_cells", 6}}}}); }) == "simulation.streams_per_slot");
  CHECK(key_of([] { from_json(json{{"hub_array", {{"rows", 0}}}}); }).rfind("hub_array.", 0) == 0);
  CHECK(key_of([] { from_json(json{{"simulation", {{"scope", "nowhere"}}}}); }) != "<no error>");
}

TEST_CASE("command-line overrides") {
  CHECK(override_patch("simulation.drops=25") == json{{"simulation", {{"drops", 25}}}});
  CHECK(override_patch("simulation.scope=all_hubs") == json{{"simulation", {{"scope", "all_hubs"}}}});
  CHECK(override_patch("linkbudget.se_cap_bps_hz=null") == json{{"linkbudget", {{"se_cap_bps_hz", nullptr}}}});
  CHECK_THROWS_AS(override_patch("nodelimiter"), ConfigError);

  const auto c = resolve_config(std::nullopt, {"simulation.drops=25", "path_loss.margin_db=3", "simulation.se_cap_bps_hz=5"});
  CHECK(c.simulation.drops == 25);
  CHECK(c.path_loss.margin_db == 3.0);
  REQUIRE(c.simulation.se_cap_bps_hz.has_value());
  CHECK(*c.simulation.se_cap_bps_hz == 5.0);
  CHECK(config_hash(c) != config_hash(RunConfig{}));
  CHECK(key_of([] { resolve_config(std::nullopt, {"simulation.nope=1"}); }) == "simulation.nope");
}

TEST_CASE("configuration file then overrides") {
  const auto path = std::filesystem::temp_directory_path() / "mgb_test_config.json";
  {
    std::ofstream f(path);
    f << R"({"simulation": {"per_sector_cells": 32, "seed": 9}, "statmux": {"cells": 8}})";
  }
  const auto c = resolve_config(path.string(), {"simulation.seed=11"});
  CHECK(c.simulation.per_sector_cells == 32);
  CHECK(c.simulation.seed == 11);
  CHECK(c.statmux.cells == 8);
  const auto s = make_sim_config(c);
  CHECK(s.per_sector_cells == 32);
  CHECK(s.master_seed == 11);
  CHECK(s.groups_per_sector() == 8);
  std::filesystem::remove(path);

  CHECK(key_of([] { resolve_config(std::string("/nonexistent/mgb.json"), {}); }) == "--config");
}

TEST_CASE("linkbudget inputs follow the configuration") {
  auto c = resolve_config(std::nullopt, {"linkbudget.multi_stream_count=2", "linkbudget.cell_edge_distance_m=500"});
  const auto in = make_linkbudget_inputs(c);
  REQUIRE(in.size() == 4);
  CHECK(in[0].distance_m == 500.0);
  CHECK(in[2].k_streams == 2);
  CHECK(in[2].label.find("2-Stream") != std::string::npos);
}

TEST_CASE("every documented key exists with its default") {
  const auto d = to_json(RunConfig{});
  std::set<std::string> seen;
  for (const auto& k : key_docs()) {
    CHECK(seen.insert(k.key).second);
    CHECK_NOTHROW(resolve_config(std::nullopt, {k.key + "=" + k.default_value}));
  }
  std::size_t leaves = 0;
  for (auto& [k, v] : d.items()) leaves += v.is_object() ? v.size() : 1;
  CHECK(seen.size() == leaves);
}
