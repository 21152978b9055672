#include "mgb/topology.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mgb/errors.hpp"
#include "mgb/rng.hpp"

namespace mgb {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kTieTolDeg = 1e-9;

}  // namespace

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double bearing_deg(Vec2 from, Vec2 to) {
  return std::atan2(to.y - from.y, to.x - from.x) * 180.0 / std::numbers::pi;
}

double wrap_deg(double a) {
  a = std::fmod(a, 360.0);
  if (a > 180.0) a -= 360.0;
  if (a <= -180.0) a += 360.0;
  return a;
}

NetworkLayout build_layout(double radius_m, int rings, int sectors_per_hub, double min_hub_cell_distance_m) {
  if (!(radius_m > 0.0)) throw ConfigError("hub radius must be > 0", "topology.hub_radius_m");
  if (rings < 0) throw ConfigError("ring count must be >= 0", "topology.rings");
  if (sectors_per_hub < 1) throw ConfigError("need at least one sector", "topology.sectors_per_hub");
  if (!(min_hub_cell_distance_m >= 0.0)) throw ConfigError("min distance must be >= 0", "topology.min_distance_m");

  NetworkLayout layout;
  layout.hub_radius_m = radius_m;
  layout.sectors_per_hub = sectors_per_hub;
  layout.min_hub_cell_distance_m = min_hub_cell_distance_m;
  for (int s = 0; s < sectors_per_hub; ++s) layout.sector_boresights_deg.push_back(360.0 * s / sectors_per_hub);

  const double spacing = kSqrt3 * radius_m;
  std::array<Vec2, 6> step{};
  for (int k = 0; k < 6; ++k) {
    const double a = (30.0 + 60.0 * k) * std::numbers::pi / 180.0;
    step[k] = {spacing * std::cos(a), spacing * std::sin(a)};
  }
  layout.hub_positions.push_back({0.0, 0.0});
  for (int ring = 1; ring <= rings; ++ring) {
    // Start at ring * step[4] and walk the six edges of the ring.
    Vec2 p{ring * step[4].x, ring * step[4].y};
    for (int side = 0; side < 6; ++side) {
      for (int j = 0; j < ring; ++j) {
        layout.hub_positions.push_back(p);
        p = p + step[side];
      }
    }
  }
  return layout;
}

bool in_coverage_hexagon(Vec2 local, double radius_m) {
  const double ax = std::abs(local.x);
  const double ay = std::abs(local.y);
  return ay <= 0.5 * kSqrt3 * radius_m && kSqrt3 * ax + ay <= kSqrt3 * radius_m;
}

int sector_of(Vec2 hub, std::span<const double> boresights_deg, Vec2 cell) {
  if (hub.x == cell.x && hub.y == cell.y) throw DomainError("sector_of: cell coincides with hub");
  if (boresights_deg.empty()) throw DomainError("sector_of: no sectors");
  const double b = bearing_deg(hub, cell);
  int best = 0;
  double best_off = std::abs(wrap_deg(b - boresights_deg[0]));
  for (std::size_t s = 1; s < boresights_deg.size(); ++s) {
    const double off = std::abs(wrap_deg(b - boresights_deg[s]));
    if (off < best_off - kTieTolDeg) {
      best = static_cast<int>(s);
      best_off = off;
    }
  }
  return best;
}

SmallCellDrop drop_small_cells(const NetworkLayout& layout, int per_sector, std::uint64_t seed) {
  if (per_sector < 1) throw ConfigError("cells per sector must be >= 1", "simulation.per_sector_cells");
  const double r = layout.hub_radius_m;
  if (layout.min_hub_cell_distance_m >= r)
    throw ConfigError("minimum hub distance leaves no room inside the hub radius", "topology.min_distance_m");

  SmallCellDrop drop;
  drop.rng_seed = seed;
  Rng rng(seed);
  const int sectors = layout.sectors_per_hub;
  const double half_h = 0.5 * kSqrt3 * r;
  const std::size_t total = layout.sector_count() * static_cast<std::size_t>(per_sector);
  drop.positions.reserve(total);
  drop.serving_hub.reserve(total);
  drop.serving_sector.reserve(total);

  std::vector<std::vector<Vec2>> buckets(static_cast<std::size_t>(sectors));
  for (std::size_t h = 0; h < layout.hub_count(); ++h) {
    const Vec2 hub = layout.hub_positions[h];
    for (auto& b : buckets) b.clear();
    std::size_t filled = 0;
    while (filled < static_cast<std::size_t>(sectors)) {
      const Vec2 local{rng.uniform(-r, r), rng.uniform(-half_h, half_h)};
      if (!in_coverage_hexagon(local, r)) continue;
      if (std::hypot(local.x, local.y) < layout.min_hub_cell_distance_m) continue;
      const Vec2 p = hub + local;
      const int s = sector_of(hub, layout.sector_boresights_deg, p);
      auto& bucket = buckets[static_cast<std::size_t>(s)];
      if (bucket.size() >= static_cast<std::size_t>(per_sector)) continue;
      bucket.push_back(p);
      if (bucket.size() == static_cast<std::size_t>(per_sector)) ++filled;
    }
    for (int s = 0; s < sectors; ++s) {
      for (const Vec2& p : buckets[static_cast<std::size_t>(s)]) {
        drop.positions.push_back(p);
        drop.serving_hub.push_back(static_cast<int>(h));
        drop.serving_sector.push_back(s);
      }
    }
  }
  return drop;
}

std::string layout_csv(const NetworkLayout& layout) {
  std::ostringstream os;
  os.precision(17);
  os << "hub_id,sector_id,x,y,boresight_deg\n";
  for (std::size_t h = 0; h < layout.hub_count(); ++h)
    for (int s = 0; s < layout.sectors_per_hub; ++s)
      os << h << ',' << s << ',' << layout.hub_positions[h].x << ',' << layout.hub_positions[h].y << ','
         << layout.sector_boresights_deg[static_cast<std::size_t>(s)] << '\n';
  return os.str();
}

std::string drop_csv(const SmallCellDrop& drop) {
  std::ostringstream os;
  os.precision(17);
  os << "cell_id,hub_id,sector_id,x,y\n";
  for (std::size_t i = 0; i < drop.size(); ++i)
    os << i << ',' << drop.serving_hub[i] << ',' << drop.serving_sector[i] << ',' << drop.positions[i].x << ','
       << drop.positions[i].y << '\n';
  return os.str();
}

}  // namespace mgb
