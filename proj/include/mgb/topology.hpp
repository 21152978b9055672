#ifndef MGB_TOPOLOGY_HPP
#define MGB_TOPOLOGY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mgb {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
double distance(Vec2 a, Vec2 b);
// Bearing of `to` seen from `from`, degrees counter-clockwise from +x, in (-180, 180].
double bearing_deg(Vec2 from, Vec2 to);
// Signed difference a - b wrapped to (-180, 180].
double wrap_deg(double a);

// Hubs on a hexagonal lattice. `hub_radius_m` is the circumradius of each
// hub's hexagonal coverage cell, so neighbouring hubs are sqrt(3) * radius
// apart. Coverage hexagons have vertices at 0, 60, ..., 300 degrees and
// the default sector boresights point at the 0/120/240 degree vertices.
struct NetworkLayout {
  std::vector<Vec2> hub_positions;
  double hub_radius_m = 1000.0;
  int sectors_per_hub = 3;
  std::vector<double> sector_boresights_deg;  // shared by all hubs
  double min_hub_cell_distance_m = 100.0;

  std::size_t hub_count() const { return hub_positions.size(); }
  std::size_t sector_count() const { return hub_count() * static_cast<std::size_t>(sectors_per_hub); }
};

// Centre hub at the origin plus `rings` hexagonal rings (ring k has 6k hubs).
NetworkLayout build_layout(double radius_m, int rings = 2, int sectors_per_hub = 3,
                           double min_hub_cell_distance_m = 100.0);

// True if `local` (relative to a hub) lies in that hub's coverage hexagon.
bool in_coverage_hexagon(Vec2 local, double radius_m);

struct SmallCellDrop {
  std::vector<Vec2> positions;
  std::vector<int> serving_hub;
  std::vector<int> serving_sector;  // sector index within the hub
  std::uint64_t rng_seed = 0;

  std::size_t size() const { return positions.size(); }
};

// Uniform placement over each hub's coverage hexagon outside the
// minimum-distance disc, with exactly `per_sector` cells in every sector.
// Cells are ordered by hub, then sector, then draw order.
SmallCellDrop drop_small_cells(const NetworkLayout& layout, int per_sector, std::uint64_t seed);

// Sector whose boresight is closest in azimuth to the hub->cell bearing;
// ties go to the lowest index.
int sector_of(Vec2 hub, std::span<const double> boresights_deg, Vec2 cell);

std::string layout_csv(const NetworkLayout& layout);
std::string drop_csv(const SmallCellDrop& drop);

}  // namespace mgb

#endif
