#pragma once

#include "carnot/box_count.hpp"
#include "carnot/grid_map.hpp"
#include "carnot/group_ops.hpp"

#include <string>
#include <vector>

namespace carnot {

/// Named desk-scale experiments over the first Heisenberg group. The same
/// presets back the chain and dim commands and the acceptance suite.
struct Preset {
  std::string name;
  Generator generator;
  Box domain;
  bool hypersurface = false; // n == q-1, eligible for the dimension experiment
};

Preset get_preset(const std::string& name);
std::vector<std::string> preset_names();

/// Samples the preset at parameter step h (nodes every h along each axis).
GridMap preset_gridmap(const Preset& p, double h);

/// Density-adapted cell-center cloud for box counting down to eps_min.
PointCloud preset_cloud(const Preset& p, const GroupOps& ops, double eps_min);

/// Finest scale that keeps the preset's cloud size within a desk-scale
/// budget; coarser presets (the solid cube) saturate earlier by design.
double preset_eps_min(const Preset& p, const GroupOps& ops, const std::vector<double>& scales,
                      std::size_t point_budget);

} // namespace carnot
