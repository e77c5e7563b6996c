#include "carnot/presets.hpp"

#include <algorithm>
#include <cmath>

namespace carnot {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

} // namespace

Preset get_preset(const std::string& name) {
  Preset p;
  p.name = name;
  if (name == "vertical-plane") {
    p.generator = make_generator("vertical_plane", 2, 3, {});
    p.domain = Box{{0.0, 0.0}, {1.0, 1.0}};
    p.hypersurface = true;
    return p;
  }
  if (name == "graph") {
    p.generator = make_generator("graph", 2, 3, {{"amp", 0.25}});
    p.domain = Box{{0.0, 0.0}, {1.0, 1.0}};
    p.hypersurface = true;
    return p;
  }
  if (name == "legendrian-cylinder") {
    // the image is the horizontal lift of the circle; the second parameter is
    // inert, so keep its extent at two grid steps of the acceptance run
    p.generator = make_generator("legendrian_lift", 2, 3, {{"radius", 1.0}});
    p.domain = Box{{0.0, 0.0}, {kTwoPi, 0.002}};
    p.hypersurface = true;
    return p;
  }
  if (name == "flat-plane") { // inclusion (u, v) -> (u, v, 0)
    p.generator = make_generator("graph", 2, 3, {{"amp", 0.0}});
    p.domain = Box{{-1.0, -1.0}, {1.0, 1.0}};
    p.hypersurface = true;
    return p;
  }
  if (name == "cube") {
    p.generator = make_generator("identity", 3, 3, {});
    p.domain = Box{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    p.hypersurface = false;
    return p;
  }
  if (name == "segment") {
    p.generator = make_generator("axis_embed", 1, 3, {{"axis", 1}});
    p.domain = Box{{0.0}, {1.0}};
    p.hypersurface = false;
    return p;
  }
  if (name == "constant") {
    p.generator = make_generator("constant", 2, 3, {{"c1", 0.25}, {"c2", -0.5}, {"c3", 1.0}});
    p.domain = Box{{0.0, 0.0}, {1.0, 1.0}};
    p.hypersurface = true;
    return p;
  }
  throw UnknownName("unknown preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"vertical-plane", "graph",   "legendrian-cylinder", "flat-plane",
          "cube",           "segment", "constant"};
}

GridMap preset_gridmap(const Preset& p, double h) {
  if (!(h > 0)) throw CarnotError("grid step must be positive");
  std::vector<int> res(p.domain.dim());
  for (int a = 0; a < p.domain.dim(); ++a) {
    int count = static_cast<int>(std::ceil(p.domain.extent(a) / h)) + 1;
    res[a] = std::max(count, 3);
  }
  return GridMap::sample(p.generator, p.domain, res);
}

PointCloud preset_cloud(const Preset& p, const GroupOps& ops, double eps_min) {
  std::vector<std::size_t> res =
      adapted_resolution(p.generator, p.domain, ops, eps_min, MetricMode::Homogeneous);
  return PointCloud::from_generator(p.generator, p.domain, res, p.name);
}

double preset_eps_min(const Preset& p, const GroupOps& ops, const std::vector<double>& scales,
                      std::size_t point_budget) {
  double finest = scales.front();
  for (double eps : scales) finest = std::min(finest, eps);
  while (true) {
    std::vector<std::size_t> res =
        adapted_resolution(p.generator, p.domain, ops, finest, MetricMode::Homogeneous);
    std::size_t total = 1;
    for (std::size_t r : res) total *= r;
    if (total <= point_budget) return finest;
    finest *= 2; // drop the finest scale until the sampling budget holds
    if (finest > scales.front() * 1024) return finest;
  }
}

} // namespace carnot
