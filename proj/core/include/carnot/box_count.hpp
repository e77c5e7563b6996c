#pragma once

#include "carnot/grid_map.hpp"
#include "carnot/group_ops.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace carnot {

/// Samples in R^q, either materialized or streamed from a generator over a
/// cell-center grid. Carries the max adjacent image displacement per
/// coordinate, which drives the sampling-density (saturation) checks.
class PointCloud {
public:
  static PointCloud from_points(int q, std::vector<double> points, std::string provenance);
  static PointCloud from_gridmap(const GridMap& gm, std::string provenance);
  static PointCloud from_generator(const Generator& g, const Box& domain,
                                   std::vector<std::size_t> res, std::string provenance);

  int q() const { return q_; }
  std::size_t size() const { return count_; }
  const std::string& provenance() const { return provenance_; }
  const std::vector<double>& max_step() const { return max_step_; }

  /// Random access by flat index; generated clouds evaluate on demand.
  void point_at(std::size_t flat, double* out) const;

private:
  int q_ = 0;
  std::size_t count_ = 0;
  std::string provenance_;
  std::vector<double> max_step_;
  std::vector<double> points_; // materialized storage (empty when generated)
  // generated form
  bool generated_ = false;
  Generator gen_;
  Box domain_;
  std::vector<std::size_t> res_;
  std::vector<std::size_t> strides_;
  std::vector<double> steps_;

  void compute_max_step_generated();
};

enum class MetricMode { Homogeneous, Euclidean };

std::string metric_mode_name(MetricMode mode);

struct BoxCount {
  std::size_t count = 0;
  bool density_ok = true;   // adjacent samples move less than half a cell side
  bool saturated = false;   // density violated or count pinned at cloud size
};

/// Counts occupied cells at scale eps. Euclidean mode uses plain eps-cubes.
/// Homogeneous mode uses group-adapted cells: the layer-kappa digits are
/// floors of the residual after left-dividing by the already-fixed lower
/// layers, so every cell is a left translate of the graded eps-box. Cells of
/// a fixed global anisotropic grid are not comparable to homogeneous balls
/// away from the origin; the adapted cells are.
BoxCount anisotropic_box_count(const PointCloud& cloud, const GroupOps& ops, double eps,
                               MetricMode mode);

struct BoxCountResult {
  MetricMode mode = MetricMode::Homogeneous;
  std::vector<double> eps;
  std::vector<std::size_t> counts;
  std::vector<bool> saturated;
  double slope = 0;
  double residual = 0;
  int used_scales = 0;
};

/// Runs the scale sweep and fits the unsaturated scales.
BoxCountResult count_scales(const PointCloud& cloud, const GroupOps& ops,
                            const std::vector<double>& eps_list, MetricMode mode);

struct DimensionFit {
  double slope = 0;
  double residual = 0; // RMS deviation of the least-squares line
  int used_scales = 0;
};

/// Least-squares slope of log N against log(1/eps). Requires >= 3 scales.
DimensionFit dimension_fit(const std::vector<double>& eps, const std::vector<std::size_t>& counts);

struct GromovReport {
  std::string verdict;        // PASS, FAIL, INAPPLICABLE
  double slope_homogeneous = 0;
  double residual_homogeneous = 0;
  double slope_euclidean = 0;
  double residual_euclidean = 0;
  double full_rank_fraction = 0;
  std::map<int, std::size_t> rank_histogram;
  BoxCountResult homogeneous;
  BoxCountResult euclidean;
  int Q = 0;
  double tol = 0;
  std::string caveat;
};

/// Dimension-comparison experiment for a sampled hypersurface: the rank
/// histogram of rank_map is the full-rank hypothesis surrogate (>= 99% of
/// interior cells), and PASS means the fitted homogeneous slope reaches
/// Q - 1 - tol. Rank failure reports INAPPLICABLE, not FAIL.
GromovReport gromov_experiment(const GridMap& rank_map, const PointCloud& cloud,
                               const GroupOps& ops, const std::vector<double>& scales,
                               double tol);

/// Scale list 2^{-a} .. 2^{-b}.
std::vector<double> dyadic_scales(int a, int b);

/// Cell-center resolutions adapted to the finest scale: per axis, the step
/// is small enough that adjacent image samples move less than half the
/// smallest cell side in every layer (estimated by probing the generator's
/// partial derivatives on a coarse grid, with a safety factor).
std::vector<std::size_t> adapted_resolution(const Generator& g, const Box& domain,
                                            const GroupOps& ops, double eps_min, MetricMode mode);

} // namespace carnot
