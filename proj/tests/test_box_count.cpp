#include "carnot/box_count.hpp"

#include "carnot/presets.hpp"

#include "doctest.h"

#include <cmath>

using namespace carnot;

namespace {

const GroupOps& heis_ops() {
  static StratifiedAlgebra alg = build_algebra(catalog("heisenberg(1)"));
  static GroupOps ops(alg);
  return ops;
}

} // namespace

TEST_CASE("a single point occupies one box at every scale") {
  PointCloud cloud = PointCloud::from_points(3, {0.37, -0.82, 0.15}, "point");
  std::vector<double> scales = dyadic_scales(1, 5);
  BoxCountResult res = count_scales(cloud, heis_ops(), scales, MetricMode::Homogeneous);
  for (std::size_t i = 0; i < res.counts.size(); ++i) {
    CHECK(res.counts[i] == 1);
    CHECK_FALSE(res.saturated[i]);
  }
  CHECK(res.slope == doctest::Approx(0.0));
  CHECK(res.used_scales == 5);
}

TEST_CASE("horizontal segment counts like a one-dimensional set") {
  Preset p = get_preset("segment");
  PointCloud cloud = preset_cloud(p, heis_ops(), std::pow(2.0, -7));
  std::vector<double> scales = dyadic_scales(2, 7);
  BoxCountResult hom = count_scales(cloud, heis_ops(), scales, MetricMode::Homogeneous);
  BoxCountResult euc = count_scales(cloud, heis_ops(), scales, MetricMode::Euclidean);
  CHECK(hom.slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(euc.slope == doctest::Approx(1.0).epsilon(0.05));
  // N(2^-k) tracks 2^k for the unit segment
  for (std::size_t i = 0; i < scales.size(); ++i)
    CHECK(static_cast<double>(hom.counts[i]) ==
          doctest::Approx(1.0 / scales[i]).epsilon(0.05));
}

TEST_CASE("vertical plane has homogeneous slope 3 and euclidean slope 2") {
  Preset p = get_preset("vertical-plane");
  PointCloud cloud = preset_cloud(p, heis_ops(), std::pow(2.0, -5));
  std::vector<double> scales = dyadic_scales(2, 5);
  BoxCountResult hom = count_scales(cloud, heis_ops(), scales, MetricMode::Homogeneous);
  BoxCountResult euc = count_scales(cloud, heis_ops(), scales, MetricMode::Euclidean);
  CHECK(hom.slope == doctest::Approx(3.0).epsilon(0.06));
  CHECK(euc.slope == doctest::Approx(2.0).epsilon(0.06));
  CHECK(hom.slope >= euc.slope);
  // monotone table
  for (std::size_t i = 1; i < hom.counts.size(); ++i) CHECK(hom.counts[i] >= hom.counts[i - 1]);
}

TEST_CASE("solid cube reaches the homogeneous dimension four") {
  Preset p = get_preset("cube");
  PointCloud cloud = preset_cloud(p, heis_ops(), std::pow(2.0, -4));
  std::vector<double> scales = dyadic_scales(2, 4);
  BoxCountResult hom = count_scales(cloud, heis_ops(), scales, MetricMode::Homogeneous);
  BoxCountResult euc = count_scales(cloud, heis_ops(), scales, MetricMode::Euclidean);
  CHECK(hom.slope == doctest::Approx(4.0).epsilon(0.05));
  CHECK(euc.slope == doctest::Approx(3.0).epsilon(0.05));
  CHECK(hom.slope <= heis_ops().algebra().Q + 0.2);
}

TEST_CASE("saturation is flagged when sampling density runs out") {
  // segment sampled adequately only down to 2^-4
  Preset p = get_preset("segment");
  PointCloud cloud = preset_cloud(p, heis_ops(), std::pow(2.0, -4));
  BoxCount fine = anisotropic_box_count(cloud, heis_ops(), std::pow(2.0, -9), MetricMode::Homogeneous);
  CHECK(fine.saturated);
  BoxCount ok = anisotropic_box_count(cloud, heis_ops(), std::pow(2.0, -3), MetricMode::Homogeneous);
  CHECK_FALSE(ok.saturated);
}

TEST_CASE("dimension fit recovers exact power laws") {
  std::vector<double> eps{0.25, 0.125, 0.0625, 0.03125};
  std::vector<std::size_t> counts;
  for (double e : eps) counts.push_back(static_cast<std::size_t>(std::lround(std::pow(e, -3.0))));
  DimensionFit fit = dimension_fit(eps, counts);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.residual < 1e-9);
  CHECK_THROWS_AS(dimension_fit({0.5, 0.25}, {2, 4}), CarnotError);
}

TEST_CASE("legendrian cylinder counts like a curve and is inapplicable") {
  Preset p = get_preset("legendrian-cylinder");
  GridMap rank_map = preset_gridmap(p, 0.01);
  PointCloud cloud = preset_cloud(p, heis_ops(), std::pow(2.0, -6));
  std::vector<double> scales = dyadic_scales(2, 6);
  GromovReport report = gromov_experiment(rank_map, cloud, heis_ops(), scales, 0.3);
  CHECK(report.verdict == "INAPPLICABLE");
  CHECK(report.full_rank_fraction < 0.01);
  CHECK(report.slope_homogeneous == doctest::Approx(1.0).epsilon(0.2));
  CHECK(report.slope_homogeneous >= report.slope_euclidean - 0.1);
}

TEST_CASE("vertical plane passes the dimension comparison experiment") {
  Preset p = get_preset("vertical-plane");
  GridMap rank_map = preset_gridmap(p, 0.01);
  PointCloud cloud = preset_cloud(p, heis_ops(), std::pow(2.0, -5));
  std::vector<double> scales = dyadic_scales(2, 5);
  GromovReport report = gromov_experiment(rank_map, cloud, heis_ops(), scales, 0.3);
  CHECK(report.verdict == "PASS");
  CHECK(report.full_rank_fraction == doctest::Approx(1.0));
  CHECK(report.slope_homogeneous == doctest::Approx(3.0).epsilon(0.1));
  CHECK(!report.caveat.empty()); // measure positivity is never certified
}

TEST_CASE("graph surface over the plane passes with slope near 3") {
  Preset p = get_preset("graph");
  GridMap rank_map = preset_gridmap(p, 0.01);
  PointCloud cloud = preset_cloud(p, heis_ops(), std::pow(2.0, -5));
  std::vector<double> scales = dyadic_scales(2, 5);
  GromovReport report = gromov_experiment(rank_map, cloud, heis_ops(), scales, 0.3);
  CHECK(report.verdict == "PASS");
  CHECK(report.slope_homogeneous > 2.8);
  CHECK(report.slope_homogeneous < 3.2);
}

TEST_CASE("refinement stability of the fitted slope") {
  Preset p = get_preset("vertical-plane");
  std::vector<double> scales = dyadic_scales(2, 4);
  PointCloud coarse = preset_cloud(p, heis_ops(), std::pow(2.0, -4));
  // doubling the parameter resolution
  std::vector<std::size_t> res = adapted_resolution(p.generator, p.domain, heis_ops(),
                                                    std::pow(2.0, -4), MetricMode::Homogeneous);
  for (auto& r : res) r *= 2;
  PointCloud fine = PointCloud::from_generator(p.generator, p.domain, res, "refined");
  BoxCountResult a = count_scales(coarse, heis_ops(), scales, MetricMode::Homogeneous);
  BoxCountResult b = count_scales(fine, heis_ops(), scales, MetricMode::Homogeneous);
  CHECK(std::abs(a.slope - b.slope) <= a.residual + 0.02);
}

TEST_CASE("mode ordering holds for every preset cloud") {
  for (const char* name : {"segment", "vertical-plane", "legendrian-cylinder"}) {
    Preset p = get_preset(name);
    PointCloud cloud = preset_cloud(p, heis_ops(), std::pow(2.0, -5));
    std::vector<double> scales = dyadic_scales(2, 5);
    BoxCountResult hom = count_scales(cloud, heis_ops(), scales, MetricMode::Homogeneous);
    BoxCountResult euc = count_scales(cloud, heis_ops(), scales, MetricMode::Euclidean);
    if (hom.used_scales >= 3 && euc.used_scales >= 3)
      CHECK(hom.slope >= euc.slope - 0.1);
    for (std::size_t i = 1; i < hom.counts.size(); ++i)
      if (!hom.saturated[i] && !hom.saturated[i - 1]) CHECK(hom.counts[i] >= hom.counts[i - 1]);
  }
}

TEST_CASE("cloud constructors validate their input") {
  CHECK_THROWS_AS(PointCloud::from_points(3, {}, "empty"), CarnotError);
  CHECK_THROWS_AS(PointCloud::from_points(3, {1.0, 2.0}, "ragged"), DimensionMismatch);
  double nan = std::nan("");
  CHECK_THROWS_AS(PointCloud::from_points(1, {nan}, "bad"), CarnotError);
  CHECK_THROWS_AS(anisotropic_box_count(PointCloud::from_points(3, {0, 0, 0}, "p"), heis_ops(),
                                        -1.0, MetricMode::Homogeneous),
                  CarnotError);
}
