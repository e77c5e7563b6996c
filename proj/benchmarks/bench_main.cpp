#include <benchmark/benchmark.h>

#include "carnot/box_count.hpp"
#include "carnot/forms.hpp"
#include "carnot/group_ops.hpp"
#include "carnot/presets.hpp"
#include "carnot/pullback_field.hpp"
#include "carnot/sphere_integrals.hpp"

#include <random>

using namespace carnot;

namespace {

const GroupOps& heis_ops() {
  static StratifiedAlgebra alg = build_algebra(catalog("heisenberg(1)"));
  static GroupOps ops(alg);
  return ops;
}

const GroupOps& engel_ops() {
  static StratifiedAlgebra alg = build_algebra(catalog("engel"));
  static GroupOps ops(alg);
  return ops;
}

void BM_BuildGroupOps(benchmark::State& state) {
  StratifiedAlgebra alg = build_algebra(catalog("free_step2(3)"));
  for (auto _ : state) {
    GroupOps ops(alg);
    benchmark::DoNotOptimize(ops.product_poly().size());
  }
}
BENCHMARK(BM_BuildGroupOps);

void BM_BchProductRational(benchmark::State& state) {
  const GroupOps& ops = engel_ops();
  RatVec x{Rational(1, 3), Rational(-2, 5), Rational(1), Rational(0)};
  RatVec y{Rational(2), Rational(1, 7), Rational(-1, 2), Rational(3)};
  for (auto _ : state) benchmark::DoNotOptimize(ops.bch_product(x, y).size());
}
BENCHMARK(BM_BchProductRational);

void BM_BchProductDouble(benchmark::State& state) {
  const GroupOps& ops = engel_ops();
  double xy[8] = {0.3, -0.4, 1.0, 0.0, 2.0, 0.14, -0.5, 3.0};
  double out[4];
  for (auto _ : state) {
    ops.bch_product_into(xy, out);
    benchmark::DoNotOptimize(out[3]);
  }
}
BENCHMARK(BM_BchProductDouble);

void BM_CoframeEval(benchmark::State& state) {
  const GroupOps& ops = heis_ops();
  GroupPointD z{0.2, -0.7, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(ops.coframe(z)(2, 0));
}
BENCHMARK(BM_CoframeEval);

void BM_ThetaProductCheck(benchmark::State& state) {
  StratifiedAlgebra alg = build_algebra(catalog("free_step2(3)"));
  for (auto _ : state) benchmark::DoNotOptimize(theta_product_check(alg, 5, 5));
}
BENCHMARK(BM_ThetaProductCheck);

void BM_PullbackField(benchmark::State& state) {
  Preset p = get_preset("graph");
  GridMap gm = preset_gridmap(p, 1.0 / state.range(0));
  for (auto _ : state) {
    FormField field = pullback_field(gm, heis_ops(), {3});
    benchmark::DoNotOptimize(field.max_interior_norm());
  }
  state.SetItemsProcessed(state.iterations() * gm.node_count());
}
BENCHMARK(BM_PullbackField)->Arg(64)->Arg(256);

void BM_BoxCount(benchmark::State& state) {
  Preset p = get_preset("vertical-plane");
  PointCloud cloud = preset_cloud(p, heis_ops(), std::pow(2.0, -4));
  for (auto _ : state) {
    BoxCount bc = anisotropic_box_count(cloud, heis_ops(), std::pow(2.0, -4),
                                        MetricMode::Homogeneous);
    benchmark::DoNotOptimize(bc.count);
  }
  state.SetItemsProcessed(state.iterations() * cloud.size());
}
BENCHMARK(BM_BoxCount);

void BM_OrientedIntegral(benchmark::State& state) {
  MapFn f = identity_map(3);
  SphereChartAtlas atlas(3, {0.0, 0.0, 0.0}, 1.0);
  QuadratureGrid quad = QuadratureGrid::tensor_ball(2, static_cast<int>(state.range(0)));
  ScalarField g = coordinate_field(3, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(oriented_integral(f, g, {2, 3}, atlas, quad));
  state.SetItemsProcessed(state.iterations() * quad.size());
}
BENCHMARK(BM_OrientedIntegral)->Arg(20)->Arg(40);

} // namespace

BENCHMARK_MAIN();
