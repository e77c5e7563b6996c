// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Run through ctest as `ctest -R acceptance` or directly:
//   ./carnot_acceptance

#include "carnot/box_count.hpp"
#include "carnot/forms.hpp"
#include "carnot/group_ops.hpp"
#include "carnot/presets.hpp"
#include "carnot/pullback_field.hpp"
#include "carnot/sphere_integrals.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace carnot;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::vector<std::string> catalog_of_four() {
  return {"heisenberg(1)", "heisenberg(2)", "engel", "free_step2(3)"};
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  return Rational(num(rng), den(rng));
}

RatVec random_point(std::mt19937_64& rng, int q) {
  RatVec p(q);
  for (auto& v : p) v = random_rational(rng);
  return p;
}

// --- criterion 1: exact algebra suite ---------------------------------------

Outcome criterion1() {
  Outcome out;
  std::mt19937_64 rng(2024);
  for (const auto& name : catalog_of_four()) {
    ValidationReport report = validate_spec(catalog(name));
    out.require(report.all_passed(), name + " validation");

    StratifiedAlgebra alg = build_algebra(catalog(name));
    GroupOps ops(alg);

    // coframe * frame == identity as a polynomial identity
    const auto& f = ops.frame_poly();
    const auto& c = ops.coframe_poly();
    for (int i = 0; i < alg.q; ++i)
      for (int j = 0; j < alg.q; ++j) {
        PolyQ acc(alg.q);
        for (int k = 0; k < alg.q; ++k) acc += c[i][k] * f[k][j];
        PolyQ expect = i == j ? PolyQ::constant(alg.q, Rational(1)) : PolyQ(alg.q);
        out.require(acc == expect, name + " coframe*frame identity");
      }

    bool assoc = true;
    for (int t = 0; t < 100 && assoc; ++t) {
      RatVec x = random_point(rng, alg.q);
      RatVec y = random_point(rng, alg.q);
      RatVec z = random_point(rng, alg.q);
      assoc = ops.bch_product(ops.bch_product(x, y), z) ==
              ops.bch_product(x, ops.bch_product(y, z));
    }
    out.require(assoc, name + " bch associativity (100 rational triples)");

    for (int k = 1; k <= alg.q; ++k)
      out.require(eta_exterior_derivative(alg, maurer_cartan(alg, k)).is_zero(),
                  name + " d(d eta_" + std::to_string(k) + ")");
  }
  return out;
}

// --- criterion 2: theta identity suite --------------------------------------

Outcome criterion2() {
  Outcome out;
  for (const auto& name : catalog_of_four()) {
    StratifiedAlgebra alg = build_algebra(catalog(name));
    for (auto [s, r] : theta_admissible_pairs(alg))
      out.require(theta_product_check(alg, s, r),
                  name + " theta(" + std::to_string(s) + "," + std::to_string(r) + ")");
  }
  StratifiedAlgebra heis = build_algebra(catalog("heisenberg(1)"));
  GammaSolution gamma = gamma_coefficients(heis, 3);
  KForm<Rational> theta = theta_form(heis, 3);
  out.require(theta.degree == 0 && theta.coeffs.size() == 1 &&
                  theta.coeffs.count(Blade(0)) == 1 &&
                  theta.coeffs.at(Blade(0)) == -gamma.gamma.at({1, 2}),
              "heisenberg theta_3 equals -gamma^3_{1,2}");
  return out;
}

// --- criterion 3: span test oracle equivalence -------------------------------

Outcome criterion3() {
  Outcome out;
  std::mt19937_64 rng(777);
  for (const auto& name : catalog_of_four()) {
    StratifiedAlgebra alg = build_algebra(catalog(name));
    const int q = alg.q;
    int done = 0;
    int agreements = 0, trials = 0;
    while (done < 500) {
      std::vector<RatVec> xi;
      for (int t = 0; t < q - 1; ++t) xi.push_back(random_point(rng, q));
      // half the tuples are engineered to contain a basis direction
      if (done % 2 == 0) xi[done % (q - 1)] = [&] {
        RatVec e(q, Rational(0));
        e[rng() % q] = 1;
        return e;
      }();
      RatMat m(q, q - 1);
      for (int col = 0; col < q - 1; ++col)
        for (int row = 0; row < q; ++row) m(row, col) = xi[col][row];
      if (rank_exact(m) != static_cast<std::size_t>(q - 1)) continue;
      ++done;
      for (int s = 1; s <= q; ++s) {
        SpanTestResult res = span_test(q, s, xi);
        RatMat aug(q, q);
        for (int col = 0; col < q - 1; ++col)
          for (int row = 0; row < q; ++row) aug(row, col) = xi[col][row];
        aug(s - 1, q - 1) = 1;
        bool member_oracle = rank_exact(aug) == static_cast<std::size_t>(q - 1);
        ++trials;
        if (res.independent && res.member == member_oracle) ++agreements;
      }
    }
    out.require(agreements == trials,
                name + " span-test oracle agreement " + std::to_string(agreements) + "/" +
                    std::to_string(trials));
  }
  return out;
}

// --- criterion 4: oriented integral suite ------------------------------------

MapFn cubic_map3() {
  MapFn f;
  f.n = 3;
  f.m = 3;
  f.value = [](const double* y, double* out) {
    out[0] = y[0] + y[1] * y[1] * y[2];
    out[1] = y[1] + y[2] * y[2] * y[0];
    out[2] = y[2] + y[0] * y[0] * y[1];
  };
  f.jacobian = [](const double* y, double* jac) {
    const double j[9] = {1,
                         2 * y[1] * y[2],
                         y[1] * y[1],
                         y[2] * y[2],
                         1,
                         2 * y[2] * y[0],
                         2 * y[0] * y[1],
                         y[0] * y[0],
                         1};
    for (int i = 0; i < 9; ++i) jac[i] = j[i];
  };
  return f;
}

Outcome criterion4() {
  Outcome out;
  {
    MapFn f = identity_map(2);
    SphereChartAtlas atlas(2, {0.0, 0.0}, 1.0);
    QuadratureGrid quad = QuadratureGrid::circle(10000);
    double area = oriented_integral(f, coordinate_field(2, 1), {2}, atlas, quad);
    out.require(std::abs(area - kPi) < 1e-6,
                "circle area |err| = " + std::to_string(std::abs(area - kPi)));
  }
  {
    MapFn f = identity_map(3);
    SphereChartAtlas atlas(3, {0.0, 0.0, 0.0}, 1.0);
    QuadratureGrid quad = QuadratureGrid::tensor_ball(2, 40);
    double vol = oriented_integral(f, coordinate_field(3, 1), {2, 3}, atlas, quad);
    out.require(std::abs(vol - 4 * kPi / 3) < 1e-4,
                "ball volume |err| = " + std::to_string(std::abs(vol - 4 * kPi / 3)));
  }
  {
    RefinementStudy study =
        closedness_study(cubic_map3(), {1, 2}, {0.3, -0.2, 0.1}, 0.9, {8, 12, 18, 27, 40});
    out.require(study.order >= 1.9,
                "closedness decay order = " + std::to_string(study.order));
  }
  {
    MapFn f = cubic_map3();
    QuadratureGrid quad = QuadratureGrid::tensor_ball(2, 40);
    SphereChartAtlas narrow(3, {0.0, 0.0, 0.0}, 1.0, 0.15);
    SphereChartAtlas wide(3, {0.0, 0.0, 0.0}, 1.0, 0.30);
    ScalarField g = coordinate_field(3, 2);
    double a = oriented_integral(f, g, {1, 3}, narrow, quad);
    double b = oriented_integral(f, g, {1, 3}, wide, quad);
    out.require(std::abs(a - b) < 1e-6,
                "partition swap delta = " + std::to_string(std::abs(a - b)));
  }
  return out;
}

// --- criterion 5: vanishing chain desk check ---------------------------------

Outcome criterion5() {
  Outcome out;
  StratifiedAlgebra alg = build_algebra(catalog("heisenberg(1)"));
  GroupOps ops(alg);

  {
    Preset p = get_preset("legendrian-cylinder");
    GridMap gm = preset_gridmap(p, 1e-3);
    try {
      ChainReport report = vanishing_chain_check(gm, ops, 1, 1e-4);
      out.require(report.range_residual_max < 1e-6,
                  "cylinder f*eta_3 residual = " + std::to_string(report.range_residual_max));
      out.require(report.omit_s.size() == 1 && report.omit_s[0].residual_max < 1e-4,
                  "cylinder f*(eta_1^eta_2) residual");
      std::size_t low_rank = 0, total = 0;
      for (const auto& [rank, count] : report.rank_histogram) {
        total += count;
        if (rank <= 1) low_rank += count;
      }
      out.require(total > 0 && low_rank == total, "cylinder rank <= 1 on all interior cells");
    } catch (const PreconditionDefect&) {
      out.require(false, "cylinder unexpectedly failed the step-1 hypothesis");
    }
  }

  {
    Preset p = get_preset("flat-plane");
    GridMap gm = preset_gridmap(p, 0.02);
    bool threw = false;
    try {
      vanishing_chain_check(gm, ops, 1, 1e-4);
    } catch (const PreconditionDefect& e) {
      threw = true;
      double worst = 0;
      const DefectField& defect = e.defect();
      for (std::size_t flat = 0; flat < gm.node_count(); ++flat) {
        auto idx = gm.multi_index(flat);
        if (!gm.is_interior(idx)) continue;
        auto uv = gm.node_point(idx);
        double expected = 0.5 * std::hypot(uv[1], -uv[0]);
        worst = std::max(worst, std::abs(defect.values[flat] - expected));
      }
      out.require(worst < 1e-6,
                  "plane defect matches (1/2)|(v,-u)|, worst deviation = " + std::to_string(worst));
    }
    out.require(threw, "plane raises PreconditionDefect");
  }
  return out;
}

// --- criterion 6: dimension experiments --------------------------------------

Outcome criterion6() {
  Outcome out;
  StratifiedAlgebra alg = build_algebra(catalog("heisenberg(1)"));
  GroupOps ops(alg);
  std::vector<double> scales = dyadic_scales(2, 7);
  const std::size_t budget = 20000000;

  {
    Preset p = get_preset("cube");
    PointCloud cloud = preset_cloud(p, ops, preset_eps_min(p, ops, scales, budget));
    BoxCountResult hom = count_scales(cloud, ops, scales, MetricMode::Homogeneous);
    BoxCountResult euc = count_scales(cloud, ops, scales, MetricMode::Euclidean);
    out.require(std::abs(hom.slope - 4.0) <= 0.2,
                "cube homogeneous slope = " + std::to_string(hom.slope));
    out.require(std::abs(euc.slope - 3.0) <= 0.15,
                "cube euclidean slope = " + std::to_string(euc.slope));
  }
  {
    Preset p = get_preset("vertical-plane");
    GridMap rank_map = preset_gridmap(p, 0.01);
    PointCloud cloud = preset_cloud(p, ops, preset_eps_min(p, ops, scales, budget));
    GromovReport report = gromov_experiment(rank_map, cloud, ops, scales, 0.3);
    out.require(report.verdict == "PASS", "plane verdict = " + report.verdict);
    out.require(std::abs(report.slope_homogeneous - 3.0) <= 0.25,
                "plane homogeneous slope = " + std::to_string(report.slope_homogeneous));
    out.require(std::abs(report.slope_euclidean - 2.0) <= 0.15,
                "plane euclidean slope = " + std::to_string(report.slope_euclidean));
  }
  {
    Preset p = get_preset("legendrian-cylinder");
    GridMap rank_map = preset_gridmap(p, 0.01);
    PointCloud cloud = preset_cloud(p, ops, preset_eps_min(p, ops, scales, budget));
    GromovReport report = gromov_experiment(rank_map, cloud, ops, scales, 0.3);
    out.require(report.verdict == "INAPPLICABLE", "cylinder verdict = " + report.verdict);
    out.require(std::abs(report.slope_homogeneous - 1.0) <= 0.2,
                "cylinder homogeneous slope = " + std::to_string(report.slope_homogeneous));
  }
  return out;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  std::vector<Criterion> criteria{
      {1, "exact algebra suite", criterion1, 10.0},
      {2, "theta identity suite", criterion2, 5.0},
      {3, "span-test oracle equivalence (500 tuples/group)", criterion3, 60.0},
      {4, "oriented integral suite", criterion4, 30.0},
      {5, "vanishing chain desk check", criterion5, 60.0},
      {6, "dimension experiments", criterion6, 60.0},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criterion.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.budget_seconds) {
      out.pass = false;
      out.detail += (out.detail.empty() ? "" : "; ") + std::string("runtime ") +
                    std::to_string(seconds) + "s exceeds " +
                    std::to_string(criterion.budget_seconds) + "s";
    }
    std::printf("[%d] %-48s %s (%.1f s)%s%s\n", criterion.id, criterion.name.c_str(),
                out.pass ? "PASS" : "FAIL", seconds, out.detail.empty() ? "" : "  -- ",
                out.detail.c_str());
    if (!out.pass) ++failures;
  }
  std::printf("[7] %-48s NOTE (analytic a.e. statements and measure positivity are outside "
              "numeric reach; criteria 1-6 carry the acceptance)\n",
              "scope note");
  std::printf("%s\n", failures == 0 ? "acceptance: ALL PASS" : "acceptance: FAILURES");
  return failures == 0 ? 0 : 1;
}
