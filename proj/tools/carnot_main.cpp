// carnot: command line front end for stratified-group calculations.
// Subcommands: validate | frames | mc-table | theta | chain |
//              integrate-sphere | dim | selftest

#include "carnot/box_count.hpp"
#include "carnot/errors.hpp"
#include "carnot/forms.hpp"
#include "carnot/group_ops.hpp"
#include "carnot/presets.hpp"
#include "carnot/pullback_field.hpp"
#include "carnot/spec_io.hpp"
#include "carnot/sphere_integrals.hpp"
#include "carnot/toml_lite.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace carnot;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

AlgebraSpec resolve_group(const std::string& group, const std::string& spec_path) {
  if (!spec_path.empty()) return load_spec_toml(spec_path);
  if (group.empty()) throw ParseError("no group given; use --group NAME or --spec FILE");
  if (group.size() > 5 && group.substr(group.size() - 5) == ".toml") return load_spec_toml(group);
  return catalog(group);
}

std::string form_text(const KForm<Rational>& form, const std::string& symbol) {
  if (form.coeffs.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [blade, coeff] : form.coeffs) {
    Rational c = coeff;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    std::vector<int> idx = blade_indices(blade);
    if (idx.empty()) {
      os << to_string(c);
      continue;
    }
    if (c != 1) os << to_string(c) << "*";
    for (std::size_t t = 0; t < idx.size(); ++t) {
      if (t) os << "^";
      os << symbol << idx[t];
    }
  }
  return os.str();
}

std::vector<std::string> coord_names(int q, const std::string& stem) {
  std::vector<std::string> names;
  for (int i = 1; i <= q; ++i) names.push_back(stem + std::to_string(i));
  return names;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CarnotError("cannot open for writing: " + path);
  return out;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& group, const std::string& spec_path) {
  AlgebraSpec spec = resolve_group(group, spec_path);
  ValidationReport report = validate_spec(spec);

  int q = 0;
  for (int d : spec.strata_dims) q += d;
  std::cout << "group: " << spec.name << "\n";
  std::cout << "q = " << q << "   step = " << spec.strata_dims.size() << "   strata = [";
  for (std::size_t i = 0; i < spec.strata_dims.size(); ++i) {
    if (i) std::cout << ", ";
    std::cout << spec.strata_dims[i];
  }
  std::cout << "]\n";
  int Q = 0;
  for (std::size_t k = 0; k < spec.strata_dims.size(); ++k)
    Q += static_cast<int>(k + 1) * spec.strata_dims[k];
  std::cout << "Q = " << Q << "\n";
  for (const auto& check : report.checks) {
    std::cout << check.name;
    for (std::size_t pad = check.name.size(); pad < 18; ++pad) std::cout << '.';
    std::cout << ' ' << (check.passed ? "PASS" : "FAIL");
    if (!check.passed) std::cout << "  (" << check.detail << ")";
    std::cout << "\n";
  }
  if (report.all_passed()) {
    StratifiedAlgebra alg = build_algebra(spec);
    std::cout << "commutative " << (alg.commutative ? "yes" : "no") << "\n";
  }
  return report.all_passed() ? 0 : 1;
}

int cmd_frames(const std::string& group, const std::string& spec_path,
               const std::string& point_text) {
  StratifiedAlgebra alg = build_algebra(resolve_group(group, spec_path));
  GroupOps ops(alg);
  auto names = coord_names(alg.q, "z");

  if (point_text.empty()) {
    std::cout << "left-invariant frame X_i(z) as columns:\n";
    for (int i = 0; i < alg.q; ++i) {
      std::cout << "X_" << i + 1 << "(z) = (";
      for (int r = 0; r < alg.q; ++r) {
        if (r) std::cout << ", ";
        std::cout << ops.frame_poly()[r][i].str(names);
      }
      std::cout << ")\n";
    }
    std::cout << "dual coframe eta_r(z) as rows:\n";
    for (int r = 0; r < alg.q; ++r) {
      std::cout << "eta_" << r + 1 << "(z) = (";
      for (int c = 0; c < alg.q; ++c) {
        if (c) std::cout << ", ";
        std::cout << ops.coframe_poly()[r][c].str(names);
      }
      std::cout << ")\n";
    }
    return 0;
  }

  RatVec z;
  std::stringstream ss(point_text);
  std::string field;
  while (std::getline(ss, field, ',')) z.push_back(parse_rational(field));
  RatMat f = ops.frame(z);
  RatMat c = ops.coframe(z);
  std::cout << "frame at (" << point_text << "):\n";
  for (int r = 0; r < alg.q; ++r) {
    for (int i = 0; i < alg.q; ++i) std::cout << (i ? " " : "") << to_string(f(r, i));
    std::cout << "\n";
  }
  std::cout << "coframe:\n";
  for (int r = 0; r < alg.q; ++r) {
    for (int i = 0; i < alg.q; ++i) std::cout << (i ? " " : "") << to_string(c(r, i));
    std::cout << "\n";
  }
  return 0;
}

int cmd_mc_table(const std::string& group, const std::string& spec_path, const std::string& out,
                 unsigned seed) {
  StratifiedAlgebra alg = build_algebra(resolve_group(group, spec_path));
  for (int k = 1; k <= alg.q; ++k)
    std::cout << "d eta_" << k << " = " << form_text(maurer_cartan(alg, k), "eta") << "\n";
  if (!out.empty()) {
    std::ofstream csv = open_out(out);
    csv << "# group=" << alg.name << " seed=" << seed << "\n";
    csv << "k,blade,coefficient\n";
    for (int k = 1; k <= alg.q; ++k)
      for (const auto& [blade, c] : maurer_cartan(alg, k).coeffs) {
        std::vector<int> idx = blade_indices(blade);
        csv << k << "," << idx[0] << "^" << idx[1] << "," << to_string(c) << "\n";
      }
  }
  return 0;
}

int cmd_theta(const std::string& group, const std::string& spec_path, const std::string& out,
              unsigned seed) {
  StratifiedAlgebra alg = build_algebra(resolve_group(group, spec_path));
  if (alg.commutative) {
    std::cout << "group is commutative: theta identities require step >= 2\n";
    return 3;
  }
  auto pairs = theta_admissible_pairs(alg);
  bool all_ok = true;
  std::cout << "theta forms:\n";
  for (int s = 1; s <= alg.q; ++s) {
    if (alg.degree(s) < 2) continue;
    std::cout << "theta_" << s << " = " << form_text(theta_form(alg, s), "eta") << "\n";
  }
  std::cout << "product identity theta_s ^ d eta_r ^ eta-range == delta_{r,s} eta-top:\n";
  std::ostringstream csv;
  csv << "# group=" << alg.name << " seed=" << seed << "\n";
  csv << "s,r,verdict\n";
  for (auto [s, r] : pairs) {
    bool ok = theta_product_check(alg, s, r);
    all_ok = all_ok && ok;
    std::cout << "(s=" << s << ", r=" << r << ") " << (ok ? "PASS" : "FAIL") << "\n";
    csv << s << "," << r << "," << (ok ? "PASS" : "FAIL") << "\n";
  }
  std::cout << (all_ok ? "all pairs PASS" : "FAILURES present") << "\n";
  if (!out.empty()) open_out(out) << csv.str();
  return all_ok ? 0 : 1;
}

int cmd_chain(const std::string& group, const std::string& spec_path, const std::string& preset,
              double h, int kappa, double tol) {
  StratifiedAlgebra alg = build_algebra(resolve_group(group, spec_path));
  GroupOps ops(alg);
  Preset p = get_preset(preset);
  GridMap gm = preset_gridmap(p, h);
  std::cout << "group = " << alg.name << "  preset = " << preset << "  h = " << fmt(h)
            << "  kappa = " << kappa << "  tol = " << fmt(tol) << "\n";
  try {
    ChainReport report = vanishing_chain_check(gm, ops, kappa, tol);
    std::cout << "step-1 range residual: max = " << fmt(report.range_residual_max)
              << "  mean = " << fmt(report.range_residual_mean) << "\n";
    for (const auto& per : report.omit_s)
      std::cout << "omit-s residual (s=" << per.s << "): max = " << fmt(per.residual_max)
                << "  mean = " << fmt(per.residual_mean) << "\n";
    std::cout << "rank histogram over " << report.interior_count << " interior cells:";
    for (const auto& [rank, count] : report.rank_histogram)
      std::cout << "  rank " << rank << ": " << count;
    std::cout << "\n";
    return 0;
  } catch (const PreconditionDefect& e) {
    const DefectField& d = e.defect();
    std::cout << "PreconditionDefect: " << e.what() << "\n";
    std::cout << "defect max = " << fmt(d.max_interior) << "  mean = " << fmt(d.mean_interior)
              << "  fraction above tol = " << fmt(d.fraction_above_tol) << "\n";
    return 1;
  }
}

MapFn named_map(const std::string& name, int n) {
  if (name == "identity") return identity_map(n);
  if (name == "twisted") {
    if (n != 3) throw ParseError("map 'twisted' is three-dimensional");
    MapFn f;
    f.n = 3;
    f.m = 3;
    f.value = [](const double* y, double* out) {
      out[0] = y[0] + y[1] * y[1];
      out[1] = y[1] + y[2] * y[2];
      out[2] = y[2] + y[0] * y[0];
    };
    return f;
  }
  if (name == "cubic") {
    if (n != 3) throw ParseError("map 'cubic' is three-dimensional");
    MapFn f;
    f.n = 3;
    f.m = 3;
    f.value = [](const double* y, double* out) {
      out[0] = y[0] + y[1] * y[1] * y[2];
      out[1] = y[1] + y[2] * y[2] * y[0];
      out[2] = y[2] + y[0] * y[0] * y[1];
    };
    return f;
  }
  throw ParseError("unknown map: " + name + " (identity, twisted, cubic)");
}

ScalarField named_weight(const std::string& name, int n) {
  if (name == "one") return constant_field(n, 1.0);
  if (name == "f1") return coordinate_field(n, 1);
  if (name == "x1sq") {
    ScalarField g;
    g.n = n;
    g.value = [](const double* y) { return y[0] * y[0]; };
    return g;
  }
  throw ParseError("unknown weight: " + name + " (one, f1, x1sq)");
}

int cmd_integrate_sphere(int n, const std::string& map_name, const std::string& g_name,
                         const std::string& indices_text, const std::string& center_text,
                         double radius, int cells, std::size_t circle_nodes, bool study,
                         bool check_partition, double warn_tol) {
  MapFn f = named_map(map_name, n);
  ScalarField g = named_weight(g_name, n);
  std::vector<int> L;
  {
    std::stringstream ss(indices_text);
    std::string fieldtxt;
    while (std::getline(ss, fieldtxt, ',')) L.push_back(std::stoi(fieldtxt));
  }
  std::vector<double> center(n, 0.0);
  if (!center_text.empty()) {
    std::stringstream ss(center_text);
    std::string fieldtxt;
    int i = 0;
    while (std::getline(ss, fieldtxt, ',') && i < n) center[i++] = std::stod(fieldtxt);
  }

  if (study) {
    RefinementStudy s = closedness_study(f, L, center, radius, {8, 12, 18, 27, 40});
    std::cout << "closedness refinement study (|integral| of the exact form):\n";
    for (std::size_t i = 0; i < s.cells.size(); ++i)
      std::cout << "cells = " << s.cells[i] << "  residual = " << fmt(s.errors[i]) << "\n";
    std::cout << "fitted decay order = " << fmt(s.order) << "\n";
    return 0;
  }

  SphereChartAtlas atlas(n, center, radius);
  QuadratureGrid quad =
      n == 2 ? QuadratureGrid::circle(circle_nodes) : QuadratureGrid::tensor_ball(n - 1, cells);
  double value = oriented_integral(f, g, L, atlas, quad);
  std::cout << "oriented integral = " << fmt(value) << "\n";
  if (check_partition) {
    double delta = partition_sensitivity(f, g, L, atlas, quad);
    std::cout << "partition sensitivity = " << fmt(delta) << "\n";
    if (delta > warn_tol)
      std::cout << "warning: chart-overlap disagreement exceeds " << fmt(warn_tol)
                << "; refine the quadrature\n";
  }
  return 0;
}

int cmd_dim(const std::string& group, const std::string& spec_path, const std::string& preset,
            const std::string& scales_text, double tol, const std::string& metric,
            const std::string& out, const std::string& report_path, unsigned seed,
            std::size_t budget) {
  StratifiedAlgebra alg = build_algebra(resolve_group(group, spec_path));
  GroupOps ops(alg);
  Preset p = get_preset(preset);

  int a = 2, b = 7;
  if (!scales_text.empty()) {
    auto colon = scales_text.find(':');
    if (colon == std::string::npos) throw ParseError("scales must look like a:b");
    a = std::stoi(scales_text.substr(0, colon));
    b = std::stoi(scales_text.substr(colon + 1));
  }
  std::vector<double> scales = dyadic_scales(a, b);

  double eps_min = preset_eps_min(p, ops, scales, budget);
  PointCloud cloud = preset_cloud(p, ops, eps_min);

  BoxCountResult hom, euc;
  std::string verdict;
  double full_rank_fraction = -1;
  std::string caveat;
  if (p.hypersurface && p.domain.dim() == alg.q - 1) {
    GridMap rank_map = preset_gridmap(p, 0.01);
    GromovReport report = gromov_experiment(rank_map, cloud, ops, scales, tol);
    hom = report.homogeneous;
    euc = report.euclidean;
    verdict = report.verdict;
    full_rank_fraction = report.full_rank_fraction;
    caveat = report.caveat;
  } else {
    hom = count_scales(cloud, ops, scales, MetricMode::Homogeneous);
    euc = count_scales(cloud, ops, scales, MetricMode::Euclidean);
    verdict = "CONTROL"; // not a hypersurface; the rank hypothesis does not apply
  }

  std::ostringstream csv;
  csv << "# group=" << alg.name << " preset=" << preset << " seed=" << seed
      << " points=" << cloud.size() << " eps_min_sampled=" << fmt(eps_min) << "\n";
  csv << "eps,n_homogeneous,saturated_homogeneous,n_euclidean,saturated_euclidean\n";
  for (std::size_t i = 0; i < scales.size(); ++i)
    csv << fmt(scales[i]) << "," << hom.counts[i] << "," << (hom.saturated[i] ? 1 : 0) << ","
        << euc.counts[i] << "," << (euc.saturated[i] ? 1 : 0) << "\n";

  std::ostringstream toml;
  toml << "[dimension]\n";
  toml << "group = " << toml::escape_string(alg.name) << "\n";
  toml << "preset = " << toml::escape_string(preset) << "\n";
  toml << "seed = " << seed << "\n";
  toml << "Q = " << alg.Q << "\n";
  toml << "points = " << cloud.size() << "\n";
  toml << "slope_homogeneous = " << toml::format_double(hom.slope) << "\n";
  toml << "residual_homogeneous = " << toml::format_double(hom.residual) << "\n";
  toml << "slope_euclidean = " << toml::format_double(euc.slope) << "\n";
  toml << "residual_euclidean = " << toml::format_double(euc.residual) << "\n";
  if (full_rank_fraction >= 0)
    toml << "full_rank_fraction = " << toml::format_double(full_rank_fraction) << "\n";
  toml << "tol = " << toml::format_double(tol) << "\n";
  toml << "verdict = " << toml::escape_string(verdict) << "\n";
  if (!caveat.empty()) toml << "caveat = " << toml::escape_string(caveat) << "\n";

  if (metric == "homogeneous" || metric == "both" || metric == "euclidean") {
    // the CSV always carries both columns; the flag picks what to print
  } else {
    throw ParseError("metric must be homogeneous, euclidean or both");
  }

  std::cout << toml.str();
  if (!out.empty()) open_out(out) << csv.str();
  if (!report_path.empty()) open_out(report_path) << toml.str();

  if (verdict == "FAIL") return 1;
  return 0;
}

int cmd_selftest(unsigned seed) {
  int failures = 0;
  auto check = [&failures](const std::string& name, bool ok) {
    std::cout << name;
    for (std::size_t pad = name.size(); pad < 44; ++pad) std::cout << '.';
    std::cout << (ok ? " PASS" : " FAIL") << "\n";
    if (!ok) ++failures;
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 9);
  auto random_point = [&](int q) {
    RatVec p(q);
    for (auto& v : p) v = Rational(num(rng), den(rng));
    return p;
  };

  for (const char* name : {"heisenberg(1)", "heisenberg(2)", "engel", "free_step2(3)"}) {
    StratifiedAlgebra alg = build_algebra(catalog(name));
    GroupOps ops(alg);
    check(std::string(name) + " validation", validate_spec(catalog(name)).all_passed());

    bool assoc = true;
    for (int t = 0; t < 10 && assoc; ++t) {
      RatVec x = random_point(alg.q), y = random_point(alg.q), z = random_point(alg.q);
      assoc = ops.bch_product(ops.bch_product(x, y), z) ==
              ops.bch_product(x, ops.bch_product(y, z));
    }
    check(std::string(name) + " bch associativity", assoc);

    bool duality = true;
    for (int t = 0; t < 3 && duality; ++t) {
      RatVec z = random_point(alg.q);
      duality = ops.coframe(z) * ops.frame(z) == RatMat::identity(alg.q);
    }
    check(std::string(name) + " coframe duality", duality);

    bool ddz = true;
    for (int k = 1; k <= alg.q && ddz; ++k)
      ddz = eta_exterior_derivative(alg, maurer_cartan(alg, k)).is_zero();
    check(std::string(name) + " d(d eta) = 0", ddz);

    bool theta_ok = true;
    for (auto [s, r] : theta_admissible_pairs(alg))
      theta_ok = theta_ok && theta_product_check(alg, s, r);
    check(std::string(name) + " theta identities", theta_ok);
  }

  {
    MapFn f = identity_map(2);
    SphereChartAtlas atlas(2, {0.0, 0.0}, 1.0);
    QuadratureGrid quad = QuadratureGrid::circle(10000);
    double area = oriented_integral(f, coordinate_field(2, 1), {2}, atlas, quad);
    check("circle area pi", std::abs(area - 3.14159265358979) < 1e-6);
  }
  {
    StratifiedAlgebra alg = build_algebra(catalog("heisenberg(1)"));
    GroupOps ops(alg);
    Preset p = get_preset("legendrian-cylinder");
    GridMap gm = preset_gridmap(p, 5e-3);
    try {
      ChainReport report = vanishing_chain_check(gm, ops, 1, 1e-3);
      check("legendrian chain residuals", report.range_residual_max < 1e-4 &&
                                              report.omit_s[0].residual_max < 1e-3);
    } catch (const PreconditionDefect&) {
      check("legendrian chain residuals", false);
    }
  }
  std::cout << (failures == 0 ? "selftest PASS" : "selftest FAIL") << "\n";
  return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratified group calculus: exact Lie algebra validation, left-invariant "
               "exterior calculus, sphere integrals and box-counting dimension experiments"};
  app.require_subcommand(1);

  std::string group, spec_path, preset, out, report_path, point_text;
  std::string map_name = "identity", g_name = "one", indices = "2,3", center_text, metric = "both";
  std::string scales_text = "2:7";
  double h = 1e-3, tol = 1e-4, radius = 1.0, dim_tol = 0.3;
  int kappa = 1, n = 3, cells = 40;
  std::size_t circle_nodes = 10000, budget = 20000000;
  unsigned seed = 0;

  auto add_group = [&](CLI::App* cmd) {
    cmd->add_option("--group", group, "catalog group name, e.g. heisenberg(1)");
    cmd->add_option("--spec", spec_path, "group spec TOML file");
  };

  CLI::App* validate = app.add_subcommand("validate", "check all algebra invariants exactly");
  add_group(validate);
  validate->add_option("file", spec_path, "group spec TOML file");

  CLI::App* frames = app.add_subcommand("frames", "print the symbolic frame and coframe");
  add_group(frames);
  frames->add_option("--point", point_text, "evaluate at a rational point, e.g. 1,0,1/2");

  CLI::App* mc = app.add_subcommand("mc-table", "print the Maurer-Cartan table");
  add_group(mc);
  mc->add_option("--out", out, "CSV output path");
  mc->add_option("--seed", seed, "seed recorded in outputs");

  CLI::App* theta = app.add_subcommand("theta", "verify the theta product identities");
  add_group(theta);
  theta->add_option("--out", out, "CSV output path");
  theta->add_option("--seed", seed, "seed recorded in outputs");

  CLI::App* chain = app.add_subcommand("chain", "vanishing-chain desk check on a preset");
  add_group(chain);
  chain->add_option("--preset", preset, "experiment preset")->required();
  chain->add_option("--step", h, "parameter grid step");
  chain->add_option("--kappa", kappa, "layer index of the step-1 hypothesis");
  chain->add_option("--tol", tol, "residual tolerance");

  CLI::App* sphere = app.add_subcommand("integrate-sphere", "oriented integral over a sphere");
  sphere->add_option("--n", n, "ambient dimension (2, 3, 4)");
  sphere->add_option("--map", map_name, "identity | twisted | cubic");
  sphere->add_option("--g", g_name, "weight: one | f1 | x1sq");
  sphere->add_option("--indices", indices, "increasing target tuple, e.g. 2,3");
  sphere->add_option("--center", center_text, "sphere center, comma separated");
  sphere->add_option("--radius", radius, "sphere radius");
  sphere->add_option("--cells", cells, "quadrature cells per axis");
  sphere->add_option("--nodes", circle_nodes, "circle quadrature nodes (n = 2)");
  bool study = false;
  sphere->add_flag("--study", study, "run the closedness refinement study");
  bool check_partition = false;
  double warn_tol = 1e-6;
  sphere->add_flag("--check-partition", check_partition,
                   "report the partition-of-unity sensitivity");
  sphere->add_option("--warn-tol", warn_tol, "under-resolution warning threshold");

  CLI::App* dim = app.add_subcommand("dim", "box-counting dimension experiment");
  add_group(dim);
  dim->add_option("--preset", preset, "experiment preset")->required();
  dim->add_option("--scales", scales_text, "dyadic scale range a:b for 2^-a .. 2^-b");
  dim->add_option("--tol", dim_tol, "slope tolerance against Q-1");
  dim->add_option("--metric", metric, "homogeneous | euclidean | both");
  dim->add_option("--out", out, "CSV output path");
  dim->add_option("--report", report_path, "TOML report fragment path");
  dim->add_option("--seed", seed, "seed recorded in outputs");
  dim->add_option("--budget", budget, "sampling point budget");

  CLI::App* selftest = app.add_subcommand("selftest", "run the quick exact identity suites");
  selftest->add_option("--seed", seed, "seed for the randomized suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(group, spec_path);
    if (frames->parsed()) return cmd_frames(group, spec_path, point_text);
    if (mc->parsed()) return cmd_mc_table(group, spec_path, out, seed);
    if (theta->parsed()) return cmd_theta(group, spec_path, out, seed);
    if (chain->parsed()) return cmd_chain(group, spec_path, preset, h, kappa, tol);
    if (sphere->parsed())
      return cmd_integrate_sphere(n, map_name, g_name, indices, center_text, radius, cells,
                                  circle_nodes, study, check_partition, warn_tol);
    if (dim->parsed())
      return cmd_dim(group, spec_path, preset, scales_text, dim_tol, metric, out, report_path,
                     seed, budget);
    if (selftest->parsed()) return cmd_selftest(seed);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownName& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const AlgebraError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CarnotError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
