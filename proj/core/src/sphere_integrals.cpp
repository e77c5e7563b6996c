#include "carnot/sphere_integrals.hpp"

#include "carnot/matrix.hpp"
#include "carnot/rational_linalg.hpp"

#include <algorithm>
#include <cmath>

namespace carnot {

namespace {

constexpr double kPi = 3.14159265358979323846;

// C^3 polynomial step: 0 below 0, 1 above 1.
double smoothstep7(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  double t2 = t * t;
  return t2 * t2 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t2 * t);
}

// 4-point Gauss-Legendre on [-1, 1].
const double kGL4Nodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                             0.8611363115940526};
const double kGL4Weights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                               0.3478548451374538};
const double kGL1Nodes[1] = {0.0}; // composite midpoint
const double kGL1Weights[1] = {2.0};
const double kGL2Nodes[2] = {-0.5773502691896257, 0.5773502691896257};
const double kGL2Weights[2] = {1.0, 1.0};
const double kGL3Nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
const double kGL3Weights[3] = {0.5555555555555556, 0.8888888888888889, 0.5555555555555556};

void gl_rule(int pts, const double** nodes, const double** weights) {
  switch (pts) {
    case 1: *nodes = kGL1Nodes; *weights = kGL1Weights; return;
    case 2: *nodes = kGL2Nodes; *weights = kGL2Weights; return;
    case 3: *nodes = kGL3Nodes; *weights = kGL3Weights; return;
    case 4: *nodes = kGL4Nodes; *weights = kGL4Weights; return;
    default: throw CarnotError("supported Gauss-Legendre orders: 1, 2, 3, 4");
  }
}

void check_tuple(const std::vector<int>& L, int expected_len, int m) {
  if (static_cast<int>(L.size()) != expected_len)
    throw DegreeMismatch("index tuple must have length n-1");
  int prev = 0;
  for (int i : L) {
    if (i <= prev || i > m) throw IndexError("index tuple must be increasing within 1..m");
    prev = i;
  }
}

} // namespace

void MapFn::jac(const double* y, double* out) const {
  if (jacobian) {
    jacobian(y, out);
    return;
  }
  // central differences; the step balances truncation against cancellation
  const double h = 1e-6;
  std::vector<double> yp(y, y + n), fp(m), fm(m);
  for (int a = 0; a < n; ++a) {
    double orig = yp[a];
    yp[a] = orig + h;
    value(yp.data(), fp.data());
    yp[a] = orig - h;
    value(yp.data(), fm.data());
    yp[a] = orig;
    for (int c = 0; c < m; ++c) out[c * n + a] = (fp[c] - fm[c]) / (2 * h);
  }
}

MapFn identity_map(int n) {
  MapFn f;
  f.n = n;
  f.m = n;
  f.value = [n](const double* y, double* out) {
    for (int i = 0; i < n; ++i) out[i] = y[i];
  };
  f.jacobian = [n](const double*, double* jac) {
    for (int i = 0; i < n * n; ++i) jac[i] = 0;
    for (int i = 0; i < n; ++i) jac[i * n + i] = 1;
  };
  return f;
}

void ScalarField::grad(const double* y, double* out) const {
  if (gradient) {
    gradient(y, out);
    return;
  }
  const double h = 1e-6;
  std::vector<double> yp(y, y + n);
  for (int a = 0; a < n; ++a) {
    double orig = yp[a];
    yp[a] = orig + h;
    double fp = value(yp.data());
    yp[a] = orig - h;
    double fm = value(yp.data());
    yp[a] = orig;
    out[a] = (fp - fm) / (2 * h);
  }
}

ScalarField constant_field(int n, double c) {
  ScalarField g;
  g.n = n;
  g.value = [c](const double*) { return c; };
  g.gradient = [n](const double*, double* grad) {
    for (int i = 0; i < n; ++i) grad[i] = 0;
  };
  return g;
}

ScalarField coordinate_field(int n, int axis) {
  if (axis < 1 || axis > n) throw IndexError("coordinate_field axis");
  ScalarField g;
  g.n = n;
  g.value = [axis](const double* y) { return y[axis - 1]; };
  g.gradient = [n, axis](const double*, double* grad) {
    for (int i = 0; i < n; ++i) grad[i] = 0;
    grad[axis - 1] = 1;
  };
  return g;
}

SphereChartAtlas::SphereChartAtlas(int n, std::vector<double> center, double radius,
                                   double band_half, double cap_scale)
    : n_(n), center_(std::move(center)), radius_(radius), cap_scale_(cap_scale) {
  if (n_ < 2) throw DimensionMismatch("sphere atlas needs n >= 2");
  if (static_cast<int>(center_.size()) != n_) throw DimensionMismatch("atlas center length");
  if (!(radius_ > 0)) throw CarnotError("atlas radius must be positive");
  band_lo_ = kPi / 2 - band_half;
  band_hi_ = kPi / 2 + band_half;
  if (n_ >= 3) {
    double reach = coverage_angle();
    if (!(band_hi_ < reach && band_lo_ > kPi - reach))
      throw CarnotError("partition band exits the chart overlap; reduce band_half");
  }
}

double SphereChartAtlas::coverage_angle() const {
  double a2 = cap_scale_ * cap_scale_;
  return std::acos((1 - a2) / (1 + a2));
}

void SphereChartAtlas::chart(int which, const double* xi, double* point, double* jac) const {
  const int d = n_ - 1;
  const double a = cap_scale_;
  const double sigma = which == 0 ? 1.0 : -1.0;

  // Both charts must induce the outward orientation, det[nu, Dpsi] > 0.
  // The raw stereographic caps get this right only for one parity of n, so
  // one chart swaps its first two parameters depending on the dimension.
  const bool swap_params = d >= 2 && (which == 0 ? n_ % 2 == 0 : n_ % 2 == 1);
  std::vector<double> u(d);
  for (int i = 0; i < d; ++i) u[i] = a * xi[i];
  if (swap_params) std::swap(u[0], u[1]);

  double s = 0;
  for (int i = 0; i < d; ++i) s += u[i] * u[i];
  const double den = 1 + s;

  if (point) {
    for (int i = 0; i < d; ++i) point[i] = center_[i] + radius_ * 2 * u[i] / den;
    point[d] = center_[d] + radius_ * sigma * (1 - s) / den;
  }
  if (jac) {
    // d(psi)/d(u) first, then permute columns for chart 2
    // rows j < d: 2a(delta_{jl} den - 2 u_j u_l)/den^2; row d: -4a sigma u_l/den^2
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) {
        double v = 2 * ((j == l ? den : 0.0) - 2 * u[j] * u[l]) / (den * den);
        jac[j * d + l] = radius_ * a * v;
      }
    for (int l = 0; l < d; ++l) jac[d * d + l] = radius_ * sigma * (-4 * a * u[l]) / (den * den);
    if (swap_params)
      for (int r = 0; r < n_; ++r) std::swap(jac[r * d + 0], jac[r * d + 1]);
  }
}

double SphereChartAtlas::partition1(const double* point) const {
  double c = (point[n_ - 1] - center_[n_ - 1]) / radius_;
  c = std::clamp(c, -1.0, 1.0);
  double phi = std::acos(c);
  return 1.0 - smoothstep7((phi - band_lo_) / (band_hi_ - band_lo_));
}

double QuadratureGrid::weight_sum() const {
  double acc = 0;
  for (double w : weights) acc += w;
  return acc;
}

QuadratureGrid QuadratureGrid::tensor_cube(int dim, int cells_per_axis, int points_per_cell) {
  if (dim < 1) throw DimensionMismatch("quadrature dimension");
  if (cells_per_axis < 1) throw CarnotError("cells_per_axis must be positive");
  const double* gn;
  const double* gw;
  gl_rule(points_per_cell, &gn, &gw);

  const int per_axis = cells_per_axis * points_per_cell;
  std::vector<double> axis_nodes(per_axis), axis_weights(per_axis);
  const double cell_w = 2.0 / cells_per_axis;
  for (int c = 0; c < cells_per_axis; ++c) {
    double lo = -1.0 + c * cell_w;
    for (int p = 0; p < points_per_cell; ++p) {
      axis_nodes[c * points_per_cell + p] = lo + cell_w * (gn[p] + 1) / 2;
      axis_weights[c * points_per_cell + p] = gw[p] * cell_w / 2;
    }
  }

  QuadratureGrid grid;
  grid.dim = dim;
  std::vector<int> idx(dim, 0);
  std::vector<double> node(dim);
  while (true) {
    double w = 1;
    for (int a = 0; a < dim; ++a) {
      node[a] = axis_nodes[idx[a]];
      w *= axis_weights[idx[a]];
    }
    grid.nodes.insert(grid.nodes.end(), node.begin(), node.end());
    grid.weights.push_back(w);
    int a = dim - 1;
    while (a >= 0 && ++idx[a] == per_axis) idx[a--] = 0;
    if (a < 0) break;
  }
  return grid;
}

QuadratureGrid QuadratureGrid::tensor_ball(int dim, int cells_per_axis, int points_per_cell) {
  QuadratureGrid cube = tensor_cube(dim, cells_per_axis, points_per_cell);
  QuadratureGrid grid;
  grid.dim = dim;
  for (std::size_t i = 0; i < cube.size(); ++i) {
    const double* node = cube.nodes.data() + i * dim;
    double s = 0;
    for (int a = 0; a < dim; ++a) s += node[a] * node[a];
    if (s >= 1.0) continue; // chart integrands vanish before the ball edge
    grid.nodes.insert(grid.nodes.end(), node, node + dim);
    grid.weights.push_back(cube.weights[i]);
  }
  return grid;
}

QuadratureGrid QuadratureGrid::circle(std::size_t node_count) {
  if (node_count < 4) throw CarnotError("circle quadrature needs at least 4 nodes");
  QuadratureGrid grid;
  grid.dim = 1;
  const double w = 2 * kPi / static_cast<double>(node_count);
  for (std::size_t k = 0; k < node_count; ++k) {
    grid.nodes.push_back(-kPi + (k + 0.5) * w);
    grid.weights.push_back(w);
  }
  return grid;
}

QuadratureGrid QuadratureGrid::radial(double radius, int cells, int points_per_cell) {
  const double* gn;
  const double* gw;
  gl_rule(points_per_cell, &gn, &gw);
  QuadratureGrid grid;
  grid.dim = 1;
  const double cell_w = radius / cells;
  for (int c = 0; c < cells; ++c) {
    double lo = c * cell_w;
    for (int p = 0; p < points_per_cell; ++p) {
      grid.nodes.push_back(lo + cell_w * (gn[p] + 1) / 2);
      grid.weights.push_back(gw[p] * cell_w / 2);
    }
  }
  return grid;
}

namespace {

// Shared chart-sum loop for n >= 3: fn(p, dpsi, upsilon, w) accumulates.
template <class Fn>
void atlas_sum(const SphereChartAtlas& atlas, const QuadratureGrid& quad, Fn&& fn) {
  const int n = atlas.n();
  const int d = n - 1;
  if (quad.dim != d) throw DimensionMismatch("quadrature dimension does not match atlas");
  std::vector<double> p(n), dpsi(n * d);
  for (int which = 0; which < 2; ++which) {
    for (std::size_t i = 0; i < quad.size(); ++i) {
      const double* xi = quad.nodes.data() + i * d;
      atlas.chart(which, xi, p.data(), dpsi.data());
      double u1 = atlas.partition1(p.data());
      double upsilon = which == 0 ? u1 : 1.0 - u1;
      if (upsilon == 0.0) continue;
      fn(p.data(), dpsi.data(), upsilon, quad.weights[i]);
    }
  }
}

double frobenius(const std::vector<double>& m) {
  double acc = 0;
  for (double v : m) acc += v * v;
  return std::sqrt(acc);
}

} // namespace

double oriented_integral(const MapFn& f, const ScalarField& g, const std::vector<int>& L,
                         const SphereChartAtlas& atlas, const QuadratureGrid& quad) {
  const int n = atlas.n();
  if (f.n != n) throw DimensionMismatch("mapping domain must match the sphere dimension");
  check_tuple(L, n - 1, f.m);

  if (n == 2) {
    if (quad.dim != 1) throw DimensionMismatch("circle quadrature expected for n = 2");
    const double r = atlas.radius();
    const auto& z = atlas.center();
    std::vector<double> p(2), jac(f.m * 2);
    double acc = 0;
    const int l = L[0];
    for (std::size_t i = 0; i < quad.size(); ++i) {
      double t = quad.nodes[i];
      p[0] = z[0] + r * std::cos(t);
      p[1] = z[1] + r * std::sin(t);
      f.jac(p.data(), jac.data());
      double vdot = jac[(l - 1) * 2 + 0] * (-r * std::sin(t)) + jac[(l - 1) * 2 + 1] * (r * std::cos(t));
      acc += quad.weights[i] * g.value(p.data()) * vdot;
    }
    return acc;
  }

  const int d = n - 1;
  std::vector<double> jac(f.m * n);
  Mat<double> prod(d, d);
  double acc = 0;
  atlas_sum(atlas, quad, [&](const double* p, const double* dpsi, double upsilon, double w) {
    f.jac(p, jac.data());
    // chain rule: sum_I (d f_L / d y_I)(d psi_I / d xi) = det(Df_L * Dpsi)
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        double s = 0;
        const double* row = jac.data() + (L[r] - 1) * n;
        for (int t = 0; t < n; ++t) s += row[t] * dpsi[t * d + c];
        prod(r, c) = s;
      }
    acc += w * upsilon * g.value(p) * det_double(prod);
  });
  return acc;
}

double surface_integral(const ScalarField& g, const SphereChartAtlas& atlas,
                        const QuadratureGrid& quad) {
  const int n = atlas.n();
  if (n == 2) {
    if (quad.dim != 1) throw DimensionMismatch("circle quadrature expected for n = 2");
    const double r = atlas.radius();
    const auto& z = atlas.center();
    std::vector<double> p(2);
    double acc = 0;
    for (std::size_t i = 0; i < quad.size(); ++i) {
      double t = quad.nodes[i];
      p[0] = z[0] + r * std::cos(t);
      p[1] = z[1] + r * std::sin(t);
      acc += quad.weights[i] * g.value(p.data()) * r;
    }
    return acc;
  }
  const int d = n - 1;
  Mat<double> gram(d, d);
  double acc = 0;
  atlas_sum(atlas, quad, [&](const double* p, const double* dpsi, double upsilon, double w) {
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        double s = 0;
        for (int t = 0; t < n; ++t) s += dpsi[t * d + r] * dpsi[t * d + c];
        gram(r, c) = s;
      }
    double det = det_double(gram);
    acc += w * upsilon * g.value(p) * std::sqrt(std::max(det, 0.0));
  });
  return acc;
}

double ball_integral(const ScalarField& g, const std::vector<double>& center, double radius,
                     int radial_cells, const SphereChartAtlas& unit_atlas,
                     const QuadratureGrid& quad) {
  const int n = static_cast<int>(center.size());
  if (unit_atlas.n() != n) throw DimensionMismatch("ball integral atlas dimension");
  QuadratureGrid rad = QuadratureGrid::radial(radius, radial_cells);
  double acc = 0;
  for (std::size_t i = 0; i < rad.size(); ++i) {
    const double rho = rad.nodes[i];
    ScalarField section;
    section.n = n;
    section.value = [&g, &center, rho](const double* omega) {
      std::vector<double> y(center.size());
      for (std::size_t a = 0; a < center.size(); ++a) y[a] = center[a] + rho * omega[a];
      return g.value(y.data());
    };
    double shell = surface_integral(section, unit_atlas, quad);
    acc += rad.weights[i] * std::pow(rho, n - 1) * shell;
  }
  return acc;
}

double stokes_residual(const MapFn& f, const ScalarField& g, const std::vector<int>& J,
                       const std::vector<double>& center, double radius, int cells) {
  const int n = f.n;
  check_tuple(J, n - 1, f.m);
  SphereChartAtlas atlas(n, center, radius);
  QuadratureGrid quad = n == 2 ? QuadratureGrid::circle(static_cast<std::size_t>(cells) * 64)
                               : QuadratureGrid::tensor_ball(n - 1, cells);
  double boundary = oriented_integral(f, g, J, atlas, quad);

  // dg ^ df_J is det of [grad g; rows J of Df] times the volume form
  ScalarField integrand;
  integrand.n = n;
  integrand.value = [&f, &g, &J, n](const double* y) {
    std::vector<double> jac(f.m * n), grad(n);
    f.jac(y, jac.data());
    g.grad(y, grad.data());
    Mat<double> m(n, n);
    for (int c = 0; c < n; ++c) m(0, c) = grad[c];
    for (int r = 1; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = jac[(J[r - 1] - 1) * n + c];
    return det_double(m);
  };
  SphereChartAtlas unit_atlas(n, std::vector<double>(n, 0.0), 1.0);
  QuadratureGrid shell_quad = n == 2 ? QuadratureGrid::circle(static_cast<std::size_t>(cells) * 64)
                                     : QuadratureGrid::tensor_ball(n - 1, cells);
  double volume = ball_integral(integrand, center, radius, std::max(cells, 8), unit_atlas,
                                shell_quad);
  return std::abs(boundary - volume);
}

DifferenceBound difference_bound_ratio(const MapFn& f, const MapFn& h, const ScalarField& g,
                                       const std::vector<int>& J, const SphereChartAtlas& atlas,
                                       const QuadratureGrid& quad) {
  const int n = atlas.n();
  if (f.n != n || h.n != n || f.m != h.m) throw DimensionMismatch("difference bound mappings");
  check_tuple(J, n - 1, f.m);

  DifferenceBound out;
  out.lhs = std::abs(oriented_integral(f, g, J, atlas, quad) -
                     oriented_integral(h, g, J, atlas, quad));

  auto grad_power = [&](const MapFn& map) {
    ScalarField field;
    field.n = n;
    field.value = [&map, n](const double* y) {
      std::vector<double> jac(map.m * n);
      map.jac(y, jac.data());
      return std::pow(frobenius(jac), n - 1);
    };
    return surface_integral(field, atlas, quad);
  };
  ScalarField diff_power;
  diff_power.n = n;
  diff_power.value = [&f, &h, n](const double* y) {
    std::vector<double> jf(f.m * n), jh(h.m * n);
    f.jac(y, jf.data());
    h.jac(y, jh.data());
    for (std::size_t i = 0; i < jf.size(); ++i) jf[i] -= jh[i];
    return std::pow(frobenius(jf), n - 1);
  };

  double int_f = grad_power(f);
  double int_h = grad_power(h);
  double int_diff = surface_integral(diff_power, atlas, quad);

  double g_sup = 0;
  {
    ScalarField probe;
    probe.n = n;
    probe.value = [&g, &g_sup](const double* y) {
      g_sup = std::max(g_sup, std::abs(g.value(y)));
      return 0.0;
    };
    surface_integral(probe, atlas, quad);
  }

  const double p = static_cast<double>(n - 1);
  double sum = 0;
  for (int k = 1; k <= n - 1; ++k)
    sum += std::pow(int_f, (k - 1) / p) * std::pow(int_diff, 1 / p) *
           std::pow(int_h, (n - 1 - k) / p);
  out.rhs = g_sup * sum;

  if (out.rhs == 0) {
    if (out.lhs > 1e-10)
      throw InternalError("difference bound: zero RHS with nonzero LHS");
    out.ratio = 0;
    return out;
  }
  out.ratio = out.lhs / out.rhs;
  return out;
}

double partition_sensitivity(const MapFn& f, const ScalarField& g, const std::vector<int>& L,
                             const SphereChartAtlas& atlas, const QuadratureGrid& quad,
                             double band_half) {
  if (atlas.n() == 2) return 0.0; // single closed-form chart
  SphereChartAtlas narrow(atlas.n(), atlas.center(), atlas.radius(), band_half / 2);
  SphereChartAtlas wide(atlas.n(), atlas.center(), atlas.radius(), band_half);
  return std::abs(oriented_integral(f, g, L, narrow, quad) -
                  oriented_integral(f, g, L, wide, quad));
}

RefinementStudy closedness_study(const MapFn& f, const std::vector<int>& J,
                                 const std::vector<double>& center, double radius,
                                 const std::vector<int>& cell_counts, int points_per_cell) {
  const int n = f.n;
  RefinementStudy study;
  SphereChartAtlas atlas(n, center, radius);
  ScalarField one = constant_field(n, 1.0);
  for (int cells : cell_counts) {
    QuadratureGrid quad = n == 2 ? QuadratureGrid::circle(static_cast<std::size_t>(cells))
                                 : QuadratureGrid::tensor_ball(n - 1, cells, points_per_cell);
    double value = oriented_integral(f, one, J, atlas, quad);
    study.cells.push_back(cells);
    study.errors.push_back(std::abs(value));
  }
  // least-squares slope of log(err) against log(1/cells)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < study.errors.size(); ++i) {
    if (study.errors[i] <= 0) continue;
    double x = -std::log(static_cast<double>(study.cells[i]));
    double y = std::log(study.errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) study.order = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return study;
}

} // namespace carnot
