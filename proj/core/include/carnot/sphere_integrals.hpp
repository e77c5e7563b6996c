#pragma once

#include "carnot/errors.hpp"

#include <functional>
#include <vector>

namespace carnot {

/// A mapping R^n -> R^m defined near the integration sphere. The Jacobian is
/// optional (finite differences are used when absent) so both analytic
/// generators and interpolated grids can be integrated.
struct MapFn {
  int n = 0;
  int m = 0;
  std::function<void(const double* y, double* out)> value;
  std::function<void(const double* y, double* jac)> jacobian; // row-major m x n, optional

  void eval(const double* y, double* out) const { value(y, out); }
  void jac(const double* y, double* out) const; // analytic or central FD
};

MapFn identity_map(int n);

/// Scalar function with an optional analytic gradient.
struct ScalarField {
  int n = 0;
  std::function<double(const double* y)> value;
  std::function<void(const double* y, double* grad)> gradient; // optional

  void grad(const double* y, double* out) const;
};

ScalarField constant_field(int n, double c);
ScalarField coordinate_field(int n, int axis); // y_axis

/// Two stereographic-style cap charts from antipodal poles, each covering a
/// bit more than a hemisphere, with a smooth polynomial partition of unity
/// stepping across the equatorial band. Charts are consistently oriented for
/// the outward normal.
class SphereChartAtlas {
public:
  /// band_half: half-width in polar angle of the partition transition band.
  /// cap_scale tunes how far past the equator each chart reaches.
  SphereChartAtlas(int n, std::vector<double> center, double radius, double band_half = 0.2,
                   double cap_scale = 1.5);

  int n() const { return n_; }
  double radius() const { return radius_; }
  const std::vector<double>& center() const { return center_; }
  double coverage_angle() const; // max polar angle reached by chart 1

  /// Chart point and row-major n x (n-1) Jacobian at parameter xi in B^{n-1}.
  void chart(int which, const double* xi, double* point, double* jac) const;

  /// Partition of unity weight of chart 1 at a sphere point (chart 2 gets
  /// the complement).
  double partition1(const double* point) const;

private:
  int n_;
  std::vector<double> center_;
  double radius_;
  double band_lo_, band_hi_;
  double cap_scale_;
};

/// Composite tensor Gauss-Legendre nodes. For spheres (n >= 3) the grid
/// lives on [-1,1]^{n-1} restricted to the open unit parameter ball; for
/// circles use QuadratureGrid::circle.
struct QuadratureGrid {
  int dim = 0;
  std::vector<double> nodes;   // dim coordinates per node
  std::vector<double> weights; // positive

  std::size_t size() const { return weights.size(); }
  double weight_sum() const;

  static QuadratureGrid tensor_ball(int dim, int cells_per_axis, int points_per_cell = 4);
  static QuadratureGrid tensor_cube(int dim, int cells_per_axis, int points_per_cell = 4);
  static QuadratureGrid circle(std::size_t node_count);
  static QuadratureGrid radial(double radius, int cells, int points_per_cell = 4); // on [0, r]
};

/// Oriented integral of g df_L over the sphere of the atlas. L is an
/// increasing (n-1)-tuple of target indices. For n = 2 the closed-form
/// circle parameterization is used and `quad` must be a circle grid.
double oriented_integral(const MapFn& f, const ScalarField& g, const std::vector<int>& L,
                         const SphereChartAtlas& atlas, const QuadratureGrid& quad);

/// Scalar surface integral with the chart Gram determinants.
double surface_integral(const ScalarField& g, const SphereChartAtlas& atlas,
                        const QuadratureGrid& quad);

/// Volume integral over the ball by radial Gauss-Legendre times sphere
/// sections.
double ball_integral(const ScalarField& g, const std::vector<double>& center, double radius,
                     int radial_cells, const SphereChartAtlas& unit_atlas,
                     const QuadratureGrid& quad);

/// |int_{dB} g df_J - int_B dg ^ df_J|, the Stokes mismatch for smooth data.
double stokes_residual(const MapFn& f, const ScalarField& g, const std::vector<int>& J,
                       const std::vector<double>& center, double radius, int cells);

/// LHS / RHS of the telescoping difference estimate with the constant set
/// to one; RHS = ||g||_inf sum_k (int |Df|^{n-1})^{(k-1)/(n-1)} *
/// (int |Df - Dh|^{n-1})^{1/(n-1)} * (int |Dh|^{n-1})^{(n-1-k)/(n-1)}.
struct DifferenceBound {
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
};
DifferenceBound difference_bound_ratio(const MapFn& f, const MapFn& h, const ScalarField& g,
                                       const std::vector<int>& J, const SphereChartAtlas& atlas,
                                       const QuadratureGrid& quad);

/// Sensitivity of the oriented integral to the partition-of-unity choice:
/// the same integral with the transition band halved. A large value flags an
/// under-resolved quadrature near the chart overlap.
double partition_sensitivity(const MapFn& f, const ScalarField& g, const std::vector<int>& L,
                             const SphereChartAtlas& atlas, const QuadratureGrid& quad,
                             double band_half = 0.2);

/// Log-log slope of |int_{dB} df_J| against the cell count under refinement;
/// the integral of a closed exact form should decay at the quadrature order.
struct RefinementStudy {
  std::vector<int> cells;
  std::vector<double> errors;
  double order = 0; // fitted decay order
};
RefinementStudy closedness_study(const MapFn& f, const std::vector<int>& J,
                                 const std::vector<double>& center, double radius,
                                 const std::vector<int>& cell_counts, int points_per_cell = 1);

} // namespace carnot
