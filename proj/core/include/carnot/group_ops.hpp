#pragma once

#include "carnot/matrix.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/rational_linalg.hpp"
#include "carnot/stratified_algebra.hpp"

#include <memory>
#include <vector>

namespace carnot {

/// Exponential coordinates of the first kind: a group point is a length-q
/// coefficient vector over the graded basis, the identity is 0 and the
/// inverse of x is -x.
using GroupPointQ = RatVec;
using GroupPointD = std::vector<double>;

/// Coordinate-wise max quasi-norm with exponents 1/d_i. Exactly homogeneous:
/// norm(dilate(r, x)) = r * norm(x).
struct HomogeneousMetric {
  std::vector<int> degrees; // 1-based copy from the algebra
};

/// Cached symbolic machinery for one algebra: the group product polynomials
/// (truncated Dynkin series, exact for nilpotent algebras) and the
/// left-invariant frame/coframe as polynomial matrices in the base point.
class GroupOps {
public:
  explicit GroupOps(const StratifiedAlgebra& alg);

  const StratifiedAlgebra& algebra() const { return *alg_; }

  // --- group law -----------------------------------------------------------

  GroupPointQ bch_product(const GroupPointQ& x, const GroupPointQ& y) const;
  GroupPointD bch_product(const GroupPointD& x, const GroupPointD& y) const;

  /// Allocation-free product for hot loops: xy must hold x then y (2q
  /// doubles), out must hold q doubles and not alias xy.
  void bch_product_into(const double* xy, double* out) const;
  GroupPointQ inverse(GroupPointQ x) const;
  GroupPointD inverse(GroupPointD x) const;

  GroupPointQ dilation(const GroupPointQ& x, const Rational& r) const;
  GroupPointD dilation(const GroupPointD& x, double r) const;

  // --- frames --------------------------------------------------------------

  /// Column i is X_i(z), the left translate of e_i; frame(0) = identity.
  RatMat frame(const GroupPointQ& z) const;
  Mat<double> frame(const GroupPointD& z) const;

  /// Row r is eta_r(z); exact inverse of frame(z) for any z.
  RatMat coframe(const GroupPointQ& z) const;
  Mat<double> coframe(const GroupPointD& z) const;

  /// Symbolic matrices (entries are polynomials in z_1..z_q).
  const std::vector<std::vector<PolyQ>>& frame_poly() const { return frame_poly_; }
  const std::vector<std::vector<PolyQ>>& coframe_poly() const { return coframe_poly_; }

  /// Group product polynomials P_i(x, y) in 2q variables (x first, then y).
  const std::vector<PolyQ>& product_poly() const { return product_poly_; }

  // --- metric --------------------------------------------------------------

  HomogeneousMetric metric() const { return HomogeneousMetric{alg_->degrees}; }
  double quasi_norm(const GroupPointD& w) const;
  double quasi_distance(const GroupPointD& x, const GroupPointD& y) const;

private:
  const StratifiedAlgebra* alg_;
  std::vector<PolyQ> product_poly_;
  std::vector<std::vector<PolyQ>> frame_poly_;
  std::vector<std::vector<PolyQ>> coframe_poly_;
  std::vector<CompiledPoly> product_compiled_;
  std::vector<std::vector<CompiledPoly>> frame_compiled_;
  std::vector<std::vector<CompiledPoly>> coframe_compiled_;
};

/// Largest ratio d(x,z) / (d(x,y) + d(y,z)) over uniformly sampled triples
/// in [-1,1]^q; a brute-force estimate of the quasi-triangle constant.
double measure_triangle_constant(const GroupOps& ops, int n_triples, unsigned seed);

} // namespace carnot
