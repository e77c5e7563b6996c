#pragma once

#include "carnot/matrix.hpp"
#include "carnot/rational.hpp"

#include <optional>

namespace carnot {

using RatMat = Mat<Rational>;

/// Exact rank via Gaussian elimination over the rationals.
std::size_t rank_exact(RatMat m);

/// Exact determinant of a square matrix.
Rational det_exact(RatMat m);

/// Exact inverse; throws InternalError when the matrix is singular.
RatMat inverse_exact(const RatMat& m);

/// One exact solution of A x = b (A may be rectangular / rank deficient).
/// Free variables are pinned to zero with first-pivot tie-breaking, matching
/// the order in which columns appear. Returns nullopt when inconsistent.
std::optional<RatVec> solve_first_pivot(const RatMat& a, const RatVec& b);

/// Floating determinant with partial pivoting (small matrices).
double det_double(Mat<double> m);

} // namespace carnot
