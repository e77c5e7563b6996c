#pragma once

#include "carnot/errors.hpp"
#include "carnot/matrix.hpp"
#include "carnot/rational_linalg.hpp"
#include "carnot/stratified_algebra.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace carnot {

// ---------------------------------------------------------------------------
// Blades: a strictly increasing index tuple (i_1 < ... < i_k), 1-based, is
// stored as a bitmask with bit (i-1) set. Wedge signs are permutation parities
// computed from bit counts.
// ---------------------------------------------------------------------------

using Blade = std::uint64_t;

Blade blade_from_indices(const std::vector<int>& indices, int dim);
std::vector<int> blade_indices(Blade b);
int blade_degree(Blade b);

/// Range blade: indices lo..hi inclusive; empty range gives the scalar blade.
Blade blade_range(int lo, int hi);

/// Parity sign of concatenating two disjoint blades into sorted order,
/// or 0 when they overlap.
int blade_wedge_sign(Blade a, Blade b);

/// Iterates all increasing k-tuples out of 1..n, in lexicographic order.
void for_each_tuple(int n, int k, const std::function<void(const std::vector<int>&)>& fn);

enum class BasisTag { Coordinate, LeftInvariant };

// ---------------------------------------------------------------------------
// KForm / Multivector: sparse exterior algebra elements over an abstract
// scalar (Rational for identity checks, double for grid work).
// ---------------------------------------------------------------------------

template <class S>
struct KForm {
  int dim = 0;
  int degree = 0;
  BasisTag tag = BasisTag::Coordinate;
  std::map<Blade, S> coeffs;

  static KForm zero(int dim, int degree, BasisTag tag) { return KForm{dim, degree, tag, {}}; }

  static KForm basis(int dim, Blade b, BasisTag tag, S coeff = S(1)) {
    KForm f{dim, blade_degree(b), tag, {}};
    if (coeff != S(0)) f.coeffs.emplace(b, coeff);
    return f;
  }

  void add(Blade b, const S& c) {
    if (c == S(0)) return;
    auto it = coeffs.find(b);
    if (it == coeffs.end()) {
      coeffs.emplace(b, c);
    } else {
      it->second += c;
      if (it->second == S(0)) coeffs.erase(it);
    }
  }

  bool is_zero() const { return coeffs.empty(); }

  bool operator==(const KForm& rhs) const {
    return dim == rhs.dim && degree == rhs.degree && tag == rhs.tag && coeffs == rhs.coeffs;
  }

  KForm operator+(const KForm& rhs) const {
    if (dim != rhs.dim || tag != rhs.tag) throw BasisMismatch("form addition basis");
    if (degree != rhs.degree) throw DegreeMismatch("form addition degree");
    KForm out = *this;
    for (const auto& [b, c] : rhs.coeffs) out.add(b, c);
    return out;
  }

  KForm scaled(const S& s) const {
    KForm out{dim, degree, tag, {}};
    if (s == S(0)) return out;
    for (const auto& [b, c] : coeffs) out.coeffs.emplace(b, c * s);
    return out;
  }
};

template <class S>
struct Multivector {
  int dim = 0;
  int degree = 0;
  std::map<Blade, S> coeffs;

  static Multivector zero(int dim, int degree) { return Multivector{dim, degree, {}}; }

  static Multivector from_vector(const std::vector<S>& v) {
    Multivector m{static_cast<int>(v.size()), 1, {}};
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != S(0)) m.coeffs.emplace(Blade(1) << i, v[i]);
    return m;
  }

  void add(Blade b, const S& c) {
    if (c == S(0)) return;
    auto it = coeffs.find(b);
    if (it == coeffs.end()) {
      coeffs.emplace(b, c);
    } else {
      it->second += c;
      if (it->second == S(0)) coeffs.erase(it);
    }
  }

  bool is_zero() const { return coeffs.empty(); }
};

// --- wedge products --------------------------------------------------------

template <class S>
KForm<S> wedge(const KForm<S>& a, const KForm<S>& b) {
  if (a.dim != b.dim || a.tag != b.tag) throw BasisMismatch("wedge of mismatched bases");
  KForm<S> out{a.dim, a.degree + b.degree, a.tag, {}};
  if (out.degree > a.dim) return out;
  for (const auto& [ba, ca] : a.coeffs)
    for (const auto& [bb, cb] : b.coeffs) {
      int sign = blade_wedge_sign(ba, bb);
      if (sign == 0) continue;
      out.add(ba | bb, ca * cb * S(sign));
    }
  return out;
}

template <class S>
Multivector<S> wedge(const Multivector<S>& a, const Multivector<S>& b) {
  if (a.dim != b.dim) throw DimensionMismatch("wedge of mismatched dimensions");
  Multivector<S> out{a.dim, a.degree + b.degree, {}};
  if (out.degree > a.dim) return out;
  for (const auto& [ba, ca] : a.coeffs)
    for (const auto& [bb, cb] : b.coeffs) {
      int sign = blade_wedge_sign(ba, bb);
      if (sign == 0) continue;
      out.add(ba | bb, ca * cb * S(sign));
    }
  return out;
}

/// xi_1 ^ ... ^ xi_k expanded on the blade basis.
template <class S>
Multivector<S> wedge_of_vectors(const std::vector<std::vector<S>>& vectors) {
  if (vectors.empty()) throw DimensionMismatch("wedge of empty vector list");
  Multivector<S> acc = Multivector<S>::from_vector(vectors[0]);
  for (std::size_t t = 1; t < vectors.size(); ++t)
    acc = wedge(acc, Multivector<S>::from_vector(vectors[t]));
  return acc;
}

/// Duality pairing: sum over matching blades.
template <class S>
S evaluate(const KForm<S>& a, const Multivector<S>& v) {
  if (a.dim != v.dim) throw DimensionMismatch("pairing dimensions");
  if (a.degree != v.degree) throw DegreeMismatch("pairing degrees");
  S acc = S(0);
  const auto& small = a.coeffs.size() <= v.coeffs.size() ? a.coeffs : v.coeffs;
  const auto& big = a.coeffs.size() <= v.coeffs.size() ? v.coeffs : a.coeffs;
  for (const auto& [b, c] : small) {
    auto it = big.find(b);
    if (it != big.end()) acc += c * it->second;
  }
  return acc;
}

// --- minors and pullbacks --------------------------------------------------

inline Rational det_of(const Mat<Rational>& m) { return det_exact(m); }
inline double det_of(const Mat<double>& m) { return det_double(m); }

/// det of the submatrix of M with rows J and columns I (1-based tuples).
template <class S>
S minor_det(const std::vector<int>& J, const std::vector<int>& I, const Mat<S>& m) {
  if (J.size() != I.size()) throw DegreeMismatch("minor tuple sizes differ");
  std::vector<int> rows, cols;
  rows.reserve(J.size());
  cols.reserve(I.size());
  for (std::size_t t = 0; t < J.size(); ++t) {
    if (t > 0 && (J[t] <= J[t - 1] || I[t] <= I[t - 1]))
      throw IndexError("minor tuples must be strictly increasing");
    rows.push_back(J[t] - 1);
    cols.push_back(I[t] - 1);
  }
  return det_of(m.select(rows, cols));
}

/// Pullback of a coordinate k-form on R^m through a linear map with matrix
/// L (m x n): the dx_I coefficient is sum_J alpha_J * minor(J, I, L).
template <class S>
KForm<S> pullback_linear(const Mat<S>& l, const KForm<S>& alpha) {
  if (alpha.tag != BasisTag::Coordinate)
    throw BasisMismatch("pullback expects a coordinate-basis form");
  if (static_cast<int>(l.rows()) != alpha.dim)
    throw DimensionMismatch("pullback matrix rows must match form dimension");
  const int n = static_cast<int>(l.cols());
  const int k = alpha.degree;
  KForm<S> out{n, k, BasisTag::Coordinate, {}};
  if (k > n) return out;
  if (k == 0) {
    for (const auto& [b, c] : alpha.coeffs) out.add(b, c);
    return out;
  }
  for_each_tuple(n, k, [&](const std::vector<int>& I) {
    S acc = S(0);
    for (const auto& [bj, cj] : alpha.coeffs) acc += cj * minor_det(blade_indices(bj), I, l);
    out.add(blade_from_indices(I, n), acc);
  });
  return out;
}

// --- left-invariant calculus ----------------------------------------------

/// Maurer-Cartan differential d eta_k as a degree-2 form on the eta basis.
KForm<Rational> maurer_cartan(const StratifiedAlgebra& alg, int k);

/// Exterior derivative of a constant-coefficient eta-basis form, extended
/// from the Maurer-Cartan equations by the graded Leibniz rule.
KForm<Rational> eta_exterior_derivative(const StratifiedAlgebra& alg, const KForm<Rational>& form);

struct SpanTestResult {
  Rational value;       // the (q-1)-form paired against the wedge of the xi's
  bool form_vanishes = false;
  bool independent = false; // exact rank of the xi matrix equals q-1
  bool dependent_input = false; // set when membership is undecided
  bool member = false;  // meaningful only when independent
};

/// Pairs eta_1^...^(omit s)^...^eta_q against xi_1^...^xi_{q-1} and decides
/// span membership of X_s when the xi's are independent.
SpanTestResult span_test(int q, int s, const std::vector<RatVec>& xis);

struct GammaSolution {
  int s = 0;
  int kappa = 0;                      // d_s - 1
  std::map<std::pair<int, int>, Rational> gamma; // (k, l) with d_k = 1, d_l = kappa
};

/// One exact solution of sum gamma_{k,l} c^r_{k,l} = delta_{s,r} over all r
/// with d_r > kappa. Requires a noncommutative algebra and d_s >= 2.
GammaSolution gamma_coefficients(const StratifiedAlgebra& alg, int s);

/// theta_s built from the gamma coefficients with the permutation sign that
/// restores eta_1^...^eta_{m_kappa} after appending eta_l^eta_k.
KForm<Rational> theta_form(const StratifiedAlgebra& alg, int s);
KForm<Rational> theta_form(const StratifiedAlgebra& alg, const GammaSolution& gamma);

/// Verifies theta_s ^ d eta_r ^ eta_{m_kappa+1}^...^eta_{m_{d_r-1}}
/// == delta_{r,s} eta_1^...^eta_{m_{d_r-1}} exactly.
bool theta_product_check(const StratifiedAlgebra& alg, int s, int r);

/// Admissible (s, r) pairs for the theta identity: d_s >= 2, d_r >= d_s.
std::vector<std::pair<int, int>> theta_admissible_pairs(const StratifiedAlgebra& alg);

} // namespace carnot
