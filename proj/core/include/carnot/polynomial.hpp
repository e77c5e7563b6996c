#pragma once

#include "carnot/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace carnot {

/// Sparse multivariate polynomial with exact rational coefficients.
/// Monomials are exponent vectors of fixed length nvars; zero coefficients
/// are never stored. Used for the symbolic group product and the
/// left-invariant frame/coframe matrices, which are evaluated either exactly
/// (Rational) or compiled to a flat term list for fast double evaluation.
class PolyQ {
public:
  using Monomial = std::vector<std::uint32_t>;

  PolyQ() = default;
  explicit PolyQ(std::size_t nvars) : nvars_(nvars) {}

  static PolyQ constant(std::size_t nvars, const Rational& c);
  static PolyQ variable(std::size_t nvars, std::size_t index);

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  void add_term(const Monomial& m, const Rational& c);

  PolyQ operator+(const PolyQ& rhs) const;
  PolyQ operator-(const PolyQ& rhs) const;
  PolyQ operator*(const PolyQ& rhs) const;
  PolyQ operator-() const;
  PolyQ scaled(const Rational& c) const;

  PolyQ& operator+=(const PolyQ& rhs);

  bool operator==(const PolyQ& rhs) const { return nvars_ == rhs.nvars_ && terms_ == rhs.terms_; }

  Rational eval(const RatVec& point) const;
  double eval(const std::vector<double>& point) const;

  /// Gradient entry with respect to one variable, evaluated after setting
  /// every variable in `zeroed_from..nvars-1` to zero. Used to extract the
  /// y-linear part of the group product polynomial.
  PolyQ linear_part_in(std::size_t var, std::size_t zeroed_from) const;

  /// Reinterprets the polynomial over the first new_nvars variables; every
  /// dropped variable must be unused.
  PolyQ truncated_vars(std::size_t new_nvars) const;

  /// Printed with the given variable names, e.g. "1 - 1/2*z2 + z1*z3".
  std::string str(const std::vector<std::string>& names) const;

private:
  std::size_t nvars_ = 0;
  std::map<Monomial, Rational> terms_;
};

/// Flattened representation for fast repeated double evaluation.
struct CompiledPoly {
  struct Term {
    double coeff;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> powers; // (var, exp)
  };
  std::vector<Term> terms;

  static CompiledPoly from(const PolyQ& p);
  double eval(const double* point) const;
};

} // namespace carnot
