#pragma once

#include "carnot/rational.hpp"

#include <string>
#include <vector>

namespace carnot {

/// One structure-constant entry: the coefficient of X_k in [X_i, X_j].
/// Indices are 1-based throughout, matching the graded basis convention.
struct BracketEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  Rational c;
};

/// Raw input for build_algebra: stratum dimensions plus bracket entries.
/// Only (i < j) entries are stored after normalization; a redundant (j, i)
/// entry must negate its partner exactly.
struct AlgebraSpec {
  std::string name;
  std::vector<int> strata_dims;
  std::vector<BracketEntry> brackets;
};

/// Per-invariant validation outcome, used by the CLI validate command.
struct ValidationReport {
  struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
  };
  std::vector<Check> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// A validated stratified nilpotent Lie algebra in a graded basis.
/// Immutable after construction; shared read-only across workers.
class StratifiedAlgebra {
public:
  int q = 0;                       // linear dimension
  int step = 0;                    // number of strata (iota)
  std::vector<int> strata_dims;    // dim V_1 .. dim V_iota
  std::vector<int> layer_offsets;  // m_0 = 0, m_1, ..., m_iota = q
  std::vector<int> degrees;        // d_i per 1-based index (size q+1, [0] unused)
  int Q = 0;                       // homogeneous dimension
  bool commutative = false;
  std::string name;

  /// c[i][j][k] = coefficient of X_k in [X_i, X_j], 1-based dense tensor.
  const Rational& c(int i, int j, int k) const {
    return c_[idx(i, j, k)];
  }

  /// Bilinear bracket of coefficient vectors (length q).
  RatVec bracket(const RatVec& a, const RatVec& b) const;

  /// Degree of coordinate i (1-based).
  int degree(int i) const { return degrees[i]; }

  /// m_k for k in 0..step.
  int offset(int k) const { return layer_offsets[k]; }

private:
  friend StratifiedAlgebra build_algebra(const AlgebraSpec& spec);
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i - 1) * q + (j - 1)) * q + (k - 1);
  }
  std::vector<Rational> c_;
};

/// Builds and fully validates an algebra: antisymmetry, grading, Jacobi
/// identity and bracket generation [V_1, V_j] = V_{j+1} are all checked in
/// exact rational arithmetic. Throws the specific violation subclass.
StratifiedAlgebra build_algebra(const AlgebraSpec& spec);

/// Runs all build_algebra checks independently and reports each outcome
/// instead of throwing on the first failure.
ValidationReport validate_spec(const AlgebraSpec& spec);

/// Canonical specs: "heisenberg(n)", "engel", "free_step2(r)", "abelian(n)".
/// "heisenberg" and "abelian2" are accepted as shorthands.
AlgebraSpec catalog(const std::string& name);

/// Names accepted by catalog(), for help text.
std::vector<std::string> catalog_names();

} // namespace carnot
