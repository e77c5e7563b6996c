#pragma once

#include "carnot/forms.hpp"
#include "carnot/grid_map.hpp"
#include "carnot/group_ops.hpp"

#include <map>
#include <string>
#include <vector>

namespace carnot {

/// A k-form field over the nodes of a GridMap: coefficients on the I_{k,n}
/// basis of the domain, stored per node in the fixed lexicographic key order.
struct FormField {
  int n = 0;
  int degree = 0;
  std::vector<Blade> keys;          // increasing k-tuples out of 1..n
  std::vector<double> coeffs;       // node-major, keys.size() per node
  std::vector<std::uint8_t> interior;

  std::size_t node_count() const { return keys.empty() ? 0 : coeffs.size() / keys.size(); }
  const double* at(std::size_t node) const { return coeffs.data() + node * keys.size(); }

  /// Euclidean norm of the coefficient vector at one node.
  double norm_at(std::size_t node) const;
  double max_interior_norm() const;
  double mean_interior_norm() const;
};

/// Pullback of a constant-coefficient eta-basis form through the sampled map:
/// at every node, eta_I at f(y) is expanded through the coframe and pulled
/// back through the finite-difference differential. The dy_B coefficient is
/// det((coframe(f(y)) * J)[rows I, cols B]).
FormField pullback_eta_form(const GridMap& gm, const GroupOps& ops,
                            const KForm<Rational>& eta_form);

/// Single eta-wedge convenience overload.
FormField pullback_field(const GridMap& gm, const GroupOps& ops,
                         const std::vector<int>& eta_indices);

/// Pointwise wedge of two form fields over the same grid.
FormField wedge_fields(const FormField& a, const FormField& b);

/// Nonnegative per-node scalar with summary statistics.
struct DefectField {
  std::vector<double> values;
  std::vector<std::uint8_t> interior;
  double tol = 0;
  double max_interior = 0;
  double mean_interior = 0;
  double fraction_above_tol = 0; // among interior nodes
  std::size_t interior_count = 0;

  void finalize(double tolerance);
};

enum class HorizontalityMode { H1InImage, ImageInH1 };

/// Cellwise horizontality defects for the two containment conditions.
/// ImageInH1 (needs m_1 = q-1 = n): max_{s>m_1} |f* eta_s| / |Df|_F.
/// H1InImage (needs m_1 < q-1 = n): max_{s<=m_1} |det of (coframe * J) with
/// row s omitted| / |Df|_F^{q-1}; zero defect at full rank certifies
/// containment of the horizontal fiber.
DefectField horizontality_defect(const GridMap& gm, const GroupOps& ops, HorizontalityMode mode,
                                 double tol);

/// Thrown by vanishing_chain_check when the step-1 hypothesis
/// f*(eta_{m_kappa+1}^...^eta_q) ~ 0 fails; carries the raw defect map.
class PreconditionDefect : public CarnotError {
public:
  PreconditionDefect(const std::string& what, DefectField defect)
      : CarnotError(what), defect_(std::move(defect)) {}
  const DefectField& defect() const { return defect_; }

private:
  DefectField defect_;
};

struct ChainReport {
  int kappa = 0;
  double range_residual_max = 0;
  double range_residual_mean = 0;
  struct PerS {
    int s = 0;
    double residual_max = 0;
    double residual_mean = 0;
  };
  std::vector<PerS> omit_s;          // s with d_s = kappa + 1
  std::map<int, std::size_t> rank_histogram; // interior nodes by FD rank
  double rank_rel_tol = 0;
  std::size_t interior_count = 0;
  std::size_t max_rank_count = 0;    // nodes at rank q-1
};

/// Desk verification of the vanishing chain: checks the step-1 hypothesis,
/// differentiates the eta range form through the Maurer-Cartan equations,
/// multiplies by f*theta_s per admissible s, and reports the residuals of
/// f*(eta_1 ^ ... omit s ... ^ eta_q) together with the FD rank histogram.
ChainReport vanishing_chain_check(const GridMap& gm, const GroupOps& ops, int kappa, double tol);

/// Rank histogram of the finite-difference differential over interior nodes.
std::map<int, std::size_t> rank_histogram(const GridMap& gm, double rel_tol = 1e-7);

} // namespace carnot
