#include "carnot/pullback_field.hpp"

#include "carnot/parallel.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdlib>
#include <thread>

namespace carnot {

double FormField::norm_at(std::size_t node) const {
  double acc = 0;
  const double* v = at(node);
  for (std::size_t k = 0; k < keys.size(); ++k) acc += v[k] * v[k];
  return std::sqrt(acc);
}

double FormField::max_interior_norm() const {
  double best = 0;
  for (std::size_t i = 0; i < node_count(); ++i)
    if (interior[i]) best = std::max(best, norm_at(i));
  return best;
}

double FormField::mean_interior_norm() const {
  double acc = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < node_count(); ++i)
    if (interior[i]) {
      acc += norm_at(i);
      ++count;
    }
  return count == 0 ? 0.0 : acc / count;
}

namespace {

std::vector<Blade> tuple_keys(int n, int k) {
  std::vector<Blade> keys;
  for_each_tuple(n, k, [&](const std::vector<int>& t) { keys.push_back(blade_from_indices(t, n)); });
  return keys;
}

// Coefficients of f*(eta form) at one node, given P = coframe(f(y)) * J.
void eta_pullback_at(const KForm<Rational>& eta_form, const Mat<double>& p,
                     const std::vector<Blade>& keys, const std::vector<int>& key_cols_flat,
                     int k, double* out) {
  for (std::size_t t = 0; t < keys.size(); ++t) out[t] = 0;
  if (k == 0) {
    double acc = 0;
    for (const auto& [b, c] : eta_form.coeffs)
      if (b == 0) acc += to_double(c);
    out[0] = acc;
    return;
  }
  Mat<double> sub(k, k);
  for (const auto& [blade, coeff] : eta_form.coeffs) {
    std::vector<int> rows = blade_indices(blade);
    double c = to_double(coeff);
    for (std::size_t t = 0; t < keys.size(); ++t) {
      const int* cols = key_cols_flat.data() + t * k;
      for (int r = 0; r < k; ++r)
        for (int cidx = 0; cidx < k; ++cidx) sub(r, cidx) = p(rows[r] - 1, cols[cidx] - 1);
      out[t] += c * det_double(sub);
    }
  }
}

} // namespace

FormField pullback_eta_form(const GridMap& gm, const GroupOps& ops,
                            const KForm<Rational>& eta_form) {
  const StratifiedAlgebra& alg = ops.algebra();
  if (gm.m() != alg.q) throw DimensionMismatch("grid map target must be the group dimension");
  if (eta_form.tag != BasisTag::LeftInvariant)
    throw BasisMismatch("pullback_eta_form expects an eta-basis form");
  const int n = gm.n();
  const int k = eta_form.degree;

  FormField field;
  field.n = n;
  field.degree = k;
  field.keys = k <= n ? tuple_keys(n, k) : std::vector<Blade>{};
  if (k == 0) field.keys = {Blade(0)};
  field.interior.assign(gm.node_count(), 0);
  if (field.keys.empty()) {
    // degree exceeds the domain dimension: the pullback is identically zero
    field.keys = {};
    field.coeffs.clear();
    for (std::size_t i = 0; i < gm.node_count(); ++i)
      field.interior[i] = gm.is_interior(gm.multi_index(i)) ? 1 : 0;
    return field;
  }
  field.coeffs.assign(gm.node_count() * field.keys.size(), 0.0);

  std::vector<int> key_cols_flat;
  for (Blade b : field.keys) {
    std::vector<int> cols = blade_indices(b);
    key_cols_flat.insert(key_cols_flat.end(), cols.begin(), cols.end());
  }

  const int q = alg.q;
  parallel_chunks(gm.node_count(), 4096, [&](std::size_t, std::size_t begin, std::size_t end) {
    GroupPointD w(q);
    Mat<double> p(q, n);
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::vector<int> idx = gm.multi_index(flat);
      field.interior[flat] = gm.is_interior(idx) ? 1 : 0;
      const double* v = gm.value(flat);
      for (int c = 0; c < q; ++c) w[c] = v[c];
      Eigen::MatrixXd jac = gm.differential(idx);
      Mat<double> cof = ops.coframe(w);
      for (int r = 0; r < q; ++r)
        for (int c = 0; c < n; ++c) {
          double acc = 0;
          for (int t = 0; t < q; ++t) acc += cof(r, t) * jac(t, c);
          p(r, c) = acc;
        }
      eta_pullback_at(eta_form, p, field.keys, key_cols_flat, k,
                      field.coeffs.data() + flat * field.keys.size());
    }
  });
  return field;
}

FormField pullback_field(const GridMap& gm, const GroupOps& ops,
                         const std::vector<int>& eta_indices) {
  Blade b = blade_from_indices(eta_indices, ops.algebra().q);
  auto form = KForm<Rational>::basis(ops.algebra().q, b, BasisTag::LeftInvariant);
  return pullback_eta_form(gm, ops, form);
}

FormField wedge_fields(const FormField& a, const FormField& b) {
  if (a.n != b.n) throw DimensionMismatch("wedge_fields dimension");
  if (a.node_count() != b.node_count() && !a.keys.empty() && !b.keys.empty())
    throw DimensionMismatch("wedge_fields node count");
  FormField out;
  out.n = a.n;
  out.degree = a.degree + b.degree;
  out.interior = a.interior;
  if (out.degree > a.n || a.keys.empty() || b.keys.empty()) {
    out.keys = {};
    return out;
  }
  out.keys = tuple_keys(a.n, out.degree);
  if (out.degree == 0) out.keys = {Blade(0)};
  std::size_t nodes = a.node_count();
  out.coeffs.assign(nodes * out.keys.size(), 0.0);

  // precompute sparse products between key pairs
  struct Term {
    std::size_t ka, kb, kout;
    double sign;
  };
  std::vector<Term> terms;
  std::map<Blade, std::size_t> out_pos;
  for (std::size_t t = 0; t < out.keys.size(); ++t) out_pos[out.keys[t]] = t;
  for (std::size_t i = 0; i < a.keys.size(); ++i)
    for (std::size_t j = 0; j < b.keys.size(); ++j) {
      int sign = blade_wedge_sign(a.keys[i], b.keys[j]);
      if (sign == 0) continue;
      terms.push_back({i, j, out_pos.at(a.keys[i] | b.keys[j]), static_cast<double>(sign)});
    }

  parallel_chunks(nodes, 8192, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const double* va = a.at(node);
      const double* vb = b.at(node);
      double* vo = out.coeffs.data() + node * out.keys.size();
      for (const Term& t : terms) vo[t.kout] += t.sign * va[t.ka] * vb[t.kb];
    }
  });
  return out;
}

void DefectField::finalize(double tolerance) {
  tol = tolerance;
  max_interior = 0;
  mean_interior = 0;
  interior_count = 0;
  std::size_t above = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!interior[i]) continue;
    ++interior_count;
    max_interior = std::max(max_interior, values[i]);
    mean_interior += values[i];
    if (values[i] > tolerance) ++above;
  }
  if (interior_count > 0) mean_interior /= interior_count;
  fraction_above_tol = interior_count == 0 ? 0.0 : static_cast<double>(above) / interior_count;
}

DefectField horizontality_defect(const GridMap& gm, const GroupOps& ops, HorizontalityMode mode,
                                 double tol) {
  const StratifiedAlgebra& alg = ops.algebra();
  const int q = alg.q;
  const int n = gm.n();
  const int m1 = alg.offset(1);
  if (gm.m() != q) throw DimensionMismatch("grid map target must be the group dimension");
  if (n != q - 1) throw DimensionMismatch("horizontality defect needs n = q - 1");
  if (mode == HorizontalityMode::ImageInH1 && m1 != q - 1)
    throw DimensionMismatch("image_in_H1 requires horizontal codimension one (m_1 = q-1)");
  if (mode == HorizontalityMode::H1InImage && m1 >= q - 1)
    throw DimensionMismatch("H1_in_image requires m_1 < q-1");

  DefectField defect;
  defect.values.assign(gm.node_count(), 0.0);
  defect.interior.assign(gm.node_count(), 0);

  parallel_chunks(gm.node_count(), 4096, [&](std::size_t, std::size_t begin, std::size_t end) {
    GroupPointD w(q);
    Mat<double> p(q, n);
    Mat<double> sub(n, n);
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::vector<int> idx = gm.multi_index(flat);
      defect.interior[flat] = gm.is_interior(idx) ? 1 : 0;
      const double* v = gm.value(flat);
      for (int c = 0; c < q; ++c) w[c] = v[c];
      Eigen::MatrixXd jac = gm.differential(idx);
      double df_norm = jac.norm();
      Mat<double> cof = ops.coframe(w);
      for (int r = 0; r < q; ++r)
        for (int c = 0; c < n; ++c) {
          double acc = 0;
          for (int t = 0; t < q; ++t) acc += cof(r, t) * jac(t, c);
          p(r, c) = acc;
        }
      double worst = 0;
      if (mode == HorizontalityMode::ImageInH1) {
        // rows s > m_1 of P are the coefficient vectors of f* eta_s
        for (int s = m1 + 1; s <= q; ++s) {
          double acc = 0;
          for (int c = 0; c < n; ++c) acc += p(s - 1, c) * p(s - 1, c);
          worst = std::max(worst, std::sqrt(acc));
        }
        if (df_norm > 0) worst /= df_norm;
      } else {
        // omit-s determinants of P detect X_s outside the image span
        for (int s = 1; s <= m1; ++s) {
          int rr = 0;
          for (int r = 1; r <= q; ++r) {
            if (r == s) continue;
            for (int c = 0; c < n; ++c) sub(rr, c) = p(r - 1, c);
            ++rr;
          }
          worst = std::max(worst, std::abs(det_double(sub)));
        }
        if (df_norm > 0) worst /= std::pow(df_norm, q - 1);
      }
      defect.values[flat] = worst;
    }
  });
  defect.finalize(tol);
  return defect;
}

std::map<int, std::size_t> rank_histogram(const GridMap& gm, double rel_tol) {
  std::map<int, std::size_t> hist;
  for (std::size_t flat = 0; flat < gm.node_count(); ++flat) {
    std::vector<int> idx = gm.multi_index(flat);
    if (!gm.is_interior(idx)) continue;
    Eigen::MatrixXd jac = gm.differential(idx);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
    const auto& sv = svd.singularValues();
    double top = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > rel_tol * std::max(1.0, top)) ++rank;
    ++hist[rank];
  }
  return hist;
}

ChainReport vanishing_chain_check(const GridMap& gm, const GroupOps& ops, int kappa, double tol) {
  const StratifiedAlgebra& alg = ops.algebra();
  if (alg.commutative)
    throw CommutativeGroupError("vanishing chain requires a noncommutative group");
  if (kappa < 1 || kappa >= alg.step) throw IndexError("kappa must be in 1..step-1");
  if (gm.n() != alg.q - 1) throw DimensionMismatch("chain check needs n = q - 1");

  const int q = alg.q;
  const int m_kappa = alg.offset(kappa);

  // step-1 hypothesis: f*(eta_{m_kappa+1} ^ ... ^ eta_q) vanishes
  Blade range = blade_range(m_kappa + 1, q);
  auto range_form = KForm<Rational>::basis(q, range, BasisTag::LeftInvariant);
  FormField range_field = pullback_eta_form(gm, ops, range_form);

  DefectField hypothesis;
  hypothesis.values.assign(gm.node_count(), 0.0);
  hypothesis.interior = range_field.interior;
  for (std::size_t i = 0; i < gm.node_count(); ++i)
    hypothesis.values[i] = range_field.keys.empty() ? 0.0 : range_field.norm_at(i);
  hypothesis.finalize(tol);
  if (hypothesis.fraction_above_tol > tol) {
    throw PreconditionDefect(
        "step-1 hypothesis fails: f*(eta-range) residual above tolerance on a fraction " +
            std::to_string(hypothesis.fraction_above_tol) + " of interior cells",
        hypothesis);
  }

  ChainReport report;
  report.kappa = kappa;
  report.range_residual_max = hypothesis.max_interior;
  report.range_residual_mean = hypothesis.mean_interior;
  report.interior_count = hypothesis.interior_count;

  // f*(d(range form)) via the Maurer-Cartan Leibniz expansion, then one
  // product with f*theta_s per admissible s.
  KForm<Rational> d_range = eta_exterior_derivative(alg, range_form);
  FormField d_field = pullback_eta_form(gm, ops, d_range);

  for (int s = 1; s <= q; ++s) {
    if (alg.degree(s) != kappa + 1) continue;
    FormField theta_field = pullback_eta_form(gm, ops, theta_form(alg, s));
    FormField product = wedge_fields(theta_field, d_field);
    ChainReport::PerS per;
    per.s = s;
    per.residual_max = product.keys.empty() ? 0.0 : product.max_interior_norm();
    per.residual_mean = product.keys.empty() ? 0.0 : product.mean_interior_norm();
    report.omit_s.push_back(per);
  }

  report.rank_rel_tol = 1e-7;
  report.rank_histogram = rank_histogram(gm, report.rank_rel_tol);
  for (const auto& [rank, count] : report.rank_histogram)
    if (rank == q - 1) report.max_rank_count += count;
  return report;
}

} // namespace carnot
