#include "carnot/group_ops.hpp"

#include "carnot/errors.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace carnot {

namespace {

// Bernoulli numbers with the B_1 = +1/2 convention, which is the expansion
// of w / (1 - e^{-w}) = sum_k B_k^+ w^k / k!.
std::vector<Rational> bernoulli_plus(int count) {
  std::vector<Rational> b(count, Rational(0));
  if (count > 0) b[0] = 1;
  for (int m = 1; m < count; ++m) {
    // recurrence for the B_1 = -1/2 convention
    Rational sum = 0;
    Rational binom = 1; // C(m+1, 0)
    for (int k = 0; k < m; ++k) {
      sum += binom * b[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[m] = -sum / (m + 1);
  }
  if (count > 1) b[1] = Rational(1, 2);
  return b;
}

Rational factorial(int n) {
  Rational f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

using PolyVec = std::vector<PolyQ>;

PolyVec poly_bracket(const StratifiedAlgebra& alg, const PolyVec& a, const PolyVec& b,
                     std::size_t nvars) {
  const int q = alg.q;
  PolyVec out(q, PolyQ(nvars));
  for (int i = 1; i <= q; ++i) {
    if (a[i - 1].is_zero()) continue;
    for (int j = 1; j <= q; ++j) {
      if (b[j - 1].is_zero()) continue;
      PolyQ prod = a[i - 1] * b[j - 1];
      for (int k = 1; k <= q; ++k) {
        const Rational& c = alg.c(i, j, k);
        if (c != 0) out[k - 1] += prod.scaled(c);
      }
    }
  }
  return out;
}

// Dynkin series for log(exp(x) exp(y)), truncated at commutator depth
// alg.step. Words are blocks x^{r_1} y^{s_1} ... x^{r_n} y^{s_n}; the bracket
// of a word is the right-nested one and the coefficient is
// (-1)^{n-1} / (n * len * prod r_i! s_i!). Exact for nilpotent algebras.
PolyVec dynkin_product(const StratifiedAlgebra& alg) {
  const int q = alg.q;
  const std::size_t nvars = 2 * static_cast<std::size_t>(q);
  PolyVec x(q, PolyQ(nvars)), y(q, PolyQ(nvars));
  for (int i = 0; i < q; ++i) {
    x[i] = PolyQ::variable(nvars, i);
    y[i] = PolyQ::variable(nvars, q + i);
  }

  PolyVec result(q, PolyQ(nvars));
  auto add_word = [&](const std::vector<int>& letters, const Rational& coeff) {
    // letters: 0 = x, 1 = y; right-nested bracket
    PolyVec acc = letters.back() == 0 ? x : y;
    for (int t = static_cast<int>(letters.size()) - 2; t >= 0; --t) {
      const PolyVec& lhs = letters[t] == 0 ? x : y;
      acc = poly_bracket(alg, lhs, acc, nvars);
      bool zero = true;
      for (const auto& p : acc)
        if (!p.is_zero()) {
          zero = false;
          break;
        }
      if (zero) return;
    }
    for (int i = 0; i < q; ++i) result[i] += acc[i].scaled(coeff);
  };

  // enumerate block sequences of total length 1..step
  std::vector<std::pair<int, int>> blocks;
  auto process = [&]() {
    int n = static_cast<int>(blocks.size());
    int len = 0;
    Rational denom = 1;
    std::vector<int> letters;
    for (auto [r, s] : blocks) {
      len += r + s;
      denom *= factorial(r) * factorial(s);
      letters.insert(letters.end(), r, 0);
      letters.insert(letters.end(), s, 1);
    }
    Rational coeff = Rational((n - 1) % 2 == 0 ? 1 : -1) / (Rational(n) * len * denom);
    add_word(letters, coeff);
  };
  std::function<void(int)> enumerate = [&](int remaining) {
    if (remaining == 0) {
      process();
      return;
    }
    for (int r = 0; r <= remaining; ++r)
      for (int s = 0; s + r <= remaining; ++s) {
        if (r + s == 0) continue;
        blocks.emplace_back(r, s);
        enumerate(remaining - r - s);
        blocks.pop_back();
      }
  };
  for (int len = 1; len <= alg.step; ++len) enumerate(len);
  return result;
}

std::vector<std::vector<PolyQ>> matrix_power_series(const StratifiedAlgebra& alg,
                                                    const std::vector<Rational>& coeffs) {
  const int q = alg.q;
  const std::size_t nvars = q;
  // ad_z matrix: M(z)[k][i] = sum_j z_j c(j, i, k)
  std::vector<std::vector<PolyQ>> ad(q, std::vector<PolyQ>(q, PolyQ(nvars)));
  for (int k = 1; k <= q; ++k)
    for (int i = 1; i <= q; ++i)
      for (int j = 1; j <= q; ++j) {
        const Rational& c = alg.c(j, i, k);
        if (c != 0) ad[k - 1][i - 1] += PolyQ::variable(nvars, j - 1).scaled(c);
      }

  auto mat_mul = [&](const std::vector<std::vector<PolyQ>>& a,
                     const std::vector<std::vector<PolyQ>>& b) {
    std::vector<std::vector<PolyQ>> out(q, std::vector<PolyQ>(q, PolyQ(nvars)));
    for (int i = 0; i < q; ++i)
      for (int k = 0; k < q; ++k) {
        if (a[i][k].is_zero()) continue;
        for (int j = 0; j < q; ++j)
          if (!b[k][j].is_zero()) out[i][j] += a[i][k] * b[k][j];
      }
    return out;
  };

  std::vector<std::vector<PolyQ>> acc(q, std::vector<PolyQ>(q, PolyQ(nvars)));
  std::vector<std::vector<PolyQ>> power(q, std::vector<PolyQ>(q, PolyQ(nvars)));
  for (int i = 0; i < q; ++i) power[i][i] = PolyQ::constant(nvars, Rational(1));
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) power = mat_mul(power, ad);
    if (coeffs[k] == 0) continue;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) acc[i][j] += power[i][j].scaled(coeffs[k]);
  }
  return acc;
}

template <class T>
std::vector<T> eval_poly_vec(const std::vector<PolyQ>& polys, const std::vector<T>& point) {
  std::vector<T> out;
  out.reserve(polys.size());
  for (const auto& p : polys) out.push_back(p.eval(point));
  return out;
}

} // namespace

GroupOps::GroupOps(const StratifiedAlgebra& alg) : alg_(&alg) {
  product_poly_ = dynkin_product(alg);

  // frame(z) = sum_k (B_k^+ / k!) ad_z^k, the y-derivative of the product at
  // y = 0; the series stops at step-1 because ad_z raises degree.
  std::vector<Rational> bern = bernoulli_plus(alg.step);
  std::vector<Rational> frame_coeffs(alg.step);
  for (int k = 0; k < alg.step; ++k) frame_coeffs[k] = bern[k] / factorial(k);
  frame_poly_ = matrix_power_series(alg, frame_coeffs);

  // coframe = (I + N)^{-1} = sum (-N)^k with N = frame - I nilpotent.
  // Computed as a Neumann series on the polynomial matrix.
  const int q = alg.q;
  std::vector<std::vector<PolyQ>> n_mat = frame_poly_;
  for (int i = 0; i < q; ++i) n_mat[i][i] = n_mat[i][i] - PolyQ::constant(q, Rational(1));
  std::vector<std::vector<PolyQ>> term(q, std::vector<PolyQ>(q, PolyQ(q)));
  coframe_poly_.assign(q, std::vector<PolyQ>(q, PolyQ(q)));
  for (int i = 0; i < q; ++i) {
    term[i][i] = PolyQ::constant(q, Rational(1));
    coframe_poly_[i][i] = PolyQ::constant(q, Rational(1));
  }
  for (int p = 1; p < alg.step; ++p) {
    std::vector<std::vector<PolyQ>> next(q, std::vector<PolyQ>(q, PolyQ(q)));
    for (int i = 0; i < q; ++i)
      for (int k = 0; k < q; ++k) {
        if (term[i][k].is_zero()) continue;
        for (int j = 0; j < q; ++j)
          if (!n_mat[k][j].is_zero()) next[i][j] += term[i][k] * n_mat[k][j];
      }
    term = std::move(next);
    Rational sign = (p % 2 == 0) ? 1 : -1;
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) coframe_poly_[i][j] += term[i][j].scaled(sign);
  }

  product_compiled_.reserve(product_poly_.size());
  for (const auto& p : product_poly_) product_compiled_.push_back(CompiledPoly::from(p));
  frame_compiled_.resize(q);
  coframe_compiled_.resize(q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      frame_compiled_[i].push_back(CompiledPoly::from(frame_poly_[i][j]));
      coframe_compiled_[i].push_back(CompiledPoly::from(coframe_poly_[i][j]));
    }
}

GroupPointQ GroupOps::bch_product(const GroupPointQ& x, const GroupPointQ& y) const {
  const int q = alg_->q;
  if (static_cast<int>(x.size()) != q || static_cast<int>(y.size()) != q)
    throw DimensionMismatch("group point length");
  RatVec point;
  point.reserve(2 * q);
  point.insert(point.end(), x.begin(), x.end());
  point.insert(point.end(), y.begin(), y.end());
  return eval_poly_vec(product_poly_, point);
}

GroupPointD GroupOps::bch_product(const GroupPointD& x, const GroupPointD& y) const {
  const int q = alg_->q;
  if (static_cast<int>(x.size()) != q || static_cast<int>(y.size()) != q)
    throw DimensionMismatch("group point length");
  std::vector<double> point;
  point.reserve(2 * q);
  point.insert(point.end(), x.begin(), x.end());
  point.insert(point.end(), y.begin(), y.end());
  GroupPointD out(q);
  for (int i = 0; i < q; ++i) out[i] = product_compiled_[i].eval(point.data());
  return out;
}

void GroupOps::bch_product_into(const double* xy, double* out) const {
  const int q = alg_->q;
  for (int i = 0; i < q; ++i) out[i] = product_compiled_[i].eval(xy);
}

GroupPointQ GroupOps::inverse(GroupPointQ x) const {
  for (auto& v : x) v = -v;
  return x;
}

GroupPointD GroupOps::inverse(GroupPointD x) const {
  for (auto& v : x) v = -v;
  return x;
}

GroupPointQ GroupOps::dilation(const GroupPointQ& x, const Rational& r) const {
  if (r <= 0) throw CarnotError("dilation factor must be positive");
  if (static_cast<int>(x.size()) != alg_->q) throw DimensionMismatch("group point length");
  GroupPointQ out(x.size());
  for (int i = 1; i <= alg_->q; ++i) {
    Rational f = 1;
    for (int e = 0; e < alg_->degree(i); ++e) f *= r;
    out[i - 1] = x[i - 1] * f;
  }
  return out;
}

GroupPointD GroupOps::dilation(const GroupPointD& x, double r) const {
  if (!(r > 0)) throw CarnotError("dilation factor must be positive");
  if (static_cast<int>(x.size()) != alg_->q) throw DimensionMismatch("group point length");
  GroupPointD out(x.size());
  for (int i = 1; i <= alg_->q; ++i) out[i - 1] = x[i - 1] * std::pow(r, alg_->degree(i));
  return out;
}

RatMat GroupOps::frame(const GroupPointQ& z) const {
  const int q = alg_->q;
  if (static_cast<int>(z.size()) != q) throw DimensionMismatch("group point length");
  RatMat m(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = frame_poly_[i][j].eval(z);
  return m;
}

Mat<double> GroupOps::frame(const GroupPointD& z) const {
  const int q = alg_->q;
  if (static_cast<int>(z.size()) != q) throw DimensionMismatch("group point length");
  Mat<double> m(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = frame_compiled_[i][j].eval(z.data());
  return m;
}

RatMat GroupOps::coframe(const GroupPointQ& z) const {
  const int q = alg_->q;
  if (static_cast<int>(z.size()) != q) throw DimensionMismatch("group point length");
  RatMat m(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = coframe_poly_[i][j].eval(z);
  return m;
}

Mat<double> GroupOps::coframe(const GroupPointD& z) const {
  const int q = alg_->q;
  if (static_cast<int>(z.size()) != q) throw DimensionMismatch("group point length");
  Mat<double> m(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m(i, j) = coframe_compiled_[i][j].eval(z.data());
  return m;
}

double GroupOps::quasi_norm(const GroupPointD& w) const {
  if (static_cast<int>(w.size()) != alg_->q) throw DimensionMismatch("group point length");
  double norm = 0;
  for (int i = 1; i <= alg_->q; ++i) {
    double v = std::pow(std::abs(w[i - 1]), 1.0 / alg_->degree(i));
    norm = std::max(norm, v);
  }
  return norm;
}

double GroupOps::quasi_distance(const GroupPointD& x, const GroupPointD& y) const {
  return quasi_norm(bch_product(inverse(x), y));
}

double measure_triangle_constant(const GroupOps& ops, int n_triples, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int q = ops.algebra().q;
  double worst = 0;
  for (int t = 0; t < n_triples; ++t) {
    GroupPointD x(q), y(q), z(q);
    for (int i = 0; i < q; ++i) {
      x[i] = dist(rng);
      y[i] = dist(rng);
      z[i] = dist(rng);
    }
    double xz = ops.quasi_distance(x, z);
    double xy = ops.quasi_distance(x, y);
    double yz = ops.quasi_distance(y, z);
    if (xy + yz == 0) continue;
    worst = std::max(worst, xz / (xy + yz));
  }
  return worst;
}

} // namespace carnot
