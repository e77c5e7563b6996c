#include "carnot/forms.hpp"

#include <bit>

namespace carnot {

Blade blade_from_indices(const std::vector<int>& indices, int dim) {
  Blade b = 0;
  int prev = 0;
  for (int i : indices) {
    if (i <= prev) throw IndexError("blade indices must be strictly increasing");
    if (i < 1 || i > dim) throw IndexError("blade index out of range");
    b |= Blade(1) << (i - 1);
    prev = i;
  }
  return b;
}

std::vector<int> blade_indices(Blade b) {
  std::vector<int> out;
  while (b) {
    int bit = std::countr_zero(b);
    out.push_back(bit + 1);
    b &= b - 1;
  }
  return out;
}

int blade_degree(Blade b) { return std::popcount(b); }

Blade blade_range(int lo, int hi) {
  Blade b = 0;
  for (int i = lo; i <= hi; ++i) b |= Blade(1) << (i - 1);
  return b;
}

int blade_wedge_sign(Blade a, Blade b) {
  if (a & b) return 0;
  // For each element of b, count elements of a that must jump over it.
  int swaps = 0;
  Blade rest = b;
  while (rest) {
    int bit = std::countr_zero(rest);
    swaps += std::popcount(a >> (bit + 1));
    rest &= rest - 1;
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

void for_each_tuple(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> tuple(k);
  for (int t = 0; t < k; ++t) tuple[t] = t + 1;
  if (k == 0) {
    fn(tuple);
    return;
  }
  while (true) {
    fn(tuple);
    int pos = k - 1;
    while (pos >= 0 && tuple[pos] == n - (k - 1 - pos)) --pos;
    if (pos < 0) break;
    ++tuple[pos];
    for (int t = pos + 1; t < k; ++t) tuple[t] = tuple[t - 1] + 1;
  }
}

KForm<Rational> maurer_cartan(const StratifiedAlgebra& alg, int k) {
  if (k < 1 || k > alg.q) throw IndexError("maurer_cartan index out of range");
  KForm<Rational> out = KForm<Rational>::zero(alg.q, 2, BasisTag::LeftInvariant);
  // d eta_k = sum_{j<i, d_i < d_k} c^k_{j,i} eta_i ^ eta_j
  //         = sum_{j<i} (-c^k_{j,i}) eta_j ^ eta_i  on canonical blades.
  for (int j = 1; j <= alg.q; ++j)
    for (int i = j + 1; i <= alg.q; ++i) {
      if (alg.degree(i) >= alg.degree(k)) continue;
      const Rational& c = alg.c(j, i, k);
      if (c != 0) out.add(blade_from_indices({j, i}, alg.q), -c);
    }
  return out;
}

KForm<Rational> eta_exterior_derivative(const StratifiedAlgebra& alg,
                                        const KForm<Rational>& form) {
  if (form.tag != BasisTag::LeftInvariant)
    throw BasisMismatch("eta exterior derivative expects the eta basis");
  KForm<Rational> out = KForm<Rational>::zero(alg.q, form.degree + 1, BasisTag::LeftInvariant);
  for (const auto& [blade, coeff] : form.coeffs) {
    std::vector<int> idx = blade_indices(blade);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      std::vector<int> before(idx.begin(), idx.begin() + t);
      std::vector<int> after(idx.begin() + t + 1, idx.end());
      KForm<Rational> piece =
          KForm<Rational>::basis(alg.q, blade_from_indices(before, alg.q), BasisTag::LeftInvariant);
      piece = wedge(piece, maurer_cartan(alg, idx[t]));
      piece = wedge(piece,
                    KForm<Rational>::basis(alg.q, blade_from_indices(after, alg.q),
                                           BasisTag::LeftInvariant));
      Rational sign = (t % 2 == 0) ? coeff : -coeff;
      for (const auto& [b, c] : piece.coeffs) out.add(b, c * sign);
    }
  }
  return out;
}

SpanTestResult span_test(int q, int s, const std::vector<RatVec>& xis) {
  if (q < 3) throw DimensionMismatch("span_test needs q >= 3");
  if (s < 1 || s > q) throw IndexError("span_test index out of range");
  if (static_cast<int>(xis.size()) != q - 1)
    throw DimensionMismatch("span_test expects q-1 vectors");
  for (const auto& xi : xis)
    if (static_cast<int>(xi.size()) != q) throw DimensionMismatch("span_test vector length");

  SpanTestResult res;
  Multivector<Rational> wedge_xi = wedge_of_vectors(xis);
  Blade omit = blade_range(1, q) & ~(Blade(1) << (s - 1));
  auto form = KForm<Rational>::basis(q, omit, BasisTag::LeftInvariant);
  res.value = evaluate(form, wedge_xi);
  res.form_vanishes = res.value == 0;

  RatMat m(q, q - 1);
  for (int col = 0; col < q - 1; ++col)
    for (int row = 0; row < q; ++row) m(row, col) = xis[col][row];
  res.independent = rank_exact(m) == static_cast<std::size_t>(q - 1);
  if (!res.independent) {
    res.dependent_input = true;
    res.member = false;
  } else {
    res.member = res.form_vanishes;
  }
  return res;
}

namespace {

std::vector<std::pair<int, int>> gamma_pairs(const StratifiedAlgebra& alg, int kappa) {
  std::vector<std::pair<int, int>> pairs;
  for (int k = 1; k <= alg.q; ++k) {
    if (alg.degree(k) != 1) continue;
    for (int l = k + 1; l <= alg.q; ++l)
      if (alg.degree(l) == kappa) pairs.emplace_back(k, l);
  }
  return pairs;
}

} // namespace

GammaSolution gamma_coefficients(const StratifiedAlgebra& alg, int s) {
  if (alg.commutative)
    throw CommutativeGroupError("gamma coefficients require a noncommutative group");
  if (s < 1 || s > alg.q) throw IndexError("gamma index out of range");
  if (alg.degree(s) < 2) throw DegreeMismatch("gamma coefficients need d_s >= 2");

  const int kappa = alg.degree(s) - 1;
  auto pairs = gamma_pairs(alg, kappa);
  std::vector<int> rows;
  for (int r = 1; r <= alg.q; ++r)
    if (alg.degree(r) > kappa) rows.push_back(r);

  RatMat a(rows.size(), pairs.size());
  RatVec b(rows.size(), Rational(0));
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    int r = rows[ri];
    for (std::size_t pi = 0; pi < pairs.size(); ++pi)
      a(ri, pi) = alg.c(pairs[pi].first, pairs[pi].second, r);
    b[ri] = (r == s) ? Rational(1) : Rational(0);
  }
  auto x = solve_first_pivot(a, b);
  if (!x)
    throw InternalError("gamma system unsolvable; contradicts bracket generation");

  GammaSolution sol;
  sol.s = s;
  sol.kappa = kappa;
  for (std::size_t pi = 0; pi < pairs.size(); ++pi)
    if ((*x)[pi] != 0) sol.gamma.emplace(pairs[pi], (*x)[pi]);
  return sol;
}

KForm<Rational> theta_form(const StratifiedAlgebra& alg, const GammaSolution& gamma) {
  const int m_kappa = alg.offset(gamma.kappa);
  KForm<Rational> theta =
      KForm<Rational>::zero(alg.q, m_kappa - 2, BasisTag::LeftInvariant);
  Blade full = blade_range(1, m_kappa);
  for (const auto& [pair, g] : gamma.gamma) {
    auto [k, l] = pair;
    Blade rest = full & ~(Blade(1) << (k - 1)) & ~(Blade(1) << (l - 1));
    // sign restoring (..., l, k) to increasing order:
    // sigma * rest ^ eta_l ^ eta_k = eta_1 ^ ... ^ eta_{m_kappa}
    int sign_l = blade_wedge_sign(rest, Blade(1) << (l - 1));
    int sign_k = blade_wedge_sign(rest | (Blade(1) << (l - 1)), Blade(1) << (k - 1));
    int sigma = sign_l * sign_k;
    theta.add(rest, g * sigma);
  }
  return theta;
}

KForm<Rational> theta_form(const StratifiedAlgebra& alg, int s) {
  return theta_form(alg, gamma_coefficients(alg, s));
}

bool theta_product_check(const StratifiedAlgebra& alg, int s, int r) {
  if (r < 1 || r > alg.q) throw IndexError("theta product index out of range");
  const int kappa = alg.degree(s) - 1;
  if (kappa < 1) throw DegreeMismatch("theta product needs d_s >= 2");
  if (alg.degree(r) <= kappa) throw DegreeMismatch("theta product needs d_r > d_s - 1");

  KForm<Rational> lhs = theta_form(alg, s);
  lhs = wedge(lhs, maurer_cartan(alg, r));
  int tail_lo = alg.offset(kappa) + 1;
  int tail_hi = alg.offset(alg.degree(r) - 1);
  Blade tail = (tail_lo <= tail_hi) ? blade_range(tail_lo, tail_hi) : Blade(0);
  lhs = wedge(lhs, KForm<Rational>::basis(alg.q, tail, BasisTag::LeftInvariant));

  Blade target = blade_range(1, alg.offset(alg.degree(r) - 1));
  KForm<Rational> rhs = KForm<Rational>::zero(alg.q, blade_degree(target), BasisTag::LeftInvariant);
  if (r == s) rhs.add(target, Rational(1));
  return lhs == rhs;
}

std::vector<std::pair<int, int>> theta_admissible_pairs(const StratifiedAlgebra& alg) {
  std::vector<std::pair<int, int>> out;
  for (int s = 1; s <= alg.q; ++s) {
    if (alg.degree(s) < 2) continue;
    for (int r = 1; r <= alg.q; ++r)
      if (alg.degree(r) > alg.degree(s) - 1) out.emplace_back(s, r);
  }
  return out;
}

} // namespace carnot
