#include "carnot/forms.hpp"

#include "carnot/group_ops.hpp"

#include "doctest.h"

#include <random>

using namespace carnot;

namespace {

using QForm = KForm<Rational>;
using QVector = Multivector<Rational>;

QForm dx(int dim, std::initializer_list<int> idx) {
  return QForm::basis(dim, blade_from_indices(std::vector<int>(idx), dim), BasisTag::Coordinate);
}

QForm eta(int dim, std::initializer_list<int> idx) {
  return QForm::basis(dim, blade_from_indices(std::vector<int>(idx), dim),
                      BasisTag::LeftInvariant);
}

RatVec basis_vec(int q, int i) {
  RatVec e(q, Rational(0));
  e[i - 1] = 1;
  return e;
}

const StratifiedAlgebra& heis() {
  static StratifiedAlgebra alg = build_algebra(catalog("heisenberg(1)"));
  return alg;
}

const StratifiedAlgebra& engel() {
  static StratifiedAlgebra alg = build_algebra(catalog("engel"));
  return alg;
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  return Rational(num(rng), den(rng));
}

} // namespace

TEST_CASE("wedge products carry exact permutation signs") {
  QForm d1 = dx(3, {1});
  QForm d2 = dx(3, {2});
  QForm w = wedge(d1, d2);
  QVector e12 = wedge_of_vectors<Rational>({basis_vec(3, 1), basis_vec(3, 2)});
  CHECK(evaluate(w, e12) == 1);

  // antisymmetry
  QForm w_rev = wedge(d2, d1);
  CHECK(evaluate(w_rev, e12) == -1);

  // dx2 ^ dx2 = 0 through the sum
  QForm sum = d1 + d2;
  QForm prod = wedge(sum, d2);
  CHECK(prod == wedge(d1, d2));

  CHECK_THROWS_AS(wedge(dx(3, {1}), eta(3, {2})), BasisMismatch);
}

TEST_CASE("pairing expands mixed-basis multivectors") {
  RatVec xi1 = basis_vec(3, 1);
  xi1[2] = 1; // X_1 + X_3
  RatVec xi2 = basis_vec(3, 2);
  QVector v = wedge_of_vectors<Rational>({xi1, xi2});
  CHECK(evaluate(eta(3, {1, 2}), v) == 1);
  CHECK(evaluate(eta(3, {2, 3}), v) == -1);
  QVector zero = QVector::zero(3, 2);
  CHECK(evaluate(eta(3, {1, 2}), zero) == 0);
  CHECK_THROWS_AS(evaluate(eta(3, {1}), v), DegreeMismatch);
}

TEST_CASE("minors select the right submatrix") {
  // L = differential of f(x,y) = (x, y, xy) at (x, y)
  Rational x(3), y(7);
  RatMat l(3, 2);
  l(0, 0) = 1; l(0, 1) = 0;
  l(1, 0) = 0; l(1, 1) = 1;
  l(2, 0) = y; l(2, 1) = x;
  CHECK(minor_det<Rational>({1, 3}, {1, 2}, l) == x);
  CHECK(minor_det<Rational>({2, 3}, {1, 2}, l) == -y);

  RatMat id = RatMat::identity(4);
  CHECK(minor_det<Rational>({1, 3}, {1, 3}, id) == 1);
  CHECK(minor_det<Rational>({1, 3}, {1, 2}, id) == 0);

  RatMat rank1(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rank1(i, j) = Rational((i + 1) * (j + 2));
  CHECK(minor_det<Rational>({1, 2}, {2, 3}, rank1) == 0);
}

TEST_CASE("pullback of dx1^dx3 through the xy-graph differential") {
  Rational x(5), y(-2);
  RatMat l(3, 2);
  l(0, 0) = 1; l(0, 1) = 0;
  l(1, 0) = 0; l(1, 1) = 1;
  l(2, 0) = y; l(2, 1) = x;
  QForm alpha = dx(3, {1, 3});
  QForm pulled = pullback_linear(l, alpha);
  QForm expected = dx(2, {1, 2}).scaled(x);
  CHECK(pulled == expected);

  // identity pulls back to the identity map on forms
  RatMat id = RatMat::identity(3);
  CHECK(pullback_linear(id, alpha) == alpha);
}

TEST_CASE("pullback of eta_3 at a point of the flat plane") {
  GroupOps ops(heis());
  Rational u(3), v(11);
  RatVec z{u, v, Rational(0)};
  RatMat cof = ops.coframe(z);
  QForm eta3 = QForm::zero(3, 1, BasisTag::Coordinate);
  for (int col = 0; col < 3; ++col)
    eta3.add(blade_from_indices({col + 1}, 3), cof(2, col));
  RatMat jac(3, 2);
  jac(0, 0) = 1; jac(1, 1) = 1; // df for (u,v) -> (u,v,0)
  QForm pulled = pullback_linear(jac, eta3);
  // (v/2) du - (u/2) dv
  QForm expected = QForm::zero(2, 1, BasisTag::Coordinate);
  expected.add(blade_from_indices({1}, 2), v / 2);
  expected.add(blade_from_indices({2}, 2), -u / 2);
  CHECK(pulled == expected);
}

TEST_CASE("pullback functoriality on random rational matrices") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    RatMat l(3, 3), m(3, 2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) l(i, j) = random_rational(rng);
      for (int j = 0; j < 2; ++j) m(i, j) = random_rational(rng);
    }
    QForm alpha = QForm::zero(3, 2, BasisTag::Coordinate);
    alpha.add(blade_from_indices({1, 2}, 3), random_rational(rng));
    alpha.add(blade_from_indices({1, 3}, 3), random_rational(rng));
    alpha.add(blade_from_indices({2, 3}, 3), random_rational(rng));

    QForm once = pullback_linear(l * m, alpha);
    QForm twice = pullback_linear(m, pullback_linear(l, alpha));
    CHECK(once == twice);
  }
}

TEST_CASE("hadamard bound on pullback coefficients") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Mat<double> m(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) m(i, j) = unit(rng);
    std::vector<int> rows{1, 3, 4};
    std::vector<int> cols{1, 2, 3};
    double det = minor_det<double>(rows, cols, m);
    double bound = 1.0;
    for (int c : cols) {
      double norm2 = 0;
      for (int r : rows) norm2 += m(r - 1, c - 1) * m(r - 1, c - 1);
      bound *= std::sqrt(norm2);
    }
    CHECK(std::abs(det) <= bound + 1e-12);
  }
}

TEST_CASE("maurer-cartan differentials match the structure constants") {
  QForm mc3 = maurer_cartan(heis(), 3);
  // d eta_3 = eta_2 ^ eta_1 = -(eta_1 ^ eta_2)
  QForm expected = QForm::zero(3, 2, BasisTag::LeftInvariant);
  expected.add(blade_from_indices({1, 2}, 3), Rational(-1));
  CHECK(mc3 == expected);

  CHECK(maurer_cartan(heis(), 1).is_zero());
  CHECK(maurer_cartan(engel(), 1).is_zero());

  QForm mc4 = maurer_cartan(engel(), 4); // eta_3 ^ eta_1
  QForm expected4 = QForm::zero(4, 2, BasisTag::LeftInvariant);
  expected4.add(blade_from_indices({1, 3}, 4), Rational(-1));
  CHECK(mc4 == expected4);

  // consistency with d eta_k (X_i ^ X_j) = c^k_{j,i}
  for (const char* name : {"heisenberg(1)", "heisenberg(2)", "engel", "free_step2(3)"}) {
    StratifiedAlgebra alg = build_algebra(catalog(name));
    for (int k = 1; k <= alg.q; ++k) {
      QForm mc = maurer_cartan(alg, k);
      for (int i = 1; i <= alg.q; ++i)
        for (int j = 1; j <= alg.q; ++j) {
          if (i == j) continue;
          QVector v = wedge_of_vectors<Rational>({basis_vec(alg.q, i), basis_vec(alg.q, j)});
          CHECK(evaluate(mc, v) == alg.c(j, i, k));
        }
    }
  }
}

TEST_CASE("d of d eta vanishes for every catalog algebra") {
  for (const char* name : {"heisenberg(1)", "heisenberg(2)", "engel", "free_step2(3)"}) {
    StratifiedAlgebra alg = build_algebra(catalog(name));
    for (int k = 1; k <= alg.q; ++k) {
      QForm ddk = eta_exterior_derivative(alg, maurer_cartan(alg, k));
      CHECK(ddk.is_zero());
    }
  }
}

TEST_CASE("span test examples in dimension 3") {
  std::vector<RatVec> xi{basis_vec(3, 1), basis_vec(3, 2)};
  SpanTestResult r3 = span_test(3, 3, xi);
  CHECK(r3.value == 1);
  CHECK_FALSE(r3.form_vanishes);
  CHECK(r3.independent);
  CHECK_FALSE(r3.member);

  SpanTestResult r1 = span_test(3, 1, xi);
  CHECK(r1.form_vanishes);
  CHECK(r1.member);

  RatVec mixed = basis_vec(3, 1);
  mixed[2] = 1;
  SpanTestResult rm = span_test(3, 1, {mixed, basis_vec(3, 2)});
  CHECK(rm.value == -1);
  CHECK_FALSE(rm.member);

  SpanTestResult dep = span_test(3, 1, {basis_vec(3, 2), basis_vec(3, 2)});
  CHECK(dep.dependent_input);
  CHECK(dep.form_vanishes);
}

TEST_CASE("span test agrees with the exact rank oracle") {
  std::mt19937_64 rng(41);
  for (const char* name : {"heisenberg(1)", "engel", "free_step2(3)"}) {
    StratifiedAlgebra alg = build_algebra(catalog(name));
    const int q = alg.q;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<RatVec> xi;
      for (int t = 0; t < q - 1; ++t) {
        RatVec v(q);
        for (auto& c : v) c = random_rational(rng);
        xi.push_back(std::move(v));
      }
      // half the trials force X_s into the span
      int forced_s = 1 + static_cast<int>(rng() % q);
      if (trial % 2 == 0) xi[0] = basis_vec(q, forced_s);

      RatMat m(q, q - 1);
      for (int col = 0; col < q - 1; ++col)
        for (int row = 0; row < q; ++row) m(row, col) = xi[col][row];
      if (rank_exact(m) != static_cast<std::size_t>(q - 1)) continue;

      for (int s = 1; s <= q; ++s) {
        SpanTestResult res = span_test(q, s, xi);
        REQUIRE(res.independent);
        // oracle: rank augmentation with e_s
        RatMat aug(q, q);
        for (int col = 0; col < q - 1; ++col)
          for (int row = 0; row < q; ++row) aug(row, col) = xi[col][row];
        aug(s - 1, q - 1) = 1;
        bool member_oracle = rank_exact(aug) == static_cast<std::size_t>(q - 1);
        CHECK(res.member == member_oracle);
      }
    }
  }
}

TEST_CASE("gamma coefficients solve the delta system") {
  GammaSolution h3 = gamma_coefficients(heis(), 3);
  CHECK(h3.gamma.size() == 1);
  CHECK(h3.gamma.at({1, 2}) == 1);

  GammaSolution e4 = gamma_coefficients(engel(), 4);
  CHECK(e4.gamma.size() == 1);
  CHECK(e4.gamma.at({1, 3}) == 1);

  StratifiedAlgebra free3 = build_algebra(catalog("free_step2(3)"));
  GammaSolution f5 = gamma_coefficients(free3, 5);
  CHECK(f5.gamma.size() == 1);
  CHECK(f5.gamma.at({1, 3}) == 1);

  // defining property against all r with d_r > kappa
  for (const char* name : {"heisenberg(2)", "engel", "free_step2(3)"}) {
    StratifiedAlgebra alg = build_algebra(catalog(name));
    for (int s = 1; s <= alg.q; ++s) {
      if (alg.degree(s) < 2) continue;
      GammaSolution sol = gamma_coefficients(alg, s);
      for (int r = 1; r <= alg.q; ++r) {
        if (alg.degree(r) <= sol.kappa) continue;
        Rational acc = 0;
        for (const auto& [pair, g] : sol.gamma) acc += g * alg.c(pair.first, pair.second, r);
        CHECK(acc == (r == s ? Rational(1) : Rational(0)));
      }
    }
  }

  StratifiedAlgebra ab = build_algebra(catalog("abelian2"));
  CHECK_THROWS_AS(gamma_coefficients(ab, 2), CommutativeGroupError);
}

TEST_CASE("theta forms match the worked examples") {
  QForm h_theta = theta_form(heis(), 3);
  CHECK(h_theta.degree == 0);
  REQUIRE(h_theta.coeffs.size() == 1);
  CHECK(h_theta.coeffs.at(Blade(0)) == Rational(-1));
  // equals -gamma^3_{1,2} as a scalar
  CHECK(h_theta.coeffs.at(Blade(0)) == -gamma_coefficients(heis(), 3).gamma.at({1, 2}));

  QForm e_theta3 = theta_form(engel(), 3);
  REQUIRE(e_theta3.coeffs.size() == 1);
  CHECK(e_theta3.coeffs.at(Blade(0)) == Rational(-1));

  QForm e_theta4 = theta_form(engel(), 4);
  QForm expected = QForm::zero(4, 1, BasisTag::LeftInvariant);
  expected.add(blade_from_indices({2}, 4), Rational(1));
  CHECK(e_theta4 == expected);
}

TEST_CASE("theta product identity verifies for every admissible pair") {
  CHECK(theta_product_check(heis(), 3, 3));
  CHECK(theta_product_check(engel(), 3, 4));
  CHECK(theta_product_check(engel(), 4, 4));

  for (const char* name : {"heisenberg(1)", "heisenberg(2)", "engel", "free_step2(3)"}) {
    StratifiedAlgebra alg = build_algebra(catalog(name));
    for (auto [s, r] : theta_admissible_pairs(alg)) CHECK(theta_product_check(alg, s, r));
  }

  CHECK(theta_admissible_pairs(heis()).size() == 1);
  auto engel_pairs = theta_admissible_pairs(engel());
  CHECK(engel_pairs ==
        std::vector<std::pair<int, int>>{{3, 3}, {3, 4}, {4, 4}});
  CHECK(theta_admissible_pairs(build_algebra(catalog("free_step2(3)"))).size() == 9);
}
