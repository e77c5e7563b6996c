#include "carnot/errors.hpp"
#include "carnot/rational_linalg.hpp"
#include "carnot/spec_io.hpp"
#include "carnot/stratified_algebra.hpp"

#include "doctest.h"

using namespace carnot;

namespace {

RatVec basis_vec(int q, int i) {
  RatVec e(q, Rational(0));
  e[i - 1] = 1;
  return e;
}

} // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1") == Rational(1));
  CHECK(parse_rational("-2/3") == Rational(-2, 3));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK(to_string(Rational(-7, 2)) == "-7/2");
}

TEST_CASE("exact linear algebra") {
  RatMat m(3, 3);
  m(0, 0) = 1; m(0, 1) = 2; m(0, 2) = 3;
  m(1, 0) = 0; m(1, 1) = 1; m(1, 2) = 4;
  m(2, 0) = 5; m(2, 1) = 6; m(2, 2) = 0;
  CHECK(det_exact(m) == Rational(1));
  CHECK(rank_exact(m) == 3);
  RatMat inv = inverse_exact(m);
  CHECK(inv * m == RatMat::identity(3));

  RatMat singular(2, 3);
  singular(0, 0) = 1; singular(0, 1) = 2; singular(0, 2) = 3;
  singular(1, 0) = 2; singular(1, 1) = 4; singular(1, 2) = 6;
  CHECK(rank_exact(singular) == 1);

  auto x = solve_first_pivot(singular, {Rational(3), Rational(6)});
  REQUIRE(x.has_value());
  // first-pivot tie-breaking pins the free variables to zero
  CHECK((*x)[0] == Rational(3));
  CHECK((*x)[1] == Rational(0));
  CHECK((*x)[2] == Rational(0));
  CHECK_FALSE(solve_first_pivot(singular, {Rational(3), Rational(7)}).has_value());
}

TEST_CASE("heisenberg catalog builds with Q = 4") {
  StratifiedAlgebra alg = build_algebra(catalog("heisenberg(1)"));
  CHECK(alg.q == 3);
  CHECK(alg.step == 2);
  CHECK(alg.Q == 4);
  CHECK_FALSE(alg.commutative);
  CHECK(alg.degree(1) == 1);
  CHECK(alg.degree(3) == 2);
  CHECK(alg.offset(1) == 2);

  // defining relation and antisymmetry
  RatVec b = alg.bracket(basis_vec(3, 1), basis_vec(3, 2));
  CHECK(b == basis_vec(3, 3));
  RatVec same(3, Rational(2));
  RatVec zero = alg.bracket(same, same);
  for (const auto& v : zero) CHECK(v == 0);
}

TEST_CASE("engel two-step bracket expansion") {
  StratifiedAlgebra alg = build_algebra(catalog("engel"));
  CHECK(alg.q == 4);
  CHECK(alg.Q == 7);
  RatVec inner = alg.bracket(basis_vec(4, 1), basis_vec(4, 2));
  RatVec outer = alg.bracket(basis_vec(4, 1), inner);
  CHECK(outer == basis_vec(4, 4));
}

TEST_CASE("free step-2 rank-3 has Q = 9") {
  AlgebraSpec spec = catalog("free_step2(3)");
  CHECK(spec.strata_dims == std::vector<int>{3, 3});
  CHECK(spec.brackets.size() == 3);
  StratifiedAlgebra alg = build_algebra(spec);
  CHECK(alg.q == 6);
  CHECK(alg.Q == 9);
}

TEST_CASE("heisenberg(2) builds") {
  StratifiedAlgebra alg = build_algebra(catalog("heisenberg(2)"));
  CHECK(alg.q == 5);
  CHECK(alg.Q == 6);
  CHECK(alg.bracket(basis_vec(5, 1), basis_vec(5, 3)) == basis_vec(5, 5));
  CHECK(alg.bracket(basis_vec(5, 2), basis_vec(5, 4)) == basis_vec(5, 5));
  CHECK(alg.bracket(basis_vec(5, 1), basis_vec(5, 2)) == RatVec(5, Rational(0)));
}

TEST_CASE("abelian input is accepted and flagged commutative") {
  StratifiedAlgebra alg = build_algebra(catalog("abelian2"));
  CHECK(alg.commutative);
  CHECK(alg.Q == alg.q);
}

TEST_CASE("thin strata without generation fail stratification") {
  AlgebraSpec spec;
  spec.name = "thin";
  spec.strata_dims = {1, 1, 1};
  spec.brackets = {{1, 2, 3, Rational(1)}};
  CHECK_THROWS_AS(build_algebra(spec), StratificationError);
}

TEST_CASE("grading violations are rejected") {
  AlgebraSpec spec;
  spec.name = "ungraded";
  spec.strata_dims = {2, 1};
  spec.brackets = {{1, 2, 3, Rational(1)}, {1, 3, 2, Rational(1)}}; // d1+d3 = 3 != d2
  CHECK_THROWS_AS(build_algebra(spec), GradingViolation);
}

TEST_CASE("jacobi violations are rejected with the failing triple") {
  AlgebraSpec spec;
  spec.name = "nonjacobi";
  spec.strata_dims = {3, 1, 1};
  spec.brackets = {{1, 2, 4, Rational(1)}, {1, 4, 5, Rational(1)}, {3, 4, 5, Rational(1)}};
  try {
    build_algebra(spec);
    FAIL("expected JacobiViolation");
  } catch (const JacobiViolation& e) {
    CHECK(std::string(e.what()).find("(1,2,3)") != std::string::npos);
  }
}

TEST_CASE("redundant antisymmetric entries must negate exactly") {
  AlgebraSpec spec;
  spec.name = "bad-anti";
  spec.strata_dims = {2, 1};
  spec.brackets = {{1, 2, 3, Rational(1)}, {2, 1, 3, Rational(1)}};
  CHECK_THROWS_AS(build_algebra(spec), AntisymmetryViolation);

  spec.brackets = {{1, 2, 3, Rational(1)}, {2, 1, 3, Rational(-1)}};
  CHECK_NOTHROW(build_algebra(spec));

  spec.brackets = {{1, 1, 3, Rational(1)}};
  CHECK_THROWS_AS(build_algebra(spec), AntisymmetryViolation);
}

TEST_CASE("duplicate and out-of-range entries raise IndexError") {
  AlgebraSpec spec;
  spec.name = "dup";
  spec.strata_dims = {2, 1};
  spec.brackets = {{1, 2, 3, Rational(1)}, {1, 2, 3, Rational(1)}};
  CHECK_THROWS_AS(build_algebra(spec), IndexError);
  spec.brackets = {{1, 2, 7, Rational(1)}};
  CHECK_THROWS_AS(build_algebra(spec), IndexError);
}

TEST_CASE("validate_spec reports every invariant for catalog entries") {
  for (const char* name : {"heisenberg(1)", "heisenberg(2)", "engel", "free_step2(3)"}) {
    ValidationReport report = validate_spec(catalog(name));
    CHECK(report.all_passed());
  }
}

TEST_CASE("degrees and offsets satisfy the window inequality") {
  for (const char* name : {"heisenberg(1)", "engel", "free_step2(3)"}) {
    StratifiedAlgebra alg = build_algebra(catalog(name));
    for (int i = 1; i <= alg.q; ++i) {
      int d = alg.degree(i);
      CHECK(alg.offset(d - 1) < i);
      CHECK(i <= alg.offset(d));
    }
    int sum_degrees = 0;
    for (int i = 1; i <= alg.q; ++i) sum_degrees += alg.degree(i);
    CHECK(sum_degrees == alg.Q);
  }
}

TEST_CASE("toml spec round trip") {
  AlgebraSpec spec = catalog("engel");
  std::string text = spec_to_toml(spec);
  AlgebraSpec parsed = parse_spec_toml(text);
  CHECK(parsed.name == spec.name);
  CHECK(parsed.strata_dims == spec.strata_dims);
  REQUIRE(parsed.brackets.size() == spec.brackets.size());
  for (std::size_t i = 0; i < parsed.brackets.size(); ++i) {
    CHECK(parsed.brackets[i].i == spec.brackets[i].i);
    CHECK(parsed.brackets[i].c == spec.brackets[i].c);
  }
  StratifiedAlgebra alg = build_algebra(parsed);
  CHECK(alg.Q == 7);
}

TEST_CASE("toml spec accepts rational strings and decimals") {
  const char* text =
      "name = \"demo\"\n"
      "strata = [2, 1]\n"
      "[[bracket]]\n"
      "i = 1\n"
      "j = 2\n"
      "k = 3\n"
      "c = \"1/2\"\n";
  AlgebraSpec spec = parse_spec_toml(text);
  REQUIRE(spec.brackets.size() == 1);
  CHECK(spec.brackets[0].c == Rational(1, 2));
}
