#include "carnot/stratified_algebra.hpp"

#include "carnot/errors.hpp"
#include "carnot/rational_linalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace carnot {

namespace {

struct Skeleton {
  int q = 0;
  int step = 0;
  std::vector<int> offsets; // m_0..m_step
  std::vector<int> degrees; // 1-based
};

Skeleton make_skeleton(const AlgebraSpec& spec) {
  if (spec.strata_dims.empty()) throw IndexError("strata_dims must be nonempty");
  Skeleton s;
  s.step = static_cast<int>(spec.strata_dims.size());
  s.offsets.assign(1, 0);
  for (int d : spec.strata_dims) {
    if (d <= 0) throw IndexError("stratum dimensions must be positive");
    s.offsets.push_back(s.offsets.back() + d);
  }
  s.q = s.offsets.back();
  s.degrees.assign(s.q + 1, 0);
  for (int k = 1; k <= s.step; ++k)
    for (int i = s.offsets[k - 1] + 1; i <= s.offsets[k]; ++i) s.degrees[i] = k;
  return s;
}

std::string triple(int i, int j, int k) {
  std::ostringstream os;
  os << "(" << i << "," << j << "," << k << ")";
  return os.str();
}

// Normalized antisymmetric tensor from the entry list. Entries with i > j
// are folded onto the (i < j) slot with a sign flip and must agree exactly.
std::vector<Rational> make_tensor(const AlgebraSpec& spec, const Skeleton& s) {
  const int q = s.q;
  auto at = [q](std::vector<Rational>& t, int i, int j, int k) -> Rational& {
    return t[(static_cast<std::size_t>(i - 1) * q + (j - 1)) * q + (k - 1)];
  };
  std::vector<Rational> tensor(static_cast<std::size_t>(q) * q * q, Rational(0));

  std::map<std::tuple<int, int, int>, Rational> low; // key always has i < j
  for (const auto& e : spec.brackets) {
    if (e.i < 1 || e.i > q || e.j < 1 || e.j > q || e.k < 1 || e.k > q)
      throw IndexError("bracket entry index out of range " + triple(e.i, e.j, e.k));
    if (e.i == e.j) {
      if (e.c != 0)
        throw AntisymmetryViolation("nonzero coefficient on [X_i, X_i] at " +
                                    triple(e.i, e.j, e.k));
      continue;
    }
    int i = e.i, j = e.j;
    Rational c = e.c;
    if (i > j) {
      std::swap(i, j);
      c = -c;
    }
    auto key = std::make_tuple(i, j, e.k);
    auto it = low.find(key);
    if (it == low.end()) {
      low.emplace(key, c);
    } else if (e.i < e.j) {
      throw IndexError("duplicate bracket entry " + triple(e.i, e.j, e.k));
    } else if (it->second != c) {
      throw AntisymmetryViolation("redundant entry " + triple(e.i, e.j, e.k) +
                                  " does not negate its (i<j) partner exactly");
    }
  }
  for (const auto& [key, c] : low) {
    auto [i, j, k] = key;
    at(tensor, i, j, k) = c;
    at(tensor, j, i, k) = -c;
  }
  return tensor;
}

RatVec bracket_with(const std::vector<Rational>& tensor, int q, const RatVec& a,
                    const RatVec& b) {
  RatVec out(q, Rational(0));
  for (int i = 1; i <= q; ++i) {
    if (a[i - 1] == 0) continue;
    for (int j = 1; j <= q; ++j) {
      if (b[j - 1] == 0) continue;
      Rational f = a[i - 1] * b[j - 1];
      for (int k = 1; k <= q; ++k) {
        const Rational& c = tensor[(static_cast<std::size_t>(i - 1) * q + (j - 1)) * q + (k - 1)];
        if (c != 0) out[k - 1] += f * c;
      }
    }
  }
  return out;
}

void check_grading(const std::vector<Rational>& tensor, const Skeleton& s) {
  const int q = s.q;
  for (int i = 1; i <= q; ++i)
    for (int j = 1; j <= q; ++j)
      for (int k = 1; k <= q; ++k) {
        const Rational& c = tensor[(static_cast<std::size_t>(i - 1) * q + (j - 1)) * q + (k - 1)];
        if (c != 0 && s.degrees[i] + s.degrees[j] != s.degrees[k])
          throw GradingViolation("c" + triple(i, j, k) + " nonzero but d_i + d_j != d_k");
      }
}

void check_jacobi(const std::vector<Rational>& tensor, const Skeleton& s) {
  const int q = s.q;
  auto basis = [q](int i) {
    RatVec e(q, Rational(0));
    e[i - 1] = 1;
    return e;
  };
  for (int i = 1; i <= q; ++i)
    for (int j = i + 1; j <= q; ++j)
      for (int k = j + 1; k <= q; ++k) {
        // grading kills every term once the total degree exceeds the step
        if (s.degrees[i] + s.degrees[j] + s.degrees[k] > s.step) continue;
        RatVec r1 = bracket_with(tensor, q, bracket_with(tensor, q, basis(i), basis(j)), basis(k));
        RatVec r2 = bracket_with(tensor, q, bracket_with(tensor, q, basis(j), basis(k)), basis(i));
        RatVec r3 = bracket_with(tensor, q, bracket_with(tensor, q, basis(k), basis(i)), basis(j));
        for (int t = 0; t < q; ++t)
          if (r1[t] + r2[t] + r3[t] != 0)
            throw JacobiViolation("Jacobi identity fails on triple " + triple(i, j, k));
      }
}

// [V_1, V_kappa] must span V_{kappa+1}: exact rank of the matrix whose
// columns are the brackets restricted to layer kappa+1.
void check_generation(const std::vector<Rational>& tensor, const Skeleton& s) {
  for (int kappa = 1; kappa < s.step; ++kappa) {
    int lo = s.offsets[kappa] + 1, hi = s.offsets[kappa + 1];
    int layer_dim = hi - lo + 1;
    std::vector<RatVec> cols;
    for (int i = s.offsets[0] + 1; i <= s.offsets[1]; ++i)
      for (int j = s.offsets[kappa - 1] + 1; j <= s.offsets[kappa]; ++j) {
        RatVec col(layer_dim, Rational(0));
        bool nonzero = false;
        for (int k = lo; k <= hi; ++k) {
          const Rational& c =
              tensor[(static_cast<std::size_t>(i - 1) * s.q + (j - 1)) * s.q + (k - 1)];
          if (c != 0) nonzero = true;
          col[k - lo] = c;
        }
        if (nonzero) cols.push_back(std::move(col));
      }
    RatMat m(layer_dim, cols.size());
    for (std::size_t cidx = 0; cidx < cols.size(); ++cidx)
      for (int r = 0; r < layer_dim; ++r) m(r, cidx) = cols[cidx][r];
    if (rank_exact(m) != static_cast<std::size_t>(layer_dim)) {
      std::ostringstream os;
      os << "[V_1, V_" << kappa << "] does not span V_" << kappa + 1;
      throw StratificationError(os.str());
    }
  }
}

} // namespace

RatVec StratifiedAlgebra::bracket(const RatVec& a, const RatVec& b) const {
  if (static_cast<int>(a.size()) != q || static_cast<int>(b.size()) != q)
    throw DimensionMismatch("bracket operands must have length q");
  return bracket_with(c_, q, a, b);
}

StratifiedAlgebra build_algebra(const AlgebraSpec& spec) {
  Skeleton s = make_skeleton(spec);
  std::vector<Rational> tensor = make_tensor(spec, s); // throws on antisymmetry/index faults
  check_grading(tensor, s);
  check_jacobi(tensor, s);
  check_generation(tensor, s);

  StratifiedAlgebra alg;
  alg.q = s.q;
  alg.step = s.step;
  alg.strata_dims = spec.strata_dims;
  alg.layer_offsets = s.offsets;
  alg.degrees = s.degrees;
  alg.name = spec.name;
  alg.c_ = std::move(tensor);

  alg.Q = 0;
  for (int k = 1; k <= s.step; ++k) alg.Q += k * spec.strata_dims[k - 1];
  int q_by_degrees = 0;
  for (int i = 1; i <= s.q; ++i) q_by_degrees += s.degrees[i];
  if (alg.Q != q_by_degrees)
    throw InternalError("homogeneous dimension mismatch between formulas");

  alg.commutative = true;
  for (const Rational& c : alg.c_)
    if (c != 0) {
      alg.commutative = false;
      break;
    }
  if (s.step == 1) alg.commutative = true;
  return alg;
}

ValidationReport validate_spec(const AlgebraSpec& spec) {
  ValidationReport report;
  auto run = [&report](const std::string& name, auto&& fn) {
    ValidationReport::Check check;
    check.name = name;
    try {
      fn();
      check.passed = true;
    } catch (const CarnotError& e) {
      check.passed = false;
      check.detail = e.what();
    }
    report.checks.push_back(std::move(check));
  };

  Skeleton s;
  try {
    s = make_skeleton(spec);
  } catch (const CarnotError& e) {
    report.checks.push_back({"strata", false, e.what()});
    return report;
  }
  report.checks.push_back({"strata", true, ""});

  std::vector<Rational> tensor;
  run("antisymmetry", [&] { tensor = make_tensor(spec, s); });
  if (tensor.empty() && !report.all_passed()) return report;
  run("grading", [&] { check_grading(tensor, s); });
  run("jacobi", [&] { check_jacobi(tensor, s); });
  run("stratification", [&] { check_generation(tensor, s); });
  run("degrees-offsets", [&] {
    for (int i = 1; i <= s.q; ++i) {
      int d = s.degrees[i];
      if (!(s.offsets[d - 1] < i && i <= s.offsets[d]))
        throw InternalError("degree window violated at index " + std::to_string(i));
    }
  });
  run("Q-cross-check", [&] {
    int by_formula = 0;
    for (int k = 1; k <= s.step; ++k) by_formula += k * spec.strata_dims[k - 1];
    int by_degrees = 0;
    for (int i = 1; i <= s.q; ++i) by_degrees += s.degrees[i];
    if (by_formula != by_degrees) throw InternalError("Q formulas disagree");
    if (by_formula < s.q) throw InternalError("Q < q");
    if ((s.step == 1) != (by_formula == s.q))
      throw InternalError("Q == q must hold exactly for step-1 algebras");
  });
  return report;
}

namespace {

// Accepts "family" or "family(arg)".
bool parse_family(const std::string& name, const std::string& family, int* arg) {
  if (name == family) {
    *arg = -1;
    return true;
  }
  if (name.size() > family.size() + 2 && name.compare(0, family.size(), family) == 0 &&
      name[family.size()] == '(' && name.back() == ')') {
    std::string inner = name.substr(family.size() + 1, name.size() - family.size() - 2);
    try {
      std::size_t pos = 0;
      int v = std::stoi(inner, &pos);
      if (pos != inner.size() || v <= 0) return false;
      *arg = v;
      return true;
    } catch (...) {
      return false;
    }
  }
  return false;
}

} // namespace

AlgebraSpec catalog(const std::string& name) {
  int arg = -1;
  if (parse_family(name, "heisenberg", &arg)) {
    int n = arg < 0 ? 1 : arg;
    AlgebraSpec spec;
    spec.name = "heisenberg(" + std::to_string(n) + ")";
    spec.strata_dims = {2 * n, 1};
    for (int i = 1; i <= n; ++i) spec.brackets.push_back({i, n + i, 2 * n + 1, Rational(1)});
    return spec;
  }
  if (name == "engel") {
    AlgebraSpec spec;
    spec.name = "engel";
    spec.strata_dims = {2, 1, 1};
    spec.brackets = {{1, 2, 3, Rational(1)}, {1, 3, 4, Rational(1)}};
    return spec;
  }
  if (parse_family(name, "free_step2", &arg)) {
    int r = arg < 0 ? 2 : arg;
    if (r < 2) throw UnknownName("free_step2 needs at least 2 generators");
    AlgebraSpec spec;
    spec.name = "free_step2(" + std::to_string(r) + ")";
    spec.strata_dims = {r, r * (r - 1) / 2};
    int k = r;
    for (int i = 1; i <= r; ++i)
      for (int j = i + 1; j <= r; ++j) spec.brackets.push_back({i, j, ++k, Rational(1)});
    return spec;
  }
  if (name == "abelian2") return catalog("abelian(2)");
  if (parse_family(name, "abelian", &arg)) {
    int n = arg < 0 ? 2 : arg;
    AlgebraSpec spec;
    spec.name = "abelian(" + std::to_string(n) + ")";
    spec.strata_dims = {n};
    return spec;
  }
  throw UnknownName("unknown catalog group: " + name);
}

std::vector<std::string> catalog_names() {
  return {"heisenberg(n)", "engel", "free_step2(r)", "abelian(n)"};
}

} // namespace carnot
