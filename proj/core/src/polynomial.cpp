#include "carnot/polynomial.hpp"

#include "carnot/errors.hpp"

#include <sstream>

namespace carnot {

PolyQ PolyQ::constant(std::size_t nvars, const Rational& c) {
  PolyQ p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

PolyQ PolyQ::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw IndexError("polynomial variable index");
  PolyQ p(nvars);
  Monomial m(nvars, 0);
  m[index] = 1;
  p.add_term(m, Rational(1));
  return p;
}

void PolyQ::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PolyQ PolyQ::operator+(const PolyQ& rhs) const {
  PolyQ out = *this;
  out += rhs;
  return out;
}

PolyQ& PolyQ::operator+=(const PolyQ& rhs) {
  if (nvars_ == 0 && terms_.empty()) nvars_ = rhs.nvars_;
  if (rhs.terms_.empty()) return *this;
  if (nvars_ != rhs.nvars_) throw DimensionMismatch("polynomial variable count");
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

PolyQ PolyQ::operator-(const PolyQ& rhs) const { return *this + (-rhs); }

PolyQ PolyQ::operator-() const {
  PolyQ out(nvars_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

PolyQ PolyQ::scaled(const Rational& s) const {
  PolyQ out(nvars_);
  if (s == 0) return out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
  return out;
}

PolyQ PolyQ::operator*(const PolyQ& rhs) const {
  if (terms_.empty()) return PolyQ(nvars_);
  if (rhs.terms_.empty()) return PolyQ(rhs.nvars_);
  if (nvars_ != rhs.nvars_) throw DimensionMismatch("polynomial variable count");
  PolyQ out(nvars_);
  Monomial prod(nvars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : rhs.terms_) {
      for (std::size_t i = 0; i < nvars_; ++i) prod[i] = ma[i] + mb[i];
      out.add_term(prod, ca * cb);
    }
  return out;
}

Rational PolyQ::eval(const RatVec& point) const {
  if (point.size() != nvars_) throw DimensionMismatch("polynomial evaluation point");
  Rational acc = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::uint32_t e = 0; e < m[i]; ++e) t *= point[i];
    acc += t;
  }
  return acc;
}

double PolyQ::eval(const std::vector<double>& point) const {
  if (point.size() != nvars_) throw DimensionMismatch("polynomial evaluation point");
  double acc = 0;
  for (const auto& [m, c] : terms_) {
    double t = to_double(c);
    for (std::size_t i = 0; i < nvars_; ++i)
      for (std::uint32_t e = 0; e < m[i]; ++e) t *= point[i];
    acc += t;
  }
  return acc;
}

PolyQ PolyQ::linear_part_in(std::size_t var, std::size_t zeroed_from) const {
  PolyQ out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] != 1) continue;
    bool keep = true;
    for (std::size_t i = zeroed_from; i < nvars_; ++i)
      if (i != var && m[i] != 0) {
        keep = false;
        break;
      }
    if (!keep) continue;
    Monomial reduced = m;
    reduced[var] = 0;
    out.add_term(reduced, c);
  }
  return out;
}

PolyQ PolyQ::truncated_vars(std::size_t new_nvars) const {
  if (new_nvars > nvars_) throw DimensionMismatch("cannot grow variable count");
  PolyQ out(new_nvars);
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = new_nvars; i < nvars_; ++i)
      if (m[i] != 0) throw DimensionMismatch("dropped polynomial variable is in use");
    out.add_term(Monomial(m.begin(), m.begin() + new_nvars), c);
  }
  return out;
}

std::string PolyQ::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool has_vars = false;
    std::ostringstream vs;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      if (has_vars) vs << "*";
      vs << (i < names.size() ? names[i] : "v" + std::to_string(i + 1));
      if (m[i] > 1) vs << "^" << m[i];
      has_vars = true;
    }
    if (!has_vars) {
      os << to_string(a);
    } else if (a == 1) {
      os << vs.str();
    } else {
      os << to_string(a) << "*" << vs.str();
    }
  }
  return os.str();
}

CompiledPoly CompiledPoly::from(const PolyQ& p) {
  CompiledPoly out;
  out.terms.reserve(p.terms().size());
  for (const auto& [m, c] : p.terms()) {
    Term t;
    t.coeff = to_double(c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] != 0) t.powers.emplace_back(static_cast<std::uint32_t>(i), m[i]);
    out.terms.push_back(std::move(t));
  }
  return out;
}

double CompiledPoly::eval(const double* point) const {
  double acc = 0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (auto [var, exp] : t.powers) {
      double x = point[var];
      for (std::uint32_t e = 0; e < exp; ++e) v *= x;
    }
    acc += v;
  }
  return acc;
}

} // namespace carnot
