#include "carnot/spec_io.hpp"

#include "carnot/errors.hpp"
#include "carnot/toml_lite.hpp"

#include <sstream>

namespace carnot {

namespace {

Rational rational_from_value(const toml::Value& v) {
  if (v.is_string()) return parse_rational(v.as_string());
  if (v.is_int()) return Rational(v.as_int());
  if (v.is_float()) {
    // decimals round-trip exactly through the string form
    std::ostringstream os;
    os.precision(17);
    os << std::get<double>(v.data);
    return parse_rational(os.str());
  }
  throw ParseError("bracket coefficient must be a number or rational string");
}

AlgebraSpec spec_from_table(const toml::Table& t) {
  AlgebraSpec spec;
  spec.name = t.get_string("name").value_or("unnamed");
  for (std::int64_t d : t.get_int_array("strata")) spec.strata_dims.push_back(static_cast<int>(d));
  auto it = t.table_arrays.find("bracket");
  if (it != t.table_arrays.end()) {
    for (const auto& bt : it->second) {
      BracketEntry e;
      e.i = static_cast<int>(bt.at("i").as_int());
      e.j = static_cast<int>(bt.at("j").as_int());
      e.k = static_cast<int>(bt.at("k").as_int());
      e.c = rational_from_value(bt.at("c"));
      spec.brackets.push_back(std::move(e));
    }
  }
  return spec;
}

} // namespace

AlgebraSpec load_spec_toml(const std::string& path) {
  return spec_from_table(toml::parse_file(path));
}

AlgebraSpec parse_spec_toml(const std::string& text) {
  return spec_from_table(toml::parse(text));
}

std::string spec_to_toml(const AlgebraSpec& spec) {
  std::ostringstream os;
  os << "name = " << toml::escape_string(spec.name) << "\n";
  os << "strata = [";
  for (std::size_t i = 0; i < spec.strata_dims.size(); ++i) {
    if (i) os << ", ";
    os << spec.strata_dims[i];
  }
  os << "]\n";
  for (const auto& e : spec.brackets) {
    os << "\n[[bracket]]\n";
    os << "i = " << e.i << "\n";
    os << "j = " << e.j << "\n";
    os << "k = " << e.k << "\n";
    os << "c = " << toml::escape_string(to_string(e.c)) << "\n";
  }
  return os.str();
}

} // namespace carnot
