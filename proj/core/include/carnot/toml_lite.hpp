#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace carnot::toml {

// Minimal TOML subset used by the group spec, generator descriptor and
// report formats: top-level key/value pairs, [table] headers, [[array]]
// tables, strings, integers, floats, booleans and flat arrays of scalars.

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, std::int64_t, double, bool, Array> data;

  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(data); }
  bool is_float() const { return std::holds_alternative<double>(data); }
  bool is_bool() const { return std::holds_alternative<bool>(data); }
  bool is_array() const { return std::holds_alternative<Array>(data); }

  const std::string& as_string() const;
  std::int64_t as_int() const;
  double as_number() const; // int or float
  bool as_bool() const;
  const Array& as_array() const;
};

struct Table {
  std::map<std::string, Value> values;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> table_arrays;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const Value& at(const std::string& key) const;
  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<double> get_number(const std::string& key) const;
  std::vector<std::int64_t> get_int_array(const std::string& key) const;
  std::vector<double> get_number_array(const std::string& key) const;
};

/// Parses the subset; throws ParseError with a line number on anything else.
Table parse(const std::string& text);
Table parse_file(const std::string& path);

/// Serialization helpers for emitting report fragments and descriptors.
std::string escape_string(const std::string& s);
std::string format_double(double v);

} // namespace carnot::toml
