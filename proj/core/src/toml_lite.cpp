#include "carnot/toml_lite.hpp"

#include "carnot/errors.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace carnot::toml {

const std::string& Value::as_string() const {
  if (!is_string()) throw ParseError("TOML value is not a string");
  return std::get<std::string>(data);
}

std::int64_t Value::as_int() const {
  if (!is_int()) throw ParseError("TOML value is not an integer");
  return std::get<std::int64_t>(data);
}

double Value::as_number() const {
  if (is_int()) return static_cast<double>(std::get<std::int64_t>(data));
  if (is_float()) return std::get<double>(data);
  throw ParseError("TOML value is not a number");
}

bool Value::as_bool() const {
  if (!is_bool()) throw ParseError("TOML value is not a boolean");
  return std::get<bool>(data);
}

const Array& Value::as_array() const {
  if (!is_array()) throw ParseError("TOML value is not an array");
  return std::get<Array>(data);
}

const Value& Table::at(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) throw ParseError("missing TOML key: " + key);
  return it->second;
}

std::optional<std::string> Table::get_string(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  return it->second.as_string();
}

std::optional<std::int64_t> Table::get_int(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  return it->second.as_int();
}

std::optional<double> Table::get_number(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) return std::nullopt;
  return it->second.as_number();
}

std::vector<std::int64_t> Table::get_int_array(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const auto& v : at(key).as_array()) out.push_back(v.as_int());
  return out;
}

std::vector<double> Table::get_number_array(const std::string& key) const {
  std::vector<double> out;
  for (const auto& v : at(key).as_array()) out.push_back(v.as_number());
  return out;
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("TOML line " + std::to_string(line) + ": " + msg);
  }
};

void skip_inline_ws(Cursor& c) {
  while (c.pos < c.text.size() && (c.text[c.pos] == ' ' || c.text[c.pos] == '\t')) ++c.pos;
}

bool at_line_end(Cursor& c) {
  skip_inline_ws(c);
  if (c.pos >= c.text.size()) return true;
  return c.text[c.pos] == '\n' || c.text[c.pos] == '#';
}

void consume_line(Cursor& c) {
  while (c.pos < c.text.size() && c.text[c.pos] != '\n') ++c.pos;
  if (c.pos < c.text.size()) {
    ++c.pos;
    ++c.line;
  }
}

std::string parse_key(Cursor& c) {
  skip_inline_ws(c);
  std::size_t start = c.pos;
  while (c.pos < c.text.size()) {
    char ch = c.text[c.pos];
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')
      ++c.pos;
    else
      break;
  }
  if (c.pos == start) c.fail("expected a key");
  return c.text.substr(start, c.pos - start);
}

Value parse_scalar(Cursor& c);

Value parse_array(Cursor& c) {
  ++c.pos; // '['
  Array arr;
  while (true) {
    skip_inline_ws(c);
    if (c.pos >= c.text.size()) c.fail("unterminated array");
    if (c.text[c.pos] == ']') {
      ++c.pos;
      break;
    }
    arr.push_back(parse_scalar(c));
    skip_inline_ws(c);
    if (c.pos < c.text.size() && c.text[c.pos] == ',') ++c.pos;
  }
  return Value{arr};
}

Value parse_scalar(Cursor& c) {
  skip_inline_ws(c);
  if (c.pos >= c.text.size()) c.fail("expected a value");
  char ch = c.text[c.pos];
  if (ch == '[') return parse_array(c);
  if (ch == '"') {
    ++c.pos;
    std::string s;
    while (c.pos < c.text.size() && c.text[c.pos] != '"') {
      if (c.text[c.pos] == '\\' && c.pos + 1 < c.text.size()) {
        ++c.pos;
        char esc = c.text[c.pos];
        if (esc == 'n') s.push_back('\n');
        else if (esc == 't') s.push_back('\t');
        else s.push_back(esc);
      } else {
        s.push_back(c.text[c.pos]);
      }
      ++c.pos;
    }
    if (c.pos >= c.text.size()) c.fail("unterminated string");
    ++c.pos;
    return Value{s};
  }
  std::size_t start = c.pos;
  while (c.pos < c.text.size()) {
    char t = c.text[c.pos];
    if (t == ',' || t == ']' || t == '\n' || t == '#' || t == ' ' || t == '\t') break;
    ++c.pos;
  }
  std::string token = c.text.substr(start, c.pos - start);
  if (token.empty()) c.fail("expected a value");
  if (token == "true") return Value{true};
  if (token == "false") return Value{false};
  bool looks_float = token.find('.') != std::string::npos ||
                     token.find('e') != std::string::npos ||
                     token.find('E') != std::string::npos;
  try {
    if (!looks_float) {
      std::size_t used = 0;
      std::int64_t v = std::stoll(token, &used);
      if (used == token.size()) return Value{v};
    }
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used == token.size()) return Value{v};
  } catch (...) {
  }
  c.fail("cannot parse value token '" + token + "'");
}

Table& descend(Table& root, const std::string& dotted) {
  Table* t = &root;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ParseError("empty table name component in [" + dotted + "]");
    t = &t->tables[part];
  }
  return *t;
}

} // namespace

Table parse(const std::string& text) {
  Table root;
  Table* current = &root;
  Cursor c{text};
  while (c.pos < c.text.size()) {
    skip_inline_ws(c);
    if (c.pos >= c.text.size()) break;
    char ch = c.text[c.pos];
    if (ch == '\n' || ch == '#') {
      consume_line(c);
      continue;
    }
    if (ch == '[') {
      bool is_array = c.pos + 1 < c.text.size() && c.text[c.pos + 1] == '[';
      c.pos += is_array ? 2 : 1;
      std::string name = parse_key(c);
      skip_inline_ws(c);
      if (is_array) {
        if (c.pos + 1 >= c.text.size() + 1 || c.text.compare(c.pos, 2, "]]") != 0)
          c.fail("expected ]] after table array name");
        c.pos += 2;
        root.table_arrays[name].emplace_back();
        current = &root.table_arrays[name].back();
      } else {
        if (c.pos >= c.text.size() || c.text[c.pos] != ']') c.fail("expected ] after table name");
        ++c.pos;
        current = &descend(root, name);
      }
      if (!at_line_end(c)) c.fail("trailing characters after table header");
      consume_line(c);
      continue;
    }
    std::string key = parse_key(c);
    skip_inline_ws(c);
    if (c.pos >= c.text.size() || c.text[c.pos] != '=') c.fail("expected = after key " + key);
    ++c.pos;
    Value v = parse_scalar(c);
    if (!at_line_end(c)) c.fail("trailing characters after value for key " + key);
    if (current->values.count(key)) c.fail("duplicate key " + key);
    current->values.emplace(key, std::move(v));
    consume_line(c);
  }
  return root;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string escape_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out.push_back('\\');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  // TOML floats need a decimal point or exponent
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find('n') == std::string::npos && s.find('i') == std::string::npos)
    s += ".0";
  return s;
}

} // namespace carnot::toml
