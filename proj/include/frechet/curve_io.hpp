#pragma once

// Curve files. Text form: a "d n" header, then n rows of d coordinates.
// Blank lines and lines starting with '#' are skipped. A file whose first
// non-space character is '{' is read as JSON {"dim": d, "vertices": [[...]]}.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "frechet/geometry.hpp"

namespace frechet {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, end);
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  return {std::istream_iterator<std::string>(is), std::istream_iterator<std::string>()};
}

inline double parse_number(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = first + tok.size();
  if (first != last && *first == '+') ++first;
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last) throw ParseError(line, "not a number: '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite coordinate");
  return v;
}

inline std::size_t parse_count(const std::string& tok, std::size_t line, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError(line, std::string("bad ") + what + ": '" + tok + "'");
  return v;
}

// Curve construction errors, reported against the line of the offending vertex.
inline Curve build_curve(std::size_t dim, std::vector<double> flat, const std::vector<std::size_t>& lines) {
  const std::size_t n = flat.size() / dim;
  for (std::size_t i = 1; i < n; ++i) {
    bool same = true;
    for (std::size_t k = 0; k < dim; ++k) same = same && flat[i * dim + k] == flat[(i - 1) * dim + k];
    if (same) throw ParseError(lines.empty() ? 0 : lines[i], "vertex " + std::to_string(i) + " repeats the previous vertex");
  }
  return Curve(dim, std::move(flat));
}

inline Curve parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("vertices"))
    throw ParseError(0, "JSON curve needs \"dim\" and \"vertices\"");
  if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) throw ParseError(0, "\"dim\" must be a positive integer");
  const auto dim = j["dim"].get<std::size_t>();
  const auto& vs = j["vertices"];
  if (!vs.is_array() || vs.empty()) throw ParseError(0, "\"vertices\" must be a non-empty array");
  std::vector<double> flat;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& v = vs[i];
    if (!v.is_array() || v.size() != dim)
      throw ParseError(0, "vertex " + std::to_string(i) + " does not have " + std::to_string(dim) + " coordinates");
    for (const auto& c : v) {
      if (!c.is_number()) throw ParseError(0, "vertex " + std::to_string(i) + " has a non-numeric coordinate");
      flat.push_back(c.get<double>());
    }
  }
  return build_curve(dim, std::move(flat), {});
}

}  // namespace detail

inline Curve parse_curve(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError(0, "empty curve file");
  if (text[first] == '{') return detail::parse_json(text);

  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0, dim = 0, count = 0;
  bool have_header = false;
  std::vector<double> flat;
  std::vector<std::size_t> lines;
  while (std::getline(is, line)) {
    ++lineno;
    const auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (!have_header) {
      if (toks.size() != 2) throw ParseError(lineno, "expected header 'd n'");
      dim = detail::parse_count(toks[0], lineno, "dimension");
      count = detail::parse_count(toks[1], lineno, "vertex count");
      if (dim == 0) throw ParseError(lineno, "dimension must be positive");
      if (count == 0) throw ParseError(lineno, "vertex count must be positive");
      have_header = true;
      continue;
    }
    if (lines.size() == count) throw ParseError(lineno, "more vertices than the header declares");
    if (toks.size() != dim)
      throw ParseError(lineno, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(toks.size()));
    for (const auto& t : toks) flat.push_back(detail::parse_number(t, lineno));
    lines.push_back(lineno);
  }
  if (!have_header) throw ParseError(0, "missing header");
  if (lines.size() != count)
    throw ParseError(lineno, "header declares " + std::to_string(count) + " vertices, found " + std::to_string(lines.size()));
  return detail::build_curve(dim, std::move(flat), lines);
}

inline Curve parse_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  try {
    return parse_curve(in);
  } catch (const ParseError& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

inline void write_curve(std::ostream& os, const Curve& c) {
  os << c.dim() << ' ' << c.size() << '\n';
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto p = c[i];
    for (std::size_t k = 0; k < p.size(); ++k) os << (k ? " " : "") << format_double(p[k]);
    os << '\n';
  }
}

inline std::string curve_to_string(const Curve& c) {
  std::ostringstream os;
  write_curve(os, c);
  return os.str();
}

}  // namespace frechet
