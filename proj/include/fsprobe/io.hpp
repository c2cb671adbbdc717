#pragma once

// File formats: curves as JSON or headerless CSV, matrices as 0/1 text.
// All writers round-trip doubles losslessly (shortest representation that
// parses back to the same bits).

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "fsprobe/errors.hpp"
#include "fsprobe/freespace.hpp"
#include "fsprobe/geometry.hpp"

namespace fsprobe::io {

/// Shortest decimal form that parses back to the same bits.
inline std::string double_to_string(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc())
    throw parse_error("double_to_string: conversion failed");
  return std::string(buf, ptr);
}

inline double string_to_double(std::string_view s) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last)
    throw parse_error("bad numeric field: '" + std::string(s) + "'");
  return x;
}

// ---------------------------------------------------------------------------
// Curves: JSON.

/// Serialize a curve as {"dim": d, "points": [[x, y, ...], ...]}.
inline std::string curve_to_json(const curve& c) {
  nlohmann::json j;
  j["dim"] = c.dim();
  nlohmann::json pts = nlohmann::json::array();
  for (const point& p : c.pts) {
    nlohmann::json row = nlohmann::json::array();
    for (double x : p) row.push_back(x);
    pts.push_back(std::move(row));
  }
  j["points"] = std::move(pts);
  return j.dump();
}

/// Parse a curve from the JSON layout written by curve_to_json.
inline curve curve_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("curve JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("points"))
    throw parse_error("curve JSON: need {\"dim\": ..., \"points\": ...}");
  auto dim = j["dim"].get<std::size_t>();
  curve c;
  for (const auto& row : j["points"]) {
    point p;
    for (const auto& x : row) p.push_back(x.get<double>());
    if (p.size() != dim)
      throw parse_error("curve JSON: point dimension mismatch");
    c.pts.push_back(std::move(p));
  }
  validate(c);
  return c;
}

// ---------------------------------------------------------------------------
// Curves: headerless CSV, one point per line, comma-separated coordinates.

inline void write_curve_csv(const curve& c, std::ostream& out) {
  for (const point& p : c.pts) {
    for (std::size_t d = 0; d < p.size(); ++d) {
      if (d) out << ',';
      out << double_to_string(p[d]);
    }
    out << '\n';
  }
}

inline curve read_curve_csv(std::istream& in) {
  curve c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    point p;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      std::size_t end = comma == std::string::npos ? line.size() : comma;
      p.push_back(string_to_double(
          std::string_view(line).substr(pos, end - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    c.pts.push_back(std::move(p));
  }
  validate(c);
  return c;
}

// ---------------------------------------------------------------------------
// File-level helpers with format sniffing (JSON iff the first non-space
// character is '{', CSV otherwise).

inline curve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open curve file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::size_t k = text.find_first_not_of(" \t\r\n");
  if (k == std::string::npos)
    throw parse_error("empty curve file: " + path);
  if (text[k] == '{') return curve_from_json(text);
  std::istringstream stream(text);
  return read_curve_csv(stream);
}

inline void save_curve_json(const curve& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write curve file: " + path);
  out << curve_to_json(c) << '\n';
}

inline void save_curve_csv(const curve& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write curve file: " + path);
  write_curve_csv(c, out);
}

// ---------------------------------------------------------------------------
// Matrices: "n m" header line, then n lines of m characters '0'/'1';
// line i holds column i, character j of it entry (i, j).

inline void write_matrix(const bit_matrix& mat, std::ostream& out) {
  out << mat.n << ' ' << mat.m << '\n';
  std::string line(static_cast<std::size_t>(mat.m), '0');
  for (int i = 1; i <= mat.n; ++i) {
    for (int j = 1; j <= mat.m; ++j)
      line[static_cast<std::size_t>(j - 1)] = mat.at(i, j) ? '1' : '0';
    out << line << '\n';
  }
}

inline bit_matrix read_matrix(std::istream& in) {
  int n = 0, m = 0;
  if (!(in >> n >> m) || n < 1 || m < 1)
    throw parse_error("matrix file: bad header");
  std::string line;
  std::getline(in, line);  // rest of header line
  bit_matrix mat(n, m);
  for (int i = 1; i <= n; ++i) {
    if (!std::getline(in, line))
      throw parse_error("matrix file: missing column line " +
                        std::to_string(i));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (static_cast<int>(line.size()) != m)
      throw parse_error("matrix file: column line " + std::to_string(i) +
                        " has wrong length");
    for (int j = 1; j <= m; ++j) {
      char ch = line[static_cast<std::size_t>(j - 1)];
      if (ch != '0' && ch != '1')
        throw parse_error("matrix file: entries must be '0' or '1'");
      mat.set(i, j, ch == '1');
    }
  }
  return mat;
}

inline bit_matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open matrix file: " + path);
  return read_matrix(in);
}

inline void save_matrix(const bit_matrix& mat, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot write matrix file: " + path);
  write_matrix(mat, out);
}

}  // namespace fsprobe::io
