#pragma once

/// \file io.hpp
/// Locale-free number formatting and the CSV formats for trajectories and
/// Pohozaev batches. Numbers use the shortest round-trip representation.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cknlab/emden_fowler.hpp"
#include "cknlab/error.hpp"
#include "cknlab/pohozaev.hpp"
#include "cknlab/radial_shooter.hpp"

namespace cknlab::io {

inline std::string format(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(Errc::ParseError, "not a number: '" + std::string(s) + "'");
  }
  return x;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Rows of a numeric CSV whose header must equal `header`.
inline std::vector<std::vector<double>> read_numeric_csv(std::istream& in, std::string_view header) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw Error(Errc::ParseError, "expected header '" + std::string(header) + "'");
  const std::size_t width = split(header).size();
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != width) throw Error(Errc::ParseError, "wrong column count: " + line);
    std::vector<double> row;
    row.reserve(width);
    for (auto c : cells) row.push_back(parse_double(c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline constexpr std::string_view kTrajectoryHeader = "r,v,dv";
inline constexpr std::string_view kCylinderHeader = "t,w,dw";
inline constexpr std::string_view kPohozaevHeader =
    "R,interior,boundary1,boundary2,boundary3,residual,relative_residual";

inline void write_trajectory_csv(std::ostream& out, const std::vector<RadialNode>& nodes) {
  out << kTrajectoryHeader << '\n';
  for (const auto& n : nodes) out << format(n.r) << ',' << format(n.v) << ',' << format(n.dv) << '\n';
}

inline std::vector<RadialNode> read_trajectory_csv(std::istream& in) {
  std::vector<RadialNode> nodes;
  for (const auto& row : read_numeric_csv(in, kTrajectoryHeader)) nodes.push_back({row[0], row[1], row[2]});
  return nodes;
}

inline void write_cylinder_csv(std::ostream& out, const std::vector<CylinderNode>& nodes) {
  out << kCylinderHeader << '\n';
  for (const auto& n : nodes) out << format(n.t) << ',' << format(n.w) << ',' << format(n.dw) << '\n';
}

inline void write_pohozaev_csv(std::ostream& out, const std::vector<PohozaevReport>& reports) {
  out << kPohozaevHeader << '\n';
  for (const auto& r : reports) {
    out << format(r.R) << ',' << format(r.interior_coeff * r.interior_integral) << ','
        << format(r.boundary_1) << ',' << format(r.boundary_2) << ',' << format(r.boundary_3) << ','
        << format(r.residual) << ',' << format(r.relative_residual) << '\n';
  }
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot open " + path + " for writing");
  f << contents;
  if (!f) throw Error(Errc::IoError, "write to " + path + " failed");
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace cknlab::io
