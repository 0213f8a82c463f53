#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bregsolve/errors.hpp"
#include "bregsolve/solver.hpp"

namespace bregsolve {

namespace detail {

/// 17 significant digits: lossless decimal round-trip for double.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(line);
  while (std::getline(is, item, ',')) out.push_back(item);
  return out;
}

inline double parse_csv_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw Error("trace csv: cannot parse '" + s + "'");
  return v;
}

}  // namespace detail

inline std::string trace_csv_header(int dim) {
  std::string h = "n";
  for (const char* block : {"x", "y", "z"})
    for (int i = 0; i < dim; ++i) h += "," + std::string(block) + "_" + std::to_string(i);
  h += ",residual,df_target,lemma_arg_slack";
  return h;
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace, int dim) {
  os << trace_csv_header(dim) << "\n";
  for (const auto& row : trace) {
    os << row.n;
    for (const Vector* v : {&row.x, &row.y, &row.z})
      for (int i = 0; i < dim; ++i) os << "," << detail::format_double((*v)[i]);
    os << "," << detail::format_double(row.residual) << "," << detail::format_double(row.df_target)
       << "," << detail::format_double(row.lemma_arg_slack) << "\n";
  }
}

/// Reads a trace written by write_trace_csv; the dimension comes from the
/// header. The projection certificate column is not serialized, so it reads
/// back as NaN.
inline std::vector<TraceRow> read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("trace csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_csv_line(line);
  if (header.size() < 7 || (header.size() - 4) % 3 != 0)
    throw Error("trace csv: unrecognized header");
  const int dim = static_cast<int>((header.size() - 4) / 3);

  std::vector<TraceRow> out;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) throw Error("trace csv: ragged row");
    TraceRow row;
    row.n = std::strtol(cells[0].c_str(), nullptr, 10);
    auto read_vec = [&](int offset) {
      std::vector<double> v(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i)
        v[static_cast<std::size_t>(i)] = detail::parse_csv_double(cells[static_cast<std::size_t>(offset + i)]);
      return Vector(std::move(v));
    };
    row.x = read_vec(1);
    row.y = read_vec(1 + dim);
    row.z = read_vec(1 + 2 * dim);
    row.residual = detail::parse_csv_double(cells[static_cast<std::size_t>(1 + 3 * dim)]);
    row.df_target = detail::parse_csv_double(cells[static_cast<std::size_t>(2 + 3 * dim)]);
    row.lemma_arg_slack = detail::parse_csv_double(cells[static_cast<std::size_t>(3 + 3 * dim)]);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace bregsolve
