#pragma once

// Free-space diagram as SVG. The x axis runs along tau, the y axis along
// sigma (upwards). Grey marks the free part of every cell boundary, blue the
// reachable part.

#include <cstddef>
#include <ostream>
#include <string>

#include "frechet/curve_io.hpp"
#include "frechet/freespace.hpp"

namespace frechet {

inline void write_freespace_svg(std::ostream& os, const Curve& tau, const Curve& sigma, double delta,
                                double cell = 40.0) {
  const auto dec = naive_decide(tau, sigma, delta, /*debug_table=*/true);
  const std::size_t n = tau.size();
  const std::size_t m = sigma.size();
  const double pad = 10.0;
  const double w = cell * static_cast<double>(n - 1) + 2 * pad;
  const double h = cell * static_cast<double>(m - 1) + 2 * pad;
  auto X = [&](double x) { return format_double(pad + cell * x); };
  auto Y = [&](double y) { return format_double(h - pad - cell * y); };
  auto seg = [&](double x1, double y1, double x2, double y2, const char* color, double width) {
    os << "<line x1=\"" << X(x1) << "\" y1=\"" << Y(y1) << "\" x2=\"" << X(x2) << "\" y2=\"" << Y(y2)
       << "\" stroke=\"" << color << "\" stroke-width=\"" << format_double(width) << "\"/>\n";
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(w) << "\" height=\""
     << format_double(h) << "\">\n";
  os << "<!-- delta=" << format_double(delta) << " reachable=" << (dec.reachable ? "true" : "false") << " -->\n";
  for (std::size_t i = 0; i < n; ++i) seg(double(i), 0, double(i), double(m - 1), "#ccc", 0.5);
  for (std::size_t j = 0; j < m; ++j) seg(0, double(j), double(n - 1), double(j), "#ccc", 0.5);
  if (n < 2 || m < 2 || !dec.table) {
    os << "</svg>\n";
    return;
  }
  const auto& t = *dec.table;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const auto free = vertex_edge_interval(tau, i, sigma, j, delta);
      if (!free.is_null()) seg(double(i), j + free.lo, double(i), j + free.hi, "#888", 4);
      const auto& r = t.row(i, j);
      if (!r.is_null()) seg(double(i), j + r.lo, double(i), j + r.hi, "#1f5fbf", 2.5);
    }
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto free = vertex_edge_interval(sigma, j, tau, i, delta);
      if (!free.is_null()) seg(i + free.lo, double(j), i + free.hi, double(j), "#888", 4);
      const auto& r = t.col(j, i);
      if (!r.is_null()) seg(i + r.lo, double(j), i + r.hi, double(j), "#1f5fbf", 2.5);
    }
  os << "</svg>\n";
}

}  // namespace frechet
