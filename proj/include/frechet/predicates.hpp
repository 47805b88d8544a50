#pragma once

// Sign predicates that determine box signatures (P1..P8) and the location
// of a start point among a block's endpoints (P9..P13).
//
// Every predicate is available through two independent routes:
//   Route::polynomial  square-root-free polynomial sign tests
//   Route::direct      explicit ball/segment intersection parameters
// The routes agree away from near-ties; the test suite checks this.
//
// Generic helpers are phrased over a host edge a -> b and one or two ball
// centres x, x' taken from the other curve.

#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "frechet/geometry.hpp"

namespace frechet::predicates {

enum class Route { polynomial, direct };

enum class Predicate : std::uint8_t { P1 = 1, P2, P3, P4, P5, P6, P7, P8, P9, P10, P11, P12, P13 };

namespace poly {

/// d(x, aff(ab))^2 * |b - a|^2 expanded without square roots.
inline double line_dist2_scaled(PointView x, PointView a, PointView b) {
  const double l2 = squared_distance(a, b);
  const double proj = dot_diff(x, b, a, b);
  return squared_distance(x, b) * l2 - proj * proj;
}

inline bool dist_le(PointView x, PointView a, PointView b, double delta) {
  const double l2 = squared_distance(a, b);
  const double r2 = delta * delta;
  const double f1 = line_dist2_scaled(x, a, b) - r2 * l2;
  if (f1 > 0.0) return false;
  const double f2 = dot_diff(x, a, b, a);
  const double f3 = dot_diff(x, b, a, b);
  if (f2 >= 0.0 && f3 >= 0.0) return true;
  if (f2 < 0.0) return squared_distance(x, a) - r2 <= 0.0;
  return squared_distance(x, b) - r2 <= 0.0;
}

namespace detail {

struct PairTerms {
  double proj_gap;  // <x' - x, b - a>
  double a_term;    // proj_gap^2, i.e. z1^2 |b - a|^2
  double dx;        // line_dist2_scaled(x)
  double dxp;       // line_dist2_scaled(x')
  double zx;        // z2^2 |b - a|^2
  double zxp;       // z3^2 |b - a|^2
};

inline PairTerms pair_terms(PointView x, PointView xp, PointView a, PointView b, double delta) {
  PairTerms t{};
  t.proj_gap = dot_diff(xp, x, b, a);
  t.a_term = t.proj_gap * t.proj_gap;
  t.dx = line_dist2_scaled(x, a, b);
  t.dxp = line_dist2_scaled(xp, a, b);
  const double rl = delta * delta * squared_distance(a, b);
  t.zx = rl - t.dx;
  t.zxp = rl - t.dxp;
  return t;
}

// sqrt(u) + sqrt(v) >= sqrt(w) for scaled squares u, v, w >= 0, with the
// first as the cross-term: tests w - u - v <= 2 sqrt(u v).
inline bool sum_ge(double u, double v, double w) {
  const double h = w - u - v;
  if (h <= 0.0) return true;
  return 4.0 * u * v - h * h >= 0.0;
}

// sqrt(w) >= sqrt(u) + sqrt(v).
inline bool ge_sum(double w, double u, double v) {
  const double g = w - u - v;
  if (g < 0.0) return false;
  return g * g - 4.0 * u * v >= 0.0;
}

}  // namespace detail

/// Start of B_x ∩ aff(ab) not behind start of B_x' ∩ aff(ab). Both balls must meet the line.
inline bool line_start_le_start(PointView x, PointView xp, PointView a, PointView b, double delta) {
  const auto t = detail::pair_terms(x, xp, a, b, delta);
  if (t.proj_gap >= 0.0) return detail::sum_ge(t.a_term, t.zx, t.zxp);  // z3 <= z1 + z2
  return detail::ge_sum(t.zx, t.a_term, t.zxp);                          // z2 >= z1 + z3
}

inline bool line_end_le_end(PointView x, PointView xp, PointView a, PointView b, double delta) {
  const auto t = detail::pair_terms(x, xp, a, b, delta);
  if (t.proj_gap >= 0.0) return detail::sum_ge(t.a_term, t.zxp, t.zx);  // z2 <= z1 + z3
  return detail::ge_sum(t.zxp, t.a_term, t.zx);                          // z3 >= z1 + z2
}

inline bool line_start_le_end(PointView x, PointView xp, PointView a, PointView b, double delta) {
  const auto t = detail::pair_terms(x, xp, a, b, delta);
  if (t.proj_gap >= 0.0) return true;
  return detail::sum_ge(t.zx, t.zxp, t.a_term);  // z1 <= z2 + z3
}

inline bool start_le_start(PointView x, PointView xp, PointView a, PointView b, double delta) {
  if (!dist_le(x, a, b, delta) || !dist_le(xp, a, b, delta)) return false;
  const double r2 = delta * delta;
  const bool x_at_a = squared_distance(a, x) - r2 <= 0.0;
  const bool xp_at_a = squared_distance(a, xp) - r2 <= 0.0;
  if (x_at_a) return true;
  if (xp_at_a) return false;
  return line_start_le_start(x, xp, a, b, delta);
}

inline bool end_le_end(PointView x, PointView xp, PointView a, PointView b, double delta) {
  if (!dist_le(x, a, b, delta) || !dist_le(xp, a, b, delta)) return false;
  const double r2 = delta * delta;
  const bool x_at_b = squared_distance(b, x) - r2 <= 0.0;
  const bool xp_at_b = squared_distance(b, xp) - r2 <= 0.0;
  if (xp_at_b) return true;
  if (x_at_b) return false;
  return line_end_le_end(x, xp, a, b, delta);
}

inline bool start_le_end(PointView x, PointView xp, PointView a, PointView b, double delta) {
  if (!dist_le(x, a, b, delta) || !dist_le(xp, a, b, delta)) return false;
  const double r2 = delta * delta;
  if (squared_distance(a, x) - r2 <= 0.0) return true;
  if (squared_distance(b, xp) - r2 <= 0.0) return true;
  return line_start_le_end(x, xp, a, b, delta);
}

struct Location {
  bool le;  // y not behind the endpoint
  bool eq;  // y equals the endpoint
};

/// y against the start of B_x ∩ ab, for a point y on ab.
inline Location locate_start(PointView y, PointView x, PointView a, PointView b, double delta) {
  if (!dist_le(x, a, b, delta)) return {false, false};
  const double r2 = delta * delta;
  const double y_from_a = dot_diff(y, a, b, a);
  if (y_from_a == 0.0) {
    // y = a: never behind the start, equal iff the start is clamped to a.
    return {true, squared_distance(x, a) - r2 <= 0.0};
  }
  const double f1 = dot_diff(x, y, b, a);
  if (f1 < 0.0) {
    const bool proj_on_edge = dot_diff(x, a, b, a) >= 0.0 && dot_diff(x, b, a, b) >= 0.0;
    if (proj_on_edge) return {false, false};
    // Start is clamped to a and y lies past a.
    return {y_from_a <= 0.0, y_from_a == 0.0};
  }
  const double f5 = squared_distance(x, y) - r2;
  return {f5 >= 0.0, f5 == 0.0};
}

/// y against the end of B_x ∩ ab, for a point y on ab.
inline Location locate_end(PointView y, PointView x, PointView a, PointView b, double delta) {
  if (!dist_le(x, a, b, delta)) return {false, false};
  const double r2 = delta * delta;
  const double y_to_b = dot_diff(b, y, b, a);
  if (y_to_b == 0.0) {
    // y = b: not behind the end iff the end is clamped to b.
    const bool clamped = squared_distance(x, b) - r2 <= 0.0;
    return {clamped, clamped};
  }
  const double f1 = dot_diff(x, y, b, a);
  const double f5 = squared_distance(x, y) - r2;
  if (f1 >= 0.0) {
    const bool proj_on_edge = dot_diff(x, a, b, a) >= 0.0 && dot_diff(x, b, a, b) >= 0.0;
    if (proj_on_edge) return {true, f1 == 0.0 && f5 == 0.0};
    // End is clamped to b.
    return {y_to_b >= 0.0, y_to_b == 0.0};
  }
  return {f5 <= 0.0, f5 == 0.0};
}

}  // namespace poly

namespace direct {

inline bool dist_le(PointView x, PointView a, PointView b, double delta) {
  return !ball_segment_intersection(x, a, b, delta).is_null();
}

inline bool start_le_start(PointView x, PointView xp, PointView a, PointView b, double delta) {
  const auto i = ball_segment_intersection(x, a, b, delta);
  const auto ip = ball_segment_intersection(xp, a, b, delta);
  return !i.is_null() && !ip.is_null() && i.lo <= ip.lo;
}

inline bool end_le_end(PointView x, PointView xp, PointView a, PointView b, double delta) {
  const auto i = ball_segment_intersection(x, a, b, delta);
  const auto ip = ball_segment_intersection(xp, a, b, delta);
  return !i.is_null() && !ip.is_null() && i.hi <= ip.hi;
}

inline bool start_le_end(PointView x, PointView xp, PointView a, PointView b, double delta) {
  const auto i = ball_segment_intersection(x, a, b, delta);
  const auto ip = ball_segment_intersection(xp, a, b, delta);
  return !i.is_null() && !ip.is_null() && i.lo <= ip.hi;
}

inline poly::Location locate_start(double y, PointView x, PointView a, PointView b, double delta) {
  const auto i = ball_segment_intersection(x, a, b, delta);
  if (i.is_null()) return {false, false};
  return {y <= i.lo, y == i.lo};
}

inline poly::Location locate_end(double y, PointView x, PointView a, PointView b, double delta) {
  const auto i = ball_segment_intersection(x, a, b, delta);
  if (i.is_null()) return {false, false};
  return {y <= i.hi, y == i.hi};
}

}  // namespace direct

/// Arguments for one predicate instance. Indices are 0-based; `i2`/`j2` are
/// the second vertex index (i' or j') where the predicate has one, and `y`
/// is the edge parameter of the query point for P10..P13.
struct Query {
  const Curve* tau = nullptr;
  const Curve* sigma = nullptr;
  std::size_t i = 0;
  std::size_t i2 = 0;
  std::size_t j = 0;
  std::size_t j2 = 0;
  double delta = 0.0;
  double y = 0.0;
};

inline bool evaluate(Predicate p, const Query& q, Route route) {
  const Curve& tau = *q.tau;
  const Curve& sigma = *q.sigma;
  const bool poly_route = route == Route::polynomial;
  const double d = q.delta;

  // P1/P3/P5/P7 live on edge v_i v_{i+1}; the rest on edge w_j w_{j+1}.
  auto on_tau_edge = [&](auto poly_fn, auto direct_fn, PointView x, PointView xp) {
    auto a = tau[q.i];
    auto b = tau[q.i + 1];
    return poly_route ? poly_fn(x, xp, a, b, d) : direct_fn(x, xp, a, b, d);
  };
  auto on_sigma_edge = [&](auto poly_fn, auto direct_fn, PointView x, PointView xp) {
    auto a = sigma[q.j];
    auto b = sigma[q.j + 1];
    return poly_route ? poly_fn(x, xp, a, b, d) : direct_fn(x, xp, a, b, d);
  };
  auto locate = [&](bool start) {
    auto a = sigma[q.j];
    auto b = sigma[q.j + 1];
    auto x = tau[q.i];
    if (poly_route) {
      const Point y = lerp(a, b, q.y);
      return start ? poly::locate_start(y.view(), x, a, b, d) : poly::locate_end(y.view(), x, a, b, d);
    }
    return start ? direct::locate_start(q.y, x, a, b, d) : direct::locate_end(q.y, x, a, b, d);
  };

  switch (p) {
    case Predicate::P1:
      return poly_route ? poly::dist_le(sigma[q.j], tau[q.i], tau[q.i + 1], d)
                        : direct::dist_le(sigma[q.j], tau[q.i], tau[q.i + 1], d);
    case Predicate::P2:
    case Predicate::P9:
      return poly_route ? poly::dist_le(tau[q.i], sigma[q.j], sigma[q.j + 1], d)
                        : direct::dist_le(tau[q.i], sigma[q.j], sigma[q.j + 1], d);
    case Predicate::P3:
      return on_tau_edge(poly::start_le_start, direct::start_le_start, sigma[q.j], sigma[q.j2]);
    case Predicate::P4:
      return on_sigma_edge(poly::start_le_start, direct::start_le_start, tau[q.i], tau[q.i2]);
    case Predicate::P5:
      return on_tau_edge(poly::end_le_end, direct::end_le_end, sigma[q.j], sigma[q.j2]);
    case Predicate::P6:
      return on_sigma_edge(poly::end_le_end, direct::end_le_end, tau[q.i], tau[q.i2]);
    case Predicate::P7:
      return on_tau_edge(poly::start_le_end, direct::start_le_end, sigma[q.j], sigma[q.j2]);
    case Predicate::P8:
      return on_sigma_edge(poly::start_le_end, direct::start_le_end, tau[q.i], tau[q.i2]);
    case Predicate::P10:
      return locate(true).le;
    case Predicate::P11:
      return locate(false).le;
    case Predicate::P12:
      return locate(true).eq;
    case Predicate::P13:
      return locate(false).eq;
  }
  throw std::invalid_argument("unknown predicate");
}

/// Predecessor of the start parameter y among the endpoints contributed by
/// vertices [first, first + width] of `block_curve` on edge `edge` of
/// `edge_curve`, decided purely from P9..P13 on the given route.
///
/// Same placement rule as frechet::predecessor_rank: a start equal to y
/// precedes y, an end equal to y follows it.
inline PredecessorRank predecessor_by_predicates(const Curve& block_curve, std::size_t first,
                                                 std::size_t width, const Curve& edge_curve,
                                                 std::size_t edge, double y, double delta,
                                                 Route route) {
  Query q{&block_curve, &edge_curve, 0, 0, edge, 0, delta, y};
  std::uint32_t eligible = 0;
  bool any = false;
  bool equal = false;
  for (std::size_t v = first; v <= first + width; ++v) {
    q.i = v;
    if (!evaluate(Predicate::P9, q, route)) continue;
    any = true;
    const bool le_s = evaluate(Predicate::P10, q, route);
    const bool eq_s = evaluate(Predicate::P12, q, route);
    if (!le_s || eq_s) ++eligible;
    if (eq_s) equal = true;
    if (!evaluate(Predicate::P11, q, route)) ++eligible;
  }
  if (!any) return {sentinel_rank(static_cast<std::uint32_t>(width)), false};
  return {eligible, equal};
}

}  // namespace frechet::predicates
