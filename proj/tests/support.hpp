#pragma once

// Independent oracles and instance makers shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "frechet/frechet.hpp"

namespace frechet::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Vertices uniform in [-scale, scale]^dim.
inline Curve random_curve(Rng& rng, std::size_t n, std::size_t dim, double scale) {
  std::vector<double> flat;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(dim);
    do {
      for (auto& x : p) x = uniform(rng, -scale, scale);
    } while (i > 0 && std::equal(p.begin(), p.end(), flat.end() - static_cast<std::ptrdiff_t>(dim)));
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return Curve(dim, std::move(flat));
}

/// Vertices on the integer grid [-range, range]^dim; produces many exact ties.
inline Curve grid_curve(Rng& rng, std::size_t n, std::size_t dim, int range) {
  std::vector<double> flat;
  std::uniform_int_distribution<int> d(-range, range);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p(dim);
    do {
      for (auto& x : p) x = d(rng);
    } while (i > 0 && std::equal(p.begin(), p.end(), flat.end() - static_cast<std::ptrdiff_t>(dim)));
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return Curve(dim, std::move(flat));
}

/// Point of the curve at global parameter x in [0, n-1].
inline Point curve_at(const Curve& c, std::size_t edge, double t) { return lerp(c[edge], c[edge + 1], t); }

/// Parameter range of a ball on a segment by scanning `steps`+1 equally spaced samples.
inline EdgeInterval scan_interval(PointView center, PointView a, PointView b, double delta, std::size_t steps) {
  double lo = 2.0, hi = -1.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps);
    if (distance(lerp(a, b, t).view(), center) <= delta) {
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  return lo > hi ? EdgeInterval::null() : EdgeInterval::of(lo, hi);
}

inline double scan_point_segment_distance(PointView p, PointView a, PointView b, std::size_t steps) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(steps);
    best = std::min(best, distance(lerp(a, b, t).view(), p));
  }
  return best;
}

/// Decision on a grid with `k` samples per edge: monotone steps right, up
/// or diagonal between free grid points. Free space inside a cell is
/// convex, so a grid path is a genuine matching: a true answer is sound.
inline bool grid_bfs_decide(const Curve& tau, const Curve& sigma, double delta, std::size_t k) {
  const std::size_t nx = (tau.size() - 1) * k + 1;
  const std::size_t ny = (sigma.size() - 1) * k + 1;
  auto point = [&](const Curve& c, std::size_t g) {
    const std::size_t e = std::min(g / k, c.size() - 2);
    return curve_at(c, e, static_cast<double>(g - e * k) / static_cast<double>(k));
  };
  std::vector<Point> px(nx), py(ny);
  for (std::size_t g = 0; g < nx; ++g) px[g] = point(tau, g);
  for (std::size_t g = 0; g < ny; ++g) py[g] = point(sigma, g);
  auto free = [&](std::size_t x, std::size_t y) { return distance(px[x].view(), py[y].view()) <= delta; };
  std::vector<char> seen(nx * ny, 0);
  if (!free(0, 0)) return false;
  std::deque<std::pair<std::size_t, std::size_t>> q{{0, 0}};
  seen[0] = 1;
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    if (x == nx - 1 && y == ny - 1) return true;
    const std::pair<std::size_t, std::size_t> nxt[] = {{x + 1, y}, {x, y + 1}, {x + 1, y + 1}};
    for (auto [a, b] : nxt) {
      if (a >= nx || b >= ny || seen[a * ny + b] || !free(a, b)) continue;
      seen[a * ny + b] = 1;
      q.emplace_back(a, b);
    }
  }
  return false;
}

/// Discrete distance by enumerating every monotone vertex coupling.
inline double brute_force_discrete(const Curve& tau, const Curve& sigma) {
  const std::size_t n = tau.size(), m = sigma.size();
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double worst) {
    worst = std::max(worst, distance(tau[i], sigma[j]));
    if (worst >= best) return;
    if (i == n - 1 && j == m - 1) {
      best = worst;
      return;
    }
    if (i + 1 < n) walk(i + 1, j, worst);
    if (j + 1 < m) walk(i, j + 1, worst);
    if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, worst);
  };
  walk(0, 0, 0.0);
  return best;
}

// ---------------------------------------------------------------------------
// Near-tie detection for predicate cross-validation.
//
// A configuration is a near-tie when some quantity a predicate's outcome
// hinges on sits within `tol` (in length units) of its flip point. Exact
// structural ties, where both compared values are clamped to the same edge
// end, are not near-ties.

struct BallOnEdge {
  EdgeInterval iv;  // direct intersection
  double len = 0;   // |b - a|
  double line_lo = 0, line_hi = 0;  // unclamped line parameters (valid when the line meets the ball)
  bool start_clamped = false, end_clamped = false;
  std::vector<double> gaps;  // flip distances intrinsic to one ball/edge pair
};

inline BallOnEdge analyse(PointView x, PointView a, PointView b, double delta) {
  BallOnEdge r;
  r.iv = ball_segment_intersection(x, a, b, delta);
  r.len = distance(a, b);
  const double proj = dot_diff(x, a, b, a) / r.len;  // signed length from a to the foot
  const double h2 = squared_distance(x, a) - proj * proj;
  const double h = std::sqrt(std::max(0.0, h2));
  r.gaps.push_back(point_segment_distance(x, a, b) - delta);
  r.gaps.push_back(distance(x, a) - delta);
  r.gaps.push_back(distance(x, b) - delta);
  r.gaps.push_back(proj);
  r.gaps.push_back(proj - r.len);
  r.gaps.push_back(h - delta);
  if (delta >= h) {
    const double half = std::sqrt(delta * delta - h * h);
    r.line_lo = (proj - half) / r.len;
    r.line_hi = (proj + half) / r.len;
    r.gaps.push_back(r.line_lo * r.len);
    r.gaps.push_back((r.line_hi - 1.0) * r.len);
    r.gaps.push_back((r.line_lo - 1.0) * r.len);
    r.gaps.push_back(r.line_hi * r.len);
  }
  r.start_clamped = !r.iv.is_null() && squared_distance(x, a) <= delta * delta;
  r.end_clamped = !r.iv.is_null() && squared_distance(x, b) <= delta * delta;
  return r;
}

inline bool any_within(const std::vector<double>& gaps, double tol) {
  return std::any_of(gaps.begin(), gaps.end(), [&](double g) { return std::abs(g) <= tol; });
}

/// Comparing an endpoint of one intersection against an endpoint of another.
/// Values pinned to the same edge end by clamping are an exact tie.
inline bool endpoint_near_tie(double u, bool u_pinned, double v, bool v_pinned, double len, double tol) {
  if (u_pinned && v_pinned && u == v) return false;
  return std::abs(u - v) * len <= tol;
}

inline bool pair_near_tie(PointView x, PointView xp, PointView a, PointView b, double delta, double tol) {
  const auto p = analyse(x, a, b, delta);
  const auto q = analyse(xp, a, b, delta);
  if (any_within(p.gaps, tol) || any_within(q.gaps, tol)) return true;
  if (p.iv.is_null() || q.iv.is_null()) return false;
  if (std::equal(x.begin(), x.end(), xp.begin())) return false;
  return endpoint_near_tie(p.iv.lo, p.start_clamped, q.iv.lo, q.start_clamped, p.len, tol) ||
         endpoint_near_tie(p.iv.hi, p.end_clamped, q.iv.hi, q.end_clamped, p.len, tol) ||
         endpoint_near_tie(p.iv.lo, p.start_clamped, q.iv.hi, q.end_clamped, p.len, tol) ||
         std::abs(p.line_lo - q.line_hi) * p.len <= tol;
}

inline bool locate_near_tie(double y, PointView x, PointView a, PointView b, double delta, double tol) {
  const auto p = analyse(x, a, b, delta);
  if (any_within(p.gaps, tol)) return true;
  // where the foot of x sits relative to y
  const double foot = dot_diff(x, a, b, a) / (p.len * p.len);
  if (std::abs(foot - y) * p.len <= tol) return true;
  if (p.iv.is_null()) return false;
  const bool y_at_a = y == 0.0, y_at_b = y == 1.0;
  return endpoint_near_tie(y, y_at_a, p.iv.lo, p.start_clamped, p.len, tol) ||
         endpoint_near_tie(y, y_at_b, p.iv.hi, p.end_clamped, p.len, tol);
}

/// Length scale used to turn the relative near-tie tolerance into an absolute one.
inline double scale_of(const Curve& tau, const Curve& sigma, double delta) {
  double s = std::max(1.0, delta);
  for (double v : tau.flat()) s = std::max(s, std::abs(v));
  for (double v : sigma.flat()) s = std::max(s, std::abs(v));
  return s;
}

// ---------------------------------------------------------------------------
// Predicate cross-validation driver.

struct CrossValidation {
  std::size_t configurations = 0;
  std::size_t evaluations = 0;   // predicate evaluations compared
  std::size_t near_ties = 0;     // evaluations skipped as near-ties
  std::size_t disagreements = 0;
};

/// Random (tau, sigma, indices, delta, y) configurations in `dim`
/// dimensions; every predicate is evaluated on both routes.
inline CrossValidation cross_validate_predicates(std::uint64_t seed, std::size_t count, std::size_t dim,
                                                 double rel_tol = 1e-12) {
  using namespace frechet::predicates;
  Rng rng(seed);
  CrossValidation cv;
  for (std::size_t k = 0; k < count; ++k) {
    const bool grid = uniform_int(rng, 0, 3) == 0;
    const Curve tau = grid ? grid_curve(rng, 3, dim, 3) : random_curve(rng, 3, dim, 3.0);
    const Curve sigma = grid ? grid_curve(rng, 3, dim, 3) : random_curve(rng, 3, dim, 3.0);
    const double delta = grid ? static_cast<double>(uniform_int(rng, 0, 8)) / 2.0 : uniform(rng, 0.0, 4.0);
    Query q{&tau, &sigma, uniform_int(rng, 0, 1), uniform_int(rng, 0, 2), uniform_int(rng, 0, 1),
            uniform_int(rng, 0, 2), delta, 0.0};
    const auto a = sigma[q.j];
    const auto b = sigma[q.j + 1];
    const auto own = ball_segment_intersection(tau[q.i], a, b, delta);
    switch (uniform_int(rng, 0, 4)) {
      case 0: q.y = 0.0; break;
      case 1: q.y = 1.0; break;
      case 2: q.y = own.is_null() ? 0.5 : own.lo; break;
      case 3: q.y = own.is_null() ? 0.5 : own.hi; break;
      default: q.y = uniform(rng, 0.0, 1.0);
    }
    const double tol = rel_tol * scale_of(tau, sigma, delta);
    ++cv.configurations;
    for (int p = 1; p <= 13; ++p) {
      const auto pred = static_cast<Predicate>(p);
      bool tie = false;
      switch (pred) {
        case Predicate::P1:
          tie = any_within(analyse(sigma[q.j], tau[q.i], tau[q.i + 1], delta).gaps, tol);
          break;
        case Predicate::P2:
        case Predicate::P9:
          tie = any_within(analyse(tau[q.i], a, b, delta).gaps, tol);
          break;
        case Predicate::P3:
        case Predicate::P5:
        case Predicate::P7:
          tie = pair_near_tie(sigma[q.j], sigma[q.j2], tau[q.i], tau[q.i + 1], delta, tol);
          break;
        case Predicate::P4:
        case Predicate::P6:
        case Predicate::P8:
          tie = pair_near_tie(tau[q.i], tau[q.i2], a, b, delta, tol);
          break;
        default:
          tie = locate_near_tie(q.y, tau[q.i], a, b, delta, tol);
      }
      if (tie) {
        ++cv.near_ties;
        continue;
      }
      ++cv.evaluations;
      if (evaluate(pred, q, Route::polynomial) != evaluate(pred, q, Route::direct)) ++cv.disagreements;
    }
  }
  return cv;
}

// ---------------------------------------------------------------------------
// Code/interval commutation driver.

struct Commutation {
  std::size_t cells = 0;
  std::size_t mismatches = 0;
  std::size_t vertex_coded = 0;  // inputs coded by gamma in [1, W+1]
  std::size_t ties = 0;          // cells where the next start equals the incoming start
};

/// A block of `width` edges (clipped to the curve) that contains edge `e`.
inline BlockSpec random_block_containing(Rng& rng, std::size_t e, std::size_t vertices, std::size_t max_width) {
  const std::size_t width = std::min(uniform_int(rng, 1, max_width), vertices - 1);
  const std::size_t lo = e + 1 >= width ? e + 1 - width : 0;
  const std::size_t hi = std::min(e, vertices - 1 - width);
  return {uniform_int(rng, lo, hi), width};
}

/// Code for a start relative to a block: gamma naming a block vertex whose
/// start equals it (when one exists, chosen half the time), else gamma = 0.
inline CodedStart code_for(Rng& rng, const EdgeInterval& iv, std::span<const EdgeInterval> pts,
                           std::size_t owner_offset, std::size_t* vertex_coded) {
  if (iv.is_null()) return {encode_start(std::nullopt, pts), std::nullopt};
  if (uniform_int(rng, 0, 1) == 0) {
    for (std::size_t v = 0; v <= owner_offset; ++v)
      if (!pts[v].is_null() && pts[v].lo == iv.lo) {
        ++*vertex_coded;
        return {ReachCode::vertex_start(static_cast<std::uint32_t>(v + 1)), std::nullopt};
      }
  }
  return {encode_start(iv.lo, pts), iv.lo};
}

inline bool same_interval(const std::optional<double>& lo, const EdgeInterval& ball, const EdgeInterval& want) {
  if (!lo) return want.is_null();
  return !want.is_null() && *lo == want.lo && ball.hi == want.hi;
}

inline Commutation commutation_check(std::uint64_t seed, std::size_t min_cells) {
  Rng rng(seed);
  Commutation out;
  while (out.cells < min_cells) {
    const bool grid = uniform_int(rng, 0, 2) == 0;
    const std::size_t n = uniform_int(rng, 3, 25), m = uniform_int(rng, 3, 25);
    const Curve tau = grid ? grid_curve(rng, n, 2, 2) : random_curve(rng, n, 2, 3.0);
    const Curve sigma = grid ? grid_curve(rng, m, 2, 2) : random_curve(rng, m, 2, 3.0);
    const double base = discrete_frechet(tau, sigma);
    const double delta = grid ? std::ceil(base * 2.0 * uniform(rng, 0.4, 1.3)) / 2.0 : base * uniform(rng, 0.4, 1.3);
    const auto res = naive_decide(tau, sigma, delta, true);
    const auto& t = *res.table;
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j + 1 < m; ++j) {
        const BlockSpec tb = random_block_containing(rng, i, n, 6);
        const BlockSpec sb = random_block_containing(rng, j, m, 6);
        const auto col_pts = block_intersections(tau, tb, sigma, j, delta);
        const auto row_pts = block_intersections(sigma, sb, tau, i, delta);
        const std::size_t io = i - tb.first, jo = j - sb.first;
        const auto col_in = code_for(rng, t.row(i, j), col_pts, io, &out.vertex_coded);
        const auto row_in = code_for(rng, t.col(j, i), row_pts, jo, &out.vertex_coded);
        const auto [col_out, row_out] = propagate_code_cell(col_in.code, row_in.code, signature_from_intervals(col_pts),
                                                            signature_from_intervals(row_pts), io, jo);
        const auto lo_col = decode_start(col_out, col_pts, col_in.carried);
        const auto lo_row = decode_start(row_out, row_pts, row_in.carried);
        ++out.cells;
        if (!t.row(i, j).is_null() && !col_pts[io + 1].is_null() && t.row(i, j).lo == col_pts[io + 1].lo) ++out.ties;
        if (!same_interval(lo_col, col_pts[io + 1], t.row(i + 1, j)) ||
            !same_interval(lo_row, row_pts[jo + 1], t.col(j + 1, i)))
          ++out.mismatches;
      }
  }
  return out;
}

}  // namespace frechet::testing
