#pragma once

// Points, curves and the ball/segment primitives every other layer is built
// on. Vertex and edge indices are 0-based throughout: edge k of a curve runs
// from vertex k to vertex k+1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace frechet {

class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InconsistentState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using PointView = std::span<const double>;

struct Point {
  std::vector<double> coords;

  Point() = default;
  Point(std::initializer_list<double> c) : coords(c) {}
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}

  std::size_t dim() const { return coords.size(); }
  PointView view() const { return coords; }
  double operator[](std::size_t k) const { return coords[k]; }
  bool operator==(const Point&) const = default;
};

/// Polygonal curve with flat row-major vertex storage.
///
/// Construction validates that the dimension is positive, all rows have the
/// same dimension, and no two consecutive vertices coincide (zero-length
/// edges are rejected rather than perturbed).
class Curve {
 public:
  Curve() = default;

  Curve(std::size_t dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
    validate();
  }

  explicit Curve(const std::vector<Point>& pts) {
    if (pts.empty()) throw DegenerateInput("curve needs at least one vertex");
    dim_ = pts.front().dim();
    data_.reserve(dim_ * pts.size());
    for (const auto& p : pts) {
      if (p.dim() != dim_) throw DegenerateInput("inconsistent vertex dimension");
      data_.insert(data_.end(), p.coords.begin(), p.coords.end());
    }
    validate();
  }

  Curve(std::initializer_list<Point> pts) : Curve(std::vector<Point>(pts)) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t edges() const { return size() == 0 ? 0 : size() - 1; }

  PointView operator[](std::size_t i) const { return PointView(data_).subspan(i * dim_, dim_); }
  Point point(std::size_t i) const {
    auto v = (*this)[i];
    return Point(std::vector<double>(v.begin(), v.end()));
  }
  const std::vector<double>& flat() const { return data_; }

  bool operator==(const Curve&) const = default;

 private:
  void validate() const {
    if (dim_ == 0) throw DegenerateInput("curve dimension must be positive");
    if (data_.empty()) throw DegenerateInput("curve needs at least one vertex");
    if (data_.size() % dim_ != 0) throw DegenerateInput("coordinate count is not a multiple of the dimension");
    for (std::size_t i = 1; i < size(); ++i) {
      auto a = (*this)[i - 1];
      auto b = (*this)[i];
      if (std::equal(a.begin(), a.end(), b.begin()))
        throw DegenerateInput("consecutive vertices " + std::to_string(i - 1) + " and " +
                              std::to_string(i) + " coincide");
    }
  }

  std::size_t dim_ = 0;
  std::vector<double> data_;
};

inline double dot(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// <a - c, b - d> without materializing the differences.
inline double dot_diff(PointView a, PointView c, PointView b, PointView d) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - c[k]) * (b[k] - d[k]);
  return s;
}

inline double squared_distance(PointView a, PointView b) { return dot_diff(a, b, a, b); }
inline double distance(PointView a, PointView b) { return std::sqrt(squared_distance(a, b)); }

/// Point at parameter t along the oriented segment a -> b; exact at t = 0 and t = 1.
inline Point lerp(PointView a, PointView b, double t) {
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = (1.0 - t) * a[k] + t * b[k];
  return Point(std::move(out));
}

/// Closed subinterval [lo, hi] of an edge's parameter range, or null.
struct EdgeInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool valid = false;

  static EdgeInterval null() { return {}; }
  static EdgeInterval of(double lo, double hi) { return {lo, hi, true}; }

  bool is_null() const { return !valid; }
  bool contains(double t) const { return valid && lo <= t && t <= hi; }
  bool operator==(const EdgeInterval& o) const {
    return valid == o.valid && (!valid || (lo == o.lo && hi == o.hi));
  }
};

/// Parameter range {t in [0,1] : |a + t(b - a) - center| <= delta}.
///
/// Membership of the segment endpoints is decided by squared distances, so
/// s == 0 exactly when a lies in the ball and e == 1 exactly when b does.
/// This keeps the answer for a shared vertex identical across the two edges
/// that meet there.
inline EdgeInterval ball_segment_intersection(PointView center, PointView a, PointView b,
                                              double delta) {
  if (delta < 0.0) throw std::invalid_argument("delta must be nonnegative");
  const double len2 = squared_distance(a, b);
  if (len2 == 0.0) throw DegenerateInput("zero-length segment");

  const double r2 = delta * delta;
  const double c = squared_distance(a, center) - r2;
  const bool start_in = c <= 0.0;
  const bool end_in = squared_distance(b, center) <= r2;

  // |a - center + t u|^2 = r^2  <=>  len2 t^2 + 2 hb t + c = 0
  const double hb = dot_diff(b, a, a, center);
  const double disc = hb * hb - len2 * c;

  if (disc < 0.0) {
    if (start_in && end_in) return EdgeInterval::of(0.0, 1.0);
    if (start_in) return EdgeInterval::of(0.0, 0.0);
    if (end_in) return EdgeInterval::of(1.0, 1.0);
    return EdgeInterval::null();
  }

  const double root = std::sqrt(disc);
  const double q = -(hb + std::copysign(root, hb));
  double t1, t2;
  if (q == 0.0) {
    t1 = t2 = 0.0;
  } else {
    t1 = q / len2;
    t2 = c / q;
    if (t1 > t2) std::swap(t1, t2);
  }

  if (!start_in && !end_in && (t2 < 0.0 || t1 > 1.0)) return EdgeInterval::null();
  double s = start_in ? 0.0 : std::clamp(t1, 0.0, 1.0);
  double e = end_in ? 1.0 : std::clamp(t2, 0.0, 1.0);
  if (s > e) {
    // Only reachable through rounding at a tangency.
    if (start_in) e = s;
    else s = e;
  }
  return EdgeInterval::of(s, e);
}

/// Euclidean distance from p to the closed segment a-b.
inline double point_segment_distance(PointView p, PointView a, PointView b) {
  const double len2 = squared_distance(a, b);
  if (len2 == 0.0) throw DegenerateInput("zero-length segment");
  const double t = std::clamp(dot_diff(p, a, b, a) / len2, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = a[k] + t * (b[k] - a[k]) - p[k];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Intersection of the ball around vertex `v` of `owner` with edge `e` of `other`.
inline EdgeInterval vertex_edge_interval(const Curve& owner, std::size_t v, const Curve& other,
                                         std::size_t e, double delta) {
  return ball_segment_intersection(owner[v], other[e], other[e + 1], delta);
}

// ---------------------------------------------------------------------------
// Ordering of ball/edge intersection endpoints along an edge.
//
// Endpoints are ordered by parameter, then start-before-end, then by vertex
// index. Signatures, predecessor ranks and all oracles use this one order.

enum class EndpointKind : std::uint8_t { start = 0, end = 1 };

struct EndpointKey {
  double t;
  EndpointKind kind;
  std::uint32_t vertex;

  friend bool operator<(const EndpointKey& x, const EndpointKey& y) {
    if (x.t != y.t) return x.t < y.t;
    if (x.kind != y.kind) return x.kind < y.kind;
    return x.vertex < y.vertex;
  }
};

struct PredecessorRank {
  std::uint32_t rank;  // 1-based; 0 = no predecessor; sentinel_rank() = all null
  bool is_equal;
};

/// Sentinel rank for a block of `width` edges (width + 1 vertices).
constexpr std::uint32_t sentinel_rank(std::uint32_t width) { return 2 * (width + 1) + 1; }

/// Locates the start parameter y among the endpoints of `points` (the ball
/// intersections of a block's vertices with one edge, in vertex order).
///
/// y is treated as a start point placed after every start of equal
/// parameter and before every end of equal parameter. The predecessor is the
/// last endpoint not behind y in that order; is_equal reports whether its
/// parameter equals y. Returns rank 0 if every non-null endpoint lies after
/// y, and the sentinel if all intersections are null.
inline PredecessorRank predecessor_rank(double y, std::span<const EdgeInterval> points) {
  std::uint32_t eligible = 0;
  std::uint32_t nonnull = 0;
  bool equal_start = false;
  for (const auto& iv : points) {
    if (iv.is_null()) continue;
    ++nonnull;
    if (iv.lo <= y) {
      ++eligible;
      if (iv.lo == y) equal_start = true;
    }
    if (iv.hi < y) ++eligible;
  }
  if (nonnull == 0) return {sentinel_rank(static_cast<std::uint32_t>(points.size() - 1)), false};
  // Eligible endpoints form a prefix of the order, so the predecessor's rank
  // is their count; it equals y only if some start has parameter y.
  return {eligible, equal_start};
}

}  // namespace frechet
