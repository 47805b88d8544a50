#pragma once

// Reachability-interval dynamic program over the free-space diagram.
//
// R_i[j] is the reachable part of edge j of sigma as seen from vertex i of
// tau; R'_j[i] is the reachable part of edge i of tau as seen from vertex j
// of sigma. The table is filled row by row; cell (i, j) maps its lower and
// left sides (R_i[j], R'_j[i]) to its upper and right sides
// (R_{i+1}[j], R'_{j+1}[i]).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "frechet/geometry.hpp"

namespace frechet {

struct Frontier {
  std::vector<EdgeInterval> row_intervals;  // R_0[j], one per edge of sigma
  std::vector<EdgeInterval> col_intervals;  // R'_0[i], one per edge of tau
};

/// Full interval table, materialized only in debug mode.
struct FreeSpaceTable {
  std::size_t n = 0;  // vertices of tau
  std::size_t m = 0;  // vertices of sigma
  std::vector<EdgeInterval> rows;  // R_i[j] at i * (m - 1) + j, i in [0, n)
  std::vector<EdgeInterval> cols;  // R'_j[i] at j * (n - 1) + i, j in [0, m)

  const EdgeInterval& row(std::size_t i, std::size_t j) const { return rows[i * (m - 1) + j]; }
  const EdgeInterval& col(std::size_t j, std::size_t i) const { return cols[j * (n - 1) + i]; }
  EdgeInterval& row(std::size_t i, std::size_t j) { return rows[i * (m - 1) + j]; }
  EdgeInterval& col(std::size_t j, std::size_t i) { return cols[j * (n - 1) + i]; }
};

struct DecisionResult {
  bool reachable = false;
  std::optional<FreeSpaceTable> table;
};

namespace detail {

inline void require_same_dim(const Curve& tau, const Curve& sigma) {
  if (tau.dim() != sigma.dim()) throw DegenerateInput("curves have different dimensions");
}

// A curve with a single vertex can only be matched entirely to that vertex.
inline std::optional<bool> decide_point_curve(const Curve& tau, const Curve& sigma, double delta) {
  if (tau.size() > 1 && sigma.size() > 1) return std::nullopt;
  const double r2 = delta * delta;
  const Curve& pt = tau.size() == 1 ? tau : sigma;
  const Curve& other = tau.size() == 1 ? sigma : tau;
  for (std::size_t k = 0; k < other.size(); ++k)
    if (squared_distance(pt[0], other[k]) > r2) return false;
  return true;
}

// Initial intervals along one side of the diagram: only a chain of balls
// covering every vertex up to the current one keeps the interval alive.
inline std::vector<EdgeInterval> init_side(const Curve& host, const Curve& edges, double delta) {
  std::vector<EdgeInterval> out(edges.edges());
  bool alive = true;
  for (std::size_t j = 0; j < edges.edges(); ++j) {
    const auto ball = vertex_edge_interval(host, 0, edges, j, delta);
    if (alive && !ball.is_null() && ball.lo == 0.0) {
      out[j] = EdgeInterval::of(0.0, ball.hi);
      alive = ball.hi == 1.0;
    } else {
      alive = false;
    }
  }
  return out;
}

// Upper side from lower side (or right side from left side). `other` is the
// incoming interval on the perpendicular side and `ball` the intersection of
// the next vertex's ball with this edge.
inline EdgeInterval advance(const EdgeInterval& self, const EdgeInterval& other,
                            const EdgeInterval& ball) {
  if (!other.is_null()) return ball;
  if (self.is_null() || ball.is_null()) return EdgeInterval::null();
  const double lo = std::max(ball.lo, self.lo);
  if (lo > ball.hi) return EdgeInterval::null();
  return EdgeInterval::of(lo, ball.hi);
}

}  // namespace detail

/// R_0[j] for every edge j of sigma and R'_0[i] for every edge i of tau.
inline Frontier init_frontiers(const Curve& tau, const Curve& sigma, double delta) {
  detail::require_same_dim(tau, sigma);
  return {detail::init_side(tau, sigma, delta), detail::init_side(sigma, tau, delta)};
}

/// One cell step. `ball_next_vertex` is B_{v_{i+1}} ∩ w_j w_{j+1} and
/// `ball_next_sigma_vertex` is B_{w_{j+1}} ∩ v_i v_{i+1}.
/// Returns (R_{i+1}[j], R'_{j+1}[i]).
inline std::pair<EdgeInterval, EdgeInterval> propagate_cell(const EdgeInterval& r_ij,
                                                            const EdgeInterval& rp_ji,
                                                            const EdgeInterval& ball_next_vertex,
                                                            const EdgeInterval& ball_next_sigma_vertex) {
  return {detail::advance(r_ij, rp_ji, ball_next_vertex),
          detail::advance(rp_ji, r_ij, ball_next_sigma_vertex)};
}

/// Decides d_F(tau, sigma) <= delta in O(nm) time and O(n + m) memory, or
/// O(nm) memory when `debug_table` is set.
inline DecisionResult naive_decide(const Curve& tau, const Curve& sigma, double delta,
                                   bool debug_table = false) {
  detail::require_same_dim(tau, sigma);
  if (delta < 0.0) throw std::invalid_argument("delta must be nonnegative");
  if (auto r = detail::decide_point_curve(tau, sigma, delta)) return {*r, std::nullopt};

  const std::size_t n = tau.size();
  const std::size_t m = sigma.size();
  Frontier f = init_frontiers(tau, sigma, delta);
  std::vector<EdgeInterval>& row = f.row_intervals;

  std::optional<FreeSpaceTable> table;
  if (debug_table) {
    table.emplace();
    table->n = n;
    table->m = m;
    table->rows.resize(n * (m - 1));
    table->cols.resize(m * (n - 1));
    for (std::size_t j = 0; j + 1 < m; ++j) table->row(0, j) = row[j];
    for (std::size_t i = 0; i + 1 < n; ++i) table->col(0, i) = f.col_intervals[i];
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    EdgeInterval rp = f.col_intervals[i];
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const auto bv = vertex_edge_interval(tau, i + 1, sigma, j, delta);
      const auto bw = vertex_edge_interval(sigma, j + 1, tau, i, delta);
      std::tie(row[j], rp) = propagate_cell(row[j], rp, bv, bw);
      if (table) {
        table->row(i + 1, j) = row[j];
        table->col(j + 1, i) = rp;
      }
    }
  }
  const auto& last = row[m - 2];
  return {!last.is_null() && last.hi == 1.0, std::move(table)};
}

/// Checks the structure every reachable interval must have: its end is the
/// end of the owning ball's intersection with the edge and its start is the
/// start of some earlier ball's intersection with the same edge.
inline bool check_interval_structure(const FreeSpaceTable& t, const Curve& tau, const Curve& sigma,
                                     double delta) {
  auto side_ok = [&](const Curve& owner, const Curve& host, std::size_t vertex, std::size_t edge,
                     const EdgeInterval& iv) {
    if (iv.is_null()) return true;
    if (iv.hi != vertex_edge_interval(owner, vertex, host, edge, delta).hi) return false;
    for (std::size_t k = 0; k <= vertex; ++k) {
      const auto b = vertex_edge_interval(owner, k, host, edge, delta);
      if (!b.is_null() && b.lo == iv.lo) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = 0; j + 1 < t.m; ++j)
      if (!side_ok(tau, sigma, i, j, t.row(i, j))) return false;
  for (std::size_t j = 0; j < t.m; ++j)
    for (std::size_t i = 0; i + 1 < t.n; ++i)
      if (!side_ok(sigma, tau, j, i, t.col(j, i))) return false;
  return true;
}

}  // namespace frechet
