#pragma once

// Fréchet distance from a decision procedure, plus the discrete baseline.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "frechet/blocked.hpp"
#include "frechet/freespace.hpp"
#include "frechet/geometry.hpp"

namespace frechet {

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decision oracle: true iff d_F(tau, sigma) <= delta.
using Decider = std::function<bool(const Curve&, const Curve&, double)>;

inline Decider naive_decider() {
  return [](const Curve& a, const Curve& b, double d) { return naive_decide(a, b, d).reachable; };
}

/// Boxed decider sharing one memo table across calls. The table must
/// outlive the returned function.
inline Decider boxed_decider(MemoTable& memo, std::optional<std::size_t> alpha = {},
                             std::optional<std::size_t> theta = {}) {
  return [&memo, alpha, theta](const Curve& a, const Curve& b, double d) {
    if (a.size() < 2 || b.size() < 2) return naive_decide(a, b, d).reachable;
    const auto part = make_partition(a.size(), b.size(), alpha, theta);
    return boxed_decide(a, b, d, part, memo).reachable;
  };
}

/// Discrete Fréchet distance over vertex couplings, O(nm) time.
inline double discrete_frechet(const Curve& tau, const Curve& sigma) {
  detail::require_same_dim(tau, sigma);
  const std::size_t n = tau.size();
  const std::size_t m = sigma.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = distance(tau[i], sigma[j]);
      double best;
      if (i == 0 && j == 0) best = d;
      else if (i == 0) best = cur[j - 1];
      else if (j == 0) best = prev[j];
      else best = std::min({prev[j], prev[j - 1], cur[j - 1]});
      cur[j] = std::max(best, d);
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

inline double endpoint_lower_bound(const Curve& tau, const Curve& sigma) {
  return std::max(distance(tau[0], sigma[0]), distance(tau[tau.size() - 1], sigma[sigma.size() - 1]));
}

inline constexpr double kDefaultCriticalCap = 1e7;

/// Candidate values containing d_F: endpoint distances, vertex-edge
/// distances both ways, and for every pair of same-curve vertices and every
/// opposite edge, the distance from either vertex to the point where their
/// bisector crosses that edge. Sorted and deduplicated.
inline std::vector<double> critical_values(const Curve& tau, const Curve& sigma,
                                           double cap = kDefaultCriticalCap) {
  detail::require_same_dim(tau, sigma);
  const double n = static_cast<double>(tau.size());
  const double m = static_cast<double>(sigma.size());
  if (n * m * (n + m) > cap)
    throw CapExceeded("critical value enumeration exceeds the size cap; use bisection");

  std::vector<double> out;
  out.push_back(distance(tau[0], sigma[0]));
  out.push_back(distance(tau[tau.size() - 1], sigma[sigma.size() - 1]));

  auto vertex_edge = [&](const Curve& pts, const Curve& host) {
    for (std::size_t v = 0; v < pts.size(); ++v)
      for (std::size_t e = 0; e + 1 < host.size(); ++e)
        out.push_back(point_segment_distance(pts[v], host[e], host[e + 1]));
  };
  vertex_edge(tau, sigma);
  vertex_edge(sigma, tau);

  auto bisector = [&](const Curve& pts, const Curve& host) {
    for (std::size_t e = 0; e + 1 < host.size(); ++e) {
      auto a = host[e];
      auto b = host[e + 1];
      for (std::size_t p = 0; p < pts.size(); ++p)
        for (std::size_t q = p + 1; q < pts.size(); ++q) {
          // |a + t(b - a) - p|^2 = |a + t(b - a) - q|^2 is linear in t.
          const double denom = 2.0 * dot_diff(b, a, pts[q], pts[p]);
          if (denom == 0.0) continue;
          const double num = squared_distance(a, pts[q]) - squared_distance(a, pts[p]);
          const double t = num / denom;
          if (t < 0.0 || t > 1.0) continue;
          const Point x = lerp(a, b, t);
          out.push_back(distance(x.view(), pts[p]));
        }
    }
  };
  bisector(tau, sigma);
  bisector(sigma, tau);

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

enum class DistanceMode { exact, bisection };

struct DistanceResult {
  double value = 0.0;
  DistanceMode mode = DistanceMode::bisection;
  /// Largest probe known to decide false (none if value is the smallest candidate).
  std::optional<double> lower_probe;
  /// Probe known to decide true.
  double upper_probe = 0.0;
};

/// Relative slack added to a candidate before deciding it, so that a
/// candidate equal to d_F is not rejected by rounding at the tangency.
inline constexpr double kCandidateSlack = 1e-12;

inline double candidate_probe(double c) { return c + kCandidateSlack * std::max(1.0, c); }

/// Smallest critical value c with decide(c + slack) true.
inline DistanceResult compute_exact(const Curve& tau, const Curve& sigma, const Decider& decide,
                                    double cap = kDefaultCriticalCap) {
  const auto cand = critical_values(tau, sigma, cap);
  std::size_t lo = 0, hi = cand.size() - 1;
  if (!decide(tau, sigma, candidate_probe(cand[hi])))
    throw InconsistentState("largest critical value does not decide true");
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (decide(tau, sigma, candidate_probe(cand[mid]))) hi = mid;
    else lo = mid + 1;
  }
  DistanceResult r;
  r.value = cand[lo];
  r.mode = DistanceMode::exact;
  r.upper_probe = candidate_probe(cand[lo]);
  if (lo > 0) r.lower_probe = candidate_probe(cand[lo - 1]);
  return r;
}

inline constexpr double kDefaultEps = 1e-9;

/// Bisection between the endpoint lower bound and the discrete distance.
/// `trace`, when given, receives every probed delta in order.
inline DistanceResult compute_bisect(const Curve& tau, const Curve& sigma, const Decider& decide,
                                     double eps = kDefaultEps, std::vector<double>* trace = nullptr) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  auto probe = [&](double d) {
    if (trace) trace->push_back(d);
    return decide(tau, sigma, d);
  };
  double lo = endpoint_lower_bound(tau, sigma);
  double hi = discrete_frechet(tau, sigma);
  DistanceResult r;
  r.mode = DistanceMode::bisection;
  if (probe(lo)) {
    r.value = r.upper_probe = lo;
    return r;
  }
  // d_F <= discrete distance; nudge past rounding at the boundary.
  while (!probe(hi)) hi += std::max(eps, hi * 1e-12);
  while (hi - lo > eps) {
    const double mid = lo + (hi - lo) / 2;
    if (probe(mid)) hi = mid;
    else lo = mid;
  }
  r.value = r.upper_probe = hi;
  r.lower_probe = lo;
  return r;
}

}  // namespace frechet
