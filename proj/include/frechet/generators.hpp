#pragma once

// Seeded instance generators. Same seed, same curve (for a fixed standard library).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "frechet/geometry.hpp"

namespace frechet::gen {

using Rng = std::mt19937_64;

/// n vertices, unit-length steps in uniformly random directions.
inline Curve random_walk(std::size_t n, std::size_t dim, Rng& rng) {
  if (n == 0 || dim == 0) throw std::invalid_argument("random_walk needs n >= 1 and dim >= 1");
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> flat(dim, 0.0);
  std::vector<double> step(dim);
  for (std::size_t i = 1; i < n; ++i) {
    double len = 0.0;
    while (!(len > 1e-9)) {
      len = 0.0;
      for (auto& s : step) {
        s = g(rng);
        len += s * s;
      }
      len = std::sqrt(len);
    }
    for (std::size_t k = 0; k < dim; ++k) flat.push_back(flat[(i - 1) * dim + k] + step[k] / len);
  }
  return Curve(dim, std::move(flat));
}

inline Curve random_walk(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return random_walk(n, dim, rng);
}

/// Every vertex moved by independent N(0, noise^2) offsets per coordinate.
inline Curve perturbed_copy(const Curve& c, double noise, Rng& rng) {
  if (noise < 0.0) throw std::invalid_argument("noise must be nonnegative");
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    auto flat = c.flat();
    for (auto& x : flat) x += noise * g(rng);
    try {
      return Curve(c.dim(), std::move(flat));
    } catch (const DegenerateInput&) {
      // two consecutive vertices collapsed; draw again
    }
  }
}

/// n vertices alternating between y = 0 and y = amplitude at unit x spacing,
/// padded with zeros beyond the second coordinate.
inline Curve zigzag(std::size_t n, double amplitude, std::size_t dim = 2) {
  if (n == 0 || dim < 2) throw std::invalid_argument("zigzag needs n >= 1 and dim >= 2");
  std::vector<double> flat(n * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    flat[i * dim] = static_cast<double>(i);
    flat[i * dim + 1] = (i % 2) ? amplitude : 0.0;
  }
  return Curve(dim, std::move(flat));
}

}  // namespace frechet::gen
