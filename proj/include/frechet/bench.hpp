#pragma once

// Benchmark harness: seeded instances, naive vs boxed decisions, memo
// statistics. The report is a pure function of the config unless timings
// are requested.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "frechet/blocked.hpp"
#include "frechet/curve_io.hpp"
#include "frechet/distance.hpp"
#include "frechet/freespace.hpp"
#include "frechet/generators.hpp"

namespace frechet::bench {

enum class Kind { walk, perturbed, zigzag };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::walk: return "walk";
    case Kind::perturbed: return "perturbed";
    case Kind::zigzag: return "zigzag";
  }
  return "?";
}

struct Config {
  std::uint64_t seed = 1;
  std::size_t instances = 5;
  std::size_t n = 200;
  std::size_t m = 200;
  std::size_t dim = 2;
  Kind kind = Kind::perturbed;
  double noise = 0.1;
  std::vector<double> delta_factors{0.5, 1.0, 2.0};
  std::optional<std::size_t> alpha;
  std::optional<std::size_t> theta;
  bool timings = false;
};

class AgreementFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Row {
  std::size_t instance = 0;
  std::size_t n = 0, m = 0;
  double delta = 0.0;
  bool naive = false, boxed = false;
  std::size_t boxes = 0, lookups = 0, hits = 0, misses = 0, entries = 0;
  double naive_ms = 0.0, boxed_ms = 0.0;
};

struct Report {
  Config config;
  std::size_t alpha = 0, theta = 0;
  std::vector<Row> rows;

  std::size_t total_lookups() const {
    std::size_t s = 0;
    for (const auto& r : rows) s += r.lookups;
    return s;
  }
  std::size_t total_hits() const {
    std::size_t s = 0;
    for (const auto& r : rows) s += r.hits;
    return s;
  }
  double hit_rate() const {
    const auto l = total_lookups();
    return l ? static_cast<double>(total_hits()) / static_cast<double>(l) : 0.0;
  }
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2.0;
}

template <typename F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

inline std::pair<Curve, Curve> make_instance(const Config& cfg, gen::Rng& rng) {
  switch (cfg.kind) {
    case Kind::walk: {
      auto a = gen::random_walk(cfg.n, cfg.dim, rng);
      auto b = gen::random_walk(cfg.m, cfg.dim, rng);
      return {std::move(a), std::move(b)};
    }
    case Kind::perturbed: {
      auto a = gen::random_walk(cfg.n, cfg.dim, rng);
      auto b = gen::perturbed_copy(a, cfg.noise, rng);
      return {std::move(a), std::move(b)};
    }
    case Kind::zigzag: {
      auto a = gen::zigzag(cfg.n, 1.0, std::max<std::size_t>(cfg.dim, 2));
      auto b = gen::perturbed_copy(gen::zigzag(cfg.m, 1.0, std::max<std::size_t>(cfg.dim, 2)), cfg.noise, rng);
      return {std::move(a), std::move(b)};
    }
  }
  throw std::invalid_argument("unknown instance kind");
}

/// Runs the benchmark. Throws AgreementFailure on the first instance where
/// the two engines disagree. One memo table is shared by all instances.
inline Report run(const Config& cfg) {
  if (cfg.n < 2 || cfg.m < 2) throw std::invalid_argument("bench needs n, m >= 2");
  gen::Rng rng(cfg.seed);
  const Partition shape = make_partition(cfg.n, cfg.m, cfg.alpha, cfg.theta);
  MemoTable memo(static_cast<std::uint32_t>(shape.alpha), static_cast<std::uint32_t>(shape.theta));
  Report rep;
  rep.config = cfg;
  rep.alpha = shape.alpha;
  rep.theta = shape.theta;

  for (std::size_t k = 0; k < cfg.instances; ++k) {
    const auto [tau, sigma] = make_instance(cfg, rng);
    const Partition part = make_partition(tau.size(), sigma.size(), shape.alpha, shape.theta);
    const double base = discrete_frechet(tau, sigma);
    for (double f : cfg.delta_factors) {
      Row row;
      row.instance = k;
      row.n = tau.size();
      row.m = sigma.size();
      row.delta = f * base;
      const auto before = memo.stats();
      BoxedResult br;
      row.naive_ms = detail::time_ms([&] { row.naive = naive_decide(tau, sigma, row.delta).reachable; });
      row.boxed_ms = detail::time_ms([&] { br = boxed_decide(tau, sigma, row.delta, part, memo); });
      row.boxed = br.reachable;
      const auto after = memo.stats();
      row.boxes = br.boxes;
      row.lookups = br.lookups;
      row.hits = after.hits - before.hits;
      row.misses = after.misses - before.misses;
      row.entries = after.entries;
      if (row.naive != row.boxed)
        throw AgreementFailure("naive and boxed engines disagree on instance " + std::to_string(k) +
                               " at delta " + format_double(row.delta));
      rep.rows.push_back(row);
    }
  }
  return rep;
}

inline nlohmann::ordered_json to_json(const Report& rep) {
  using J = nlohmann::ordered_json;
  const auto& c = rep.config;
  J cfg = {{"seed", c.seed},     {"instances", c.instances}, {"n", c.n},         {"m", c.m},
           {"dim", c.dim},       {"kind", to_string(c.kind)}, {"noise", c.noise}, {"delta_factors", c.delta_factors},
           {"alpha", rep.alpha}, {"theta", rep.theta}};
  J rows = J::array();
  std::vector<double> naive_ms, boxed_ms;
  std::size_t agree = 0;
  for (const auto& r : rep.rows) {
    J row = {{"instance", r.instance}, {"n", r.n},          {"m", r.m},
             {"delta", r.delta},       {"naive", r.naive},  {"boxed", r.boxed},
             {"agree", r.naive == r.boxed}, {"boxes", r.boxes}, {"lookups", r.lookups},
             {"hits", r.hits},         {"misses", r.misses}, {"memo_entries", r.entries}};
    if (c.timings) {
      row["naive_ms"] = r.naive_ms;
      row["boxed_ms"] = r.boxed_ms;
    }
    agree += r.naive == r.boxed;
    naive_ms.push_back(r.naive_ms);
    boxed_ms.push_back(r.boxed_ms);
    rows.push_back(std::move(row));
  }
  J agg = {{"decisions", rep.rows.size()},
           {"agreements", agree},
           {"lookups", rep.total_lookups()},
           {"hits", rep.total_hits()},
           {"hit_rate", rep.hit_rate()}};
  if (c.timings) {
    agg["median_naive_ms"] = detail::median(naive_ms);
    agg["median_boxed_ms"] = detail::median(boxed_ms);
  }
  return J{{"config", cfg}, {"rows", rows}, {"aggregate", agg}};
}

}  // namespace frechet::bench
