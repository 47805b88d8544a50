// frechet: decide / compute Fréchet distances between polygonal curves.
//
// Exit codes: 0 success, 1 "decide" answered false, 2 bad input or flags,
// 3 internal consistency failure (engine disagreement, memo mismatch).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frechet/bench.hpp"
#include "frechet/frechet.hpp"

namespace {

using namespace frechet;

constexpr int kExitFalse = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct EngineOpts {
  std::string engine = "naive";
  std::optional<std::size_t> alpha;
  std::optional<std::size_t> theta;
  std::string memo_path;
};

void add_engine_flags(CLI::App* cmd, EngineOpts& o) {
  cmd->add_option("--engine", o.engine, "Decision engine")->check(CLI::IsMember({"naive", "boxed"}));
  cmd->add_option("--alpha", o.alpha, "Tau edges per block (boxed engine)")->check(CLI::PositiveNumber);
  cmd->add_option("--theta", o.theta, "Sigma edges per block (boxed engine)")->check(CLI::PositiveNumber);
  cmd->add_option("--memo-persist", o.memo_path, "Load the memo table from PATH if present, save it back after");
}

// Boxed-engine state: the memo table is bound to one (alpha, theta).
struct BoxedEngine {
  Partition part;
  MemoTable memo;
  std::string path;

  BoxedEngine(const Curve& tau, const Curve& sigma, const EngineOpts& o)
      : part(make_partition(tau.size(), sigma.size(), o.alpha, o.theta)), path(o.memo_path) {
    const auto a = static_cast<std::uint32_t>(part.alpha);
    const auto t = static_cast<std::uint32_t>(part.theta);
    if (!path.empty() && std::filesystem::exists(path)) memo = MemoTable::load(path, a, t);
    else memo = MemoTable(a, t);
  }
  void persist() const {
    if (!path.empty()) memo.save(path);
  }
};

bool boxed_engine_usable(const Curve& tau, const Curve& sigma) { return tau.size() >= 2 && sigma.size() >= 2; }

void print_table(std::ostream& os, const FreeSpaceTable& t) {
  auto iv = [](const EdgeInterval& e) {
    return e.is_null() ? std::string("null") : "[" + format_double(e.lo) + ", " + format_double(e.hi) + "]";
  };
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = 0; j + 1 < t.m; ++j) os << "R " << i << ' ' << j << ' ' << iv(t.row(i, j)) << '\n';
  for (std::size_t j = 0; j < t.m; ++j)
    for (std::size_t i = 0; i + 1 < t.n; ++i) os << "R' " << j << ' ' << i << ' ' << iv(t.col(j, i)) << '\n';
}

const char* mode_name(DistanceMode m) { return m == DistanceMode::exact ? "exact" : "bisection"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fréchet distance toolkit"};
  app.require_subcommand(1);

  std::string tau_path, sigma_path;
  double delta = 0.0;
  double eps = kDefaultEps;
  bool exact = false, debug_table = false, json_out = false;
  EngineOpts eng;

  auto add_curves = [&](CLI::App* c) {
    c->add_option("tau", tau_path, "First curve file")->required()->check(CLI::ExistingFile);
    c->add_option("sigma", sigma_path, "Second curve file")->required()->check(CLI::ExistingFile);
  };

  auto* decide = app.add_subcommand("decide", "Is d_F(tau, sigma) <= delta? Prints true/false; exit 1 on false");
  add_curves(decide);
  decide->add_option("--delta", delta, "Distance threshold")->required()->check(CLI::NonNegativeNumber);
  decide->add_flag("--debug-table", debug_table, "Also print every reachability interval (naive table)");
  add_engine_flags(decide, eng);

  auto* compute = app.add_subcommand("compute", "Compute d_F(tau, sigma)");
  add_curves(compute);
  compute->add_option("--eps", eps, "Bisection tolerance")->check(CLI::PositiveNumber);
  compute->add_flag("--exact", exact, "Binary search over critical values instead of bisection");
  compute->add_flag("--json", json_out, "Print value, mode and bracketing probes as JSON");
  add_engine_flags(compute, eng);

  auto* discrete = app.add_subcommand("discrete", "Compute the discrete Fréchet distance");
  add_curves(discrete);

  std::string svg_path;
  auto* sig = app.add_subcommand("sig-dump", "Dump block signatures as JSON, optionally the free-space diagram as SVG");
  add_curves(sig);
  sig->add_option("--delta", delta, "Distance threshold")->required()->check(CLI::NonNegativeNumber);
  sig->add_option("--alpha", eng.alpha, "Tau edges per block")->check(CLI::PositiveNumber);
  sig->add_option("--theta", eng.theta, "Sigma edges per block")->check(CLI::PositiveNumber);
  sig->add_option("--svg", svg_path, "Write the free-space diagram to this file");

  bench::Config bcfg;
  std::string kind = "perturbed", out_path;
  auto* bench_cmd = app.add_subcommand("bench", "Naive vs boxed benchmark on seeded instances (JSON report)");
  bench_cmd->add_option("--seed", bcfg.seed, "RNG seed");
  bench_cmd->add_option("--instances", bcfg.instances, "Number of curve pairs");
  bench_cmd->add_option("--n", bcfg.n, "Vertices of tau")->check(CLI::Range(2, 1 << 24));
  bench_cmd->add_option("--m", bcfg.m, "Vertices of sigma")->check(CLI::Range(2, 1 << 24));
  bench_cmd->add_option("--dim", bcfg.dim, "Dimension")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--kind", kind, "Instance generator")->check(CLI::IsMember({"walk", "perturbed", "zigzag"}));
  bench_cmd->add_option("--noise", bcfg.noise, "Gaussian noise of perturbed copies")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--factors", bcfg.delta_factors, "delta as multiples of the discrete distance");
  bench_cmd->add_option("--alpha", bcfg.alpha, "Tau edges per block")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--theta", bcfg.theta, "Sigma edges per block")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--timings", bcfg.timings, "Include wall times (makes the report non-reproducible)");
  bench_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

  std::uint64_t seed = 1;
  std::size_t gen_n = 10, gen_dim = 2;
  double noise = 0.1, amplitude = 1.0;
  std::string base_path;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a curve file");
  gen_cmd->add_option("--kind", kind, "walk, perturbed (needs --base) or zigzag")
      ->check(CLI::IsMember({"walk", "perturbed", "zigzag"}));
  gen_cmd->add_option("--seed", seed, "RNG seed");
  gen_cmd->add_option("--n", gen_n, "Vertex count")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--dim", gen_dim, "Dimension")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--noise", noise, "Gaussian noise for perturbed copies")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--amplitude", amplitude, "Zigzag amplitude");
  gen_cmd->add_option("--base", base_path, "Curve to perturb")->check(CLI::ExistingFile);
  gen_cmd->add_option("--out", out_path, "Write the curve here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*decide) {
      const Curve tau = parse_curve_file(tau_path);
      const Curve sigma = parse_curve_file(sigma_path);
      bool answer;
      if (eng.engine == "boxed" && boxed_engine_usable(tau, sigma)) {
        BoxedEngine be(tau, sigma, eng);
        answer = boxed_decide(tau, sigma, delta, be.part, be.memo).reachable;
        be.persist();
      } else {
        answer = naive_decide(tau, sigma, delta).reachable;
      }
      std::cout << (answer ? "true" : "false") << '\n';
      if (debug_table) {
        const auto d = naive_decide(tau, sigma, delta, true);
        if (d.table) print_table(std::cout, *d.table);
      }
      return answer ? 0 : kExitFalse;
    }

    if (*compute) {
      const Curve tau = parse_curve_file(tau_path);
      const Curve sigma = parse_curve_file(sigma_path);
      std::optional<BoxedEngine> be;
      Decider decider = naive_decider();
      if (eng.engine == "boxed" && boxed_engine_usable(tau, sigma)) {
        be.emplace(tau, sigma, eng);
        decider = [&be](const Curve& a, const Curve& b, double d) {
          return boxed_decide(a, b, d, be->part, be->memo).reachable;
        };
      }
      const DistanceResult r = exact ? compute_exact(tau, sigma, decider) : compute_bisect(tau, sigma, decider, eps);
      if (be) be->persist();
      if (json_out) {
        nlohmann::ordered_json j = {{"value", r.value}, {"mode", mode_name(r.mode)}};
        j["lower_probe"] = r.lower_probe ? nlohmann::ordered_json(*r.lower_probe) : nlohmann::ordered_json(nullptr);
        j["upper_probe"] = r.upper_probe;
        std::cout << j.dump() << '\n';
      } else {
        std::cout << format_double(r.value) << '\n';
      }
      return 0;
    }

    if (*discrete) {
      const Curve tau = parse_curve_file(tau_path);
      const Curve sigma = parse_curve_file(sigma_path);
      std::cout << format_double(discrete_frechet(tau, sigma)) << '\n';
      return 0;
    }

    if (*sig) {
      const Curve tau = parse_curve_file(tau_path);
      const Curve sigma = parse_curve_file(sigma_path);
      detail::require_same_dim(tau, sigma);
      if (tau.size() < 2 || sigma.size() < 2) throw std::invalid_argument("sig-dump needs at least one edge per curve");
      const Partition part = make_partition(tau.size(), sigma.size(), eng.alpha, eng.theta);
      using J = nlohmann::ordered_json;
      auto sig_list = [&](const Curve& block_curve, const std::vector<BlockSpec>& blocks, const Curve& edge_curve) {
        J out = J::array();
        for (const auto& b : blocks) {
          J edges = J::array();
          for (std::size_t e = 0; e + 1 < edge_curve.size(); ++e)
            edges.push_back({{"edge", e}, {"ranks", compute_signature(block_curve, b, edge_curve, e, delta).ranks}});
          out.push_back({{"first", b.first}, {"width", b.width}, {"signatures", edges}});
        }
        return out;
      };
      J j = {{"delta", delta},
             {"alpha", part.alpha},
             {"theta", part.theta},
             {"tau_blocks", sig_list(tau, part.row_blocks, sigma)},
             {"sigma_blocks", sig_list(sigma, part.col_blocks, tau)}};
      std::cout << j.dump(2) << '\n';
      if (!svg_path.empty()) {
        std::ofstream os(svg_path);
        if (!os) throw std::invalid_argument("cannot write " + svg_path);
        write_freespace_svg(os, tau, sigma, delta);
      }
      return 0;
    }

    if (*bench_cmd) {
      bcfg.kind = kind == "walk" ? bench::Kind::walk : kind == "zigzag" ? bench::Kind::zigzag : bench::Kind::perturbed;
      const auto rep = bench::run(bcfg);
      const std::string text = bench::to_json(rep).dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw std::invalid_argument("cannot write " + out_path);
        os << text;
      }
      return 0;
    }

    if (*gen_cmd) {
      gen::Rng rng(seed);
      Curve c;
      if (kind == "walk") {
        c = gen::random_walk(gen_n, gen_dim, rng);
      } else if (kind == "zigzag") {
        c = gen::zigzag(gen_n, amplitude, std::max<std::size_t>(gen_dim, 2));
      } else {
        if (base_path.empty()) throw std::invalid_argument("gen --kind perturbed needs --base");
        c = gen::perturbed_copy(parse_curve_file(base_path), noise, rng);
      }
      if (out_path.empty()) {
        write_curve(std::cout, c);
      } else {
        std::ofstream os(out_path);
        if (!os) throw std::invalid_argument("cannot write " + out_path);
        write_curve(os, c);
      }
      return 0;
    }
  } catch (const bench::AgreementFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const InconsistentState& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
