#pragma once

// Blocked decision procedure: the (n-1) x (m-1) table is cut into boxes of
// alpha tau edges by theta sigma edges. Each box maps its input codes to
// output codes through process_box, keyed by (signatures, input) in a memo
// table. Between boxes the frontier codes are re-expressed relative to the
// next block ("recoded") via their concrete start parameters.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "frechet/encoding.hpp"
#include "frechet/freespace.hpp"
#include "frechet/memo.hpp"

namespace frechet {

struct Partition {
  std::size_t alpha = 1;
  std::size_t theta = 1;
  std::vector<BlockSpec> row_blocks;  // over tau
  std::vector<BlockSpec> col_blocks;  // over sigma

  std::size_t box_count() const { return row_blocks.size() * col_blocks.size(); }
};

inline std::size_t default_alpha(std::size_t m) {
  const double lg = std::log2(static_cast<double>(m));
  const double lglg = std::log2(lg);
  if (!(lglg > 0.0)) return 2;
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(lg / lglg)));
}

inline std::size_t default_theta(std::size_t alpha) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(alpha)))));
}

namespace detail {

inline std::vector<BlockSpec> tile(std::size_t vertices, std::size_t width) {
  std::vector<BlockSpec> out;
  for (std::size_t first = 0; first + 1 < vertices; first += width)
    out.push_back({first, std::min(width, vertices - 1 - first)});
  return out;
}

}  // namespace detail

/// Tiles n tau vertices into blocks of alpha edges and m sigma vertices into
/// blocks of theta edges; consecutive blocks share one vertex and the last
/// block of each side may be narrower.
inline Partition make_partition(std::size_t n, std::size_t m, std::optional<std::size_t> alpha = {},
                                std::optional<std::size_t> theta = {}) {
  if (n < 2 || m < 2) throw std::invalid_argument("partition needs at least two vertices per curve");
  if ((alpha && *alpha < 1) || (theta && *theta < 1))
    throw std::invalid_argument("alpha and theta must be at least 1");
  Partition p;
  p.alpha = alpha.value_or(default_alpha(m));
  p.theta = theta.value_or(default_theta(p.alpha));
  if (p.alpha > 0x7fff || p.theta > 0x7fff) throw std::invalid_argument("block width too large");
  p.row_blocks = detail::tile(n, p.alpha);
  p.col_blocks = detail::tile(m, p.theta);
  return p;
}

/// A frontier entry: the code of an interval start relative to the current
/// block, plus the concrete block-entry start that gamma = 0 codes refer to.
struct CodedStart {
  ReachCode code;
  std::optional<double> carried;

  bool operator==(const CodedStart&) const = default;
};

/// Re-expresses one frontier entry relative to a new block, given both
/// blocks' intersections with the entry's edge.
inline CodedStart recode_start(const CodedStart& rec, std::span<const EdgeInterval> old_points,
                               std::span<const EdgeInterval> new_points) {
  const auto ell = decode_start(rec.code, old_points, rec.carried);
  const auto code = encode_start(ell, new_points);
  return {code, ell};
}

/// Recodes frontier entries for consecutive edges first_edge, first_edge+1,
/// ... of `edge_curve` from `old_block` to `new_block` of `block_curve`.
inline void recode_frontier(std::span<CodedStart> records, std::size_t first_edge,
                            const Curve& block_curve, const BlockSpec& old_block,
                            const BlockSpec& new_block, const Curve& edge_curve, double delta) {
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto old_pts = block_intersections(block_curve, old_block, edge_curve, first_edge + k, delta);
    const auto new_pts = block_intersections(block_curve, new_block, edge_curve, first_edge + k, delta);
    records[k] = recode_start(records[k], old_pts, new_pts);
  }
}

struct BoxedOptions {
  /// Recompute every memo hit (up to max_verified_hits) and require a
  /// bit-identical output.
  bool verify_hits = false;
  std::size_t max_verified_hits = std::numeric_limits<std::size_t>::max();
  /// Keep full signatures per digest and count digest collisions.
  bool audit_signatures = false;
};

struct BoxedResult {
  bool reachable = false;
  std::size_t boxes = 0;
  std::size_t lookups = 0;
  std::size_t verified_hits = 0;
};

class MemoMismatch : public InconsistentState {
 public:
  using InconsistentState::InconsistentState;
};

/// Decides d_F(tau, sigma) <= delta box by box. Gives the same answer as
/// naive_decide for every partition.
inline BoxedResult boxed_decide(const Curve& tau, const Curve& sigma, double delta,
                                const Partition& part, MemoTable& memo, const BoxedOptions& opts = {}) {
  detail::require_same_dim(tau, sigma);
  if (delta < 0.0) throw std::invalid_argument("delta must be nonnegative");
  if (auto r = detail::decide_point_curve(tau, sigma, delta)) return {*r, 0, 0, 0};
  const std::size_t n = tau.size();
  const std::size_t m = sigma.size();
  if (part.row_blocks.empty() || part.row_blocks.back().last() != n - 1 || part.col_blocks.empty() ||
      part.col_blocks.back().last() != m - 1)
    throw std::invalid_argument("partition does not match the curves");
  memo.bind(static_cast<std::uint32_t>(part.alpha), static_cast<std::uint32_t>(part.theta));

  BoxedResult result;
  const Frontier init = init_frontiers(tau, sigma, delta);
  auto start_of = [](const EdgeInterval& iv) -> std::optional<double> {
    return iv.is_null() ? std::nullopt : std::optional<double>(iv.lo);
  };

  // Horizontal frontier: one entry per sigma edge, relative to the current tau block.
  std::vector<CodedStart> horiz(m - 1);
  std::vector<std::vector<EdgeInterval>> col_pts(m - 1), prev_col_pts;
  std::vector<Signature> col_sigs(m - 1);

  for (std::size_t k = 0; k < part.row_blocks.size(); ++k) {
    const BlockSpec& rb = part.row_blocks[k];
    const auto tw = static_cast<std::uint32_t>(rb.width);
    prev_col_pts.swap(col_pts);
    col_pts.assign(m - 1, {});
    for (std::size_t j = 0; j + 1 < m; ++j) {
      col_pts[j] = block_intersections(tau, rb, sigma, j, delta);
      col_sigs[j] = signature_from_intervals(col_pts[j]);
      if (k == 0) {
        const auto ell = start_of(init.row_intervals[j]);
        horiz[j] = {encode_start(ell, col_pts[j]), ell};
      } else {
        horiz[j] = recode_start(horiz[j], prev_col_pts[j], col_pts[j]);
      }
    }

    // Vertical frontier: one entry per tau edge of this block row, relative
    // to the current sigma block.
    std::vector<CodedStart> vert(rb.width);
    std::vector<std::vector<EdgeInterval>> row_pts(rb.width), prev_row_pts;
    std::vector<Signature> row_sigs(rb.width);

    for (std::size_t l = 0; l < part.col_blocks.size(); ++l) {
      const BlockSpec& cb = part.col_blocks[l];
      const auto sw = static_cast<std::uint32_t>(cb.width);
      prev_row_pts.swap(row_pts);
      row_pts.assign(rb.width, {});
      for (std::size_t di = 0; di < rb.width; ++di) {
        const std::size_t i = rb.first + di;
        row_pts[di] = block_intersections(sigma, cb, tau, i, delta);
        row_sigs[di] = signature_from_intervals(row_pts[di]);
        if (l == 0) {
          const auto ell = start_of(init.col_intervals[i]);
          vert[di] = {encode_start(ell, row_pts[di]), ell};
        } else {
          vert[di] = recode_start(vert[di], prev_row_pts[di], row_pts[di]);
        }
      }

      BoxIO input{tw, sw, {}, {}};
      input.col_codes.reserve(cb.width);
      for (std::size_t dj = 0; dj < cb.width; ++dj) input.col_codes.push_back(horiz[cb.first + dj].code);
      for (const auto& r : vert) input.row_codes.push_back(r.code);

      const std::span<const Signature> box_col_sigs(col_sigs.data() + cb.first, cb.width);
      const std::span<const Signature> box_row_sigs(row_sigs);
      const auto sig_bytes = serialize_signatures(box_col_sigs, box_row_sigs);
      MemoKey key{digest128(sig_bytes), pack_box_io(input), static_cast<std::uint16_t>(tw),
                  static_cast<std::uint16_t>(sw)};
      if (opts.audit_signatures && !memo.audit_signature(key.signature_digest, sig_bytes))
        throw MemoMismatch("signature digest collision");

      ++result.boxes;
      ++result.lookups;
      BoxIO output;
      if (const BitString* hit = memo.lookup(key)) {
        output = unpack_box_io(*hit, tw, sw);
        if (opts.verify_hits && result.verified_hits < opts.max_verified_hits) {
          if (!(pack_box_io(process_box(input, box_col_sigs, box_row_sigs)) == *hit))
            throw MemoMismatch("memo hit differs from recomputed box output");
          ++result.verified_hits;
        }
      } else {
        output = process_box(input, box_col_sigs, box_row_sigs);
        memo.insert(std::move(key), pack_box_io(output));
      }

      // gamma = 0 outputs still refer to the entry start carried in; others
      // name a vertex of the block and carry nothing.
      for (std::size_t dj = 0; dj < cb.width; ++dj) {
        auto& rec = horiz[cb.first + dj];
        rec.code = output.col_codes[dj];
        if (rec.code.gamma != 0 || rec.code.is_null(tw)) rec.carried.reset();
      }
      for (std::size_t di = 0; di < rb.width; ++di) {
        auto& rec = vert[di];
        rec.code = output.row_codes[di];
        if (rec.code.gamma != 0 || rec.code.is_null(sw)) rec.carried.reset();
      }
    }
  }

  const auto& last_pts = col_pts[m - 2];
  const auto ell = decode_start(horiz[m - 2].code, last_pts, horiz[m - 2].carried);
  result.reachable = ell.has_value() && last_pts.back().hi == 1.0;
  return result;
}

}  // namespace frechet
