#pragma once

// Combinatorial encodings used by the blocked decision procedure.
//
// A block is a run of `width` consecutive edges of one curve (vertices
// first .. first + width). For an edge of the other curve, the block's
// vertex balls cut out 2(width + 1) endpoints; the signature of that edge
// is the rank of each endpoint in the shared endpoint order.
//
// A reachability interval whose owning vertex lies in the block is encoded
// by the start of the interval only (its end is always the owning ball's
// end) as a ReachCode (pi, beta, gamma):
//   gamma in [1, width + 1]  start is the start of vertex first + gamma - 1
//   gamma = 0                start is the block-entry start; pi is the rank
//                            of its predecessor, beta flags equality
//   pi = sentinel            interval is null
// Fields that carry no information are zero so that equal codes pack to
// equal bits.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frechet/geometry.hpp"

namespace frechet {

struct BlockSpec {
  std::size_t first = 0;
  std::size_t width = 1;

  std::size_t last() const { return first + width; }
  bool operator==(const BlockSpec&) const = default;
};

struct Signature {
  std::uint32_t width = 0;
  std::vector<std::uint16_t> ranks;  // 2 * (width + 1): start, end per vertex

  std::uint16_t start_rank(std::size_t offset) const { return ranks[2 * offset]; }
  std::uint16_t end_rank(std::size_t offset) const { return ranks[2 * offset + 1]; }
  bool operator==(const Signature&) const = default;
};

struct ReachCode {
  std::uint16_t pi = 0;
  std::uint8_t beta = 0;
  std::uint16_t gamma = 0;

  static ReachCode null(std::uint32_t width) {
    return {static_cast<std::uint16_t>(sentinel_rank(width)), 0, 0};
  }
  static ReachCode vertex_start(std::uint32_t gamma) {
    return {0, 0, static_cast<std::uint16_t>(gamma)};
  }
  bool is_null(std::uint32_t width) const { return pi == sentinel_rank(width); }
  bool operator==(const ReachCode&) const = default;
};

/// Codes on the boundary of one box. `col_codes` encode R_a[j] for the box's
/// sigma edges relative to the tau block (width `tau_width`); `row_codes`
/// encode R'_b[i] for the box's tau edges relative to the sigma block
/// (width `sigma_width`).
struct BoxIO {
  std::uint32_t tau_width = 0;
  std::uint32_t sigma_width = 0;
  std::vector<ReachCode> col_codes;  // sigma_width entries
  std::vector<ReachCode> row_codes;  // tau_width entries

  bool operator==(const BoxIO&) const = default;
};

// ---------------------------------------------------------------------------
// Signatures

/// Ball intersections of the block's vertices with edge `edge` of `edge_curve`.
inline std::vector<EdgeInterval> block_intersections(const Curve& block_curve, const BlockSpec& block,
                                                     const Curve& edge_curve, std::size_t edge,
                                                     double delta) {
  std::vector<EdgeInterval> out;
  out.reserve(block.width + 1);
  for (std::size_t v = block.first; v <= block.last(); ++v)
    out.push_back(vertex_edge_interval(block_curve, v, edge_curve, edge, delta));
  return out;
}

inline Signature signature_from_intervals(std::span<const EdgeInterval> points) {
  const auto width = static_cast<std::uint32_t>(points.size() - 1);
  Signature sig{width, std::vector<std::uint16_t>(2 * points.size(),
                                                  static_cast<std::uint16_t>(sentinel_rank(width)))};
  std::vector<EndpointKey> keys;
  keys.reserve(2 * points.size());
  for (std::uint32_t v = 0; v < points.size(); ++v) {
    if (points[v].is_null()) continue;
    keys.push_back({points[v].lo, EndpointKind::start, v});
    keys.push_back({points[v].hi, EndpointKind::end, v});
  }
  std::sort(keys.begin(), keys.end());
  for (std::size_t r = 0; r < keys.size(); ++r) {
    const auto& k = keys[r];
    sig.ranks[2 * k.vertex + static_cast<std::size_t>(k.kind)] = static_cast<std::uint16_t>(r + 1);
  }
  return sig;
}

/// Signature of edge `edge` of `edge_curve` relative to `block` of `block_curve`.
inline Signature compute_signature(const Curve& block_curve, const BlockSpec& block,
                                   const Curve& edge_curve, std::size_t edge, double delta) {
  return signature_from_intervals(block_intersections(block_curve, block, edge_curve, edge, delta));
}

// ---------------------------------------------------------------------------
// Start encoding

/// Encodes a block-entry start parameter (or null) relative to the block
/// whose intersections with this edge are `points`. Always yields gamma = 0.
inline ReachCode encode_start(std::optional<double> ell, std::span<const EdgeInterval> points) {
  const auto width = static_cast<std::uint32_t>(points.size() - 1);
  if (!ell) return ReachCode::null(width);
  const auto pred = predecessor_rank(*ell, points);
  if (pred.rank == 0 || pred.rank == sentinel_rank(width))
    throw InconsistentState("reachable start has no predecessor in its block");
  return {static_cast<std::uint16_t>(pred.rank), static_cast<std::uint8_t>(pred.is_equal), 0};
}

/// Recovers the start parameter of a coded interval. `carried` is the
/// concrete block-entry start that gamma = 0 codes refer to.
inline std::optional<double> decode_start(const ReachCode& code, std::span<const EdgeInterval> points,
                                          std::optional<double> carried) {
  const auto width = static_cast<std::uint32_t>(points.size() - 1);
  if (code.is_null(width)) return std::nullopt;
  if (code.gamma == 0) {
    if (!carried) throw InconsistentState("gamma = 0 code without a carried start");
    return carried;
  }
  if (code.gamma > width + 1) throw InconsistentState("gamma out of range");
  const auto& iv = points[code.gamma - 1];
  if (iv.is_null()) throw InconsistentState("code points at a null intersection");
  return iv.lo;
}

// ---------------------------------------------------------------------------
// Propagation on codes

namespace detail {

// Mirror of the interval rule on ranks. `offset` is the position of the
// interval's owning vertex inside the block, so the next vertex sits at
// offset + 1. A start coded by gamma sits at the rank of that vertex's
// start; a gamma = 0 start sits just after its predecessor rank pi.
inline ReachCode advance_code(const ReachCode& self, bool other_reachable, const Signature& sig,
                              std::size_t offset) {
  const std::uint32_t width = sig.width;
  const auto sentinel = static_cast<std::uint16_t>(sentinel_rank(width));
  const std::uint16_t s_next = sig.start_rank(offset + 1);
  const auto next_start = ReachCode::vertex_start(static_cast<std::uint32_t>(offset + 2));

  if (other_reachable) return s_next == sentinel ? ReachCode::null(width) : next_start;
  if (self.pi == sentinel || s_next == sentinel) return ReachCode::null(width);

  const std::uint16_t at = self.gamma == 0 ? self.pi : sig.start_rank(self.gamma - 1u);
  if (s_next > at) return next_start;
  if (sig.end_rank(offset + 1) > at) return self;
  return ReachCode::null(width);
}

}  // namespace detail

/// Code form of one cell step. `col_code` encodes R_i[j] against the tau
/// block (signature `col_sig` of edge j), `row_code` encodes R'_j[i] against
/// the sigma block (signature `row_sig` of edge i). Offsets locate the cell
/// inside the box. Returns the codes of (R_{i+1}[j], R'_{j+1}[i]).
inline std::pair<ReachCode, ReachCode> propagate_code_cell(const ReachCode& col_code,
                                                           const ReachCode& row_code,
                                                           const Signature& col_sig,
                                                           const Signature& row_sig,
                                                           std::size_t i_offset,
                                                           std::size_t j_offset) {
  const bool col_reachable = !col_code.is_null(col_sig.width);
  const bool row_reachable = !row_code.is_null(row_sig.width);
  return {detail::advance_code(col_code, row_reachable, col_sig, i_offset),
          detail::advance_code(row_code, col_reachable, row_sig, j_offset)};
}

/// Output codes of a box from its input codes and signatures alone.
/// `col_sigs` has one signature per sigma edge of the box (relative to the
/// tau block) and `row_sigs` one per tau edge (relative to the sigma block).
inline BoxIO process_box(const BoxIO& input, std::span<const Signature> col_sigs,
                         std::span<const Signature> row_sigs) {
  if (col_sigs.size() != input.sigma_width || row_sigs.size() != input.tau_width ||
      input.col_codes.size() != input.sigma_width || input.row_codes.size() != input.tau_width)
    throw std::invalid_argument("box signatures do not match the box shape");
  BoxIO out = input;
  for (std::size_t i = 0; i < input.tau_width; ++i) {
    ReachCode row = out.row_codes[i];
    for (std::size_t j = 0; j < input.sigma_width; ++j)
      std::tie(out.col_codes[j], row) =
          propagate_code_cell(out.col_codes[j], row, col_sigs[j], row_sigs[i], i, j);
    out.row_codes[i] = row;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bit packing

class BitString {
 public:
  BitString() = default;
  BitString(std::vector<std::uint64_t> words, std::size_t bits) : words_(std::move(words)), bits_(bits) {
    if (words_.size() != (bits_ + 63) / 64) throw std::invalid_argument("bit length does not match words");
  }

  void push(std::uint64_t value, unsigned nbits) {
    for (unsigned b = 0; b < nbits; ++b) {
      if (bits_ % 64 == 0) words_.push_back(0);
      if ((value >> b) & 1u) words_.back() |= std::uint64_t{1} << (bits_ % 64);
      ++bits_;
    }
  }

  std::uint64_t read(std::size_t pos, unsigned nbits) const {
    std::uint64_t v = 0;
    for (unsigned b = 0; b < nbits; ++b) {
      const std::size_t p = pos + b;
      if ((words_[p / 64] >> (p % 64)) & 1u) v |= std::uint64_t{1} << b;
    }
    return v;
  }

  std::size_t size() const { return bits_; }
  const std::vector<std::uint64_t>& words() const { return words_; }
  bool operator==(const BitString&) const = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t bits_ = 0;
};

/// Field widths of one packed ReachCode for a block of `width` edges.
struct CodeLayout {
  unsigned pi_bits;
  unsigned gamma_bits;

  static CodeLayout for_width(std::uint32_t width) {
    return {static_cast<unsigned>(std::bit_width(sentinel_rank(width))),
            static_cast<unsigned>(std::bit_width(width + 1u))};
  }
  unsigned code_bits() const { return pi_bits + 1 + gamma_bits; }
};

inline constexpr std::uint32_t kCodeLayoutVersion = 1;

/// Column codes then row codes; each code is pi, beta, gamma with the least
/// significant bit first.
inline BitString pack_box_io(const BoxIO& io) {
  BitString bits;
  auto put = [&](const ReachCode& c, const CodeLayout& l) {
    bits.push(c.pi, l.pi_bits);
    bits.push(c.beta, 1);
    bits.push(c.gamma, l.gamma_bits);
  };
  const auto tau_layout = CodeLayout::for_width(io.tau_width);
  const auto sigma_layout = CodeLayout::for_width(io.sigma_width);
  for (const auto& c : io.col_codes) put(c, tau_layout);
  for (const auto& c : io.row_codes) put(c, sigma_layout);
  return bits;
}

inline std::size_t packed_box_bits(std::uint32_t tau_width, std::uint32_t sigma_width) {
  return sigma_width * CodeLayout::for_width(tau_width).code_bits() +
         tau_width * CodeLayout::for_width(sigma_width).code_bits();
}

inline BoxIO unpack_box_io(const BitString& bits, std::uint32_t tau_width, std::uint32_t sigma_width) {
  if (bits.size() != packed_box_bits(tau_width, sigma_width))
    throw std::invalid_argument("packed box encoding has the wrong length");
  BoxIO io{tau_width, sigma_width, {}, {}};
  std::size_t pos = 0;
  auto get = [&](std::uint32_t width) {
    const auto l = CodeLayout::for_width(width);
    ReachCode c;
    c.pi = static_cast<std::uint16_t>(bits.read(pos, l.pi_bits));
    pos += l.pi_bits;
    c.beta = static_cast<std::uint8_t>(bits.read(pos, 1));
    pos += 1;
    c.gamma = static_cast<std::uint16_t>(bits.read(pos, l.gamma_bits));
    pos += l.gamma_bits;
    if (c.pi > sentinel_rank(width) || c.gamma > width + 1)
      throw std::invalid_argument("packed code field out of range");
    return c;
  };
  for (std::uint32_t j = 0; j < sigma_width; ++j) io.col_codes.push_back(get(tau_width));
  for (std::uint32_t i = 0; i < tau_width; ++i) io.row_codes.push_back(get(sigma_width));
  return io;
}

}  // namespace frechet

template <>
struct std::hash<frechet::BitString> {
  std::size_t operator()(const frechet::BitString& b) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ b.size();
    for (auto w : b.words()) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};
