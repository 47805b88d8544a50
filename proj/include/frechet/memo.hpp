#pragma once

// Memo table mapping (box signature digest, packed input codes, box shape)
// to packed output codes, with optional on-disk persistence.
//
// File layout (all integers little-endian):
//   magic "FRMEMO\0\1"        8 bytes
//   format version            u32
//   code layout version       u32
//   alpha, theta              u32, u32
//   entry count               u64
//   entries:
//     digest                  16 bytes
//     tau_width, sigma_width  u16, u16
//     input bits, words       u32, u64 * ceil(bits / 64)
//     output bits, words      u32, u64 * ceil(bits / 64)

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "frechet/digest.hpp"
#include "frechet/encoding.hpp"

namespace frechet {

class MemoFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MemoKey {
  Digest128 signature_digest;
  BitString input;
  std::uint16_t tau_width = 0;
  std::uint16_t sigma_width = 0;

  bool operator==(const MemoKey&) const = default;
};

struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.signature_digest.words[0]);
    h ^= std::hash<BitString>{}(k.input) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= (std::size_t{k.tau_width} << 16) | k.sigma_width;
    return h;
  }
};

struct MemoStats {
  std::size_t entries = 0;
  std::size_t hits = 0;
  std::size_t misses = 0;

  bool operator==(const MemoStats&) const = default;
};

/// Serialized box signature: widths, then every column signature, then every
/// row signature, ranks as u16 little-endian.
inline std::vector<std::byte> serialize_signatures(std::span<const Signature> col_sigs,
                                                   std::span<const Signature> row_sigs) {
  std::vector<std::byte> out;
  auto put16 = [&](std::uint32_t v) {
    out.push_back(static_cast<std::byte>(v & 0xffu));
    out.push_back(static_cast<std::byte>((v >> 8) & 0xffu));
  };
  put16(static_cast<std::uint32_t>(col_sigs.size()));
  put16(static_cast<std::uint32_t>(row_sigs.size()));
  for (auto sigs : {col_sigs, row_sigs})
    for (const auto& s : sigs) {
      put16(s.width);
      for (auto r : s.ranks) put16(r);
    }
  return out;
}

/// Exclusive single-threaded memo table. Share one per thread.
class MemoTable {
 public:
  MemoTable() = default;
  MemoTable(std::uint32_t alpha, std::uint32_t theta) : alpha_(alpha), theta_(theta) {}

  const BitString* lookup(const MemoKey& key) {
    auto it = map_.find(key);
    if (it == map_.end()) {
      ++stats_.misses;
      return nullptr;
    }
    ++stats_.hits;
    return &it->second;
  }

  /// Inserts if absent; an existing value is left untouched.
  void insert(MemoKey key, BitString value) {
    map_.try_emplace(std::move(key), std::move(value));
  }

  /// Records the full serialized signature behind a digest and reports
  /// whether it matches one previously recorded under the same digest.
  bool audit_signature(const Digest128& d, const std::vector<std::byte>& full) {
    auto [it, inserted] = audit_.try_emplace(d, full);
    if (!inserted && it->second != full) {
      ++collisions_;
      return false;
    }
    return true;
  }

  MemoStats stats() const { return {map_.size(), stats_.hits, stats_.misses}; }
  std::size_t collisions() const { return collisions_; }
  void reset_counters() { stats_ = {}; }
  void clear() {
    map_.clear();
    audit_.clear();
    stats_ = {};
    collisions_ = 0;
  }

  std::uint32_t alpha() const { return alpha_; }
  std::uint32_t theta() const { return theta_; }
  /// Binds an unconfigured table to a partition; a configured table must match.
  void bind(std::uint32_t alpha, std::uint32_t theta) {
    if (alpha_ == 0 && theta_ == 0 && map_.empty()) {
      alpha_ = alpha;
      theta_ = theta;
      return;
    }
    if (alpha_ != alpha || theta_ != theta)
      throw std::invalid_argument("memo table was built for a different (alpha, theta)");
  }

  void save(const std::string& path) const;
  static MemoTable load(const std::string& path, std::uint32_t alpha, std::uint32_t theta);

 private:
  struct DigestHash {
    std::size_t operator()(const Digest128& d) const noexcept {
      return static_cast<std::size_t>(d.words[0] ^ d.words[1]);
    }
  };

  std::uint32_t alpha_ = 0;
  std::uint32_t theta_ = 0;
  std::unordered_map<MemoKey, BitString, MemoKeyHash> map_;
  std::unordered_map<Digest128, std::vector<std::byte>, DigestHash> audit_;
  MemoStats stats_;
  std::size_t collisions_ = 0;
};

namespace detail {

inline constexpr char kMemoMagic[8] = {'F', 'R', 'M', 'E', 'M', 'O', '\0', '\1'};
inline constexpr std::uint32_t kMemoFormatVersion = 1;

template <typename T>
void write_le(std::ostream& os, T v) {
  for (std::size_t b = 0; b < sizeof(T); ++b) os.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * b)) & 0xffu));
}

template <typename T>
T read_le(std::istream& is) {
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw MemoFormatError("truncated memo file");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return static_cast<T>(v);
}

inline void write_bits(std::ostream& os, const BitString& b) {
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(b.size()));
  for (auto w : b.words()) write_le<std::uint64_t>(os, w);
}

inline BitString read_bits(std::istream& is) {
  const auto bits = read_le<std::uint32_t>(is);
  std::vector<std::uint64_t> words((bits + 63) / 64);
  for (auto& w : words) w = read_le<std::uint64_t>(is);
  return BitString(std::move(words), bits);
}

}  // namespace detail

inline void MemoTable::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(detail::kMemoMagic, sizeof detail::kMemoMagic);
  detail::write_le<std::uint32_t>(os, detail::kMemoFormatVersion);
  detail::write_le<std::uint32_t>(os, kCodeLayoutVersion);
  detail::write_le<std::uint32_t>(os, alpha_);
  detail::write_le<std::uint32_t>(os, theta_);
  detail::write_le<std::uint64_t>(os, map_.size());

  // Sorted so the file is a function of the table contents only.
  std::vector<const std::pair<const MemoKey, BitString>*> entries;
  entries.reserve(map_.size());
  for (const auto& kv : map_) entries.push_back(&kv);
  std::sort(entries.begin(), entries.end(), [](auto* x, auto* y) {
    const auto& a = x->first;
    const auto& b = y->first;
    if (a.signature_digest.words != b.signature_digest.words)
      return a.signature_digest.words < b.signature_digest.words;
    if (a.tau_width != b.tau_width) return a.tau_width < b.tau_width;
    if (a.sigma_width != b.sigma_width) return a.sigma_width < b.sigma_width;
    if (a.input.size() != b.input.size()) return a.input.size() < b.input.size();
    return a.input.words() < b.input.words();
  });
  for (const auto* kv : entries) {
    const auto& k = kv->first;
    detail::write_le<std::uint64_t>(os, k.signature_digest.words[0]);
    detail::write_le<std::uint64_t>(os, k.signature_digest.words[1]);
    detail::write_le<std::uint16_t>(os, k.tau_width);
    detail::write_le<std::uint16_t>(os, k.sigma_width);
    detail::write_bits(os, k.input);
    detail::write_bits(os, kv->second);
  }
  if (!os) throw std::runtime_error("failed writing " + path);
}

inline MemoTable MemoTable::load(const std::string& path, std::uint32_t alpha, std::uint32_t theta) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || !std::equal(magic, magic + 8, detail::kMemoMagic)) throw MemoFormatError("not a memo file: " + path);
  if (detail::read_le<std::uint32_t>(is) != detail::kMemoFormatVersion)
    throw MemoFormatError("unsupported memo file version");
  if (detail::read_le<std::uint32_t>(is) != kCodeLayoutVersion)
    throw MemoFormatError("memo file uses a different code layout version");
  const auto file_alpha = detail::read_le<std::uint32_t>(is);
  const auto file_theta = detail::read_le<std::uint32_t>(is);
  if (file_alpha != alpha || file_theta != theta)
    throw MemoFormatError("memo file was built for alpha=" + std::to_string(file_alpha) +
                          ", theta=" + std::to_string(file_theta));
  MemoTable t(alpha, theta);
  const auto count = detail::read_le<std::uint64_t>(is);
  for (std::uint64_t e = 0; e < count; ++e) {
    MemoKey k;
    k.signature_digest.words[0] = detail::read_le<std::uint64_t>(is);
    k.signature_digest.words[1] = detail::read_le<std::uint64_t>(is);
    k.tau_width = detail::read_le<std::uint16_t>(is);
    k.sigma_width = detail::read_le<std::uint16_t>(is);
    k.input = detail::read_bits(is);
    auto value = detail::read_bits(is);
    if (k.input.size() != packed_box_bits(k.tau_width, k.sigma_width) ||
        value.size() != k.input.size())
      throw MemoFormatError("memo entry has inconsistent lengths");
    t.map_.emplace(std::move(k), std::move(value));
  }
  return t;
}

}  // namespace frechet
