#pragma once

// 128-bit content digest (leading half of SHA-256) for memo keys.

#include <openssl/evp.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <memory>
#include <span>
#include <stdexcept>

namespace frechet {

struct Digest128 {
  std::array<std::uint64_t, 2> words{};
  bool operator==(const Digest128&) const = default;
};

namespace detail {

struct EvpState {
  EVP_MD* md = nullptr;
  EVP_MD_CTX* ctx = nullptr;

  EvpState() {
    md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
    ctx = EVP_MD_CTX_new();
    if (!md || !ctx) throw std::runtime_error("OpenSSL SHA-256 unavailable");
  }
  ~EvpState() {
    EVP_MD_CTX_free(ctx);
    EVP_MD_free(md);
  }
  EvpState(const EvpState&) = delete;
  EvpState& operator=(const EvpState&) = delete;
};

}  // namespace detail

inline Digest128 digest128(std::span<const std::byte> data) {
  thread_local detail::EvpState state;
  unsigned char out[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestInit_ex(state.ctx, state.md, nullptr) != 1 ||
      EVP_DigestUpdate(state.ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(state.ctx, out, &len) != 1 || len < 16)
    throw std::runtime_error("SHA-256 digest failed");
  Digest128 d;
  std::memcpy(d.words.data(), out, 16);
  return d;
}

}  // namespace frechet
