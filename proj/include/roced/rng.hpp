#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace roced {

using Engine = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent child seeds so that
// no RNG state is shared between members, folds or experiment cells.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t salt) noexcept {
  return mix64(parent ^ mix64(salt + 0x632be59bd9b4e019ULL));
}

// FNV-1a, 64 bit.
class Fnv1a {
 public:
  void update(const void* data, std::size_t bytes) noexcept {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  template <typename T>
  void update_value(const T& v) noexcept {
    update(&v, sizeof(T));
  }
  void update(std::string_view s) noexcept { update(s.data(), s.size()); }
  std::uint64_t digest() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t hash_string(std::string_view s) noexcept {
  Fnv1a h;
  h.update(s);
  return h.digest();
}

// Unbiased integer in [0, bound) from a 64-bit engine (Lemire's method).
// std::uniform_int_distribution is implementation-defined, which would make
// bootstrap samples differ between standard libraries.
inline std::uint64_t bounded(Engine& rng, std::uint64_t bound) {
  using u128 = unsigned __int128;
  std::uint64_t x = rng();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Fisher-Yates with the portable bounded draw above.
template <typename RandomIt>
void shuffle(RandomIt first, RandomIt last, Engine& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = bounded(rng, i);
    std::swap(first[i - 1], first[j]);
  }
}

}  // namespace roced
