#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace holobeam {

using Rng = std::mt19937_64;

// splitmix64 finalizer; full avalanche on 64 bits.
constexpr std::uint64_t avalanche(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t p : parts) h = avalanche(h ^ avalanche(p));
  return h;
}

}  // namespace holobeam
