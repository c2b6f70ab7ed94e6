#pragma once

// Deterministic randomness helpers shared by the solver, the mechanisms and
// the instance generator.
//
// Portability contract (golden tests depend on it):
//   * Engine: std::mt19937_64, whose output sequence is fixed by the standard.
//   * Shuffle: Fisher-Yates drawing the index as engine() % (i + 1).
//     std::shuffle and std::uniform_int_distribution are never used because
//     their outputs are implementation-defined.
//   * Sub-seed derivation: 64-bit FNV-1a over the 8 little-endian bytes of the
//     parent seed followed by a tag (a string or a student id).

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string_view>
#include <vector>

namespace optassign {

inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t hash = 14695981039346656037ULL) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

/// Derives an independent sub-seed from (seed, tag).
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  char le[8];
  for (int i = 0; i < 8; ++i) le[i] = static_cast<char>((seed >> (8 * i)) & 0xff);
  return fnv1a64(tag, fnv1a64(std::string_view(le, 8)));
}

template <class T>
void portable_shuffle(std::vector<T>& values, std::mt19937_64& engine) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(engine() % i);
    std::swap(values[i - 1], values[j]);
  }
}

/// Deterministic permutation of [0, n); same (n, seed) always gives the same
/// result on every platform.
inline std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 engine(seed);
  portable_shuffle(perm, engine);
  return perm;
}

}  // namespace optassign
