// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace ldprof {

// Deterministic sampling shared by the simulator's ORDER BY RAND() evaluation
// and the client-side subsampling fallback. Both sides derive the same seed
// from (run seed, template id, query parameters) and draw from the candidates
// in canonical sort order, so a query answered over either wire path yields
// the same sample.

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t seed, std::initializer_list<std::string_view> parts) {
  uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (std::string_view p : parts) {
    for (unsigned char c : p) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h = splitmix64(h);
  }
  return splitmix64(h);
}

// Fisher-Yates over the whole pool, then truncate: for pools not larger than k
// this is a full random permutation, otherwise a uniform sample without
// replacement. The pool must already be in canonical order.
template <typename T>
std::vector<T> seeded_sample(std::vector<T> pool, uint64_t seed, size_t k) {
  std::mt19937_64 rng(seed);
  const size_t n = pool.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    size_t j = i + static_cast<size_t>(rng() % (n - i));
    if (j != i) std::swap(pool[i], pool[j]);
  }
  if (pool.size() > k) pool.resize(k);
  return pool;
}

} // namespace ldprof
