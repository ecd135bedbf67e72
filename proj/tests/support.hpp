#pragma once

#include <random>
#include <vector>

#include "fanrot/fanrot.hpp"

namespace fanrot::testing {

inline PLAutomorphism linear(long long a, long long b, long long c, long long d) {
  return PLAutomorphism::linear(UnimodularMatrix::from_entries(a, b, c, d));
}

inline std::vector<IntVector> vecs(std::initializer_list<std::pair<long long, long long>> xs) {
  std::vector<IntVector> out;
  for (auto [x, y] : xs) out.push_back({x, y});
  return out;
}

inline Fan fan_of(std::initializer_list<std::pair<long long, long long>> xs) { return Fan::validate(vecs(xs)); }

// Primitive vectors with max(|x|, |y|) <= h.
inline std::vector<IntVector> primitive_vectors(long long h) {
  std::vector<IntVector> out;
  for (long long x = -h; x <= h; ++x) {
    for (long long y = -h; y <= h; ++y) {
      if ((x != 0 || y != 0) && gcd(Int(x), Int(y)) == 1) out.push_back({x, y});
    }
  }
  return out;
}

inline Fan random_regular_fan(std::mt19937_64& rng, std::size_t splits) {
  Fan fan = rng() % 2 ? Fan::quadrants() : fan_of({{1, 0}, {0, 1}, {-1, -1}});
  for (std::size_t i = 0; i < splits; ++i) fan = simple_split(fan, rng() % fan.size());
  return fan;
}

}  // namespace fanrot::testing
