// storyalign/rng.hpp

// Copyright 2026  The Storyalign Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef STORYALIGN_RNG_HPP_
#define STORYALIGN_RNG_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace storyalign {

/// Uniform draw in [0, n) from the raw engine output. Rejection sampling
/// keeps the distribution exactly uniform, and avoiding
/// std::uniform_int_distribution keeps seeded runs reproducible across
/// standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t r;
  do {
    r = gen();
  } while (r >= limit);
  return r % n;
}

/// Fisher-Yates shuffle driven by uniform_below, for the same
/// reproducibility reasons as above.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& gen) {
  for (std::size_t k = items.size(); k > 1; --k) {
    const std::size_t pick =
        static_cast<std::size_t>(uniform_below(gen, k));
    std::swap(items[k - 1], items[pick]);
  }
}

}  // namespace storyalign

#endif  // STORYALIGN_RNG_HPP_
