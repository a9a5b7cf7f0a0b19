// storyalign/align.hpp

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

#ifndef STORYALIGN_ALIGN_HPP_
#define STORYALIGN_ALIGN_HPP_

#include <cstddef>
#include <limits>
#include <vector>

#include "storyalign/types.hpp"

namespace storyalign {

/// Dense clip-by-sentence similarity matrix: rows index clips, columns index
/// sentences, row-major storage. Values must be finite; matrices produced by
/// cosine_similarity additionally lie in [-1, 1], but ingested matrices are
/// only required to be finite.
struct SimilarityMatrix {
  std::size_t clip_count = 0;
  std::size_t sentence_count = 0;
  std::vector<double> values;

  SimilarityMatrix() = default;
  /// Throws Error("validation") if either dimension is zero, the buffer size
  /// does not match, or any value is non-finite.
  SimilarityMatrix(std::size_t clips, std::size_t sentences,
                   std::vector<double> data);

  double at(std::size_t clip, std::size_t sentence) const {
    return values[clip * sentence_count + sentence];
  }
  double& at(std::size_t clip, std::size_t sentence) {
    return values[clip * sentence_count + sentence];
  }
};

/// Matching distances d(i,j) = 1 - s(i,j), same layout as SimilarityMatrix.
struct CostMatrix {
  std::size_t clip_count = 0;
  std::size_t sentence_count = 0;
  std::vector<double> values;

  double at(std::size_t clip, std::size_t sentence) const {
    return values[clip * sentence_count + sentence];
  }
};

/// Per-item penalties charged instead of matching. An infinite cost forbids
/// the corresponding drop entirely.
struct DropCosts {
  double clip_drop = std::numeric_limits<double>::infinity();
  double sentence_drop = std::numeric_limits<double>::infinity();

  static constexpr double kForbidden = std::numeric_limits<double>::infinity();

  /// Throws Error("validation") unless both costs are >= 0 or +infinity.
  void validate() const;
  bool drops_forbidden() const;
};

/// Elementwise 1 - s. Throws Error("non-finite") on a non-finite input value.
CostMatrix to_cost_matrix(const SimilarityMatrix& sim);

/// Classic dynamic time warping over the full matrix: every clip and every
/// sentence is matched, cost is the sum of d(i,j) over the matched pairs.
/// The DP is seeded with c(1,1) = d(1,1) so total_cost equals the exact sum
/// of incurred match distances. Ties prefer the diagonal predecessor, then
/// the clip-advancing one. Throws Error("validation") on an empty matrix.
Alignment dtw_align(const SimilarityMatrix& sim);

/// Monotone alignment where any clip or sentence may instead be dropped at
/// the corresponding DropCosts charge. Minimizes
///   sum of d(i,j) over matches + |dropped clips| * clip_drop
///                               + |dropped sentences| * sentence_drop
/// over all monotone alignments-with-drops in which every item is matched at
/// least once or dropped exactly once. With both drops forbidden this
/// reduces to dtw_align. Ties prefer match, then sentence drop, then clip
/// drop, then both; matches prefer the diagonal predecessor.
Alignment drop_dtw_align(const SimilarityMatrix& sim, const DropCosts& costs);

/// Exhaustive reference aligner: enumerates every monotone
/// alignment-with-drops and returns one of minimal cost (ties broken by the
/// lexicographically smallest encoding, independently of drop_dtw_align's
/// preferences). Exponential; refuses instances larger than 6x6 with
/// Error("refused"). Intended as the test oracle for the DP aligners.
Alignment brute_force_align(const SimilarityMatrix& sim,
                            const DropCosts& costs);

/// Upper size bound accepted by brute_force_align in either dimension.
inline constexpr std::size_t kBruteForceLimit = 6;

/// Drop costs set to the p-th percentile (linear interpolation, p in
/// [0,100]) of the flattened matching distances. A convenience for choosing
/// comparable drop charges across videos when no fixed costs are given.
DropCosts percentile_drop_costs(const CostMatrix& cost, double percentile);

/// Recomputes an alignment's cost from its assignments and drop sets against
/// the given distances. Drop charges are only added for non-empty drop sets,
/// so forbidden (infinite) costs never poison a drop-free alignment.
double alignment_cost(const Alignment& a, const CostMatrix& cost,
                      const DropCosts& costs);

}  // namespace storyalign

#endif  // STORYALIGN_ALIGN_HPP_
