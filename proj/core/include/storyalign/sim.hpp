// storyalign/sim.hpp

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

#ifndef STORYALIGN_SIM_HPP_
#define STORYALIGN_SIM_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "storyalign/align.hpp"

namespace storyalign {

enum class FeatureRole { kUnspecified, kClip, kSentence };

/// Row-per-item embedding matrix. Values are stored as 32-bit floats, the
/// unit of the on-disk interchange format; numeric work promotes to double.
struct FeatureMatrix {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<float> values;
  FeatureRole role = FeatureRole::kUnspecified;

  FeatureMatrix() = default;
  /// Throws Error("validation") on zero dimensions or a size mismatch, and
  /// Error("non-finite") on a non-finite entry.
  FeatureMatrix(std::size_t count_, std::size_t dim_,
                std::vector<float> values_,
                FeatureRole role_ = FeatureRole::kUnspecified);

  const float* row(std::size_t r) const { return values.data() + r * dim; }
};

/// Scales every row to unit L2 norm. Throws Error("validation") naming the
/// row if one has zero norm.
FeatureMatrix l2_normalize_rows(const FeatureMatrix& m);

/// Cosine similarity between every clip row and every sentence row.
/// Dimension mismatch or a zero-norm row is a validation error naming the
/// offending side and row.
SimilarityMatrix cosine_similarity(const FeatureMatrix& clips,
                                   const FeatureMatrix& sentences);

/// Positive pairs plus the sampling and temperature configuration of the
/// contrastive reference loss. Each positive is a (clip row, sentence row)
/// index pair; the loss denominators run over the positive plus
/// negatives_per_anchor sampled negatives in each direction.
struct ContrastiveBatch {
  std::vector<std::pair<std::size_t, std::size_t>> positives;
  std::size_t negatives_per_anchor = 1;
  double temperature = 0.07;
  std::uint64_t rng_seed = 0;
};

/// Which video every feature row belongs to, per modality. Sizes must match
/// the corresponding FeatureMatrix counts.
struct MembershipIndex {
  std::vector<std::string> clip_video;
  std::vector<std::string> sentence_video;
};

/// Per-positive candidate rows for the two softmax directions. Entry 0 is
/// always the positive itself, followed by the sampled negatives, so the
/// lists are directly usable as infonce_loss denominators.
struct CandidateLists {
  std::vector<std::vector<std::size_t>> sentence_candidates;  // fixed clip
  std::vector<std::vector<std::size_t>> clip_candidates;      // fixed sentence
};

/// Draws negatives_per_anchor distinct negatives per positive and direction,
/// uniformly without replacement from the same-video items of the opposite
/// modality (excluding the positive). Deterministic under rng_seed. A video
/// with too few items is an error naming the video unless
/// allow_corpus_fallback is set, in which case that anchor samples from the
/// whole corpus instead.
CandidateLists sample_negatives(const ContrastiveBatch& batch,
                                const MembershipIndex& membership,
                                bool allow_corpus_fallback = false);

/// Mean over positives of the two-direction contrastive loss
///   -log softmax_j exp(v_i . t_j / tau)  over sentence candidates
///   -log softmax_j exp(v_j . t_i / tau)  over clip candidates
/// with raw inner products as logits (normalize rows first to use cosine).
/// Always >= 0 because each denominator contains its positive.
double infonce_loss(const FeatureMatrix& clips, const FeatureMatrix& sentences,
                    const ContrastiveBatch& batch,
                    const CandidateLists& candidates);

/// Analytic gradient of infonce_loss with respect to every feature entry,
/// in the same row-major layout as the inputs.
struct InfonceGradient {
  std::vector<double> clip_grad;
  std::vector<double> sentence_grad;
};
InfonceGradient infonce_gradient(const FeatureMatrix& clips,
                                 const FeatureMatrix& sentences,
                                 const ContrastiveBatch& batch,
                                 const CandidateLists& candidates);

/// Verifies infonce_gradient against central finite differences with step
/// epsilon (must lie in (0, 1e-2]); returns the maximum relative error over
/// all feature entries.
double infonce_grad_check(const FeatureMatrix& clips,
                          const FeatureMatrix& sentences,
                          const ContrastiveBatch& batch,
                          const CandidateLists& candidates, double epsilon);

}  // namespace storyalign

#endif  // STORYALIGN_SIM_HPP_
