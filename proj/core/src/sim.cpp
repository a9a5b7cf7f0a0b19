// src/sim.cpp

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

#include "storyalign/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "storyalign/error.hpp"
#include "storyalign/rng.hpp"

namespace storyalign {

namespace {

const char* role_name(FeatureRole role) {
  switch (role) {
    case FeatureRole::kClip: return "clip";
    case FeatureRole::kSentence: return "sentence";
    default: return "feature";
  }
}

// Double-precision working copy; all loss arithmetic runs on these so the
// finite-difference check is not limited by float32 quantization.
struct Mat {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> v;

  const double* row(std::size_t r) const { return v.data() + r * dim; }
  double* row(std::size_t r) { return v.data() + r * dim; }
};

Mat to_double(const FeatureMatrix& m) {
  Mat out;
  out.count = m.count;
  out.dim = m.dim;
  out.v.assign(m.values.begin(), m.values.end());
  return out;
}

double dot(const double* a, const double* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t k = 0; k < dim; ++k) acc += a[k] * b[k];
  return acc;
}

// -log softmax of the entry at `positive` among `logits`.
double neg_log_softmax(const std::vector<double>& logits,
                       std::size_t positive) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - peak);
  return peak + std::log(sum) - logits[positive];
}

void validate_batch(const Mat& clips, const Mat& sentences,
                    const ContrastiveBatch& batch,
                    const CandidateLists& candidates) {
  if (batch.temperature <= 0.0 || !std::isfinite(batch.temperature)) {
    throw Error(errc::kValidation, "temperature must be positive and finite");
  }
  if (clips.dim != sentences.dim) {
    throw Error(errc::kValidation,
                "clip and sentence features have different dimensions");
  }
  if (batch.positives.empty()) {
    throw Error(errc::kValidation, "batch has no positive pairs");
  }
  if (candidates.sentence_candidates.size() != batch.positives.size() ||
      candidates.clip_candidates.size() != batch.positives.size()) {
    throw Error(errc::kValidation,
                "candidate lists do not match the positive pair count");
  }
  for (std::size_t i = 0; i < batch.positives.size(); ++i) {
    const auto [clip, sentence] = batch.positives[i];
    if (clip >= clips.count || sentence >= sentences.count) {
      throw Error(errc::kValidation, "positive pair index out of range");
    }
    const auto& sc = candidates.sentence_candidates[i];
    const auto& cc = candidates.clip_candidates[i];
    if (std::find(sc.begin(), sc.end(), sentence) == sc.end()) {
      throw Error(errc::kValidation,
                  "sentence candidates for pair " + std::to_string(i) +
                      " do not include the positive");
    }
    if (std::find(cc.begin(), cc.end(), clip) == cc.end()) {
      throw Error(errc::kValidation,
                  "clip candidates for pair " + std::to_string(i) +
                      " do not include the positive");
    }
    for (std::size_t r : sc) {
      if (r >= sentences.count) {
        throw Error(errc::kValidation, "sentence candidate out of range");
      }
    }
    for (std::size_t r : cc) {
      if (r >= clips.count) {
        throw Error(errc::kValidation, "clip candidate out of range");
      }
    }
  }
}

double loss_core(const Mat& clips, const Mat& sentences,
                 const ContrastiveBatch& batch,
                 const CandidateLists& candidates) {
  const double tau = batch.temperature;
  double total = 0.0;
  std::vector<double> logits;
  for (std::size_t i = 0; i < batch.positives.size(); ++i) {
    const auto [a, b] = batch.positives[i];

    const auto& sc = candidates.sentence_candidates[i];
    logits.clear();
    std::size_t pos_at = 0;
    for (std::size_t k = 0; k < sc.size(); ++k) {
      if (sc[k] == b) pos_at = k;
      logits.push_back(dot(clips.row(a), sentences.row(sc[k]), clips.dim) /
                       tau);
    }
    total += neg_log_softmax(logits, pos_at);

    const auto& cc = candidates.clip_candidates[i];
    logits.clear();
    pos_at = 0;
    for (std::size_t k = 0; k < cc.size(); ++k) {
      if (cc[k] == a) pos_at = k;
      logits.push_back(dot(clips.row(cc[k]), sentences.row(b), clips.dim) /
                       tau);
    }
    total += neg_log_softmax(logits, pos_at);
  }
  return total / static_cast<double>(batch.positives.size());
}

// K distinct elements of pool, uniform without replacement (partial
// Fisher-Yates in draw order).
std::vector<std::size_t> draw_without_replacement(std::vector<std::size_t> pool,
                                                  std::size_t k,
                                                  std::mt19937_64& gen) {
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t pick =
        t + static_cast<std::size_t>(uniform_below(gen, pool.size() - t));
    std::swap(pool[t], pool[pick]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t count_, std::size_t dim_,
                             std::vector<float> values_, FeatureRole role_)
    : count(count_), dim(dim_), values(std::move(values_)), role(role_) {
  if (count == 0 || dim == 0) {
    throw Error(errc::kValidation, "feature matrix must be at least 1x1");
  }
  if (values.size() != count * dim) {
    throw Error(errc::kValidation,
                "feature buffer holds " + std::to_string(values.size()) +
                    " values, expected " + std::to_string(count * dim));
  }
  for (float v : values) {
    if (!std::isfinite(v)) {
      throw Error(errc::kNonFinite, "feature value is not finite");
    }
  }
}

FeatureMatrix l2_normalize_rows(const FeatureMatrix& m) {
  FeatureMatrix out = m;
  for (std::size_t r = 0; r < m.count; ++r) {
    double norm2 = 0.0;
    for (std::size_t k = 0; k < m.dim; ++k) {
      const double v = m.row(r)[k];
      norm2 += v * v;
    }
    if (norm2 == 0.0) {
      throw Error(errc::kValidation,
                  std::string(role_name(m.role)) + " row " +
                      std::to_string(r) + " has zero norm");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t k = 0; k < m.dim; ++k) {
      out.values[r * m.dim + k] = static_cast<float>(m.row(r)[k] * inv);
    }
  }
  return out;
}

SimilarityMatrix cosine_similarity(const FeatureMatrix& clips,
                                   const FeatureMatrix& sentences) {
  if (clips.dim != sentences.dim) {
    throw Error(errc::kValidation,
                "dimension mismatch: clips have dim " +
                    std::to_string(clips.dim) + ", sentences " +
                    std::to_string(sentences.dim));
  }
  auto row_norms = [](const FeatureMatrix& m, const char* side) {
    std::vector<double> norms(m.count);
    for (std::size_t r = 0; r < m.count; ++r) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m.dim; ++k) {
        const double v = m.row(r)[k];
        acc += v * v;
      }
      if (acc == 0.0) {
        throw Error(errc::kValidation, std::string(side) + " row " +
                                           std::to_string(r) +
                                           " has zero norm");
      }
      norms[r] = std::sqrt(acc);
    }
    return norms;
  };
  const std::vector<double> cnorm = row_norms(clips, "clip");
  const std::vector<double> snorm = row_norms(sentences, "sentence");

  std::vector<double> values(clips.count * sentences.count);
  for (std::size_t i = 0; i < clips.count; ++i) {
    for (std::size_t j = 0; j < sentences.count; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < clips.dim; ++k) {
        acc += static_cast<double>(clips.row(i)[k]) *
               static_cast<double>(sentences.row(j)[k]);
      }
      const double s = acc / (cnorm[i] * snorm[j]);
      values[i * sentences.count + j] = std::clamp(s, -1.0, 1.0);
    }
  }
  return SimilarityMatrix(clips.count, sentences.count, std::move(values));
}

CandidateLists sample_negatives(const ContrastiveBatch& batch,
                                const MembershipIndex& membership,
                                bool allow_corpus_fallback) {
  if (batch.negatives_per_anchor == 0) {
    throw Error(errc::kValidation, "negatives_per_anchor must be >= 1");
  }
  if (batch.positives.empty()) {
    throw Error(errc::kValidation, "batch has no positive pairs");
  }

  std::map<std::string, std::vector<std::size_t>> clips_by_video;
  std::map<std::string, std::vector<std::size_t>> sentences_by_video;
  for (std::size_t r = 0; r < membership.clip_video.size(); ++r) {
    clips_by_video[membership.clip_video[r]].push_back(r);
  }
  for (std::size_t r = 0; r < membership.sentence_video.size(); ++r) {
    sentences_by_video[membership.sentence_video[r]].push_back(r);
  }

  std::mt19937_64 gen(batch.rng_seed);
  const std::size_t k = batch.negatives_per_anchor;

  auto sample_side = [&](const std::vector<std::size_t>& same_video,
                         std::size_t corpus_size, std::size_t positive,
                         const std::string& video) {
    std::vector<std::size_t> pool;
    for (std::size_t r : same_video) {
      if (r != positive) pool.push_back(r);
    }
    if (pool.size() < k) {
      if (!allow_corpus_fallback) {
        throw Error(errc::kValidation,
                    "video \"" + video + "\" has only " +
                        std::to_string(pool.size()) +
                        " candidate negatives, need " + std::to_string(k));
      }
      pool.clear();
      for (std::size_t r = 0; r < corpus_size; ++r) {
        if (r != positive) pool.push_back(r);
      }
      if (pool.size() < k) {
        throw Error(errc::kValidation,
                    "corpus has too few items to sample " +
                        std::to_string(k) + " negatives");
      }
    }
    std::vector<std::size_t> candidates{positive};
    for (std::size_t r : draw_without_replacement(std::move(pool), k, gen)) {
      candidates.push_back(r);
    }
    return candidates;
  };

  CandidateLists out;
  for (const auto& [clip, sentence] : batch.positives) {
    if (clip >= membership.clip_video.size() ||
        sentence >= membership.sentence_video.size()) {
      throw Error(errc::kValidation, "positive pair index out of range");
    }
    const std::string& video = membership.clip_video[clip];
    if (membership.sentence_video[sentence] != video) {
      throw Error(errc::kValidation,
                  "positive pair spans two videos: \"" + video + "\" and \"" +
                      membership.sentence_video[sentence] + "\"");
    }
    out.sentence_candidates.push_back(
        sample_side(sentences_by_video[video],
                    membership.sentence_video.size(), sentence, video));
    out.clip_candidates.push_back(sample_side(
        clips_by_video[video], membership.clip_video.size(), clip, video));
  }
  return out;
}

double infonce_loss(const FeatureMatrix& clips, const FeatureMatrix& sentences,
                    const ContrastiveBatch& batch,
                    const CandidateLists& candidates) {
  const Mat v = to_double(clips);
  const Mat t = to_double(sentences);
  validate_batch(v, t, batch, candidates);
  return loss_core(v, t, batch, candidates);
}

InfonceGradient infonce_gradient(const FeatureMatrix& clips,
                                 const FeatureMatrix& sentences,
                                 const ContrastiveBatch& batch,
                                 const CandidateLists& candidates) {
  const Mat v = to_double(clips);
  const Mat t = to_double(sentences);
  validate_batch(v, t, batch, candidates);

  InfonceGradient grad;
  grad.clip_grad.assign(v.v.size(), 0.0);
  grad.sentence_grad.assign(t.v.size(), 0.0);
  const std::size_t dim = v.dim;
  const double scale =
      1.0 / (batch.temperature * static_cast<double>(batch.positives.size()));

  std::vector<double> logits, probs;
  auto softmax = [&]() {
    const double peak = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    probs.resize(logits.size());
    for (std::size_t k = 0; k < logits.size(); ++k) {
      probs[k] = std::exp(logits[k] - peak);
      sum += probs[k];
    }
    for (double& p : probs) p /= sum;
  };

  for (std::size_t i = 0; i < batch.positives.size(); ++i) {
    const auto [a, b] = batch.positives[i];

    // Direction 1: clip a scores every sentence candidate.
    const auto& sc = candidates.sentence_candidates[i];
    logits.clear();
    for (std::size_t r : sc) {
      logits.push_back(dot(v.row(a), t.row(r), dim) / batch.temperature);
    }
    softmax();
    for (std::size_t kk = 0; kk < sc.size(); ++kk) {
      const std::size_t r = sc[kk];
      for (std::size_t x = 0; x < dim; ++x) {
        grad.clip_grad[a * dim + x] += scale * probs[kk] * t.row(r)[x];
        grad.sentence_grad[r * dim + x] += scale * probs[kk] * v.row(a)[x];
      }
    }
    for (std::size_t x = 0; x < dim; ++x) {
      grad.clip_grad[a * dim + x] -= scale * t.row(b)[x];
      grad.sentence_grad[b * dim + x] -= scale * v.row(a)[x];
    }

    // Direction 2: sentence b scores every clip candidate.
    const auto& cc = candidates.clip_candidates[i];
    logits.clear();
    for (std::size_t r : cc) {
      logits.push_back(dot(v.row(r), t.row(b), dim) / batch.temperature);
    }
    softmax();
    for (std::size_t kk = 0; kk < cc.size(); ++kk) {
      const std::size_t r = cc[kk];
      for (std::size_t x = 0; x < dim; ++x) {
        grad.sentence_grad[b * dim + x] += scale * probs[kk] * v.row(r)[x];
        grad.clip_grad[r * dim + x] += scale * probs[kk] * t.row(b)[x];
      }
    }
    for (std::size_t x = 0; x < dim; ++x) {
      grad.sentence_grad[b * dim + x] -= scale * v.row(a)[x];
      grad.clip_grad[a * dim + x] -= scale * t.row(b)[x];
    }
  }
  return grad;
}

double infonce_grad_check(const FeatureMatrix& clips,
                          const FeatureMatrix& sentences,
                          const ContrastiveBatch& batch,
                          const CandidateLists& candidates, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1e-2)) {
    throw Error(errc::kValidation, "epsilon must lie in (0, 1e-2]");
  }
  Mat v = to_double(clips);
  Mat t = to_double(sentences);
  validate_batch(v, t, batch, candidates);
  const InfonceGradient analytic =
      infonce_gradient(clips, sentences, batch, candidates);

  double worst = 0.0;
  auto probe = [&](Mat& m, std::size_t flat, double analytic_value) {
    const double saved = m.v[flat];
    m.v[flat] = saved + epsilon;
    const double up = loss_core(v, t, batch, candidates);
    m.v[flat] = saved - epsilon;
    const double down = loss_core(v, t, batch, candidates);
    m.v[flat] = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double denom =
        std::max({1.0, std::abs(analytic_value), std::abs(numeric)});
    worst = std::max(worst, std::abs(analytic_value - numeric) / denom);
  };

  for (std::size_t flat = 0; flat < v.v.size(); ++flat) {
    probe(v, flat, analytic.clip_grad[flat]);
  }
  for (std::size_t flat = 0; flat < t.v.size(); ++flat) {
    probe(t, flat, analytic.sentence_grad[flat]);
  }
  return worst;
}

}  // namespace storyalign
