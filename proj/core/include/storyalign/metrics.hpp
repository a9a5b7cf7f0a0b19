// storyalign/metrics.hpp

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

#ifndef STORYALIGN_METRICS_HPP_
#define STORYALIGN_METRICS_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "storyalign/types.hpp"

namespace storyalign {

/// Evaluation of one video's predicted grounding against its annotation.
/// f1 is always the harmonic mean of the other two, matched_duration /
/// total_duration are the clip-accuracy numerator and denominator in
/// seconds. All fractions are in [0, 1]; presentation-layer rounding to
/// percent happens only when rendering.
struct EvalResult {
  double clip_accuracy = 0.0;
  double sentence_iou = 0.0;
  double f1 = 0.0;
  double matched_duration = 0.0;
  double total_duration = 0.0;
  std::size_t sentence_count = 0;
};

/// Duration-weighted fraction of clip time attributed to the correct
/// sentence, with exact interval arithmetic (no frame discretization). An
/// instant of clip time is correct when the sentence owning it under the
/// prediction equals the one owning it under the gold annotation; when
/// intervals of several sentences overlap, the lowest sentence index owns
/// the instant. Time inside clips that no gold sentence covers is correct
/// exactly when the prediction also leaves it uncovered. Throws
/// Error("validation") on video-id mismatch.
double clip_accuracy(const GroundedAlignment& pred,
                     const std::vector<SentenceRecord>& gold,
                     const std::vector<ClipRecord>& clips);

/// Mean over sentences of the interval IoU between predicted and gold
/// grounding. Both sides unmatched scores 1 (a correct abstention), one
/// side unmatched scores 0, and a degenerate pair with empty union scores 0.
/// Throws Error("validation") when the sentence counts differ or are zero.
double sentence_iou(const GroundedAlignment& pred,
                    const std::vector<SentenceRecord>& gold);

/// Harmonic mean 2ab/(a+b); 0 when both arguments are 0.
double f1_score(double clip_accuracy, double sentence_iou);

/// clip_accuracy + sentence_iou + f1 for one video, plus the duration
/// accounting behind them.
EvalResult evaluate_video(const GroundedAlignment& pred,
                          const std::vector<SentenceRecord>& gold,
                          const std::vector<ClipRecord>& clips);

/// Per-language metric means. Not an EvalResult on purpose: the f1 here is
/// the mean of per-video f1 values, which is generally not the harmonic
/// mean of the other two columns.
struct MetricMeans {
  double clip_accuracy = 0.0;
  double sentence_iou = 0.0;
  double f1 = 0.0;
  std::size_t video_count = 0;
};

/// Language-grouped evaluation report: per-video results, per-language
/// means, and the unweighted cross-language average of those means.
struct LanguageReport {
  struct PerLanguage {
    std::string language;
    std::vector<EvalResult> videos;
    MetricMeans mean;
  };
  std::vector<PerLanguage> languages;  // canonical order, then others
  MetricMeans average;
};

/// Groups per-video results by language and averages. With pool_durations
/// the per-language clip accuracy is computed from summed durations and the
/// sentence IoU is weighted by sentence count, instead of the default
/// unweighted per-video means. Throws Error("validation") on empty input.
LanguageReport aggregate_report(
    const std::vector<std::pair<std::string, EvalResult>>& per_video,
    bool pool_durations = false);

/// Mean per-sentence IoU between two annotations of the same sentences,
/// using the same unmatched scoring as sentence_iou. Symmetric. Throws
/// Error("validation") if the two sides do not describe the same sentence
/// set.
double agreement_iou(const std::vector<SentenceRecord>& ann_a,
                     const std::vector<SentenceRecord>& ann_b);

}  // namespace storyalign

#endif  // STORYALIGN_METRICS_HPP_
