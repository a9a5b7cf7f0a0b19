// storyalign/types.hpp

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

#ifndef STORYALIGN_TYPES_HPP_
#define STORYALIGN_TYPES_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace storyalign {

/// Half-open time span [start, end) in seconds. All overlap and IoU
/// arithmetic in this library uses the half-open convention, so spans that
/// merely touch at a boundary do not overlap. Zero-length spans are legal
/// (degenerate annotations) and contribute no duration anywhere.
struct TimeInterval {
  double start = 0.0;
  double end = 0.0;

  TimeInterval() = default;
  /// Throws Error("validation") unless 0 <= start <= end and both are finite.
  TimeInterval(double start_s, double end_s);

  double length() const noexcept { return end - start; }

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// Length of the overlap between two half-open intervals, clamped at zero.
/// Symmetric, and never larger than the shorter of the two inputs.
double interval_intersection(const TimeInterval& a, const TimeInterval& b);

/// One video clip between two hard camera cuts. Within a video, clips are
/// sorted by start, non-overlapping, and indexed contiguously from 0.
struct ClipRecord {
  std::size_t clip_index = 0;
  TimeInterval interval;
  std::string video_id;
};

/// One narration sentence. `gold` holds the annotated grounding span, or
/// nullopt when the sentence was marked unmatched (e.g. narrator commentary
/// with no corresponding footage).
struct SentenceRecord {
  std::size_t sentence_index = 0;
  std::string text;
  std::string language;  // "en", "zh", "es", "fr", "pt", "hi", "ru" or other
  std::optional<TimeInterval> gold;
  std::string video_id;

  bool unmatched() const noexcept { return !gold.has_value(); }
};

/// Index-level alignment between a sentence sequence and a clip sequence.
///
/// `assignments` holds (sentence_index, clip_index) pairs, monotone in both
/// coordinates. Every sentence index appears either in some assignment or in
/// dropped_sentences, never both; likewise for clips. total_cost is the
/// exact sum of match distances plus drop charges incurred by the aligner
/// that produced this value.
struct Alignment {
  std::vector<std::pair<std::size_t, std::size_t>> assignments;
  std::set<std::size_t> dropped_sentences;
  std::set<std::size_t> dropped_clips;
  double total_cost = 0.0;

  /// Clip indices assigned to sentence i, in increasing order; empty means
  /// the sentence was dropped.
  std::vector<std::size_t> clips_for_sentence(std::size_t sentence) const;
};

/// Checks the Alignment invariants against the instance dimensions
/// (clip_count x sentence_count). Throws Error("structural") on violation.
void validate_alignment(const Alignment& a, std::size_t clip_count,
                        std::size_t sentence_count);

/// Time-level view of an Alignment: per sentence, the span from the earliest
/// assigned clip start to the latest assigned clip end, or nullopt for
/// dropped sentences. When drops leave a sentence with non-contiguous clips
/// the convex span is used, matching the one-interval annotation model.
struct GroundedAlignment {
  std::string video_id;
  std::vector<std::optional<TimeInterval>> sentences;

  std::size_t sentence_count() const noexcept { return sentences.size(); }
};

/// Derives the GroundedAlignment of `a` over `clips`. Deterministic and
/// total for valid inputs; an assignment naming a clip index not present in
/// `clips` is a structural error.
GroundedAlignment ground_alignment(const Alignment& a,
                                   const std::vector<ClipRecord>& clips);

/// The seven narration languages, in the fixed presentation order used by
/// report tables. Other tags are legal everywhere and sort after these.
const std::vector<std::string>& canonical_languages();

/// Display name for a canonical language tag ("en" -> "English"); other tags
/// are returned unchanged.
std::string language_display_name(const std::string& tag);

}  // namespace storyalign

#endif  // STORYALIGN_TYPES_HPP_
