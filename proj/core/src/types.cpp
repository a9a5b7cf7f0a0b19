// src/types.cpp

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

#include "storyalign/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "storyalign/error.hpp"

namespace storyalign {

TimeInterval::TimeInterval(double start_s, double end_s)
    : start(start_s), end(end_s) {
  if (!std::isfinite(start_s) || !std::isfinite(end_s)) {
    throw Error(errc::kValidation, "interval bounds must be finite");
  }
  if (start_s < 0.0) {
    throw Error(errc::kValidation,
                "interval start must be non-negative, got " +
                    std::to_string(start_s));
  }
  if (end_s < start_s) {
    throw Error(errc::kValidation,
                "interval end " + std::to_string(end_s) +
                    " precedes start " + std::to_string(start_s));
  }
}

double interval_intersection(const TimeInterval& a, const TimeInterval& b) {
  const double lo = std::max(a.start, b.start);
  const double hi = std::min(a.end, b.end);
  return std::max(0.0, hi - lo);
}

std::vector<std::size_t> Alignment::clips_for_sentence(
    std::size_t sentence) const {
  std::vector<std::size_t> clips;
  for (const auto& [s, c] : assignments) {
    if (s == sentence) clips.push_back(c);
  }
  std::sort(clips.begin(), clips.end());
  return clips;
}

void validate_alignment(const Alignment& a, std::size_t clip_count,
                        std::size_t sentence_count) {
  std::vector<char> sentence_matched(sentence_count, 0);
  std::vector<char> clip_matched(clip_count, 0);

  std::size_t prev_s = 0, prev_c = 0;
  bool first = true;
  for (const auto& [s, c] : a.assignments) {
    if (s >= sentence_count || c >= clip_count) {
      throw Error(errc::kStructural, "assignment index out of range");
    }
    if (!first && (s < prev_s || c < prev_c)) {
      throw Error(errc::kStructural, "assignments are not monotone");
    }
    prev_s = s;
    prev_c = c;
    first = false;
    sentence_matched[s] = 1;
    clip_matched[c] = 1;
  }

  for (std::size_t s = 0; s < sentence_count; ++s) {
    const bool dropped = a.dropped_sentences.count(s) > 0;
    if (sentence_matched[s] && dropped) {
      throw Error(errc::kStructural,
                  "sentence " + std::to_string(s) + " both matched and dropped");
    }
    if (!sentence_matched[s] && !dropped) {
      throw Error(errc::kStructural,
                  "sentence " + std::to_string(s) + " unaccounted for");
    }
  }
  for (std::size_t c = 0; c < clip_count; ++c) {
    const bool dropped = a.dropped_clips.count(c) > 0;
    if (clip_matched[c] && dropped) {
      throw Error(errc::kStructural,
                  "clip " + std::to_string(c) + " both matched and dropped");
    }
    if (!clip_matched[c] && !dropped) {
      throw Error(errc::kStructural,
                  "clip " + std::to_string(c) + " unaccounted for");
    }
  }
  for (std::size_t s : a.dropped_sentences) {
    if (s >= sentence_count) {
      throw Error(errc::kStructural, "dropped sentence index out of range");
    }
  }
  for (std::size_t c : a.dropped_clips) {
    if (c >= clip_count) {
      throw Error(errc::kStructural, "dropped clip index out of range");
    }
  }
}

GroundedAlignment ground_alignment(const Alignment& a,
                                   const std::vector<ClipRecord>& clips) {
  std::size_t sentence_count = a.dropped_sentences.empty()
                                   ? 0
                                   : *a.dropped_sentences.rbegin() + 1;
  for (const auto& [s, c] : a.assignments) {
    sentence_count = std::max(sentence_count, s + 1);
  }

  GroundedAlignment grounded;
  grounded.video_id = clips.empty() ? std::string() : clips.front().video_id;
  grounded.sentences.assign(sentence_count, std::nullopt);

  for (const auto& [s, c] : a.assignments) {
    if (c >= clips.size()) {
      throw Error(errc::kStructural,
                  "alignment references clip " + std::to_string(c) +
                      " but only " + std::to_string(clips.size()) +
                      " clips were provided");
    }
    const TimeInterval& span = clips[c].interval;
    auto& slot = grounded.sentences[s];
    if (!slot.has_value()) {
      slot = span;
    } else {
      slot = TimeInterval(std::min(slot->start, span.start),
                          std::max(slot->end, span.end));
    }
  }
  return grounded;
}

const std::vector<std::string>& canonical_languages() {
  static const std::vector<std::string> kLanguages = {
      "en", "zh", "es", "fr", "pt", "hi", "ru"};
  return kLanguages;
}

std::string language_display_name(const std::string& tag) {
  if (tag == "en") return "English";
  if (tag == "zh") return "Chinese";
  if (tag == "es") return "Spanish";
  if (tag == "fr") return "French";
  if (tag == "pt") return "Portuguese";
  if (tag == "hi") return "Hindi";
  if (tag == "ru") return "Russian";
  return tag;
}

}  // namespace storyalign
