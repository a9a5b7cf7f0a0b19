// src/dataset.cpp

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

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>

#include "storyalign/dataio.hpp"
#include "storyalign/error.hpp"
#include "storyalign/rng.hpp"

namespace storyalign {

const char* split_name(Split s) {
  switch (s) {
    case Split::kWeakTrain: return "weak_train";
    case Split::kSupTrain: return "sup_train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "unknown";
}

Split split_from_name(const std::string& name) {
  if (name == "weak_train") return Split::kWeakTrain;
  if (name == "sup_train") return Split::kSupTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw Error(errc::kValidation, "unknown split \"" + name + "\"");
}

namespace {

template <typename T, typename GetId, typename GetIdx, typename GetSpan>
void validate_sequence(const std::vector<T>& items, GetId id, GetIdx idx,
                       GetSpan span, bool check_overlap, const char* what) {
  if (items.empty()) return;
  const std::string& video = id(items.front());
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (id(items[k]) != video) {
      throw Error(errc::kValidation,
                  std::string(what) + ": sequence mixes videos \"" + video +
                      "\" and \"" + id(items[k]) + "\"");
    }
    if (idx(items[k]) != k) {
      throw Error(errc::kValidation,
                  std::string(what) + ": indices not contiguous from 0");
    }
    if (check_overlap && k > 0 &&
        span(items[k]).start < span(items[k - 1]).end) {
      throw Error(errc::kValidation,
                  std::string(what) +
                      ": spans must be sorted and non-overlapping");
    }
  }
}

std::string movie_key(const std::string& name) {
  std::size_t begin = 0, end = name.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(name[begin])))
    ++begin;
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(name[end - 1])))
    --end;
  std::string key = name.substr(begin, end - begin);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return key;
}

// Largest-remainder apportionment of n items over the three ratios. The
// epsilon guard keeps exact quotas (n a multiple of 5 with the default
// ratios) from losing a unit to floating-point rounding.
std::array<std::size_t, 3> apportion(std::size_t n, const SplitRatios& r) {
  const double quotas[3] = {n * r.sup_train, n * r.validation, n * r.test};
  std::array<std::size_t, 3> base{};
  double remainders[3];
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    base[k] = static_cast<std::size_t>(std::floor(quotas[k] + 1e-9));
    remainders[k] = quotas[k] - static_cast<double>(base[k]);
    assigned += base[k];
  }
  while (assigned < n) {
    int pick = 0;
    for (int k = 1; k < 3; ++k) {
      if (remainders[k] > remainders[pick]) pick = k;
    }
    ++base[pick];
    remainders[pick] = -1.0;
    ++assigned;
  }
  return base;
}

}  // namespace

void validate_clip_sequence(const std::vector<ClipRecord>& clips) {
  validate_sequence(
      clips, [](const ClipRecord& c) -> const std::string& { return c.video_id; },
      [](const ClipRecord& c) { return c.clip_index; },
      [](const ClipRecord& c) -> const TimeInterval& { return c.interval; },
      true, "clips");
}

void validate_segment_sequence(const std::vector<SubtitleSegment>& segments) {
  validate_sequence(
      segments,
      [](const SubtitleSegment& s) -> const std::string& { return s.video_id; },
      [](const SubtitleSegment& s) { return s.sentence_index; },
      [](const SubtitleSegment& s) -> const TimeInterval& {
        return s.interval;
      },
      true, "subtitle segments");
}

void validate_sentence_sequence(const std::vector<SentenceRecord>& sentences) {
  validate_sequence(
      sentences,
      [](const SentenceRecord& s) -> const std::string& { return s.video_id; },
      [](const SentenceRecord& s) { return s.sentence_index; },
      [](const SentenceRecord& s) -> const TimeInterval& {
        static const TimeInterval zero;
        return zero;
      },
      false, "sentences");
}

std::vector<std::pair<std::size_t, std::size_t>> weak_supervise(
    const std::vector<ClipRecord>& clips,
    const std::vector<SubtitleSegment>& segments) {
  validate_clip_sequence(clips);
  validate_segment_sequence(segments);
  if (!clips.empty() && !segments.empty() &&
      clips.front().video_id != segments.front().video_id) {
    throw Error(errc::kValidation,
                "clips belong to \"" + clips.front().video_id +
                    "\" but segments to \"" + segments.front().video_id +
                    "\"");
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t cursor = 0;
  for (const ClipRecord& clip : clips) {
    while (cursor < segments.size() &&
           segments[cursor].interval.end <= clip.interval.start) {
      ++cursor;
    }
    double best_overlap = 0.0;
    std::size_t best_segment = 0;
    bool found = false;
    for (std::size_t k = cursor; k < segments.size(); ++k) {
      const SubtitleSegment& seg = segments[k];
      if (seg.interval.start >= clip.interval.end) break;
      const double overlap = interval_intersection(clip.interval,
                                                   seg.interval);
      if (overlap > best_overlap) {  // strict: ties keep the earlier segment
        best_overlap = overlap;
        best_segment = seg.sentence_index;
        found = true;
      }
    }
    if (found) {
      pairs.emplace_back(clip.clip_index, best_segment);
    }
  }
  return pairs;
}

SplitAssignment dedup_split(const std::vector<VideoManifest>& manifests,
                            const std::set<std::string>& annotated_ids,
                            const SplitRatios& ratios,
                            std::uint64_t rng_seed) {
  for (double r : {ratios.sup_train, ratios.validation, ratios.test}) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw Error(errc::kValidation, "split ratios must be non-negative");
    }
  }
  if (std::abs(ratios.sup_train + ratios.validation + ratios.test - 1.0) >
      1e-9) {
    throw Error(errc::kValidation, "split ratios must sum to 1");
  }

  std::map<std::string, const VideoManifest*> by_id;
  for (const VideoManifest& m : manifests) {
    if (!by_id.emplace(m.video_id, &m).second) {
      throw Error(errc::kValidation,
                  "duplicate manifest for video \"" + m.video_id + "\"");
    }
  }
  for (const std::string& id : annotated_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(errc::kValidation,
                  "annotated video \"" + id + "\" has no manifest");
    }
    if (movie_key(it->second->movie_name).empty()) {
      throw Error(errc::kValidation,
                  "annotated video \"" + id + "\" is missing a movie name");
    }
  }

  // Movies present in the annotated portion, by canonical name.
  std::set<std::string> annotated_movies;
  for (const std::string& id : annotated_ids) {
    annotated_movies.insert(movie_key(by_id.at(id)->movie_name));
  }

  SplitAssignment result;
  result.seed = rng_seed;
  std::mt19937_64 gen(rng_seed);

  // Annotated videos, grouped per language in sorted order so the seeded
  // shuffle sequence is reproducible.
  std::map<std::string, std::vector<std::string>> annotated_by_language;
  for (const std::string& id : annotated_ids) {
    annotated_by_language[by_id.at(id)->language].push_back(id);
  }
  for (auto& [language, ids] : annotated_by_language) {
    std::sort(ids.begin(), ids.end());
    deterministic_shuffle(ids, gen);
    const auto counts = apportion(ids.size(), ratios);
    std::size_t at = 0;
    for (std::size_t k = 0; k < counts[0]; ++k) {
      result.assignment[ids[at++]] = Split::kSupTrain;
    }
    for (std::size_t k = 0; k < counts[1]; ++k) {
      result.assignment[ids[at++]] = Split::kValidation;
    }
    while (at < ids.size()) {
      result.assignment[ids[at++]] = Split::kTest;
    }
  }

  for (const VideoManifest& m : manifests) {
    if (annotated_ids.count(m.video_id)) continue;
    if (annotated_movies.count(movie_key(m.movie_name))) {
      result.excluded.push_back(m.video_id);
    } else {
      result.assignment[m.video_id] = Split::kWeakTrain;
    }
  }
  std::sort(result.excluded.begin(), result.excluded.end());
  return result;
}

}  // namespace storyalign
