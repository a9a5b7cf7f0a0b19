// storyalign/dataio.hpp

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

#ifndef STORYALIGN_DATAIO_HPP_
#define STORYALIGN_DATAIO_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "storyalign/align.hpp"
#include "storyalign/sim.hpp"
#include "storyalign/types.hpp"

namespace storyalign {

/// One subtitle chunk after sentence splitting. Within a video, segments
/// are ordered by start, non-overlapping, and indexed contiguously from 0.
struct SubtitleSegment {
  std::string video_id;
  std::size_t sentence_index = 0;
  TimeInterval interval;
  std::string text;
};

/// Catalog entry for one video. movie_name is the externally supplied
/// canonical English name used for overlap removal; it must be non-empty
/// for every annotated video.
struct VideoManifest {
  std::string video_id;
  std::string language;
  std::string movie_name;
  double duration = 0.0;
};

enum class Split { kWeakTrain, kSupTrain, kValidation, kTest };
const char* split_name(Split s);
Split split_from_name(const std::string& name);

struct SplitRatios {
  double sup_train = 0.2;
  double validation = 0.2;
  double test = 0.6;
};

/// Result of dedup_split: every surviving video maps to exactly one split;
/// weakly supervised videos sharing a movie with any annotated video are
/// listed in `excluded` instead. The shuffle seed is echoed so the split is
/// a reproducible artifact.
struct SplitAssignment {
  std::map<std::string, Split> assignment;
  std::vector<std::string> excluded;
  std::uint64_t seed = 0;
};

// --- line-delimited JSON formats -------------------------------------------
//
// One record per line. Annotation records carry either start/end seconds or
// "unmatched": true. Parsers validate per-video ordering invariants and
// report the offending line number.

std::vector<SentenceRecord> parse_annotations(std::istream& in);
void write_annotations(std::ostream& out,
                       const std::vector<SentenceRecord>& records);

std::vector<ClipRecord> parse_clips(std::istream& in);
void write_clips(std::ostream& out, const std::vector<ClipRecord>& clips);

std::vector<SubtitleSegment> parse_subtitles(std::istream& in);
void write_subtitles(std::ostream& out,
                     const std::vector<SubtitleSegment>& segments);

std::vector<VideoManifest> parse_manifests(std::istream& in);
void write_manifests(std::ostream& out,
                     const std::vector<VideoManifest>& manifests);

// --- feature binary format --------------------------------------------------
//
// Bit-exact interchange format: 5 magic bytes "MSYM1", then row count and
// dimension as little-endian uint32, then row-major little-endian float32
// values. Distinct error codes: "bad-magic", "truncated-payload",
// "non-finite".

FeatureMatrix read_feature_matrix(std::istream& in);
FeatureMatrix read_feature_matrix(const std::string& path);
void write_feature_matrix(std::ostream& out, const FeatureMatrix& m);
void write_feature_matrix(const std::string& path, const FeatureMatrix& m);

// --- similarity CSV ----------------------------------------------------------
//
// UTF-8, comma separated, dot decimal, no header; rows are clips, columns
// sentences. Values are written with the shortest representation that
// round-trips the double exactly.

SimilarityMatrix parse_similarity_csv(std::istream& in);
void write_similarity_csv(std::ostream& out, const SimilarityMatrix& sim);

// --- dataset engineering -----------------------------------------------------

/// Pairs each clip with the subtitle segment of maximal temporal overlap
/// (ties toward the earlier segment); clips overlapping no segment are
/// omitted. Both lists must belong to one video and be ordered and
/// non-overlapping. The result is monotone in both indices.
std::vector<std::pair<std::size_t, std::size_t>> weak_supervise(
    const std::vector<ClipRecord>& clips,
    const std::vector<SubtitleSegment>& segments);

/// Splits the annotated videos 20/20/60 per language (seeded shuffle,
/// largest-remainder rounding) and assigns every other video to the weakly
/// supervised training set unless its movie name (case-folded, trimmed)
/// matches any annotated video's movie, in which case it is excluded.
/// Throws Error("validation") if an annotated video lacks a movie name or a
/// manifest, or if ratios are invalid.
SplitAssignment dedup_split(const std::vector<VideoManifest>& manifests,
                            const std::set<std::string>& annotated_ids,
                            const SplitRatios& ratios, std::uint64_t rng_seed);

/// Per-video invariant checks shared by the parsers: one video id,
/// contiguous indices from 0, sorted by start, non-overlapping.
void validate_clip_sequence(const std::vector<ClipRecord>& clips);
void validate_segment_sequence(const std::vector<SubtitleSegment>& segments);
void validate_sentence_sequence(const std::vector<SentenceRecord>& sentences);

}  // namespace storyalign

#endif  // STORYALIGN_DATAIO_HPP_
