// src/brute_force.cpp
//
// Exhaustive reference aligner. Enumerates drop subsets directly and, for
// each pair of subsets, every monotone staircase path over the kept items.
// Deliberately shares no code with the DP in align.cpp; this is the oracle
// the DP is tested against.

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

#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "storyalign/align.hpp"
#include "storyalign/error.hpp"

namespace storyalign {

namespace {

struct Best {
  bool found = false;
  double cost = 0.0;
  Alignment alignment;
};

std::vector<std::size_t> kept_indices(std::uint32_t drop_mask,
                                      std::size_t count) {
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < count; ++k) {
    if ((drop_mask & (1u << k)) == 0) kept.push_back(k);
  }
  return kept;
}

// Candidate comparison: strictly lower cost wins; near-ties (within 1e-12)
// fall back to the lexicographically smallest encoding so the oracle is
// deterministic without depending on enumeration order.
bool better(const Best& best, double cost, const Alignment& a) {
  if (!best.found) return true;
  if (cost < best.cost - 1e-12) return true;
  if (cost > best.cost + 1e-12) return false;
  const auto key = [](const Alignment& x) {
    return std::make_tuple(
        x.assignments,
        std::vector<std::size_t>(x.dropped_sentences.begin(),
                                 x.dropped_sentences.end()),
        std::vector<std::size_t>(x.dropped_clips.begin(),
                                 x.dropped_clips.end()));
  };
  return key(a) < key(best.alignment);
}

void offer(Best& best, double cost, Alignment a) {
  if (better(best, cost, a)) {
    a.total_cost = cost;
    best.found = true;
    best.cost = cost;
    best.alignment = std::move(a);
  }
}

// Walks every monotone path over the kept grid, accumulating matched pairs.
void enumerate_paths(const CostMatrix& d,
                     const std::vector<std::size_t>& clips,
                     const std::vector<std::size_t>& sentences,
                     std::size_t r, std::size_t c, double acc,
                     std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                     double drop_charge,
                     const std::set<std::size_t>& dropped_clips,
                     const std::set<std::size_t>& dropped_sentences,
                     Best& best) {
  acc += d.at(clips[r], sentences[c]);
  pairs.emplace_back(sentences[c], clips[r]);

  if (r + 1 == clips.size() && c + 1 == sentences.size()) {
    Alignment a;
    a.assignments = pairs;
    a.dropped_clips = dropped_clips;
    a.dropped_sentences = dropped_sentences;
    offer(best, acc + drop_charge, std::move(a));
  } else {
    if (r + 1 < clips.size() && c + 1 < sentences.size()) {
      enumerate_paths(d, clips, sentences, r + 1, c + 1, acc, pairs,
                      drop_charge, dropped_clips, dropped_sentences, best);
    }
    if (r + 1 < clips.size()) {
      enumerate_paths(d, clips, sentences, r + 1, c, acc, pairs, drop_charge,
                      dropped_clips, dropped_sentences, best);
    }
    if (c + 1 < sentences.size()) {
      enumerate_paths(d, clips, sentences, r, c + 1, acc, pairs, drop_charge,
                      dropped_clips, dropped_sentences, best);
    }
  }
  pairs.pop_back();
}

}  // namespace

Alignment brute_force_align(const SimilarityMatrix& sim,
                            const DropCosts& costs) {
  costs.validate();
  const CostMatrix d = to_cost_matrix(sim);
  const std::size_t m = d.clip_count, n = d.sentence_count;
  if (m > kBruteForceLimit || n > kBruteForceLimit) {
    throw Error(errc::kRefused,
                "instance " + std::to_string(m) + "x" + std::to_string(n) +
                    " exceeds the brute-force size guard (" +
                    std::to_string(kBruteForceLimit) + ")");
  }

  const bool can_drop_clips = !std::isinf(costs.clip_drop);
  const bool can_drop_sentences = !std::isinf(costs.sentence_drop);

  Best best;
  for (std::uint32_t vmask = 0; vmask < (1u << m); ++vmask) {
    if (vmask != 0 && !can_drop_clips) continue;
    const auto clips = kept_indices(vmask, m);
    const double clip_charge =
        vmask == 0 ? 0.0
                   : static_cast<double>(m - clips.size()) * costs.clip_drop;

    for (std::uint32_t tmask = 0; tmask < (1u << n); ++tmask) {
      if (tmask != 0 && !can_drop_sentences) continue;
      const auto sentences = kept_indices(tmask, n);
      const double sent_charge =
          tmask == 0 ? 0.0
                     : static_cast<double>(n - sentences.size()) *
                           costs.sentence_drop;

      if (clips.empty() != sentences.empty()) {
        continue;  // leftover items would have no partner to match
      }

      std::set<std::size_t> dropped_clips, dropped_sentences;
      for (std::size_t k = 0; k < m; ++k) {
        if (vmask & (1u << k)) dropped_clips.insert(k);
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (tmask & (1u << k)) dropped_sentences.insert(k);
      }

      if (clips.empty()) {  // everything dropped on both sides
        Alignment a;
        a.dropped_clips = dropped_clips;
        a.dropped_sentences = dropped_sentences;
        offer(best, clip_charge + sent_charge, std::move(a));
        continue;
      }

      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      enumerate_paths(d, clips, sentences, 0, 0, 0.0, pairs,
                      clip_charge + sent_charge, dropped_clips,
                      dropped_sentences, best);
    }
  }

  if (!best.found) {
    throw Error(errc::kValidation,
                "no feasible alignment under the given drop costs");
  }
  validate_alignment(best.alignment, m, n);
  return best.alignment;
}

}  // namespace storyalign
