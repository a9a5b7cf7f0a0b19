// src/align.cpp

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

#include "storyalign/align.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "storyalign/error.hpp"

namespace storyalign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t clips, std::size_t sentences,
                                   std::vector<double> data)
    : clip_count(clips), sentence_count(sentences), values(std::move(data)) {
  if (clip_count == 0 || sentence_count == 0) {
    throw Error(errc::kValidation, "similarity matrix must be at least 1x1");
  }
  if (values.size() != clip_count * sentence_count) {
    throw Error(errc::kValidation,
                "similarity buffer holds " + std::to_string(values.size()) +
                    " values, expected " +
                    std::to_string(clip_count * sentence_count));
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw Error(errc::kNonFinite,
                  "similarity value at flat index " + std::to_string(k) +
                      " is not finite");
    }
  }
}

void DropCosts::validate() const {
  for (double c : {clip_drop, sentence_drop}) {
    if (std::isnan(c) || c < 0.0) {
      throw Error(errc::kValidation,
                  "drop costs must be >= 0 or +infinity");
    }
  }
}

bool DropCosts::drops_forbidden() const {
  return std::isinf(clip_drop) && std::isinf(sentence_drop);
}

CostMatrix to_cost_matrix(const SimilarityMatrix& sim) {
  if (sim.clip_count == 0 || sim.sentence_count == 0) {
    throw Error(errc::kValidation, "similarity matrix must be at least 1x1");
  }
  CostMatrix cost;
  cost.clip_count = sim.clip_count;
  cost.sentence_count = sim.sentence_count;
  cost.values.resize(sim.values.size());
  for (std::size_t k = 0; k < sim.values.size(); ++k) {
    if (!std::isfinite(sim.values[k])) {
      throw Error(errc::kNonFinite, "similarity value is not finite");
    }
    cost.values[k] = 1.0 - sim.values[k];
  }
  return cost;
}

namespace {

// States of the drop-aware DP at cell (i, j), 1-based prefixes of clips and
// sentences. The pair records the fate of clip i and sentence j: matched (M)
// or dropped (D). kMM additionally implies that the pair (i, j) itself is
// matched; any other combination would cross an earlier match.
enum State : unsigned char { kMM = 0, kMD = 1, kDM = 2, kDD = 3 };

// Backtracking moves, stored per state and cell during the forward pass.
// The value encodes the predecessor cell and its state.
enum Move : unsigned char {
  kNone = 0,
  kDiagMM, kDiagMD, kDiagDM, kDiagDD,  // match (i,j) after a fresh diagonal
  kUpMM, kUpDM,                        // match (i,j), sentence j already matched
  kLeftMM, kLeftMD,                    // match (i,j), clip i already matched
  kDropClipFromMM, kDropClipFromDM,    // drop clip i (sentence j matched)
  kDropSentFromMM, kDropSentFromMD,    // drop sentence j (clip i matched)
  kDropClipFromMD, kDropClipFromDD,    // drop clip i (sentence j dropped)
  kDropSentFromDM, kDropSentFromDD,    // drop sentence j (clip i dropped)
};

struct DpTables {
  std::size_t rows = 0, cols = 0;  // (M+1) x (N+1)
  std::vector<double> cost[4];
  std::vector<Move> from[4];

  DpTables(std::size_t m, std::size_t n) : rows(m + 1), cols(n + 1) {
    for (int s = 0; s < 4; ++s) {
      cost[s].assign(rows * cols, kInf);
      from[s].assign(rows * cols, kNone);
    }
  }
  double& c(State s, std::size_t i, std::size_t j) {
    return cost[s][i * cols + j];
  }
  Move& f(State s, std::size_t i, std::size_t j) {
    return from[s][i * cols + j];
  }
};

struct Candidate {
  double value;
  Move move;
};

// First candidate attaining the minimum wins, so order the candidates by the
// tie-break priority before calling.
Candidate pick(std::initializer_list<Candidate> options) {
  Candidate best{kInf, kNone};
  for (const Candidate& o : options) {
    if (o.value < best.value) best = o;
  }
  return best;
}

Alignment backtrack(DpTables& dp, const CostMatrix& d) {
  const std::size_t m = dp.rows - 1, n = dp.cols - 1;

  // Final state: best cost, ties resolved match > sentence-drop > clip-drop
  // > both-dropped.
  State state = kMM;
  double best = dp.c(kMM, m, n);
  for (State s : {kMD, kDM, kDD}) {
    if (dp.c(s, m, n) < best) {
      best = dp.c(s, m, n);
      state = s;
    }
  }
  if (!std::isfinite(best)) {
    throw Error(errc::kValidation,
                "no feasible alignment under the given drop costs");
  }

  Alignment out;
  out.total_cost = best;

  std::size_t i = m, j = n;
  std::vector<std::pair<std::size_t, std::size_t>> reversed;
  while (i > 0 || j > 0) {
    const Move mv = dp.f(state, i, j);
    switch (mv) {
      case kDiagMM: case kDiagMD: case kDiagDM: case kDiagDD:
        reversed.emplace_back(j - 1, i - 1);
        state = static_cast<State>(mv - kDiagMM);
        --i; --j;
        break;
      case kUpMM: case kUpDM:
        reversed.emplace_back(j - 1, i - 1);
        state = (mv == kUpMM) ? kMM : kDM;
        --i;
        break;
      case kLeftMM: case kLeftMD:
        reversed.emplace_back(j - 1, i - 1);
        state = (mv == kLeftMM) ? kMM : kMD;
        --j;
        break;
      case kDropClipFromMM: case kDropClipFromDM:
        out.dropped_clips.insert(i - 1);
        state = (mv == kDropClipFromMM) ? kMM : kDM;
        --i;
        break;
      case kDropClipFromMD: case kDropClipFromDD:
        out.dropped_clips.insert(i - 1);
        state = (mv == kDropClipFromMD) ? kMD : kDD;
        --i;
        break;
      case kDropSentFromMM: case kDropSentFromMD:
        out.dropped_sentences.insert(j - 1);
        state = (mv == kDropSentFromMM) ? kMM : kMD;
        --j;
        break;
      case kDropSentFromDM: case kDropSentFromDD:
        out.dropped_sentences.insert(j - 1);
        state = (mv == kDropSentFromDM) ? kDM : kDD;
        --j;
        break;
      case kNone:
        throw Error(errc::kStructural, "corrupt DP backtrack");
    }
  }
  out.assignments.assign(reversed.rbegin(), reversed.rend());
  validate_alignment(out, d.clip_count, d.sentence_count);
  return out;
}

}  // namespace

Alignment drop_dtw_align(const SimilarityMatrix& sim, const DropCosts& costs) {
  costs.validate();
  const CostMatrix d = to_cost_matrix(sim);
  const std::size_t m = d.clip_count, n = d.sentence_count;
  const double dv = costs.clip_drop, dt = costs.sentence_drop;

  DpTables dp(m, n);
  dp.c(kDD, 0, 0) = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    dp.c(kDD, i, 0) = dp.c(kDD, i - 1, 0) + dv;
    dp.f(kDD, i, 0) = kDropClipFromDD;
  }
  for (std::size_t j = 1; j <= n; ++j) {
    dp.c(kDD, 0, j) = dp.c(kDD, 0, j - 1) + dt;
    dp.f(kDD, 0, j) = kDropSentFromDD;
  }

  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const double dij = d.at(i - 1, j - 1);

      // Match (i, j). Diagonal opens a fresh pair; the continuation arms
      // extend a run where one side is already matched. Candidate order is
      // the tie-break priority.
      Candidate match = pick({
          {dij + dp.c(kMM, i - 1, j - 1), kDiagMM},
          {dij + dp.c(kMD, i - 1, j - 1), kDiagMD},
          {dij + dp.c(kDM, i - 1, j - 1), kDiagDM},
          {dij + dp.c(kDD, i - 1, j - 1), kDiagDD},
          {dij + dp.c(kMM, i - 1, j), kUpMM},
          {dij + dp.c(kDM, i - 1, j), kUpDM},
          {dij + dp.c(kMM, i, j - 1), kLeftMM},
          {dij + dp.c(kMD, i, j - 1), kLeftMD},
      });
      dp.c(kMM, i, j) = match.value;
      dp.f(kMM, i, j) = match.move;

      // Drop sentence j while clip i stays matched.
      Candidate sent_drop = pick({
          {dt + dp.c(kMM, i, j - 1), kDropSentFromMM},
          {dt + dp.c(kMD, i, j - 1), kDropSentFromMD},
      });
      dp.c(kMD, i, j) = sent_drop.value;
      dp.f(kMD, i, j) = sent_drop.move;

      // Drop clip i while sentence j stays matched.
      Candidate clip_drop = pick({
          {dv + dp.c(kMM, i - 1, j), kDropClipFromMM},
          {dv + dp.c(kDM, i - 1, j), kDropClipFromDM},
      });
      dp.c(kDM, i, j) = clip_drop.value;
      dp.f(kDM, i, j) = clip_drop.move;

      // Both sides dropped: reached by dropping either item last.
      Candidate both = pick({
          {dt + dp.c(kDM, i, j - 1), kDropSentFromDM},
          {dt + dp.c(kDD, i, j - 1), kDropSentFromDD},
          {dv + dp.c(kMD, i - 1, j), kDropClipFromMD},
          {dv + dp.c(kDD, i - 1, j), kDropClipFromDD},
      });
      dp.c(kDD, i, j) = both.value;
      dp.f(kDD, i, j) = both.move;
    }
  }
  return backtrack(dp, d);
}

Alignment dtw_align(const SimilarityMatrix& sim) {
  const CostMatrix d = to_cost_matrix(sim);
  const std::size_t m = d.clip_count, n = d.sentence_count;

  enum Step : unsigned char { kStart, kDiag, kUp, kLeft };
  std::vector<double> c(m * n, kInf);
  std::vector<Step> f(m * n, kStart);
  auto idx = [n](std::size_t i, std::size_t j) { return i * n + j; };

  c[idx(0, 0)] = d.at(0, 0);
  for (std::size_t i = 1; i < m; ++i) {
    c[idx(i, 0)] = c[idx(i - 1, 0)] + d.at(i, 0);
    f[idx(i, 0)] = kUp;
  }
  for (std::size_t j = 1; j < n; ++j) {
    c[idx(0, j)] = c[idx(0, j - 1)] + d.at(0, j);
    f[idx(0, j)] = kLeft;
  }
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t j = 1; j < n; ++j) {
      double best = c[idx(i - 1, j - 1)];
      Step step = kDiag;
      if (c[idx(i - 1, j)] < best) {
        best = c[idx(i - 1, j)];
        step = kUp;
      }
      if (c[idx(i, j - 1)] < best) {
        best = c[idx(i, j - 1)];
        step = kLeft;
      }
      c[idx(i, j)] = d.at(i, j) + best;
      f[idx(i, j)] = step;
    }
  }

  Alignment out;
  out.total_cost = c[idx(m - 1, n - 1)];
  std::vector<std::pair<std::size_t, std::size_t>> reversed;
  std::size_t i = m - 1, j = n - 1;
  for (;;) {
    reversed.emplace_back(j, i);
    const Step step = f[idx(i, j)];
    if (step == kStart) break;
    if (step == kDiag) {
      --i; --j;
    } else if (step == kUp) {
      --i;
    } else {
      --j;
    }
  }
  out.assignments.assign(reversed.rbegin(), reversed.rend());
  validate_alignment(out, m, n);
  return out;
}

DropCosts percentile_drop_costs(const CostMatrix& cost, double percentile) {
  if (cost.values.empty()) {
    throw Error(errc::kValidation, "cost matrix is empty");
  }
  if (!(percentile >= 0.0 && percentile <= 100.0)) {
    throw Error(errc::kValidation, "percentile must lie in [0, 100]");
  }
  std::vector<double> sorted = cost.values;
  std::sort(sorted.begin(), sorted.end());
  const double rank = percentile / 100.0 *
                      static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(rank);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  const double value = sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
  return DropCosts{value, value};
}

double alignment_cost(const Alignment& a, const CostMatrix& cost,
                      const DropCosts& costs) {
  double total = 0.0;
  for (const auto& [s, c] : a.assignments) {
    total += cost.at(c, s);
  }
  if (!a.dropped_clips.empty()) {
    total += static_cast<double>(a.dropped_clips.size()) * costs.clip_drop;
  }
  if (!a.dropped_sentences.empty()) {
    total += static_cast<double>(a.dropped_sentences.size()) *
             costs.sentence_drop;
  }
  return total;
}

}  // namespace storyalign
