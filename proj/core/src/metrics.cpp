// src/metrics.cpp

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

#include "storyalign/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "storyalign/error.hpp"

namespace storyalign {

namespace {

// Sweep events over the merged boundary set. At one time point removals run
// before additions so half-open intervals hand ownership over exactly at
// their boundary.
struct Event {
  double time;
  bool add;
  int track;  // 0 = gold sentence, 1 = predicted sentence, 2 = clip
  std::size_t id;

  bool operator<(const Event& o) const {
    if (time != o.time) return time < o.time;
    return add < o.add;
  }
};

void push_interval(std::vector<Event>& events, const TimeInterval& span,
                   int track, std::size_t id) {
  if (span.length() <= 0.0) return;  // zero-length spans cover no instants
  events.push_back({span.start, true, track, id});
  events.push_back({span.end, false, track, id});
}

double pair_iou(const std::optional<TimeInterval>& a,
                const std::optional<TimeInterval>& b) {
  if (!a.has_value() && !b.has_value()) return 1.0;  // correct abstention
  if (!a.has_value() || !b.has_value()) return 0.0;
  const double inter = interval_intersection(*a, *b);
  const double uni = a->length() + b->length() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

void check_same_video(const GroundedAlignment& pred,
                      const std::vector<SentenceRecord>& gold,
                      const std::vector<ClipRecord>& clips) {
  if (clips.empty()) {
    throw Error(errc::kValidation, "no clips to evaluate");
  }
  const std::string& vid = clips.front().video_id;
  for (const ClipRecord& c : clips) {
    if (c.video_id != vid) {
      throw Error(errc::kValidation,
                  "clips span two videos: \"" + vid + "\" and \"" +
                      c.video_id + "\"");
    }
  }
  if (!pred.video_id.empty() && pred.video_id != vid) {
    throw Error(errc::kValidation,
                "prediction is for video \"" + pred.video_id +
                    "\" but clips belong to \"" + vid + "\"");
  }
  for (const SentenceRecord& s : gold) {
    if (s.video_id != vid) {
      throw Error(errc::kValidation,
                  "gold sentence " + std::to_string(s.sentence_index) +
                      " belongs to video \"" + s.video_id +
                      "\", expected \"" + vid + "\"");
    }
  }
  if (gold.size() != pred.sentence_count()) {
    throw Error(errc::kValidation,
                "prediction has " + std::to_string(pred.sentence_count()) +
                    " sentences, gold has " + std::to_string(gold.size()));
  }
}

}  // namespace

double clip_accuracy(const GroundedAlignment& pred,
                     const std::vector<SentenceRecord>& gold,
                     const std::vector<ClipRecord>& clips) {
  check_same_video(pred, gold, clips);

  std::vector<Event> events;
  double total = 0.0;
  for (const ClipRecord& c : clips) {
    total += c.interval.length();
    push_interval(events, c.interval, 2, c.clip_index);
  }
  for (const SentenceRecord& s : gold) {
    if (s.gold.has_value()) {
      push_interval(events, *s.gold, 0, s.sentence_index);
    }
  }
  for (std::size_t i = 0; i < pred.sentences.size(); ++i) {
    if (pred.sentences[i].has_value()) {
      push_interval(events, *pred.sentences[i], 1, i);
    }
  }
  if (total <= 0.0) return 1.0;  // no clip time to attribute

  std::sort(events.begin(), events.end());

  std::set<std::size_t> gold_active, pred_active;
  std::size_t clips_active = 0;
  double matched = 0.0;
  double cursor = events.empty() ? 0.0 : events.front().time;

  for (std::size_t k = 0; k < events.size(); ++k) {
    const Event& e = events[k];
    if (e.time > cursor) {
      if (clips_active > 0) {
        const bool gold_none = gold_active.empty();
        const bool pred_none = pred_active.empty();
        const bool correct =
            (gold_none && pred_none) ||
            (!gold_none && !pred_none &&
             *gold_active.begin() == *pred_active.begin());
        if (correct) matched += e.time - cursor;
      }
      cursor = e.time;
    }
    switch (e.track) {
      case 0:
        if (e.add) gold_active.insert(e.id); else gold_active.erase(e.id);
        break;
      case 1:
        if (e.add) pred_active.insert(e.id); else pred_active.erase(e.id);
        break;
      default:
        if (e.add) ++clips_active; else --clips_active;
        break;
    }
  }
  return matched / total;
}

double sentence_iou(const GroundedAlignment& pred,
                    const std::vector<SentenceRecord>& gold) {
  if (gold.empty()) {
    throw Error(errc::kValidation, "no sentences to evaluate");
  }
  if (gold.size() != pred.sentence_count()) {
    throw Error(errc::kValidation,
                "prediction has " + std::to_string(pred.sentence_count()) +
                    " sentences, gold has " + std::to_string(gold.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    sum += pair_iou(pred.sentences[i], gold[i].gold);
  }
  return sum / static_cast<double>(gold.size());
}

double f1_score(double clip_accuracy, double sentence_iou) {
  const double denom = clip_accuracy + sentence_iou;
  if (denom <= 0.0) return 0.0;
  return 2.0 * clip_accuracy * sentence_iou / denom;
}

EvalResult evaluate_video(const GroundedAlignment& pred,
                          const std::vector<SentenceRecord>& gold,
                          const std::vector<ClipRecord>& clips) {
  EvalResult r;
  r.clip_accuracy = clip_accuracy(pred, gold, clips);
  r.sentence_iou = sentence_iou(pred, gold);
  r.f1 = f1_score(r.clip_accuracy, r.sentence_iou);
  for (const ClipRecord& c : clips) r.total_duration += c.interval.length();
  r.matched_duration = r.clip_accuracy * r.total_duration;
  r.sentence_count = gold.size();
  return r;
}

LanguageReport aggregate_report(
    const std::vector<std::pair<std::string, EvalResult>>& per_video,
    bool pool_durations) {
  if (per_video.empty()) {
    throw Error(errc::kValidation, "nothing to aggregate");
  }

  std::map<std::string, std::vector<EvalResult>> grouped;
  for (const auto& [language, result] : per_video) {
    grouped[language].push_back(result);
  }

  std::vector<std::string> order;
  for (const std::string& tag : canonical_languages()) {
    if (grouped.count(tag)) order.push_back(tag);
  }
  for (const auto& [tag, unused] : grouped) {
    if (std::find(order.begin(), order.end(), tag) == order.end()) {
      order.push_back(tag);
    }
  }

  LanguageReport report;
  for (const std::string& tag : order) {
    LanguageReport::PerLanguage entry;
    entry.language = tag;
    entry.videos = grouped[tag];
    const auto& videos = entry.videos;
    const double n = static_cast<double>(videos.size());

    if (pool_durations) {
      double matched = 0.0, total = 0.0, iou_weighted = 0.0;
      std::size_t sentences = 0;
      for (const EvalResult& v : videos) {
        matched += v.matched_duration;
        total += v.total_duration;
        iou_weighted += v.sentence_iou * static_cast<double>(v.sentence_count);
        sentences += v.sentence_count;
      }
      entry.mean.clip_accuracy = total > 0.0 ? matched / total : 1.0;
      entry.mean.sentence_iou =
          sentences > 0 ? iou_weighted / static_cast<double>(sentences) : 0.0;
      entry.mean.f1 = f1_score(entry.mean.clip_accuracy,
                               entry.mean.sentence_iou);
    } else {
      for (const EvalResult& v : videos) {
        entry.mean.clip_accuracy += v.clip_accuracy / n;
        entry.mean.sentence_iou += v.sentence_iou / n;
        entry.mean.f1 += v.f1 / n;
      }
    }
    entry.mean.video_count = videos.size();
    report.languages.push_back(std::move(entry));
  }

  const double langs = static_cast<double>(report.languages.size());
  for (const auto& entry : report.languages) {
    report.average.clip_accuracy += entry.mean.clip_accuracy / langs;
    report.average.sentence_iou += entry.mean.sentence_iou / langs;
    report.average.f1 += entry.mean.f1 / langs;
    report.average.video_count += entry.mean.video_count;
  }
  return report;
}

double agreement_iou(const std::vector<SentenceRecord>& ann_a,
                     const std::vector<SentenceRecord>& ann_b) {
  if (ann_a.empty() || ann_a.size() != ann_b.size()) {
    throw Error(errc::kValidation,
                "annotations describe different sentence sets");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < ann_a.size(); ++k) {
    if (ann_a[k].video_id != ann_b[k].video_id ||
        ann_a[k].sentence_index != ann_b[k].sentence_index) {
      throw Error(errc::kValidation,
                  "annotations describe different sentence sets");
    }
    sum += pair_iou(ann_a[k].gold, ann_b[k].gold);
  }
  return sum / static_cast<double>(ann_a.size());
}

}  // namespace storyalign
