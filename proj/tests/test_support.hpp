// Shared helpers for the unit suites: deterministic random instances and a
// few fixture builders.

#ifndef STORYALIGN_TESTS_TEST_SUPPORT_HPP_
#define STORYALIGN_TESTS_TEST_SUPPORT_HPP_

#include <random>
#include <string>
#include <vector>

#include "storyalign/align.hpp"
#include "storyalign/rng.hpp"
#include "storyalign/types.hpp"

namespace test_support {

inline double unit_real(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform_real(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * unit_real(gen);
}

inline storyalign::SimilarityMatrix random_similarity(std::mt19937_64& gen,
                                                      std::size_t max_side,
                                                      bool discrete_grid) {
  static const double kGrid[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  const std::size_t m =
      1 + static_cast<std::size_t>(storyalign::uniform_below(gen, max_side));
  const std::size_t n =
      1 + static_cast<std::size_t>(storyalign::uniform_below(gen, max_side));
  std::vector<double> values(m * n);
  for (double& v : values) {
    v = discrete_grid
            ? kGrid[storyalign::uniform_below(gen, 5)]
            : uniform_real(gen, -1.0, 1.0);
  }
  return storyalign::SimilarityMatrix(m, n, std::move(values));
}

inline storyalign::DropCosts random_drop_costs(std::mt19937_64& gen) {
  static const double kChoices[] = {
      0.1, 0.5, 1.0, std::numeric_limits<double>::infinity()};
  return storyalign::DropCosts{kChoices[storyalign::uniform_below(gen, 4)],
                               kChoices[storyalign::uniform_below(gen, 4)]};
}

inline storyalign::ClipRecord make_clip(std::size_t index, double start,
                                        double end,
                                        const std::string& video = "v1") {
  storyalign::ClipRecord c;
  c.clip_index = index;
  c.interval = storyalign::TimeInterval(start, end);
  c.video_id = video;
  return c;
}

inline storyalign::SentenceRecord make_sentence(
    std::size_t index, double start, double end,
    const std::string& video = "v1", const std::string& lang = "en") {
  storyalign::SentenceRecord s;
  s.sentence_index = index;
  s.text = "sentence " + std::to_string(index);
  s.language = lang;
  s.video_id = video;
  s.gold = storyalign::TimeInterval(start, end);
  return s;
}

inline storyalign::SentenceRecord make_unmatched(
    std::size_t index, const std::string& video = "v1",
    const std::string& lang = "en") {
  storyalign::SentenceRecord s;
  s.sentence_index = index;
  s.text = "sentence " + std::to_string(index);
  s.language = lang;
  s.video_id = video;
  return s;
}

}  // namespace test_support

#endif  // STORYALIGN_TESTS_TEST_SUPPORT_HPP_
