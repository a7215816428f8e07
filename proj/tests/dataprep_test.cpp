#include "duraseg/dataprep.hpp"

#include <gtest/gtest.h>

#include "duraseg/error.hpp"
#include "duraseg/synth.hpp"
#include "test_util.hpp"

namespace duraseg {
namespace {

using testing::flat;
using testing::seg;

TEST(Targets, SingleOnsetAndNeighbors) {
  const auto a = flat({seg("a", 0.0, 0.1), seg("b", 0.1, 0.3)});
  const auto t = make_level_targets(a, FrameGrid(0.01, 31), Level::kSyllable);
  for (std::size_t f = 0; f < 31; ++f) {
    SCOPED_TRACE(f);
    if (f == 0 || f == 10) {
      EXPECT_EQ(t.labels[f], 1);
      EXPECT_EQ(t.weights[f], 1.0);
    } else if (f == 1 || f == 9 || f == 11) {
      EXPECT_EQ(t.labels[f], 1);
      EXPECT_EQ(t.weights[f], 0.25);
    } else {
      EXPECT_EQ(t.labels[f], 0);
      EXPECT_EQ(t.weights[f], 1.0);
    }
  }
}

TEST(Targets, CenterWinsOverNeighbor) {
  const auto a = flat({seg("a", 0.0, 0.1), seg("b", 0.1, 0.11), seg("c", 0.11, 0.3)});
  const auto t = make_level_targets(a, FrameGrid(0.01, 31), Level::kSyllable);
  EXPECT_EQ(t.labels[10], 1);
  EXPECT_EQ(t.weights[10], 1.0);
  EXPECT_EQ(t.labels[11], 1);
  EXPECT_EQ(t.weights[11], 1.0);
  EXPECT_EQ(t.weights[9], 0.25);
  EXPECT_EQ(t.weights[12], 0.25);
  EXPECT_EQ(t.labels[13], 0);
}

TEST(Targets, SingleSegmentLabelsOnlyPhraseStart) {
  const auto a = flat({seg("a", 0.0, 0.5)});
  const auto t = make_level_targets(a, FrameGrid(0.01, 51), Level::kPhoneme);
  EXPECT_EQ(t.labels[0], 1);
  EXPECT_EQ(t.weights[0], 1.0);
  EXPECT_EQ(t.labels[1], 1);
  EXPECT_EQ(t.weights[1], 0.25);
  for (std::size_t f = 2; f < 51; ++f) EXPECT_EQ(t.labels[f], 0);
}

TEST(Targets, OnsetOutsideGrid) {
  const auto a = flat({seg("a", 0.0, 0.1), seg("b", 0.1, 0.3)});
  try {
    make_level_targets(a, FrameGrid(0.01, 5), Level::kSyllable);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOnsetOutOfRange);
  }
}

TEST(Targets, GridForCoversPhraseEnd) {
  const auto a = flat({seg("a", 0.2, 0.3), seg("b", 0.3, 0.57)});
  EXPECT_EQ(grid_for(a, 0.01).n_frames, 58u);
}

TEST(Targets, PropertiesOnSimulatedPhrases) {
  SimConfig config;
  for (std::size_t i = 0; i < 30; ++i) {
    const auto pair = generate_phrase(config, derive_seed(21, i));
    const FrameGrid grid = grid_for(pair.teacher, config.hop_seconds);
    const auto targets = make_training_targets(pair.teacher, grid);
    ASSERT_EQ(targets.syllable.labels.size(), grid.n_frames);
    ASSERT_EQ(targets.phoneme.weights.size(), grid.n_frames);
    std::size_t positives = 0, centers = 0;
    for (std::size_t f = 0; f < grid.n_frames; ++f) {
      if (targets.syllable.labels[f]) EXPECT_EQ(targets.phoneme.labels[f], 1);
      const auto& p = targets.phoneme;
      EXPECT_TRUE(p.weights[f] == 1.0 || p.weights[f] == 0.25);
      if (p.weights[f] == 0.25) EXPECT_EQ(p.labels[f], 1);
      positives += p.labels[f];
      centers += p.labels[f] && p.weights[f] == 1.0;
    }
    const std::size_t onsets = pair.teacher.num_phonemes();
    EXPECT_LE(positives, 3 * onsets);
    // Simulated phonemes are at least five frames long.
    EXPECT_EQ(centers, onsets);
  }
}

}  // namespace
}  // namespace duraseg
