#include "duraseg/core.hpp"

#include <gtest/gtest.h>

#include "duraseg/error.hpp"
#include "duraseg/synth.hpp"
#include "test_util.hpp"

namespace duraseg {
namespace {

using testing::flat;
using testing::seg;
using testing::syllable;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kBadInput;
}

TEST(MergeSilences, InternalSilenceJoinsPrevious) {
  const auto out = merge_silences(flat({seg("a", 0, 1), seg("SIL", 1, 1.5), seg("b", 1.5, 3)}));
  ASSERT_EQ(out.syllables.size(), 2u);
  EXPECT_EQ(out.syllables[0].segment, seg("a", 0, 1.5));
  EXPECT_EQ(out.syllables[0].phonemes.back(), seg("a", 0, 1.5));
  EXPECT_EQ(out.syllables[1].segment, seg("b", 1.5, 3));
}

TEST(MergeSilences, NoSilenceIsIdentity) {
  const auto raw = flat({seg("a", 0, 1), seg("b", 1, 2)});
  EXPECT_EQ(merge_silences(raw), raw);
}

TEST(MergeSilences, TrimsBothEnds) {
  const auto out = merge_silences(flat({seg("SIL", 0, 0.5), seg("a", 0.5, 1), seg("SIL", 1, 1.2)}));
  ASSERT_EQ(out.syllables.size(), 1u);
  EXPECT_EQ(out.syllables[0].segment, seg("a", 0.5, 1));
  EXPECT_DOUBLE_EQ(out.start(), 0.5);
  EXPECT_DOUBLE_EQ(out.end(), 1.0);
}

TEST(MergeSilences, PhonemeSilenceInsideSyllable) {
  PhraseAnnotation raw;
  raw.syllables.push_back(syllable("ma", 0.0, {{"m", 0.1}, {"SIL", 0.05}, {"a", 0.3}, {"SIL", 0.2}}));
  raw.syllables.push_back(syllable("ni", 0.65, {{"SIL", 0.1}, {"n", 0.1}, {"i", 0.2}}));
  const auto out = merge_silences(raw);
  ASSERT_EQ(out.syllables.size(), 2u);
  const auto& ma = out.syllables[0];
  ASSERT_EQ(ma.phonemes.size(), 2u);
  EXPECT_DOUBLE_EQ(ma.phonemes[0].offset, 0.15);
  // Trailing silence of "ma" and leading silence of "ni" both join "a".
  EXPECT_DOUBLE_EQ(ma.segment.offset, 0.75);
  EXPECT_DOUBLE_EQ(out.syllables[1].segment.onset, 0.75);
  EXPECT_EQ(out.syllables[1].phonemes.size(), 2u);
  validate(out);
}

TEST(MergeSilences, AllSilenceRejected) {
  EXPECT_EQ(code_of([] { merge_silences(flat({seg("SIL", 0, 1), seg("SIL", 1, 2)})); }), ErrorCode::kAllSilence);
}

TEST(MergeSilences, VoicedSyllableOfOnlySilenceRejected) {
  PhraseAnnotation raw;
  raw.syllables.push_back(syllable("a", 0.0, {{"a", 0.5}}));
  raw.syllables.push_back(syllable("b", 0.5, {{"SIL", 0.5}}));
  EXPECT_EQ(code_of([&] { merge_silences(raw); }), ErrorCode::kInvariantViolation);
}

TEST(MergeSilences, IdempotentAndSpanPreserving) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed);
    std::vector<Segment> segs;
    double t = 0;
    bool voiced = false;
    const std::size_t n = rng.uniform_index(1, 8);
    double first_voiced = -1, last_voiced = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = rng.uniform(0.05, 0.5);
      const bool silent = rng.uniform() < 0.35 && !(i + 1 == n && !voiced);
      segs.push_back(seg(silent ? "SIL" : "x" + std::to_string(i), t, t + d));
      if (!silent) {
        if (!voiced) first_voiced = t;
        last_voiced = t + d;
        voiced = true;
      }
      t += d;
    }
    const auto once = merge_silences(flat(segs));
    EXPECT_EQ(merge_silences(once), once) << "seed " << seed;
    EXPECT_DOUBLE_EQ(once.start(), first_voiced);
    EXPECT_DOUBLE_EQ(once.end(), last_voiced);
    for (const auto& s : once.segments(Level::kPhoneme)) EXPECT_FALSE(s.is_silence());
  }
}

TEST(Validate, RejectsGapsAndBadSegments) {
  EXPECT_EQ(code_of([] { validate(flat({seg("a", 0, 1), seg("b", 1.1, 2)})); }), ErrorCode::kInvariantViolation);
  EXPECT_EQ(code_of([] { validate(flat({seg("a", 0, 1), seg("b", 1, 1)})); }), ErrorCode::kInvariantViolation);
  EXPECT_EQ(code_of([] { validate(flat({seg("", 0, 1)})); }), ErrorCode::kInvariantViolation);
  EXPECT_EQ(code_of([] { validate(PhraseAnnotation{}); }), ErrorCode::kInvariantViolation);
}

TEST(BuildDurationSequences, SingleSyllable) {
  PhraseAnnotation a;
  a.syllables.push_back(syllable("ma", 0.0, {{"m", 0.1}, {"a", 0.5}}));
  const auto d = build_duration_sequences(a);
  ASSERT_EQ(d.syllable_durations.size(), 1u);
  EXPECT_DOUBLE_EQ(d.syllable_durations[0], 0.6);
  EXPECT_DOUBLE_EQ(d.phoneme_durations[0][0], 0.1);
  EXPECT_DOUBLE_EQ(d.phoneme_durations[0][1], 0.5);
  EXPECT_EQ(d.syllable_labels[0], "ma");
  EXPECT_EQ(d.phoneme_labels[0], (std::vector<std::string>{"m", "a"}));
}

TEST(BuildDurationSequences, TwoSyllables) {
  PhraseAnnotation a;
  a.syllables.push_back(syllable("s1", 0.0, {{"p", 0.1}, {"q", 0.2}}));
  a.syllables.push_back(syllable("s2", 0.3, {{"r", 0.3}}));
  const auto d = build_duration_sequences(a);
  EXPECT_NEAR(d.syllable_durations[0], 0.3, 1e-12);
  EXPECT_NEAR(d.syllable_durations[1], 0.3, 1e-12);
  EXPECT_NEAR(d.phoneme_durations[0][0], 0.1, 1e-12);
  EXPECT_NEAR(d.phoneme_durations[0][1], 0.2, 1e-12);
  EXPECT_NEAR(d.phoneme_durations[1][0], 0.3, 1e-12);
}

TEST(BuildDurationSequences, RejectsUnmergedSilence) {
  EXPECT_EQ(code_of([] { build_duration_sequences(flat({seg("a", 0, 1), seg("SIL", 1, 2), seg("b", 2, 3)})); }),
            ErrorCode::kInvariantViolation);
}

TEST(BuildDurationSequences, RejectsBrokenSum) {
  PhraseAnnotation a;
  a.syllables.push_back({seg("ma", 0, 1), {seg("m", 0, 0.4), seg("a", 0.4, 0.9)}});
  EXPECT_EQ(code_of([&] { build_duration_sequences(a); }), ErrorCode::kInvariantViolation);
}

TEST(BuildDurationSequences, SimulatorRoundTrip) {
  SimConfig config;
  config.jitter_sigma = 0.2;
  const auto pair = generate_phrase(config, 7);
  const auto seq = build_duration_sequences(pair.teacher);
  const auto rebuilt = annotation_from_durations(seq, pair.teacher.start(), pair.teacher.phrase_id);
  const auto again = build_duration_sequences(rebuilt);
  ASSERT_EQ(again.num_syllables(), seq.num_syllables());
  EXPECT_EQ(again.syllable_labels, seq.syllable_labels);
  EXPECT_EQ(again.phoneme_labels, seq.phoneme_labels);
  for (std::size_t n = 0; n < seq.num_syllables(); ++n) {
    EXPECT_NEAR(again.syllable_durations[n], seq.syllable_durations[n], 1e-9);
    for (std::size_t k = 0; k < seq.phoneme_durations[n].size(); ++k)
      EXPECT_NEAR(again.phoneme_durations[n][k], seq.phoneme_durations[n][k], 1e-9);
  }
}

TEST(FrameGrid, FrameOfExactMultiples) {
  const FrameGrid grid(0.01, 100);
  EXPECT_EQ(grid.frame_of(0.1), 10u);
  EXPECT_EQ(grid.frame_of(0.11), 11u);
  EXPECT_EQ(grid.frame_of(0.29), 29u);
  EXPECT_EQ(grid.frame_of(0.105), 10u);
  EXPECT_EQ(grid.frame_of(0.0), 0u);
  EXPECT_THROW(FrameGrid(0.0, 10), Error);
}

}  // namespace
}  // namespace duraseg
