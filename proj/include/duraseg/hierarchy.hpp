#pragma once

#include "duraseg/core.hpp"
#include "duraseg/decoder.hpp"

namespace duraseg {

/// Syllable and phoneme onset detection functions on one shared frame grid.
/// Frame 0 sits at `phrase_start` seconds.
struct OdfPair {
  OnsetCurve syllable;
  OnsetCurve phoneme;
  double phrase_start = 0.0;

  OdfPair(OnsetCurve syllable_curve, OnsetCurve phoneme_curve, double start = 0.0);

  const FrameGrid& grid() const { return syllable.grid(); }
};

/// Two-pass inference: syllable onsets over the whole phrase, then phoneme
/// onsets inside each inferred syllable with the teacher's phoneme durations
/// rescaled to the inferred syllable length. Labels are copied from the
/// teacher in order.
PhraseAnnotation segment_phrase(const OdfPair& odfs, const DurationSequence& teacher,
                                const DecoderParams& params = {}, std::string phrase_id = {});

}  // namespace duraseg
