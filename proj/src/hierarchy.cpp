#include "duraseg/hierarchy.hpp"

#include <cmath>
#include <string>

#include "duraseg/error.hpp"

namespace duraseg {

OdfPair::OdfPair(OnsetCurve syllable_curve, OnsetCurve phoneme_curve, double start)
    : syllable(std::move(syllable_curve)), phoneme(std::move(phoneme_curve)), phrase_start(start) {
  if (syllable.size() != phoneme.size())
    throw Error(ErrorCode::kBadInput, "syllable and phoneme curves differ in length");
  if (syllable.grid().hop_seconds != phoneme.grid().hop_seconds)
    throw Error(ErrorCode::kBadInput, "syllable and phoneme curves differ in hop size");
  if (!std::isfinite(phrase_start) || phrase_start < 0.0)
    throw Error(ErrorCode::kBadInput, "phrase start must be a non-negative time");
}

PhraseAnnotation segment_phrase(const OdfPair& odfs, const DurationSequence& teacher,
                                const DecoderParams& params, std::string phrase_id) {
  validate(teacher);
  const std::size_t n_syllables = teacher.num_syllables();
  const std::size_t last = odfs.syllable.size() - 1;
  if (last == 0) throw Error(ErrorCode::kInfeasiblePhrase, "phrase spans a single frame");
  const FrameGrid& grid = odfs.grid();
  auto time_of = [&](std::size_t frame) { return odfs.phrase_start + grid.time_of(frame); };

  const OnsetPath syllable_path = decode_onsets(odfs.syllable, teacher.syllable_durations, params);
  std::vector<std::size_t> bounds;
  bounds.reserve(n_syllables + 1);
  bounds.push_back(0);
  bounds.insert(bounds.end(), syllable_path.onsets.begin(), syllable_path.onsets.end());
  bounds.push_back(last);

  PhraseAnnotation out;
  out.phrase_id = std::move(phrase_id);
  for (std::size_t n = 0; n < n_syllables; ++n) {
    const std::size_t first = bounds[n];
    const std::size_t end = bounds[n + 1];
    const auto& teacher_parts = teacher.phoneme_durations[n];
    const std::size_t n_phonemes = teacher_parts.size();
    if (n_phonemes > 1 && end - first < n_phonemes)
      throw InfeasibleSyllableError(
          n, "inferred syllable " + std::to_string(n) + " spans " + std::to_string(end - first) +
                 " frames but holds " + std::to_string(n_phonemes) + " phonemes");

    const double inferred = static_cast<double>(end - first) * grid.hop_seconds;
    const double ratio = inferred / teacher.syllable_durations[n];
    std::vector<double> scaled(teacher_parts);
    for (double& mu : scaled) mu *= ratio;

    const OnsetPath phoneme_path = decode_onsets(odfs.phoneme.slice(first, end), scaled, params);

    SyllableAnnotation syl;
    syl.segment = {teacher.syllable_labels[n], time_of(first), time_of(end)};
    std::size_t onset = first;
    for (std::size_t k = 0; k < n_phonemes; ++k) {
      const std::size_t offset = k + 1 < n_phonemes ? first + phoneme_path.onsets[k] : end;
      syl.phonemes.push_back({teacher.phoneme_labels[n][k], time_of(onset), time_of(offset)});
      onset = offset;
    }
    out.syllables.push_back(std::move(syl));
  }
  return out;
}

}  // namespace duraseg
