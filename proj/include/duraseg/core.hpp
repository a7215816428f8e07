#pragma once

// Domain types shared by every stage of the engine: hierarchical phrase
// annotations, teacher duration sequences and the analysis frame grid.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace duraseg {

inline constexpr std::string_view kSilenceLabel = "SIL";
inline constexpr double kDefaultHopSeconds = 0.01;
inline constexpr double kDurationSumTolerance = 1e-9;

enum class Level { kSyllable, kPhoneme };

std::string_view level_name(Level level);
Level parse_level(std::string_view name);

struct Segment {
  std::string label;
  double onset = 0.0;
  double offset = 0.0;

  double duration() const { return offset - onset; }
  bool is_silence() const { return label == kSilenceLabel; }
  bool operator==(const Segment&) const = default;
};

struct SyllableAnnotation {
  Segment segment;
  std::vector<Segment> phonemes;

  bool operator==(const SyllableAnnotation&) const = default;
};

struct PhraseAnnotation {
  std::string phrase_id;
  std::vector<SyllableAnnotation> syllables;

  double start() const;
  double end() const;
  std::size_t num_phonemes() const;

  /// Segments of one level in time order.
  std::vector<Segment> segments(Level level) const;
  /// Onset times of one level. Every syllable onset is also a phoneme onset.
  std::vector<double> onsets(Level level) const;

  bool operator==(const PhraseAnnotation&) const = default;
};

/// Throws Error(kInvariantViolation) unless the annotation is nonempty,
/// contiguous at both levels and every segment has positive length and a
/// nonempty label.
void validate(const PhraseAnnotation& annotation);

/// Teacher-side coarse durations: one flat syllable array and a nested
/// phoneme array, with parallel label lists.
struct DurationSequence {
  std::vector<double> syllable_durations;
  std::vector<std::vector<double>> phoneme_durations;
  std::vector<std::string> syllable_labels;
  std::vector<std::vector<std::string>> phoneme_labels;

  std::size_t num_syllables() const { return syllable_durations.size(); }
  bool operator==(const DurationSequence&) const = default;
};

void validate(const DurationSequence& durations);

struct FrameGrid {
  double hop_seconds = kDefaultHopSeconds;
  std::size_t n_frames = 0;

  FrameGrid() = default;
  FrameGrid(double hop, std::size_t frames);

  double time_of(std::size_t frame) const { return static_cast<double>(frame) * hop_seconds; }
  /// Index of the frame whose interval [t*hop, (t+1)*hop) contains `seconds`.
  std::size_t frame_of(double seconds) const;
};

/// Absorbs internal silences into the preceding segment and trims leading and
/// trailing silence at both levels.
PhraseAnnotation merge_silences(const PhraseAnnotation& raw);

DurationSequence build_duration_sequences(const PhraseAnnotation& teacher);

/// Rebuilds an annotation from a duration sequence laid out from `start`.
PhraseAnnotation annotation_from_durations(const DurationSequence& durations, double start,
                                           std::string phrase_id = {});

}  // namespace duraseg
