#include "duraseg/core.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "duraseg/error.hpp"

namespace duraseg {

std::string_view level_name(Level level) {
  return level == Level::kSyllable ? "syllable" : "phoneme";
}

Level parse_level(std::string_view name) {
  if (name == "syllable") return Level::kSyllable;
  if (name == "phoneme") return Level::kPhoneme;
  throw Error(ErrorCode::kBadInput, "unknown level '" + std::string(name) + "'");
}

double PhraseAnnotation::start() const {
  if (syllables.empty()) throw Error(ErrorCode::kEmptyPhrase, "phrase has no syllables");
  return syllables.front().segment.onset;
}

double PhraseAnnotation::end() const {
  if (syllables.empty()) throw Error(ErrorCode::kEmptyPhrase, "phrase has no syllables");
  return syllables.back().segment.offset;
}

std::size_t PhraseAnnotation::num_phonemes() const {
  std::size_t n = 0;
  for (const auto& s : syllables) n += s.phonemes.size();
  return n;
}

std::vector<Segment> PhraseAnnotation::segments(Level level) const {
  std::vector<Segment> out;
  for (const auto& s : syllables) {
    if (level == Level::kSyllable) {
      out.push_back(s.segment);
    } else {
      out.insert(out.end(), s.phonemes.begin(), s.phonemes.end());
    }
  }
  return out;
}

std::vector<double> PhraseAnnotation::onsets(Level level) const {
  std::vector<double> out;
  for (const auto& seg : segments(level)) out.push_back(seg.onset);
  return out;
}

namespace {

[[noreturn]] void violation(const std::string& what) {
  throw Error(ErrorCode::kInvariantViolation, what);
}

bool touches(double offset, double next_onset) {
  return std::abs(offset - next_onset) <= kDurationSumTolerance;
}

void check_segment(const Segment& seg, const std::string& where) {
  if (seg.label.empty()) violation(where + ": empty label");
  if (!std::isfinite(seg.onset) || !std::isfinite(seg.offset))
    violation(where + ": non-finite time");
  if (seg.onset < 0.0) violation(where + ": negative onset");
  if (!(seg.offset > seg.onset)) violation(where + ": offset must exceed onset");
}

}  // namespace

void validate(const PhraseAnnotation& annotation) {
  if (annotation.syllables.empty()) violation("phrase '" + annotation.phrase_id + "' has no syllables");
  for (std::size_t n = 0; n < annotation.syllables.size(); ++n) {
    const auto& syl = annotation.syllables[n];
    const std::string where = "syllable " + std::to_string(n);
    check_segment(syl.segment, where);
    if (n > 0 && !touches(annotation.syllables[n - 1].segment.offset, syl.segment.onset))
      violation(where + ": not contiguous with previous syllable");
    if (syl.phonemes.empty()) {
      if (!syl.segment.is_silence()) violation(where + ": no phonemes");
      continue;
    }
    if (!touches(syl.phonemes.front().onset, syl.segment.onset))
      violation(where + ": first phoneme does not start at syllable onset");
    if (!touches(syl.phonemes.back().offset, syl.segment.offset))
      violation(where + ": last phoneme does not end at syllable offset");
    for (std::size_t k = 0; k < syl.phonemes.size(); ++k) {
      check_segment(syl.phonemes[k], where + " phoneme " + std::to_string(k));
      if (k > 0 && !touches(syl.phonemes[k - 1].offset, syl.phonemes[k].onset))
        violation(where + " phoneme " + std::to_string(k) + ": not contiguous");
    }
  }
}

void validate(const DurationSequence& durations) {
  const std::size_t n_syl = durations.syllable_durations.size();
  if (n_syl == 0) violation("duration sequence is empty");
  if (durations.phoneme_durations.size() != n_syl || durations.syllable_labels.size() != n_syl ||
      durations.phoneme_labels.size() != n_syl)
    violation("duration sequence lists have mismatched lengths");
  for (std::size_t n = 0; n < n_syl; ++n) {
    const std::string where = "syllable " + std::to_string(n);
    const double mu = durations.syllable_durations[n];
    if (!(mu > 0.0) || !std::isfinite(mu)) violation(where + ": duration must be positive");
    if (durations.syllable_labels[n] == kSilenceLabel) violation(where + ": unmerged silence");
    const auto& parts = durations.phoneme_durations[n];
    if (parts.empty()) violation(where + ": no phonemes");
    if (durations.phoneme_labels[n].size() != parts.size())
      violation(where + ": phoneme labels and durations differ in length");
    double sum = 0.0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (!(parts[k] > 0.0) || !std::isfinite(parts[k]))
        violation(where + ": phoneme duration must be positive");
      if (durations.phoneme_labels[n][k] == kSilenceLabel) violation(where + ": unmerged silence");
      sum += parts[k];
    }
    if (std::abs(sum - mu) > kDurationSumTolerance) {
      std::ostringstream msg;
      msg << where << ": phoneme durations sum to " << sum << " but syllable lasts " << mu;
      violation(msg.str());
    }
  }
}

FrameGrid::FrameGrid(double hop, std::size_t frames) : hop_seconds(hop), n_frames(frames) {
  if (!(hop > 0.0) || !std::isfinite(hop)) throw Error(ErrorCode::kBadInput, "hop must be positive");
  if (frames == 0) throw Error(ErrorCode::kBadInput, "frame grid must hold at least one frame");
}

std::size_t FrameGrid::frame_of(double seconds) const {
  // Times that are exact multiples of the hop must land on their own frame
  // despite rounding in the division.
  const double position = seconds / hop_seconds;
  const double nearest = std::round(position);
  const double frame = std::abs(position - nearest) < 1e-9 ? nearest : std::floor(position);
  return frame <= 0.0 ? 0 : static_cast<std::size_t>(frame);
}

PhraseAnnotation merge_silences(const PhraseAnnotation& raw) {
  validate(raw);

  // Flatten to one phoneme-level stream; a silent syllable contributes one
  // silent span covering it.
  struct Piece {
    Segment segment;
    std::optional<std::size_t> syllable;
  };
  std::vector<Piece> pieces;
  for (std::size_t n = 0; n < raw.syllables.size(); ++n) {
    const auto& syl = raw.syllables[n];
    if (syl.segment.is_silence()) {
      for (const auto& ph : syl.phonemes) {
        if (!ph.is_silence())
          violation("silent syllable " + std::to_string(n) + " holds non-silent phoneme");
      }
      pieces.push_back({syl.segment, std::nullopt});
      continue;
    }
    bool voiced = false;
    for (const auto& ph : syl.phonemes) {
      voiced = voiced || !ph.is_silence();
      pieces.push_back({ph, ph.is_silence() ? std::nullopt : std::optional<std::size_t>(n)});
    }
    if (!voiced) violation("syllable " + std::to_string(n) + " contains only silence");
  }

  PhraseAnnotation out;
  out.phrase_id = raw.phrase_id;
  std::optional<std::size_t> current;
  for (const auto& piece : pieces) {
    if (!piece.syllable) {
      // Leading silence is dropped; internal silence extends the previous
      // phoneme and syllable. Trailing silence is undone below.
      if (!out.syllables.empty()) {
        out.syllables.back().phonemes.back().offset = piece.segment.offset;
        out.syllables.back().segment.offset = piece.segment.offset;
      }
      continue;
    }
    if (current != piece.syllable) {
      current = piece.syllable;
      SyllableAnnotation syl;
      syl.segment = raw.syllables[*current].segment;
      syl.segment.onset = piece.segment.onset;
      // The previous syllable may have been stretched over a silence already.
      if (!out.syllables.empty()) syl.segment.onset = out.syllables.back().segment.offset;
      syl.segment.offset = piece.segment.offset;
      Segment first = piece.segment;
      first.onset = syl.segment.onset;
      syl.phonemes.push_back(first);
      out.syllables.push_back(std::move(syl));
      continue;
    }
    auto& syl = out.syllables.back();
    Segment ph = piece.segment;
    ph.onset = syl.phonemes.back().offset;
    syl.phonemes.push_back(ph);
    syl.segment.offset = ph.offset;
  }
  if (out.syllables.empty()) throw Error(ErrorCode::kAllSilence, "phrase contains only silence");

  // Trim trailing silence: the last voiced phoneme ends where it was annotated.
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
    if (it->syllable) {
      out.syllables.back().phonemes.back().offset = it->segment.offset;
      out.syllables.back().segment.offset = it->segment.offset;
      break;
    }
  }
  return out;
}

DurationSequence build_duration_sequences(const PhraseAnnotation& teacher) {
  validate(teacher);
  DurationSequence seq;
  for (const auto& syl : teacher.syllables) {
    if (syl.segment.is_silence()) violation("teacher annotation holds unmerged silence");
    seq.syllable_durations.push_back(syl.segment.duration());
    seq.syllable_labels.push_back(syl.segment.label);
    std::vector<double> parts;
    std::vector<std::string> labels;
    for (const auto& ph : syl.phonemes) {
      parts.push_back(ph.duration());
      labels.push_back(ph.label);
    }
    seq.phoneme_durations.push_back(std::move(parts));
    seq.phoneme_labels.push_back(std::move(labels));
  }
  validate(seq);
  return seq;
}

PhraseAnnotation annotation_from_durations(const DurationSequence& durations, double start,
                                           std::string phrase_id) {
  validate(durations);
  PhraseAnnotation out;
  out.phrase_id = std::move(phrase_id);
  double onset = start;
  for (std::size_t n = 0; n < durations.num_syllables(); ++n) {
    SyllableAnnotation syl;
    syl.segment = {durations.syllable_labels[n], onset, onset + durations.syllable_durations[n]};
    double t = onset;
    const auto& parts = durations.phoneme_durations[n];
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const double end = k + 1 == parts.size() ? syl.segment.offset : t + parts[k];
      syl.phonemes.push_back({durations.phoneme_labels[n][k], t, end});
      t = end;
    }
    onset = syl.segment.offset;
    out.syllables.push_back(std::move(syl));
  }
  return out;
}

}  // namespace duraseg
