#include "duraseg/eval.hpp"

#include <algorithm>
#include <cmath>

#include "duraseg/error.hpp"

namespace duraseg {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Label of the segment covering time t, or nullptr when t lies outside.
const std::string* label_at(const std::vector<Segment>& segments, double t) {
  auto it = std::upper_bound(segments.begin(), segments.end(), t,
                             [](double time, const Segment& seg) { return time < seg.onset; });
  if (it == segments.begin()) return nullptr;
  --it;
  return t < it->offset ? &it->label : nullptr;
}

}  // namespace

double f_measure(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

double OnsetMatchResult::precision() const {
  return ratio(true_positives, true_positives + false_positives);
}

double OnsetMatchResult::recall() const {
  return ratio(true_positives, true_positives + false_negatives);
}

double OnsetMatchResult::f1() const { return f_measure(precision(), recall()); }

OnsetMatchResult onset_prf(std::span<const double> detected, std::span<const double> reference,
                           double tolerance) {
  if (!(tolerance > 0.0)) throw Error(ErrorCode::kBadInput, "tolerance must be positive");
  std::vector<double> det(detected.begin(), detected.end());
  std::vector<double> ref(reference.begin(), reference.end());
  std::sort(det.begin(), det.end());
  std::sort(ref.begin(), ref.end());

  OnsetMatchResult result;
  // Times are decimal in the files; a distance within 1e-9 s of the
  // tolerance counts as on the boundary and is rejected.
  const double limit = tolerance - 1e-9;
  std::vector<bool> used(det.size(), false);
  for (double r : ref) {
    std::size_t best = det.size();
    double best_distance = limit;
    // Detections are sorted, so only the window around r matters.
    auto lo = std::lower_bound(det.begin(), det.end(), r - tolerance);
    for (auto it = lo; it != det.end() && *it <= r + tolerance; ++it) {
      const auto idx = static_cast<std::size_t>(it - det.begin());
      const double distance = std::abs(*it - r);
      if (!used[idx] && distance < best_distance) {
        best_distance = distance;
        best = idx;
      }
    }
    if (best < det.size()) {
      used[best] = true;
      result.matched.emplace_back(r, det[best]);
    }
  }
  result.true_positives = result.matched.size();
  result.false_positives = det.size() - result.true_positives;
  result.false_negatives = ref.size() - result.true_positives;
  return result;
}

double SegmentationOverlap::accuracy() const {
  if (correct == total) return total > 0.0 ? 1.0 : 0.0;
  return correct / total;
}

SegmentationOverlap segmentation_overlap(const PhraseAnnotation& detected,
                                         const PhraseAnnotation& reference, Level level) {
  if (detected.syllables.empty() || reference.syllables.empty())
    throw Error(ErrorCode::kEmptyPhrase, "cannot score an empty phrase");
  const double start = std::max(detected.start(), reference.start());
  const double end = std::min(detected.end(), reference.end());
  if (!(end > start)) throw Error(ErrorCode::kEmptyPhrase, "phrase spans do not overlap");

  const auto det = detected.segments(level);
  const auto ref = reference.segments(level);
  std::vector<double> cuts{start, end};
  for (const auto* segs : {&det, &ref}) {
    for (const auto& seg : *segs) {
      if (seg.onset > start && seg.onset < end) cuts.push_back(seg.onset);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  SegmentationOverlap overlap;
  double wrong = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double length = cuts[i + 1] - cuts[i];
    const double mid = cuts[i] + 0.5 * length;
    const std::string* a = label_at(det, mid);
    const std::string* b = label_at(ref, mid);
    if (a && b && *a == *b) {
      overlap.correct += length;
    } else {
      wrong += length;
    }
  }
  overlap.total = overlap.correct + wrong;
  return overlap;
}

double segmentation_accuracy(const PhraseAnnotation& detected, const PhraseAnnotation& reference,
                             Level level) {
  return segmentation_overlap(detected, reference, level).accuracy();
}

PhraseScore score_phrase(const PhraseAnnotation& detected, const PhraseAnnotation& reference,
                         Level level, double tolerance) {
  const auto det = detected.onsets(level);
  const auto ref = reference.onsets(level);
  const auto match = onset_prf(det, ref, tolerance);
  return {match.true_positives, match.false_positives, match.false_negatives,
          segmentation_overlap(detected, reference, level)};
}

LevelReport aggregate(std::span<const PhraseScore> phrases) {
  if (phrases.empty()) throw Error(ErrorCode::kBadInput, "nothing to aggregate");
  OnsetMatchResult pooled;
  SegmentationOverlap overlap;
  for (const auto& p : phrases) {
    pooled.true_positives += p.true_positives;
    pooled.false_positives += p.false_positives;
    pooled.false_negatives += p.false_negatives;
    overlap.correct += p.overlap.correct;
    overlap.total += p.overlap.total;
  }
  return {pooled.precision(), pooled.recall(), pooled.f1(), overlap.accuracy()};
}

}  // namespace duraseg
