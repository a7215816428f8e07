#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "duraseg/core.hpp"

namespace duraseg {

inline constexpr double kDefaultToleranceSeconds = 0.025;

struct OnsetMatchResult {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::vector<std::pair<double, double>> matched;  // (reference, detected)

  double precision() const;
  double recall() const;
  double f1() const;
};

/// F1 from precision and recall; 0 when both are 0.
double f_measure(double precision, double recall);

/// One-to-one onset matching. References are visited in ascending order and
/// each takes the nearest unmatched detection with |det - ref| < tolerance
/// (ties go to the earlier detection).
OnsetMatchResult onset_prf(std::span<const double> detected, std::span<const double> reference,
                           double tolerance = kDefaultToleranceSeconds);

/// Durations of agreeing and disagreeing labels over the intersection of the
/// two phrase spans, integrated exactly over the merged boundary set.
struct SegmentationOverlap {
  double correct = 0.0;
  double total = 0.0;

  double accuracy() const;
};

SegmentationOverlap segmentation_overlap(const PhraseAnnotation& detected,
                                         const PhraseAnnotation& reference, Level level);

double segmentation_accuracy(const PhraseAnnotation& detected, const PhraseAnnotation& reference,
                             Level level);

struct PhraseScore {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  SegmentationOverlap overlap;
};

PhraseScore score_phrase(const PhraseAnnotation& detected, const PhraseAnnotation& reference,
                         Level level, double tolerance = kDefaultToleranceSeconds);

struct LevelReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double segmentation = 0.0;
};

/// Micro-averaged onset scores (pooled counts) and duration-weighted
/// segmentation accuracy.
LevelReport aggregate(std::span<const PhraseScore> phrases);

}  // namespace duraseg
