#pragma once

#include <cstdint>
#include <vector>

#include "duraseg/core.hpp"

namespace duraseg {

inline constexpr double kNeighborWeight = 0.25;

/// Per-frame binary onset targets with sample weights for training an onset
/// detector. An annotated onset frame is a positive with weight 1; its two
/// neighbors are positives with weight 0.25.
struct TargetSequence {
  std::vector<std::uint8_t> labels;
  std::vector<double> weights;
  FrameGrid grid;
  Level level = Level::kSyllable;
};

struct TrainingTargets {
  TargetSequence syllable;
  TargetSequence phoneme;
};

TargetSequence make_level_targets(const PhraseAnnotation& annotation, const FrameGrid& grid, Level level);

TrainingTargets make_training_targets(const PhraseAnnotation& annotation, const FrameGrid& grid);

/// Smallest grid that holds every onset and the phrase end.
FrameGrid grid_for(const PhraseAnnotation& annotation, double hop_seconds = kDefaultHopSeconds);

}  // namespace duraseg
