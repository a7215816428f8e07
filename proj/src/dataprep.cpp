#include "duraseg/dataprep.hpp"

#include <string>

#include "duraseg/error.hpp"

namespace duraseg {

TargetSequence make_level_targets(const PhraseAnnotation& annotation, const FrameGrid& grid, Level level) {
  TargetSequence out;
  out.grid = grid;
  out.level = level;
  out.labels.assign(grid.n_frames, 0);
  out.weights.assign(grid.n_frames, 1.0);

  std::vector<bool> center(grid.n_frames, false);
  for (double onset : annotation.onsets(level)) {
    if (!(onset >= 0.0)) throw Error(ErrorCode::kOnsetOutOfRange, "onset before frame 0");
    const std::size_t t = grid.frame_of(onset);
    if (t >= grid.n_frames)
      throw Error(ErrorCode::kOnsetOutOfRange,
                  "onset at " + std::to_string(onset) + " s lies beyond the frame grid");
    center[t] = true;
  }
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    if (!center[t]) continue;
    out.labels[t] = 1;
    out.weights[t] = 1.0;
    for (std::size_t n : {t - 1, t + 1}) {
      // t - 1 wraps at t == 0 and fails the bound check.
      if (n < grid.n_frames && !center[n]) {
        out.labels[n] = 1;
        out.weights[n] = kNeighborWeight;
      }
    }
  }
  return out;
}

TrainingTargets make_training_targets(const PhraseAnnotation& annotation, const FrameGrid& grid) {
  return {make_level_targets(annotation, grid, Level::kSyllable),
          make_level_targets(annotation, grid, Level::kPhoneme)};
}

FrameGrid grid_for(const PhraseAnnotation& annotation, double hop_seconds) {
  const FrameGrid unit(hop_seconds, 1);
  return FrameGrid(hop_seconds, unit.frame_of(annotation.end()) + 1);
}

}  // namespace duraseg
