#pragma once

// Duration-informed onset decoder. States are candidate onset frames; the
// transition score between frames i < j is the a-priori duration log-density
// of the next segment evaluated at (j - i) * hop, and the emission score of a
// frame is the log of its onset detection function value.
//
// Frame indices are 0-based: frame 0 is the fixed phrase (or syllable) start
// and frame T-1 the fixed end. Interior onsets lie strictly between them.

#include <cstddef>
#include <span>
#include <vector>

#include "duraseg/core.hpp"
#include "duraseg/prior.hpp"

namespace duraseg {

inline constexpr double kDefaultEpsilon = 1e-10;

/// Per-frame onset detection function, values in [0, 1].
class OnsetCurve {
 public:
  OnsetCurve(std::vector<double> values, double hop_seconds);

  std::span<const double> values() const { return values_; }
  const FrameGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  /// Frames [first, last] inclusive, same hop.
  OnsetCurve slice(std::size_t first, std::size_t last) const;

 private:
  std::vector<double> values_;
  FrameGrid grid_;
};

struct OnsetPath {
  std::vector<std::size_t> onsets;  // interior onset frames, strictly increasing
  double score = 0.0;

  bool operator==(const OnsetPath&) const = default;
};

struct DecoderParams {
  double gamma = kDefaultGamma;
  double epsilon = kDefaultEpsilon;
};

OnsetPath decode_onsets(const OnsetCurve& odf, std::span<const double> durations,
                        const DecoderParams& params = {});

/// The objective maximized by decode_onsets, evaluated on one fixed path.
/// Summation order matches the decoder so the two agree bit for bit.
double score_path(const OnsetCurve& odf, std::span<const double> durations,
                  std::span<const std::size_t> onsets, const DecoderParams& params = {});

}  // namespace duraseg
