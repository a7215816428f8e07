#pragma once

// Forced-alignment baseline: a left-to-right hidden semi-Markov chain whose
// states are the teacher's phonemes in order. Each state carries an explicit
// occupancy distribution over whole-frame durations; there are no
// self-transitions and every state hands over to the next with probability 1.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "duraseg/core.hpp"
#include "duraseg/prior.hpp"

namespace duraseg {

/// Frames x states grid of log emission probabilities, row-major.
class EmissionMatrix {
 public:
  EmissionMatrix(std::vector<double> log_probs, std::size_t n_frames,
                 std::vector<std::string> state_labels, double hop_seconds = kDefaultHopSeconds);

  std::size_t n_frames() const { return grid_.n_frames; }
  std::size_t n_states() const { return labels_.size(); }
  const FrameGrid& grid() const { return grid_; }
  const std::vector<std::string>& state_labels() const { return labels_; }
  std::span<const double> data() const { return log_probs_; }

  double at(std::size_t frame, std::size_t state) const {
    return log_probs_[frame * labels_.size() + state];
  }

 private:
  std::vector<double> log_probs_;
  std::vector<std::string> labels_;
  FrameGrid grid_;
};

/// Log probability mass over durations of 1..max_frames() frames.
struct OccupancyDistribution {
  std::vector<double> log_mass;  // log_mass[d - 1] for duration d

  std::size_t max_frames() const { return log_mass.size(); }
  double log_prob(std::size_t frames) const { return log_mass[frames - 1]; }
};

/// Discretized, renormalized Gaussian N(d*hop; mu, (gamma*mu)^2). The support
/// ends at ceil((mu + 4 sigma) / hop) unless `max_frames` overrides it.
OccupancyDistribution discretize_occupancy(double mu_seconds, double gamma, const FrameGrid& grid,
                                           std::optional<std::size_t> max_frames = std::nullopt);

struct StateSpan {
  std::size_t first = 0;   // first frame
  std::size_t frames = 0;  // duration in frames

  std::size_t end() const { return first + frames; }
  bool operator==(const StateSpan&) const = default;
};

struct Alignment {
  std::vector<StateSpan> spans;
  double score = 0.0;
};

/// Viterbi segmental DP over state durations. Throws kInfeasibleAlignment if
/// no duration assignment within the occupancy supports covers all frames.
Alignment hsmm_forced_align(const EmissionMatrix& emissions,
                            std::span<const OccupancyDistribution> occupancies);

/// Baseline pipeline: teacher phoneme durations become occupancies, the
/// alignment becomes a labeled annotation grouped by the teacher's syllables.
PhraseAnnotation align_phrase(const EmissionMatrix& emissions, const DurationSequence& teacher,
                              double gamma = kDefaultGamma, double phrase_start = 0.0,
                              std::string phrase_id = {});

}  // namespace duraseg
