#pragma once

// Seeded synthetic data for desk-scale verification: teacher/student phrase
// pairs, onset detection functions, emission matrices, plus exhaustive
// reference decoders for both the onset decoder and the HSMM baseline.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "duraseg/core.hpp"
#include "duraseg/decoder.hpp"
#include "duraseg/hierarchy.hpp"
#include "duraseg/hsmm.hpp"

namespace duraseg {

/// xoshiro256** seeded through splitmix64. Every distribution below is
/// derived from raw 64-bit draws with fixed formulas, so a seed produces the
/// same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  double uniform();                     // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  std::size_t uniform_index(std::size_t lo, std::size_t hi);  // [lo, hi]
  double normal();                      // Box-Muller, standard normal
  double exponential(double rate);

 private:
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of sub-stream `index` under `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t n_phrases = 10;

  std::size_t min_syllables = 3;
  std::size_t max_syllables = 8;
  std::size_t min_phonemes = 1;
  std::size_t max_phonemes = 4;
  double min_phoneme_seconds = 0.05;
  double max_phoneme_seconds = 0.40;
  double jitter_sigma = 0.0;
  double hop_seconds = kDefaultHopSeconds;

  std::size_t peak_width_frames = 1;
  double peak_amplitude = 1.0;
  double noise_floor = 0.0;
  bool constant_floor = false;
  double spurious_rate = 0.0;  // spurious peaks per second
  double spurious_amplitude = 0.5;

  double emission_log_odds = 5.0;
  double emission_noise = 0.0;

  void validate() const;
};

struct PhrasePair {
  PhraseAnnotation teacher;
  PhraseAnnotation student;
};

PhrasePair generate_phrase(const SimConfig& config, std::uint64_t seed);

/// Grid of boundary frames for an onset curve: frame 0 at the phrase start
/// and the last frame at the phrase end.
FrameGrid odf_grid(const PhraseAnnotation& annotation, double hop_seconds);

/// Grid of frames covered by the phrase, one row per frame of the emission
/// matrix.
FrameGrid emission_grid(const PhraseAnnotation& annotation, double hop_seconds);

OnsetCurve synthesize_odf(const PhraseAnnotation& annotation, Level level, const SimConfig& config,
                          const FrameGrid& grid, std::uint64_t seed);

EmissionMatrix synthesize_emissions(const PhraseAnnotation& annotation, const SimConfig& config,
                                    const FrameGrid& grid, std::uint64_t seed);

struct SimulatedPhrase {
  PhraseAnnotation teacher;
  PhraseAnnotation student;
  OdfPair odfs;
  EmissionMatrix emissions;
};

/// Phrase `index` of a simulated data set, with seeds derived from config.seed.
SimulatedPhrase simulate_phrase(const SimConfig& config, std::size_t index);

inline constexpr double kMaxEnumeration = 1e6;

/// Exhaustive maximization of score_path over every interior onset placement,
/// lowest lexicographic path on ties.
OnsetPath brute_force_decode(const OnsetCurve& odf, std::span<const double> durations,
                             const DecoderParams& params = {});

/// Exhaustive maximization of the HSMM objective over every composition of the
/// frames into state durations; lowest first duration wins ties.
Alignment brute_force_align(const EmissionMatrix& emissions,
                            std::span<const OccupancyDistribution> occupancies);

}  // namespace duraseg
