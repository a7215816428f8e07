#include "duraseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "duraseg/error.hpp"

namespace duraseg {

namespace {

constexpr std::array<const char*, 20> kPhonemeInventory = {
    "b", "p", "m", "f", "d", "t", "n", "l", "g", "k", "h", "j", "x", "a", "o", "e", "i", "u", "N", "@"};

// Stream tags so that each generator draws from its own sub-stream.
constexpr std::uint64_t kTagPhrase = 0x70687261;
constexpr std::uint64_t kTagSyllableOdf = 0x73796c6c;
constexpr std::uint64_t kTagPhonemeOdf = 0x70686f6e;
constexpr std::uint64_t kTagEmissions = 0x656d6973;

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kBadInput, "simulation config: " + what);
}

std::size_t whole_frames(double seconds, double hop) {
  return static_cast<std::size_t>(std::max(1.0, std::round(seconds / hop)));
}

PhraseAnnotation layout(const std::vector<std::vector<std::size_t>>& frames,
                        const std::vector<std::vector<std::string>>& labels, double hop,
                        const std::string& phrase_id) {
  const FrameGrid unit(hop, 1);
  PhraseAnnotation out;
  out.phrase_id = phrase_id;
  std::size_t t = 0;
  for (std::size_t n = 0; n < frames.size(); ++n) {
    SyllableAnnotation syl;
    std::string name;
    const std::size_t first = t;
    for (std::size_t k = 0; k < frames[n].size(); ++k) {
      syl.phonemes.push_back({labels[n][k], unit.time_of(t), unit.time_of(t + frames[n][k])});
      name += labels[n][k];
      t += frames[n][k];
    }
    syl.segment = {name, unit.time_of(first), unit.time_of(t)};
    out.syllables.push_back(std::move(syl));
  }
  return out;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t state = base ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return splitmix64(state);
}

Rng::Rng(std::uint64_t seed) {
  for (auto& word : state_) word = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::uniform_index(std::size_t lo, std::size_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::size_t>(next() % span);
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

void SimConfig::validate() const {
  require(min_syllables >= 1 && min_syllables <= max_syllables, "syllable count range");
  require(min_phonemes >= 1 && min_phonemes <= max_phonemes, "phoneme count range");
  require(min_phoneme_seconds > 0.0 && min_phoneme_seconds <= max_phoneme_seconds,
          "phoneme duration range");
  require(jitter_sigma >= 0.0 && std::isfinite(jitter_sigma), "jitter must be >= 0");
  require(hop_seconds > 0.0 && std::isfinite(hop_seconds), "hop must be positive");
  require(peak_width_frames >= 1, "peak width must be at least one frame");
  require(peak_amplitude >= 0.0 && peak_amplitude <= 1.0, "peak amplitude must lie in [0, 1]");
  require(noise_floor >= 0.0 && noise_floor <= 1.0, "noise floor must lie in [0, 1]");
  require(spurious_rate >= 0.0 && std::isfinite(spurious_rate), "spurious rate must be >= 0");
  require(spurious_amplitude >= 0.0 && spurious_amplitude <= 1.0, "spurious amplitude must lie in [0, 1]");
  require(emission_log_odds >= 0.0 && std::isfinite(emission_log_odds), "emission log-odds must be >= 0");
  require(emission_noise >= 0.0 && std::isfinite(emission_noise), "emission noise must be >= 0");
}

PhrasePair generate_phrase(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(derive_seed(seed, kTagPhrase));
  const double hop = config.hop_seconds;

  const std::size_t n_syllables = rng.uniform_index(config.min_syllables, config.max_syllables);
  std::vector<std::vector<std::size_t>> teacher_frames(n_syllables);
  std::vector<std::vector<std::size_t>> student_frames(n_syllables);
  std::vector<std::vector<std::string>> labels(n_syllables);
  for (std::size_t n = 0; n < n_syllables; ++n) {
    const std::size_t n_phonemes = rng.uniform_index(config.min_phonemes, config.max_phonemes);
    std::vector<double> teacher_seconds;
    for (std::size_t k = 0; k < n_phonemes; ++k) {
      labels[n].push_back(kPhonemeInventory[rng.uniform_index(0, kPhonemeInventory.size() - 1)]);
      const std::size_t frames =
          whole_frames(rng.uniform(config.min_phoneme_seconds, config.max_phoneme_seconds), hop);
      teacher_frames[n].push_back(frames);
      teacher_seconds.push_back(static_cast<double>(frames) * hop);
    }

    // Student: multiplicative lognormal jitter on the syllable and on each
    // phoneme, phonemes renormalized to fill the jittered syllable.
    double syllable_seconds = 0.0;
    for (double s : teacher_seconds) syllable_seconds += s;
    const double target = syllable_seconds * std::exp(config.jitter_sigma * rng.normal());
    std::vector<double> raw;
    double raw_total = 0.0;
    for (double s : teacher_seconds) {
      raw.push_back(s * std::exp(config.jitter_sigma * rng.normal()));
      raw_total += raw.back();
    }
    for (double r : raw) student_frames[n].push_back(whole_frames(r * (target / raw_total), hop));
  }

  const std::string id = "phrase_" + std::to_string(seed);
  return {layout(teacher_frames, labels, hop, id), layout(student_frames, labels, hop, id)};
}

FrameGrid odf_grid(const PhraseAnnotation& annotation, double hop_seconds) {
  const FrameGrid unit(hop_seconds, 1);
  return FrameGrid(hop_seconds, unit.frame_of(annotation.end() - annotation.start()) + 1);
}

FrameGrid emission_grid(const PhraseAnnotation& annotation, double hop_seconds) {
  const FrameGrid unit(hop_seconds, 1);
  return FrameGrid(hop_seconds, std::max<std::size_t>(unit.frame_of(annotation.end() - annotation.start()), 1));
}

OnsetCurve synthesize_odf(const PhraseAnnotation& annotation, Level level, const SimConfig& config,
                          const FrameGrid& grid, std::uint64_t seed) {
  config.validate();
  Rng rng(derive_seed(seed, level == Level::kSyllable ? kTagSyllableOdf : kTagPhonemeOdf));
  std::vector<double> values(grid.n_frames, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(grid.n_frames);
  const auto reach = static_cast<std::ptrdiff_t>(config.peak_width_frames) - 1;
  const double width = 0.5 * static_cast<double>(config.peak_width_frames);

  auto bump = [&](std::ptrdiff_t center, double amplitude) {
    for (std::ptrdiff_t k = -reach; k <= reach; ++k) {
      const std::ptrdiff_t t = center + k;
      if (t < 0 || t >= n) continue;
      const double z = static_cast<double>(k) / width;
      auto& v = values[static_cast<std::size_t>(t)];
      v = std::max(v, amplitude * std::exp(-0.5 * z * z));
    }
  };

  const double start = annotation.start();
  for (double onset : annotation.onsets(level))
    bump(static_cast<std::ptrdiff_t>(grid.frame_of(onset - start)), config.peak_amplitude);

  if (config.spurious_rate > 0.0) {
    const double span = grid.time_of(grid.n_frames - 1);
    for (double t = rng.exponential(config.spurious_rate); t < span;
         t += rng.exponential(config.spurious_rate)) {
      bump(static_cast<std::ptrdiff_t>(grid.frame_of(t)), config.spurious_amplitude * rng.uniform());
    }
  }

  for (double& v : values) {
    v += config.constant_floor ? config.noise_floor : config.noise_floor * rng.uniform();
    v = std::clamp(v, 0.0, 1.0);
  }
  return OnsetCurve(std::move(values), grid.hop_seconds);
}

EmissionMatrix synthesize_emissions(const PhraseAnnotation& annotation, const SimConfig& config,
                                    const FrameGrid& grid, std::uint64_t seed) {
  config.validate();
  Rng rng(derive_seed(seed, kTagEmissions));
  const auto phonemes = annotation.segments(Level::kPhoneme);
  const std::size_t n_states = phonemes.size();
  const double start = annotation.start();

  std::vector<std::string> labels;
  std::vector<std::size_t> state_end;  // exclusive end frame of each state
  for (const auto& ph : phonemes) {
    labels.push_back(ph.label);
    state_end.push_back(grid.frame_of(ph.offset - start));
  }

  std::vector<double> log_probs(grid.n_frames * n_states);
  std::size_t state = 0;
  for (std::size_t t = 0; t < grid.n_frames; ++t) {
    while (state + 1 < n_states && t >= state_end[state]) ++state;
    for (std::size_t s = 0; s < n_states; ++s) {
      const double base = s == state ? 0.0 : -config.emission_log_odds;
      log_probs[t * n_states + s] = base + config.emission_noise * rng.normal();
    }
  }
  return EmissionMatrix(std::move(log_probs), grid.n_frames, std::move(labels), grid.hop_seconds);
}

SimulatedPhrase simulate_phrase(const SimConfig& config, std::size_t index) {
  const std::uint64_t seed = derive_seed(config.seed, index);
  PhrasePair pair = generate_phrase(config, seed);
  char id[32];
  std::snprintf(id, sizeof id, "phrase_%04zu", index);
  pair.teacher.phrase_id = id;
  pair.student.phrase_id = id;

  const FrameGrid grid = odf_grid(pair.student, config.hop_seconds);
  OdfPair odfs(synthesize_odf(pair.student, Level::kSyllable, config, grid, seed),
               synthesize_odf(pair.student, Level::kPhoneme, config, grid, seed), pair.student.start());
  EmissionMatrix emissions = synthesize_emissions(
      pair.student, config, emission_grid(pair.student, config.hop_seconds), seed);
  return {std::move(pair.teacher), std::move(pair.student), std::move(odfs), std::move(emissions)};
}

OnsetPath brute_force_decode(const OnsetCurve& odf, std::span<const double> durations,
                             const DecoderParams& params) {
  if (durations.empty()) throw Error(ErrorCode::kBadInput, "no durations to decode");
  const std::size_t n_onsets = durations.size() - 1;
  if (n_onsets == 0) return {};
  const std::size_t n_frames = odf.size();
  if (n_frames < durations.size() + 1)
    throw Error(ErrorCode::kInfeasiblePhrase, "segments do not fit in the curve");

  const std::size_t interior = n_frames - 2;
  double count = 1.0;
  for (std::size_t k = 0; k < n_onsets; ++k)
    count = count * static_cast<double>(interior - k) / static_cast<double>(k + 1);
  if (count > kMaxEnumeration) throw Error(ErrorCode::kTooLarge, "too many onset placements to enumerate");

  // Lexicographic enumeration of strictly increasing placements in [1, T-2].
  std::vector<std::size_t> onsets(n_onsets);
  for (std::size_t k = 0; k < n_onsets; ++k) onsets[k] = k + 1;
  OnsetPath best{onsets, -std::numeric_limits<double>::infinity()};
  bool first = true;
  while (true) {
    const double score = score_path(odf, durations, onsets, params);
    if (first || score > best.score) {
      best = {onsets, score};
      first = false;
    }
    std::size_t k = n_onsets;
    while (k > 0 && onsets[k - 1] == interior - (n_onsets - k)) --k;
    if (k == 0) break;
    ++onsets[k - 1];
    for (std::size_t m = k; m < n_onsets; ++m) onsets[m] = onsets[m - 1] + 1;
  }
  return best;
}

Alignment brute_force_align(const EmissionMatrix& emissions,
                            std::span<const OccupancyDistribution> occupancies) {
  const std::size_t n_states = emissions.n_states();
  const std::size_t n_frames = emissions.n_frames();
  if (occupancies.size() != n_states)
    throw Error(ErrorCode::kBadInput, "need one occupancy distribution per state");

  // ways[s][t]: compositions of t frames into states s..S-1 within supports.
  std::vector<std::vector<double>> ways(n_states + 1, std::vector<double>(n_frames + 1, 0.0));
  ways[n_states][0] = 1.0;
  for (std::size_t s = n_states; s-- > 0;) {
    for (std::size_t t = 0; t <= n_frames; ++t) {
      for (std::size_t d = 1; d <= std::min(t, occupancies[s].max_frames()); ++d)
        ways[s][t] += ways[s + 1][t - d];
    }
  }
  if (ways[0][n_frames] == 0.0)
    throw Error(ErrorCode::kInfeasibleAlignment, "no alignment satisfies the occupancy supports");
  if (ways[0][n_frames] > kMaxEnumeration)
    throw Error(ErrorCode::kTooLarge, "too many alignments to enumerate");

  auto score_of = [&](const std::vector<std::size_t>& durations) {
    double score = 0.0;
    std::size_t t = 0;
    for (std::size_t s = 0; s < n_states; ++s) {
      double emitted = 0.0;
      for (std::size_t f = t; f < t + durations[s]; ++f) emitted += emissions.at(f, s);
      score = score + occupancies[s].log_prob(durations[s]);
      score = score + emitted;
      t += durations[s];
    }
    return score;
  };

  Alignment best;
  best.score = -std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<std::size_t> durations(n_states, 0);
  // Depth-first in ascending duration order, so the first maximum seen has
  // the lowest first duration.
  auto visit = [&](auto&& self, std::size_t s, std::size_t remaining) -> void {
    if (s == n_states) {
      if (remaining != 0) return;
      const double score = score_of(durations);
      if (!found || score > best.score) {
        found = true;
        best.score = score;
        best.spans.clear();
        std::size_t t = 0;
        for (std::size_t d : durations) {
          best.spans.push_back({t, d});
          t += d;
        }
      }
      return;
    }
    for (std::size_t d = 1; d <= std::min(remaining, occupancies[s].max_frames()); ++d) {
      if (ways[s + 1][remaining - d] == 0.0) continue;
      durations[s] = d;
      self(self, s + 1, remaining - d);
    }
  };
  visit(visit, 0, n_frames);
  return best;
}

}  // namespace duraseg
