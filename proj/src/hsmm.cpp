#include "duraseg/hsmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "duraseg/error.hpp"

namespace duraseg {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

EmissionMatrix::EmissionMatrix(std::vector<double> log_probs, std::size_t n_frames,
                               std::vector<std::string> state_labels, double hop_seconds)
    : log_probs_(std::move(log_probs)), labels_(std::move(state_labels)), grid_(hop_seconds, n_frames) {
  if (labels_.empty()) throw Error(ErrorCode::kBadInput, "emission matrix has no states");
  if (log_probs_.size() != n_frames * labels_.size())
    throw Error(ErrorCode::kBadInput, "emission matrix is not rectangular");
  for (double v : log_probs_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kBadInput, "emission matrix holds non-finite value");
  }
}

OccupancyDistribution discretize_occupancy(double mu_seconds, double gamma, const FrameGrid& grid,
                                           std::optional<std::size_t> max_frames) {
  const PriorDurationModel prior(mu_seconds, gamma);
  std::size_t d_max = 0;
  if (max_frames) {
    d_max = *max_frames;
  } else {
    // Tolerate rounding so that e.g. 0.12 / 0.01 stays at 12 frames.
    const double reach = (prior.mu() + 4.0 * prior.sigma()) / grid.hop_seconds;
    const double frames = std::ceil(reach - 1e-9);
    d_max = frames < 1.0 ? 0 : static_cast<std::size_t>(frames);
  }
  if (d_max < 1) throw Error(ErrorCode::kDegenerateSupport, "occupancy support is empty");

  OccupancyDistribution occ;
  occ.log_mass.resize(d_max);
  for (std::size_t d = 1; d <= d_max; ++d)
    occ.log_mass[d - 1] = prior.log_density(static_cast<double>(d) * grid.hop_seconds);
  const double peak = *std::max_element(occ.log_mass.begin(), occ.log_mass.end());
  double total = 0.0;
  for (double lm : occ.log_mass) total += std::exp(lm - peak);
  const double log_total = peak + std::log(total);
  for (double& lm : occ.log_mass) lm -= log_total;
  return occ;
}

Alignment hsmm_forced_align(const EmissionMatrix& emissions,
                            std::span<const OccupancyDistribution> occupancies) {
  const std::size_t n_states = emissions.n_states();
  const std::size_t n_frames = emissions.n_frames();
  if (occupancies.size() != n_states)
    throw Error(ErrorCode::kBadInput, "need one occupancy distribution per state");
  std::size_t reach = 0;
  for (const auto& occ : occupancies) {
    if (occ.log_mass.empty()) throw Error(ErrorCode::kDegenerateSupport, "occupancy support is empty");
    reach += occ.max_frames();
  }
  if (n_frames < n_states || n_frames > reach)
    throw Error(ErrorCode::kInfeasibleAlignment,
                std::to_string(n_frames) + " frames cannot be covered by " + std::to_string(n_states) +
                    " states within their occupancy supports");

  // cumulative[s][t] = sum of emissions of state s over frames [0, t).
  std::vector<double> cumulative(n_states * (n_frames + 1), 0.0);
  for (std::size_t s = 0; s < n_states; ++s) {
    double* row = &cumulative[s * (n_frames + 1)];
    for (std::size_t t = 0; t < n_frames; ++t) row[t + 1] = row[t] + emissions.at(t, s);
  }

  // delta[s][t]: best score with states 0..s covering frames [0, t).
  const std::size_t width = n_frames + 1;
  std::vector<double> delta(n_states * width, kNegInf);
  std::vector<std::size_t> best_duration(n_states * width, 0);
  std::vector<double> origin(width, kNegInf);
  origin[0] = 0.0;

  for (std::size_t s = 0; s < n_states; ++s) {
    const double* previous = s == 0 ? origin.data() : &delta[(s - 1) * width];
    const double* cum = &cumulative[s * width];
    const auto& occ = occupancies[s];
    double* current = &delta[s * width];
    std::size_t* chosen = &best_duration[s * width];
    // States after s need at least one frame each.
    const std::size_t t_last = n_frames - (n_states - 1 - s);
    for (std::size_t t = s + 1; t <= t_last; ++t) {
      const std::size_t d_max = std::min(occ.max_frames(), t - s);
      double best = kNegInf;
      std::size_t arg = 0;
      for (std::size_t d = 1; d <= d_max; ++d) {
        const double candidate = previous[t - d] + occ.log_mass[d - 1] + (cum[t] - cum[t - d]);
        if (candidate > best) {
          best = candidate;
          arg = d;
        }
      }
      current[t] = best;
      chosen[t] = arg;
    }
  }

  Alignment result;
  result.score = delta[(n_states - 1) * width + n_frames];
  if (result.score == kNegInf)
    throw Error(ErrorCode::kInfeasibleAlignment, "no alignment satisfies the occupancy supports");
  result.spans.resize(n_states);
  std::size_t t = n_frames;
  for (std::size_t s = n_states; s-- > 0;) {
    const std::size_t d = best_duration[s * width + t];
    result.spans[s] = {t - d, d};
    t -= d;
  }
  return result;
}

PhraseAnnotation align_phrase(const EmissionMatrix& emissions, const DurationSequence& teacher,
                              double gamma, double phrase_start, std::string phrase_id) {
  validate(teacher);
  std::vector<OccupancyDistribution> occupancies;
  std::vector<std::string> labels;
  for (std::size_t n = 0; n < teacher.num_syllables(); ++n) {
    for (std::size_t k = 0; k < teacher.phoneme_durations[n].size(); ++k) {
      occupancies.push_back(discretize_occupancy(teacher.phoneme_durations[n][k], gamma, emissions.grid()));
      labels.push_back(teacher.phoneme_labels[n][k]);
    }
  }
  if (labels != emissions.state_labels())
    throw Error(ErrorCode::kBadInput, "emission state labels do not match the teacher phoneme sequence");

  const Alignment alignment = hsmm_forced_align(emissions, occupancies);
  const FrameGrid& grid = emissions.grid();
  auto time_of = [&](std::size_t frame) { return phrase_start + grid.time_of(frame); };

  PhraseAnnotation out;
  out.phrase_id = std::move(phrase_id);
  std::size_t state = 0;
  for (std::size_t n = 0; n < teacher.num_syllables(); ++n) {
    SyllableAnnotation syl;
    const std::size_t first = alignment.spans[state].first;
    for (std::size_t k = 0; k < teacher.phoneme_durations[n].size(); ++k, ++state) {
      const StateSpan& span = alignment.spans[state];
      syl.phonemes.push_back({teacher.phoneme_labels[n][k], time_of(span.first), time_of(span.end())});
    }
    syl.segment = {teacher.syllable_labels[n], time_of(first), time_of(alignment.spans[state - 1].end())};
    out.syllables.push_back(std::move(syl));
  }
  return out;
}

}  // namespace duraseg
