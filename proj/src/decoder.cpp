#include "duraseg/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "duraseg/error.hpp"

namespace duraseg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<PriorDurationModel> make_priors(std::span<const double> durations, double gamma) {
  std::vector<PriorDurationModel> priors;
  priors.reserve(durations.size());
  for (double mu : durations) priors.emplace_back(mu, gamma);
  return priors;
}

void check_params(const DecoderParams& params) {
  if (!(params.epsilon > 0.0)) throw Error(ErrorCode::kBadInput, "epsilon must be positive");
  if (!(params.gamma > 0.0)) throw Error(ErrorCode::kBadInput, "gamma must be positive");
}

double log_emission(double p, double epsilon) { return std::log(std::max(p, epsilon)); }

double prior_at(const PriorDurationModel& prior, std::size_t frames, double hop) {
  return prior.log_density(static_cast<double>(frames) * hop);
}

}  // namespace

OnsetCurve::OnsetCurve(std::vector<double> values, double hop_seconds)
    : values_(std::move(values)), grid_(hop_seconds, std::max<std::size_t>(values_.size(), 1)) {
  if (values_.empty()) throw Error(ErrorCode::kBadInput, "onset curve is empty");
  for (std::size_t t = 0; t < values_.size(); ++t) {
    const double v = values_[t];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw Error(ErrorCode::kBadInput,
                  "onset curve value at frame " + std::to_string(t) + " is outside [0, 1]");
  }
}

OnsetCurve OnsetCurve::slice(std::size_t first, std::size_t last) const {
  if (first > last || last >= values_.size())
    throw Error(ErrorCode::kBadInput, "onset curve slice out of range");
  return OnsetCurve({values_.begin() + static_cast<std::ptrdiff_t>(first),
                     values_.begin() + static_cast<std::ptrdiff_t>(last) + 1},
                    grid_.hop_seconds);
}

OnsetPath decode_onsets(const OnsetCurve& odf, std::span<const double> durations,
                        const DecoderParams& params) {
  check_params(params);
  const std::size_t n_segments = durations.size();
  if (n_segments == 0) throw Error(ErrorCode::kBadInput, "no durations to decode");
  const auto priors = make_priors(durations, params.gamma);
  if (n_segments == 1) return {};

  const std::size_t n_frames = odf.size();
  if (n_frames < n_segments + 1)
    throw Error(ErrorCode::kInfeasiblePhrase,
                std::to_string(n_segments) + " segments do not fit in " + std::to_string(n_frames) +
                    " frames");

  const double hop = odf.grid().hop_seconds;
  const std::size_t last = n_frames - 1;
  const std::size_t n_onsets = n_segments - 1;

  std::vector<double> log_p(n_frames);
  for (std::size_t t = 0; t < n_frames; ++t) log_p[t] = log_emission(odf.values()[t], params.epsilon);

  // Onset n (0-based) can only sit on frames [n + 1, last - (n_onsets - n)].
  std::vector<double> delta(n_frames, kNegInf);
  std::vector<double> next(n_frames, kNegInf);
  std::vector<std::size_t> backptr(n_onsets * n_frames, 0);
  std::vector<double> transition(n_frames, 0.0);

  for (std::size_t j = 1; j <= last - n_onsets; ++j)
    delta[j] = prior_at(priors[0], j, hop) + log_p[j];

  for (std::size_t n = 1; n < n_onsets; ++n) {
    for (std::size_t d = 1; d < n_frames; ++d) transition[d] = prior_at(priors[n], d, hop);
    std::fill(next.begin(), next.end(), kNegInf);
    std::size_t* psi = &backptr[n * n_frames];
    const std::size_t j_last = last - (n_onsets - n);
    for (std::size_t j = n + 1; j <= j_last; ++j) {
      double best = kNegInf;
      std::size_t arg = n;
      for (std::size_t i = n; i < j; ++i) {
        const double candidate = delta[i] + transition[j - i];
        if (candidate > best) {
          best = candidate;
          arg = i;
        }
      }
      next[j] = best + log_p[j];
      psi[j] = arg;
    }
    std::swap(delta, next);
  }

  const PriorDurationModel& final_prior = priors[n_onsets];
  double best = kNegInf;
  std::size_t arg = n_onsets;
  for (std::size_t i = n_onsets; i < last; ++i) {
    const double candidate = delta[i] + prior_at(final_prior, last - i, hop);
    if (candidate > best) {
      best = candidate;
      arg = i;
    }
  }

  OnsetPath path;
  path.score = best;
  path.onsets.resize(n_onsets);
  path.onsets[n_onsets - 1] = arg;
  for (std::size_t n = n_onsets - 1; n > 0; --n) path.onsets[n - 1] = backptr[n * n_frames + path.onsets[n]];
  return path;
}

double score_path(const OnsetCurve& odf, std::span<const double> durations,
                  std::span<const std::size_t> onsets, const DecoderParams& params) {
  check_params(params);
  if (durations.empty()) throw Error(ErrorCode::kBadInput, "no durations to score");
  const auto priors = make_priors(durations, params.gamma);
  if (onsets.size() + 1 != durations.size())
    throw Error(ErrorCode::kBadPath, "path needs exactly one onset per segment boundary");
  if (durations.size() == 1) return 0.0;

  const std::size_t last = odf.size() - 1;
  const double hop = odf.grid().hop_seconds;
  std::size_t previous = 0;
  double score = 0.0;
  for (std::size_t n = 0; n < onsets.size(); ++n) {
    const std::size_t q = onsets[n];
    if (q <= previous || q >= last)
      throw Error(ErrorCode::kBadPath, "onsets must be strictly increasing and interior");
    const double step = prior_at(priors[n], q - previous, hop);
    score = n == 0 ? step : score + step;
    score = score + log_emission(odf.values()[q], params.epsilon);
    previous = q;
  }
  return score + prior_at(priors.back(), last - previous, hop);
}

}  // namespace duraseg
