#include "duraseg/prior.hpp"

#include <cmath>
#include <numbers>

#include "duraseg/error.hpp"

namespace duraseg {

PriorDurationModel::PriorDurationModel(double mu_seconds, double gamma)
    : mu_(mu_seconds), gamma_(gamma), sigma_(gamma * mu_seconds) {
  if (!(mu_ > 0.0) || !std::isfinite(mu_))
    throw Error(ErrorCode::kBadInput, "prior mean duration must be positive");
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_))
    throw Error(ErrorCode::kBadInput, "prior gamma must be positive");
  log_norm_ = -std::log(sigma_ * std::sqrt(2.0 * std::numbers::pi));
}

double PriorDurationModel::log_density(double d) const {
  const double z = (d - mu_) / sigma_;
  return log_norm_ - 0.5 * z * z;
}

}  // namespace duraseg
