#pragma once

namespace duraseg {

inline constexpr double kDefaultGamma = 0.35;

/// Gaussian a-priori duration model N(d; mu, (gamma*mu)^2). Serves as the
/// transition score of the onset decoder and the occupancy shape of the HSMM.
class PriorDurationModel {
 public:
  PriorDurationModel(double mu_seconds, double gamma = kDefaultGamma);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double gamma() const { return gamma_; }

  /// Continuous log-density at duration d (seconds). Not normalized over
  /// any discrete candidate set, so it can be positive.
  double log_density(double d) const;

 private:
  double mu_;
  double gamma_;
  double sigma_;
  double log_norm_;
};

}  // namespace duraseg
