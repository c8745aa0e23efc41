#include "twinimg/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace twinimg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// alpha^2 Q + 2 (1 - alpha) sigma + alpha, the per-photon noise variance of
// the lossless differential measurement.
double ideal_denominator(double alpha, double q, double sigma) {
  return alpha * alpha * q + 2.0 * (1.0 - alpha) * sigma + alpha;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in (0, 1]");
}

void check_gamma(double gamma) {
  if (gamma == 1.0) throw std::domain_error("gamma = 1 means zero transmission");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::domain_error("gamma must lie in [0, 1)");
}

void check_eta(double eta) {
  if (!(eta >= 0.0)) throw std::domain_error("eta must be non-negative");
}

void check_neff(double n_eff) {
  if (!(n_eff > 0.0)) throw std::domain_error("n_eff must be positive");
}

double checked_sqrt_ratio(double numerator, double denominator) {
  if (denominator < 0.0) {
    throw std::domain_error("negative noise variance: unphysical (Q, sigma) combination");
  }
  if (denominator == 0.0) return kInf;
  return numerator / std::sqrt(denominator);
}

}  // namespace

double snr(double alpha, double n_mean, double q, double sigma) {
  check_alpha(alpha);
  if (!(n_mean > 0.0)) throw std::domain_error("n_mean must be positive");
  return checked_sqrt_ratio(alpha * std::sqrt(n_mean), ideal_denominator(alpha, q, sigma));
}

double snr_star_ideal(double alpha, double delta_alpha, double n_mean, double q, double sigma) {
  check_alpha(alpha);
  if (!(delta_alpha > 0.0)) throw std::domain_error("delta_alpha must be positive");
  if (!(n_mean > 0.0)) throw std::domain_error("n_mean must be positive");
  // (delta_alpha / alpha) * snr with alpha cancelled analytically.
  return checked_sqrt_ratio(delta_alpha * std::sqrt(n_mean), ideal_denominator(alpha, q, sigma));
}

double quantum_gain(double alpha, double q, double sigma) {
  check_alpha(alpha);
  const double d = ideal_denominator(alpha, q, sigma);
  if (d < 0.0) throw std::domain_error("negative noise variance: unphysical (Q, sigma) combination");
  if (d == 0.0) return kInf;
  return std::sqrt((2.0 - alpha) / d);
}

double snr_star_imperfect(double alpha, double q, double sigma, double gamma, double eta,
                          double n_eff) {
  check_alpha(alpha);
  check_gamma(gamma);
  check_eta(eta);
  check_neff(n_eff);
  const double keep = 1.0 - gamma;
  const double d = ideal_denominator(alpha, q, sigma) + gamma * (2.0 - alpha) / keep +
                   2.0 * eta / (keep * keep);
  return checked_sqrt_ratio(std::sqrt(n_eff), d);
}

double critical_loss(double alpha, double q, double sigma, double eta, double n_eff) {
  check_alpha(alpha);
  check_eta(eta);
  check_neff(n_eff);
  const double margin = n_eff - alpha * alpha * q + 2.0 * (1.0 - alpha) * (1.0 - sigma);
  if (!(margin > 0.0)) return -kInf;  // SNR* = 1 unreachable at any loss
  const double scale = (2.0 - alpha) / (2.0 * margin);
  return 1.0 - scale * (1.0 + std::sqrt(1.0 + 8.0 * eta * margin / ((2.0 - alpha) * (2.0 - alpha))));
}

double critical_loss_approx(double alpha, double q, double sigma, double eta, double n_eff) {
  check_alpha(alpha);
  check_eta(eta);
  check_neff(n_eff);
  const double margin = n_eff - alpha * alpha * q + 2.0 * (1.0 - alpha) * (1.0 - sigma);
  if (!(margin > 0.0)) return -kInf;
  return 1.0 - (2.0 - alpha) / margin - 2.0 * eta / (2.0 - alpha);
}

double neff_threshold(AbsorptionRegime regime, double q, double sigma, double gamma, double eta) {
  check_gamma(gamma);
  check_eta(eta);
  const double keep = 1.0 - gamma;
  const double dark_term = 2.0 * eta / (keep * keep);
  if (regime == AbsorptionRegime::small_alpha) {
    return 2.0 * sigma + 2.0 * gamma / keep + dark_term;
  }
  return q + 1.0 / keep + dark_term;
}

double signal_contrast(double delta_alpha, double gamma, double n_mean) {
  if (!(delta_alpha >= 0.0)) throw std::domain_error("delta_alpha must be non-negative");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("gamma must lie in [0, 1]");
  if (!(n_mean >= 0.0)) throw std::domain_error("n_mean must be non-negative");
  return delta_alpha * (1.0 - gamma) * n_mean;
}

double SnrInputs::n_eff() const { return channel.delta_alpha * channel.delta_alpha * c_bar; }

GainReport gain_report(double alpha, double q, double sigma, double gamma, double eta,
                       double n_eff) {
  GainReport out;
  out.snr_star = snr_star_imperfect(alpha, q, sigma, gamma, eta, n_eff);
  const double coherent = snr_star_imperfect(alpha, 0.0, 1.0, gamma, eta, n_eff);
  out.gain_ratio = out.snr_star / coherent;
  out.feasible = out.snr_star > 1.0;
  return out;
}

GainReport evaluate_gain(const SnrInputs& in) {
  in.descriptor.validate();
  in.channel.validate();
  return gain_report(in.channel.alpha, in.descriptor.q, in.descriptor.sigma, in.channel.gamma,
                     in.channel.eta(in.descriptor.n_mean), in.n_eff());
}

}  // namespace twinimg
