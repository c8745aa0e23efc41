#include "twinimg/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace twinimg {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
}

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::domain_error("gamma must lie in [0, 1)");
}

void check_dark(double n_dark) {
  if (!(n_dark >= 0.0)) throw std::domain_error("n_dark must be non-negative");
}

}  // namespace

double effective_eta(double n_dark, double n_mean) {
  if (!(n_mean > 0.0)) throw std::domain_error("n_mean must be positive");
  check_dark(n_dark);
  return n_dark / n_mean;
}

double ChannelParams::eta(double n_mean) const { return effective_eta(n_dark, n_mean); }

void ChannelParams::validate() const {
  check_alpha(alpha);
  if (!(delta_alpha >= 0.0)) throw std::domain_error("delta_alpha must be non-negative");
  if (alpha + delta_alpha > 1.0) throw std::domain_error("alpha + delta_alpha must not exceed 1");
  check_gamma(gamma);
  check_dark(n_dark);
}

void OutcomeProbs::validate(double tol) const {
  for (double p : {p00, p01, p10, p11}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error("outcome probability outside [0, 1]");
    }
  }
  if (std::abs(sum() - 1.0) > tol) {
    throw std::domain_error("outcome probabilities do not sum to 1");
  }
}

ClickBasisState propagate_loss(const ClickBasisState& s, double alpha, double gamma) {
  s.validate();
  check_alpha(alpha);
  check_gamma(gamma);
  const double drop1 = alpha + gamma * (1.0 - alpha);    // signal photon removed
  const double keep1 = (1.0 - alpha) * (1.0 - gamma);    // signal photon survives
  const double keep2 = 1.0 - gamma;                      // reference photon survives
  return {s.p00 + gamma * s.p01 + drop1 * s.p10 + gamma * drop1 * s.p11,
          keep2 * (s.p01 + drop1 * s.p11),
          keep1 * (s.p10 + gamma * s.p11),
          keep1 * keep2 * s.p11};
}

OutcomeProbs apply_dark_counts(const ClickBasisState& s, double n_dark) {
  s.validate();
  check_dark(n_dark);
  const double quiet = std::exp(-n_dark);     // detector stays silent on vacuum
  const double fire = -std::expm1(-n_dark);   // dark click probability
  return {quiet * quiet * s.p00,
          quiet * s.p01 + quiet * fire * s.p00,
          quiet * s.p10 + quiet * fire * s.p00,
          s.p11 + fire * (s.p01 + s.p10) + fire * fire * s.p00};
}

OutcomeProbs outcome_probs(const ClickBasisState& s, double alpha, double gamma, double n_dark) {
  return apply_dark_counts(propagate_loss(s, alpha, gamma), n_dark);
}

MomentSet moment_transform(const TwinModeDescriptor& d, double alpha, double gamma, double eta) {
  d.validate();
  check_alpha(alpha);
  check_gamma(gamma);
  if (!(eta >= 0.0)) throw std::domain_error("eta must be non-negative");

  const double n = d.n_mean;
  const double var_in = (d.q + 1.0) * n;
  // sigma = <(dn_-)^2> / 2N with equal per-mode variances forces
  // Cov_in = V_in - sigma N.
  const double cov_in = (d.q + 1.0 - d.sigma) * n;
  const double keep1 = (1.0 - alpha) * (1.0 - gamma);
  const double keep2 = 1.0 - gamma;

  MomentSet out;
  out.mean1 = keep1 * n + eta * n;
  out.mean2 = keep2 * n + eta * n;
  out.var1 = keep1 * keep1 * var_in +
             ((1.0 - alpha) * (1.0 - gamma) * (alpha + gamma - alpha * gamma) + eta) * n;
  out.var2 = keep2 * keep2 * var_in + (gamma * (1.0 - gamma) + eta) * n;
  out.cov = (1.0 - alpha) * keep2 * keep2 * cov_in;
  return out;
}

}  // namespace twinimg
