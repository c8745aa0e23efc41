#include "twinimg/states.hpp"

#include <cmath>
#include <stdexcept>

namespace twinimg {

void TwinModeDescriptor::validate() const {
  if (!(n_mean > 0.0)) throw std::domain_error("n_mean must be positive");
  if (!(q >= -1.0)) throw std::domain_error("Mandel Q must be at least -1");
  if (!(sigma >= 0.0)) throw std::domain_error("noise reduction factor must be non-negative");
}

void ClickBasisState::validate(double tol) const {
  for (double p : {p00, p01, p10, p11}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error("click-basis probability outside [0, 1]");
    }
  }
  if (std::abs(sum() - 1.0) > tol) {
    throw std::domain_error("click-basis probabilities do not sum to 1");
  }
}

Probe Probe::coherent(double n_mean) { return {StateKind::coherent, n_mean, {}}; }
Probe Probe::tmsv(double n_mean) { return {StateKind::tmsv, n_mean, {}}; }
Probe Probe::twin_fock(double n_mean) { return {StateKind::twin_fock, n_mean, {}}; }

Probe Probe::custom_state(double n_mean, const CustomState& s) {
  s.clicks.validate();
  if (!(s.q >= -1.0) || !(s.sigma >= 0.0)) {
    throw std::domain_error("custom state needs Q >= -1 and sigma >= 0");
  }
  return {StateKind::custom, n_mean, s};
}

std::optional<TruncationWarning> truncation_warning(double n_mean) {
  if (n_mean > kTruncationThreshold) return TruncationWarning{n_mean};
  return std::nullopt;
}

TwinModeDescriptor descriptor_for(StateKind kind, double n_mean) {
  if (!(n_mean > 0.0)) throw std::domain_error("n_mean must be positive");
  switch (kind) {
    case StateKind::coherent:
      return {n_mean, 0.0, 1.0};
    case StateKind::tmsv:
      // Temporal multi-mode averaging washes the thermal statistics out of
      // the individual modes while the pair correlation survives.
      return {n_mean, 0.0, 0.0};
    case StateKind::twin_fock:
      return {n_mean, -1.0, 0.0};
    case StateKind::custom:
      break;
  }
  throw std::invalid_argument("custom state needs a Probe carrying its payload");
}

TwinModeDescriptor descriptor_for(const Probe& probe) {
  if (probe.kind == StateKind::custom) {
    if (!(probe.n_mean > 0.0)) throw std::domain_error("n_mean must be positive");
    return {probe.n_mean, probe.custom.q, probe.custom.sigma};
  }
  return descriptor_for(probe.kind, probe.n_mean);
}

double tmsv_n_from_r(double r) {
  if (!(r >= 0.0)) throw std::domain_error("squeezing parameter must be non-negative");
  const double s = std::sinh(r);
  return s * s;
}

ClickBasisState click_probs(StateKind kind, double n_mean) {
  if (!(n_mean > 0.0)) throw std::domain_error("n_mean must be positive");
  const double absent = std::exp(-n_mean);
  const double present = -std::expm1(-n_mean);
  switch (kind) {
    case StateKind::coherent:
      return {absent * absent, absent * present, absent * present, present * present};
    case StateKind::tmsv:
      return {absent, 0.0, 0.0, present};
    case StateKind::twin_fock:
      // Always a photon pair; the occupancy probability lives in the
      // exposure model.
      return {0.0, 0.0, 0.0, 1.0};
    case StateKind::custom:
      break;
  }
  throw std::invalid_argument("custom state needs a Probe carrying its payload");
}

ClickBasisState click_probs(const Probe& probe) {
  if (probe.kind == StateKind::custom) {
    if (!(probe.n_mean > 0.0)) throw std::domain_error("n_mean must be positive");
    probe.custom.clicks.validate();
    return probe.custom.clicks;
  }
  return click_probs(probe.kind, probe.n_mean);
}

}  // namespace twinimg
