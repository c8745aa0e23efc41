#pragma once

#include "twinimg/channels.hpp"
#include "twinimg/states.hpp"

namespace twinimg {

/// SNR of the intensity difference at absorption alpha for a twin-mode
/// probe characterized by (Q, sigma). Returns +infinity when the noise
/// variance vanishes with alpha > 0.
double snr(double alpha, double n_mean, double q, double sigma);

/// Defect-detection SNR* = (delta_alpha / alpha) * SNR in the lossless,
/// noiseless case. n_mean plays the role of the average click number.
double snr_star_ideal(double alpha, double delta_alpha, double n_mean, double q, double sigma);

/// SNR* ratio against the coherent benchmark at the same absorption;
/// independent of the defect depth and the click budget.
double quantum_gain(double alpha, double q, double sigma);

/// SNR* under loss gamma and relative dark level eta = n_dark / n_mean,
/// with the effective photon number n_eff = delta_alpha^2 * c_bar.
double snr_star_imperfect(double alpha, double q, double sigma, double gamma, double eta, double n_eff);

/// Largest loss rate at which SNR* still exceeds 1. A negative value means
/// the probe cannot reach SNR* = 1 even lossless; -infinity marks a
/// non-positive feasibility margin.
double critical_loss(double alpha, double q, double sigma, double eta, double n_eff);

/// Small-eta expansion of critical_loss.
double critical_loss_approx(double alpha, double q, double sigma, double eta, double n_eff);

inline bool loss_feasible(double gamma_c) { return gamma_c >= 0.0; }

/// The two absorption regimes have distinct SNR* > 1 conditions; the
/// crossover point is not defined, so the caller picks the regime.
enum class AbsorptionRegime { small_alpha, large_alpha };

/// Minimum n_eff for SNR* > 1 in the given regime.
double neff_threshold(AbsorptionRegime regime, double q, double sigma, double gamma, double eta);

/// Differential signal contrast delta_alpha * (1 - gamma) * n_mean.
double signal_contrast(double delta_alpha, double gamma, double n_mean);

/// Full inputs for a gain evaluation of one probe/channel combination.
struct SnrInputs {
  TwinModeDescriptor descriptor{};
  ChannelParams channel{};
  double c_bar = 0.0;  // average click number over the exposure

  double n_eff() const;  // delta_alpha^2 * c_bar
};

struct GainReport {
  double snr_star = 0.0;
  double gain_ratio = 0.0;  // vs the coherent benchmark on the same channel
  bool feasible = false;    // SNR* > 1
};

GainReport gain_report(double alpha, double q, double sigma, double gamma, double eta, double n_eff);
GainReport evaluate_gain(const SnrInputs& in);

}  // namespace twinimg
