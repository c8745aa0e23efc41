#pragma once

#include "twinimg/states.hpp"

namespace twinimg {

/// Absorption, loss and dark-count parameters of one measurement.
struct ChannelParams {
  double alpha = 0.0;        // sample absorption in [0, 1]
  double delta_alpha = 0.0;  // defect depth, alpha + delta_alpha <= 1
  double gamma = 0.0;        // loss rate in [0, 1)
  double n_dark = 0.0;       // mean dark photons per bin per detector

  /// Relative dark level eta = n_dark / n_mean; always derived, never stored.
  double eta(double n_mean) const;
  void validate() const;
};

/// Detector outcome probabilities per bin after all imperfections.
struct OutcomeProbs {
  double p00 = 1.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;

  double sum() const { return p00 + p01 + p10 + p11; }
  void validate(double tol = 1e-12) const;
};

/// Output photon-number moments of the two modes. Means include the dark
/// contribution on both detectors; it cancels in diff_mean().
struct MomentSet {
  double mean1 = 0.0;
  double mean2 = 0.0;
  double var1 = 0.0;
  double var2 = 0.0;
  double cov = 0.0;

  double diff_mean() const { return mean2 - mean1; }
  double diff_variance() const { return var1 + var2 - 2.0 * cov; }
};

double effective_eta(double n_dark, double n_mean);

/// Population map p_mu -> p_mu(alpha, gamma). The signal photon survives
/// with probability (1-alpha)(1-gamma), the reference photon with (1-gamma).
ClickBasisState propagate_loss(const ClickBasisState& s, double alpha, double gamma);

/// Dark counts OR an independent click with probability 1 - exp(-n_dark)
/// into each detector.
OutcomeProbs apply_dark_counts(const ClickBasisState& s, double n_dark);

/// Composition in the fixed order: loss first, dark counts second.
OutcomeProbs outcome_probs(const ClickBasisState& s, double alpha, double gamma, double n_dark);

/// Photon-number moment transform under absorption, loss and dark counts,
/// with eta = n_dark / n_mean.
MomentSet moment_transform(const TwinModeDescriptor& d, double alpha, double gamma, double eta);

}  // namespace twinimg
