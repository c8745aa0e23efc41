#pragma once

#include <array>
#include <cstdint>

#include "twinimg/channels.hpp"
#include "twinimg/states.hpp"

namespace twinimg {

/// Exposure of m time bins of duration delta_t with per-bin brightness
/// n_mean. delta_t is metadata only.
struct ExposureConfig {
  std::int64_t m = 1;
  double delta_t = 0.0;
  double n_mean = 0.0;
};

/// First two moments of the outcome counts nu_mu over one exposure.
/// Index order throughout: 00, 01, 10, 11.
struct ClickMoments {
  std::array<double, 4> e{};
  std::array<double, 4> var{};
  std::array<std::array<double, 4>, 4> cov{};  // full matrix, diagonal = var
};

/// Differential click statistics of one measurement of m bins.
struct DifferentialStats {
  double i_minus = 0.0;      // E[c2 - c1]
  double gamma_minus = 0.0;  // defect-induced change of i_minus
  double noise_sq = 0.0;     // Var[c2 - c1], evaluated at alpha
  double snr_star = 0.0;     // gamma_minus / sqrt(noise_sq), 0 when 0/0
};

/// Whether the defect enters by evaluating the outcome probabilities at
/// alpha + delta_alpha or via the alpha-slope. The probabilities are exactly
/// linear in alpha, so both agree; linearized exists as a cross-check.
enum class DefectMode { exact, linearized };

ClickMoments multinomial_moments(const OutcomeProbs& p, std::int64_t m);

/// Differential statistics from the outcome probabilities with and without
/// the defect. The noise uses the at-alpha probabilities.
DifferentialStats differential_stats(const OutcomeProbs& at_alpha,
                                     const OutcomeProbs& at_alpha_plus,
                                     std::int64_t m);

/// Closed forms for the three named states, transcribed from the per-state
/// outcome probabilities. Evaluated internally in extended precision; the
/// expanded noise brackets cancel heavily at lossy corners.
DifferentialStats closed_form_coherent(double n_mean, double alpha, double delta_alpha,
                                       double gamma, double n_dark, std::int64_t m);
DifferentialStats closed_form_tmsv(double n_mean, double alpha, double delta_alpha,
                                   double gamma, double n_dark, std::int64_t m);
DifferentialStats closed_form_tf(double n_mean, double alpha, double delta_alpha,
                                 double gamma, double n_dark, std::int64_t m);

/// Occupied-bin count round(m * n_mean) for the twin-Fock mixed model.
/// Throws when m * n_mean is not integral within 1e-6 relative.
std::int64_t tf_occupancy(double n_mean, std::int64_t m);

/// Count moments of the twin-Fock mixed model: m * n_mean occupied bins see
/// `occupied`, the rest see `dark_only`. The two populations are independent,
/// so their covariance contributions add.
ClickMoments tf_mixed_moments(const OutcomeProbs& occupied, const OutcomeProbs& dark_only,
                              double n_mean, std::int64_t m);

/// Full compositional pipeline for any probe: click basis -> loss -> dark
/// counts -> multinomial differential statistics, with the mixed-occupancy
/// model for twin-Fock probes. n_mean = 0 is the silent limit (snr_star 0).
DifferentialStats snr_star_click(const Probe& probe, const ChannelParams& ch, std::int64_t m,
                                 DefectMode mode = DefectMode::exact);

}  // namespace twinimg
