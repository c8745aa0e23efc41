#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "twinimg/channels.hpp"
#include "twinimg/states.hpp"

namespace twinimg {

/// Budget and reproducibility knobs for a Monte Carlo estimate.
struct McConfig {
  std::int64_t m = 100000;  // bins per exposure
  int runs = 100;           // repeated exposures per absorption value
  std::uint64_t seed = 0;
  bool antithetic = false;  // odd runs mirror the even runs' uniforms
  bool paired = false;      // common random numbers for the two scans
  int threads = 1;          // <= 0: hardware concurrency
};

/// Raw outcome counts of one exposure; index order 00, 01, 10, 11.
struct ExposureCounts {
  std::array<std::int64_t, 4> nu{};

  std::int64_t c1() const { return nu[2] + nu[3]; }  // signal clicks
  std::int64_t c2() const { return nu[1] + nu[3]; }  // reference clicks
  std::int64_t c_minus() const { return c2() - c1(); }
};

/// Point estimates with standard errors over runs. With antithetic sampling
/// the standard errors come from pair means and the variance estimate from
/// the independent even-run subset.
struct McEstimate {
  double mean_i_minus = 0.0;
  double se_i_minus = 0.0;
  double mean_gamma_minus = 0.0;
  double se_gamma_minus = 0.0;
  double noise_sq = 0.0;
  double se_noise_sq = 0.0;
  double snr_star = 0.0;
  double se_snr_star = 0.0;
  bool degenerate = false;  // zero empirical variance
};

/// One exposure of m bins: per-state emission, Bernoulli thinning with
/// survival (1-alpha)(1-gamma) on the signal and (1-gamma) on the reference,
/// independent dark clicks with probability 1 - exp(-n_dark), threshold
/// detection. Deterministic in all arguments.
ExposureCounts simulate_exposure(const Probe& probe, double alpha, double gamma, double n_dark,
                                 std::int64_t m, std::uint64_t seed);

/// `runs` independent exposures at fixed absorption. Parallel over runs with
/// per-run streams; output order is the run order for any thread count.
std::vector<ExposureCounts> run_exposures(const Probe& probe, double alpha, double gamma,
                                          double n_dark, std::int64_t m, int runs,
                                          std::uint64_t seed, int threads);

/// Paired scans at alpha and alpha + delta_alpha over mc.runs exposures,
/// with independent streams per scan unless mc.paired.
McEstimate estimate_snr_star(const Probe& probe, const ChannelParams& ch, const McConfig& mc);

}  // namespace twinimg
