#pragma once

#include <cstdint>
#include <string>

namespace twinimg {

/// Budget for the three-way consistency run: analytic model vs click
/// statistics vs Monte Carlo.
struct ValidateConfig {
  double n_mean = 1e-3;
  double delta_alpha = 1e-3;
  std::int64_t m_click = 10'000'000;  // exposure for the click-vs-analytic table
  std::int64_t mc_m = 1'000'000;      // exposure for the Monte Carlo checks
  int mc_runs = 100;
  std::uint64_t seed = 1;
  int threads = 0;  // <= 0: hardware concurrency; never written to the report
  double tol_click = 0.02;   // max |snr_click / snr_analytic - 1|
  double tol_mc_sigma = 5.0; // max |z| for the Monte Carlo checks

  static ValidateConfig quick();
};

struct ValidateReport {
  std::string text;  // byte-stable report body
  double max_click_gap = 0.0;
  double max_mc_sigma = 0.0;
  bool pass = false;
};

ValidateReport run_validate(const ValidateConfig& config);

}  // namespace twinimg
