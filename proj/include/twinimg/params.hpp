#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "twinimg/states.hpp"

namespace twinimg {

/// One evaluation point with the derived quantities still open. Unset
/// optionals are filled by resolve_point where the other inputs allow it.
struct PointSpec {
  double alpha = 0.01;
  double delta_alpha = 1e-3;
  double gamma = 0.0;
  std::optional<double> eta;
  std::optional<double> n_dark;        // per bin per detector
  std::optional<double> n_dark_total;  // total over the exposure
  std::optional<double> n_mean;
  std::optional<double> c_bar;
  std::optional<double> n_eff;
  std::optional<std::int64_t> m;
};

/// Internally consistent parameters for one result row.
struct ResolvedPoint {
  double alpha = 0.0;
  double delta_alpha = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  std::optional<double> n_dark;
  std::optional<double> n_mean;
  std::optional<double> c_bar;
  double n_eff = 0.0;
  std::optional<std::int64_t> m;

  /// The click pipeline needs a brightness, an exposure length, a resolved
  /// dark count and a defect scan that stays within [0, 1].
  bool click_ready() const;
};

/// Derivation order: c_bar from n_eff or m * n_mean; n_eff from c_bar; eta
/// from n_dark / n_mean or n_dark_total / c_bar; n_dark from eta * n_mean or
/// n_dark_total / m. Conflicting redundant inputs throw std::domain_error.
ResolvedPoint resolve_point(const PointSpec& spec);

/// One output row; optional cells serialize as empty fields.
struct ResultRow {
  std::string state;
  double alpha = 0.0;
  double delta_alpha = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  std::optional<double> n_dark;
  std::optional<double> n_mean;
  std::optional<std::int64_t> m;
  std::optional<double> c_bar;
  double n_eff = 0.0;
  double snr_star = 0.0;
  double gain_ratio = 0.0;
  bool feasible = false;
  double gamma_c = 0.0;
  double neff_min_small_alpha = 0.0;
  double neff_min_large_alpha = 0.0;
  std::optional<double> snr_star_click;
  std::optional<double> mc_snr_star;
  std::optional<double> mc_std_err;
};

std::string state_name(StateKind kind);
StateKind parse_state(const std::string& name);

/// Analytic figures for a probe at a resolved point; fills the click column
/// when the point supports it.
ResultRow evaluate_row(const Probe& probe, const ResolvedPoint& point);

std::string result_csv_header();
std::string result_csv_row(const ResultRow& row);

}  // namespace twinimg
