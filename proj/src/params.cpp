#include "twinimg/params.hpp"

#include <cmath>
#include <stdexcept>

#include "twinimg/analytic.hpp"
#include "twinimg/channels.hpp"
#include "twinimg/clickstats.hpp"
#include "twinimg/format.hpp"

namespace twinimg {

namespace {

bool consistent(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

bool ResolvedPoint::click_ready() const {
  return n_mean.has_value() && m.has_value() && n_dark.has_value() &&
         alpha + delta_alpha <= 1.0;
}

ResolvedPoint resolve_point(const PointSpec& spec) {
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
    throw std::domain_error("alpha must lie in [0, 1]");
  }
  if (!(spec.delta_alpha > 0.0)) throw std::domain_error("delta_alpha must be positive");
  if (!(spec.gamma >= 0.0 && spec.gamma < 1.0)) throw std::domain_error("gamma must lie in [0, 1)");

  ResolvedPoint out;
  out.alpha = spec.alpha;
  out.delta_alpha = spec.delta_alpha;
  out.gamma = spec.gamma;
  out.n_mean = spec.n_mean;
  out.m = spec.m;
  if (out.n_mean && !(*out.n_mean > 0.0)) throw std::domain_error("n_mean must be positive");
  if (out.m && *out.m < 1) throw std::domain_error("m must be at least 1");

  const double da2 = spec.delta_alpha * spec.delta_alpha;

  out.c_bar = spec.c_bar;
  if (!out.c_bar && spec.n_eff) out.c_bar = *spec.n_eff / da2;
  if (!out.c_bar && spec.m && spec.n_mean) {
    out.c_bar = static_cast<double>(*spec.m) * *spec.n_mean;
  }
  if (!out.c_bar) {
    throw std::domain_error("cannot resolve the click budget: give n_eff, c_bar, or m with n_mean");
  }
  if (!(*out.c_bar > 0.0)) throw std::domain_error("c_bar must be positive");

  out.n_eff = spec.n_eff ? *spec.n_eff : da2 * *out.c_bar;
  if (spec.n_eff && spec.c_bar && !consistent(*spec.n_eff, da2 * *spec.c_bar)) {
    throw std::domain_error("n_eff and c_bar disagree: n_eff must equal delta_alpha^2 * c_bar");
  }

  if (spec.eta) {
    if (!(*spec.eta >= 0.0)) throw std::domain_error("eta must be non-negative");
    out.eta = *spec.eta;
  } else if (spec.n_dark && spec.n_mean) {
    out.eta = effective_eta(*spec.n_dark, *spec.n_mean);
  } else if (spec.n_dark_total) {
    out.eta = *spec.n_dark_total / *out.c_bar;
  } else if (!spec.n_dark) {
    out.eta = 0.0;
  } else {
    throw std::domain_error("n_dark given without n_mean: cannot derive eta");
  }

  if (spec.n_dark) {
    if (!(*spec.n_dark >= 0.0)) throw std::domain_error("n_dark must be non-negative");
    out.n_dark = spec.n_dark;
    if (spec.eta && spec.n_mean && !consistent(*spec.eta, *spec.n_dark / *spec.n_mean)) {
      throw std::domain_error("eta and n_dark disagree");
    }
  } else if (spec.n_mean) {
    out.n_dark = out.eta * *spec.n_mean;
  } else if (spec.n_dark_total && spec.m) {
    out.n_dark = *spec.n_dark_total / static_cast<double>(*spec.m);
  }
  return out;
}

std::string state_name(StateKind kind) {
  switch (kind) {
    case StateKind::coherent: return "coh";
    case StateKind::tmsv: return "tmsv";
    case StateKind::twin_fock: return "tf";
    case StateKind::custom: return "custom";
  }
  return "?";
}

StateKind parse_state(const std::string& name) {
  if (name == "coh" || name == "coherent") return StateKind::coherent;
  if (name == "tmsv") return StateKind::tmsv;
  if (name == "tf" || name == "twin-fock" || name == "twinfock") return StateKind::twin_fock;
  if (name == "custom") return StateKind::custom;
  throw std::domain_error("unknown state: " + name);
}

ResultRow evaluate_row(const Probe& probe, const ResolvedPoint& point) {
  const TwinModeDescriptor d = probe.kind == StateKind::custom
                                   ? descriptor_for(probe)
                                   : descriptor_for(probe.kind, point.n_mean.value_or(1.0));
  ResultRow row;
  row.state = state_name(probe.kind);
  row.alpha = point.alpha;
  row.delta_alpha = point.delta_alpha;
  row.gamma = point.gamma;
  row.eta = point.eta;
  row.n_dark = point.n_dark;
  row.n_mean = point.n_mean;
  row.m = point.m;
  row.c_bar = point.c_bar;
  row.n_eff = point.n_eff;

  const GainReport gain = gain_report(point.alpha, d.q, d.sigma, point.gamma, point.eta, point.n_eff);
  row.snr_star = gain.snr_star;
  row.gain_ratio = gain.gain_ratio;
  row.feasible = gain.feasible;
  row.gamma_c = critical_loss(point.alpha, d.q, d.sigma, point.eta, point.n_eff);
  row.neff_min_small_alpha =
      neff_threshold(AbsorptionRegime::small_alpha, d.q, d.sigma, point.gamma, point.eta);
  row.neff_min_large_alpha =
      neff_threshold(AbsorptionRegime::large_alpha, d.q, d.sigma, point.gamma, point.eta);

  if (point.click_ready()) {
    Probe click_probe = probe;
    click_probe.n_mean = *point.n_mean;
    const ChannelParams ch{point.alpha, point.delta_alpha, point.gamma, *point.n_dark};
    try {
      row.snr_star_click = snr_star_click(click_probe, ch, *point.m).snr_star;
    } catch (const std::domain_error&) {
      // Cell stays empty when the click model does not apply here, e.g. a
      // twin-Fock occupancy m * n_mean that is not integral on this grid.
    }
  }
  return row;
}

std::string result_csv_header() {
  return "state,alpha,delta_alpha,gamma,eta,n_dark,n_mean,m,c_bar,n_eff,snr_star,gain_ratio,"
         "feasible,gamma_c,neff_min_small_alpha,neff_min_large_alpha,snr_star_click,"
         "mc_snr_star,mc_std_err";
}

std::string result_csv_row(const ResultRow& row) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  std::string out;
  out += row.state;
  out += ',' + format_double(row.alpha);
  out += ',' + format_double(row.delta_alpha);
  out += ',' + format_double(row.gamma);
  out += ',' + format_double(row.eta);
  out += ',' + opt(row.n_dark);
  out += ',' + opt(row.n_mean);
  out += ',' + (row.m ? format_int(*row.m) : std::string());
  out += ',' + opt(row.c_bar);
  out += ',' + format_double(row.n_eff);
  out += ',' + format_double(row.snr_star);
  out += ',' + format_double(row.gain_ratio);
  out += ',' + std::string(row.feasible ? "true" : "false");
  out += ',' + (loss_feasible(row.gamma_c) ? format_double(row.gamma_c) : std::string("infeasible"));
  out += ',' + format_double(row.neff_min_small_alpha);
  out += ',' + format_double(row.neff_min_large_alpha);
  out += ',' + opt(row.snr_star_click);
  out += ',' + opt(row.mc_snr_star);
  out += ',' + opt(row.mc_std_err);
  return out;
}

}  // namespace twinimg
