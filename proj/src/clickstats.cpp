#include "twinimg/clickstats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace twinimg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_m(std::int64_t m) {
  if (m < 1) throw std::domain_error("m must be at least 1");
}

// 1 - exp(-x) without cancellation for small x.
long double em1(long double x) { return -std::expm1(-x); }

double snr_from(double gamma_minus, double noise_sq) {
  if (noise_sq > 0.0) return gamma_minus / std::sqrt(noise_sq);
  return gamma_minus == 0.0 ? 0.0 : kInf;
}

// d(P01 - P10)/dalpha of the loss + dark pipeline on input s. Every outcome
// probability is linear in alpha (only the single signal photon feels the
// sample), so the slope times delta_alpha is the exact two-point difference,
// free of the subtraction noise.
double defect_slope(const ClickBasisState& s, double gamma, double n_dark) {
  return std::exp(-n_dark) * (1.0 - gamma) * (s.p10 + s.p11);
}

// Same slope from two pipeline evaluations; exact for any step because of
// the linearity, kept as a cross-check path.
double defect_slope_fd(const ClickBasisState& s, double alpha, double gamma, double n_dark) {
  const double h = alpha <= 0.5 ? 0.25 : -0.25;
  const OutcomeProbs lo = outcome_probs(s, alpha, gamma, n_dark);
  const OutcomeProbs hi = outcome_probs(s, alpha + h, gamma, n_dark);
  return ((hi.p01 - hi.p10) - (lo.p01 - lo.p10)) / h;
}

struct PopulationStats {
  double i_minus;
  double noise_sq;
};

PopulationStats population_stats(const OutcomeProbs& p, double bins) {
  const double diff = p.p01 - p.p10;
  return {bins * diff, bins * (p.p01 + p.p10 - diff * diff)};
}

}  // namespace

ClickMoments multinomial_moments(const OutcomeProbs& p, std::int64_t m) {
  check_m(m);
  p.validate();
  const double probs[4] = {p.p00, p.p01, p.p10, p.p11};
  const double md = static_cast<double>(m);
  ClickMoments out;
  for (int i = 0; i < 4; ++i) {
    out.e[i] = md * probs[i];
    out.var[i] = md * probs[i] * (1.0 - probs[i]);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out.cov[i][j] = i == j ? out.var[i] : -md * probs[i] * probs[j];
    }
  }
  return out;
}

DifferentialStats differential_stats(const OutcomeProbs& at_alpha,
                                     const OutcomeProbs& at_alpha_plus, std::int64_t m) {
  check_m(m);
  at_alpha.validate();
  at_alpha_plus.validate();
  const double md = static_cast<double>(m);
  DifferentialStats out;
  out.i_minus = md * (at_alpha.p01 - at_alpha.p10);
  out.gamma_minus =
      md * ((at_alpha_plus.p01 - at_alpha_plus.p10) - (at_alpha.p01 - at_alpha.p10));
  const double diff = at_alpha.p01 - at_alpha.p10;
  out.noise_sq = md * (at_alpha.p10 + at_alpha.p01 - diff * diff);
  out.snr_star = snr_from(out.gamma_minus, out.noise_sq);
  return out;
}

DifferentialStats closed_form_coherent(double n_mean, double alpha, double delta_alpha,
                                       double gamma, double n_dark, std::int64_t m) {
  check_m(m);
  ChannelParams{alpha, delta_alpha, gamma, n_dark}.validate();
  if (!(n_mean >= 0.0)) throw std::domain_error("n_mean must be non-negative");

  const long double n = n_mean, a = alpha, da = delta_alpha, g = gamma, nd = n_dark;
  const long double md = static_cast<long double>(m);
  const long double vac = std::exp(-n);
  const long double quiet = std::exp(-nd);
  const long double keep = 1.0L - g;

  const long double i_minus = md * quiet * a * keep * em1(n);
  const long double contrast = md * da * quiet * keep * em1(n);
  const long double noise =
      md * quiet *
      (a * keep + 2.0L * g + vac * (2.0L - a) * keep -
       std::exp(-2.0L * n - nd) * (2.0L - a * (2.0L - a)) * keep * keep -
       2.0L * std::exp(-n - nd) * keep * (a - a * a * keep + 2.0L * g - 2.0L * a * g) -
       quiet * (a * a * keep * keep + 2.0L * a * g * keep + 2.0L * g * g));

  DifferentialStats out;
  out.i_minus = static_cast<double>(i_minus);
  out.gamma_minus = static_cast<double>(contrast);
  out.noise_sq = static_cast<double>(noise);
  out.snr_star = snr_from(out.gamma_minus, out.noise_sq);
  return out;
}

DifferentialStats closed_form_tmsv(double n_mean, double alpha, double delta_alpha, double gamma,
                                   double n_dark, std::int64_t m) {
  check_m(m);
  ChannelParams{alpha, delta_alpha, gamma, n_dark}.validate();
  if (!(n_mean >= 0.0)) throw std::domain_error("n_mean must be non-negative");

  const long double n = n_mean, a = alpha, da = delta_alpha, g = gamma, nd = n_dark;
  const long double md = static_cast<long double>(m);
  const long double vac = std::exp(-n);
  const long double quiet = std::exp(-nd);
  const long double keep = 1.0L - g;
  const long double drop = a + g - a * g;

  // The contrast matches the coherent one identically.
  const long double i_minus = md * quiet * a * keep * em1(n);
  const long double contrast = md * da * quiet * keep * em1(n);
  const long double noise =
      md * quiet *
      (2.0L * vac * em1(nd) +
       em1(n) * (a * keep + 2.0L * g - quiet * (2.0L * g * drop + a * a * em1(n) * keep * keep)));

  DifferentialStats out;
  out.i_minus = static_cast<double>(i_minus);
  out.gamma_minus = static_cast<double>(contrast);
  out.noise_sq = static_cast<double>(noise);
  out.snr_star = snr_from(out.gamma_minus, out.noise_sq);
  return out;
}

DifferentialStats closed_form_tf(double n_mean, double alpha, double delta_alpha, double gamma,
                                 double n_dark, std::int64_t m) {
  check_m(m);
  ChannelParams{alpha, delta_alpha, gamma, n_dark}.validate();
  if (n_mean > 0.0) tf_occupancy(n_mean, m);
  if (!(n_mean >= 0.0)) throw std::domain_error("n_mean must be non-negative");

  const long double n = n_mean, a = alpha, da = delta_alpha, g = gamma, nd = n_dark;
  const long double md = static_cast<long double>(m);
  const long double quiet = std::exp(-nd);
  const long double keep = 1.0L - g;

  const long double i_minus = md * n * quiet * a * keep;
  const long double contrast = md * n * da * quiet * keep;
  const long double noise =
      md * quiet *
      (2.0L * em1(nd) - n * (2.0L - a) * keep -
       n * quiet * keep * (a * a * keep + 2.0L * a * g - 2.0L * g - 2.0L));

  DifferentialStats out;
  out.i_minus = static_cast<double>(i_minus);
  out.gamma_minus = static_cast<double>(contrast);
  out.noise_sq = static_cast<double>(noise);
  out.snr_star = snr_from(out.gamma_minus, out.noise_sq);
  return out;
}

std::int64_t tf_occupancy(double n_mean, std::int64_t m) {
  check_m(m);
  if (!(n_mean >= 0.0 && n_mean <= 1.0)) {
    throw std::domain_error("twin-Fock per-bin occupancy must lie in [0, 1]");
  }
  const double x = n_mean * static_cast<double>(m);
  const double k = std::nearbyint(x);
  if (std::abs(x - k) > std::max(1e-6 * x, 1e-9)) {
    throw std::domain_error("m * n_mean must be an integer occupancy count");
  }
  return static_cast<std::int64_t>(k);
}

ClickMoments tf_mixed_moments(const OutcomeProbs& occupied, const OutcomeProbs& dark_only,
                              double n_mean, std::int64_t m) {
  check_m(m);
  occupied.validate();
  dark_only.validate();
  tf_occupancy(n_mean, m);
  const double x = n_mean * static_cast<double>(m);
  const double y = static_cast<double>(m) - x;
  const double p[4] = {occupied.p00, occupied.p01, occupied.p10, occupied.p11};
  const double pd[4] = {dark_only.p00, dark_only.p01, dark_only.p10, dark_only.p11};
  ClickMoments out;
  for (int i = 0; i < 4; ++i) {
    out.e[i] = x * p[i] + y * pd[i];
    out.var[i] = x * p[i] * (1.0 - p[i]) + y * pd[i] * (1.0 - pd[i]);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out.cov[i][j] = i == j ? out.var[i] : -x * p[i] * p[j] - y * pd[i] * pd[j];
    }
  }
  return out;
}

DifferentialStats snr_star_click(const Probe& probe, const ChannelParams& ch, std::int64_t m,
                                 DefectMode mode) {
  check_m(m);
  ch.validate();
  if (!(probe.n_mean >= 0.0)) throw std::domain_error("n_mean must be non-negative");

  if (probe.kind == StateKind::twin_fock) {
    double x = 0.0;
    if (probe.n_mean > 0.0) {
      tf_occupancy(probe.n_mean, m);
      x = probe.n_mean * static_cast<double>(m);
    }
    const double y = static_cast<double>(m) - x;
    const ClickBasisState pair{0.0, 0.0, 0.0, 1.0};
    const OutcomeProbs occupied = outcome_probs(pair, ch.alpha, ch.gamma, ch.n_dark);
    const OutcomeProbs idle = apply_dark_counts(ClickBasisState{}, ch.n_dark);

    const PopulationStats on = population_stats(occupied, x);
    const PopulationStats off = population_stats(idle, y);
    const double slope = mode == DefectMode::exact
                             ? defect_slope(pair, ch.gamma, ch.n_dark)
                             : defect_slope_fd(pair, ch.alpha, ch.gamma, ch.n_dark);
    DifferentialStats out;
    out.i_minus = on.i_minus + off.i_minus;
    out.gamma_minus = x * ch.delta_alpha * slope;
    out.noise_sq = on.noise_sq + off.noise_sq;
    out.snr_star = snr_from(out.gamma_minus, out.noise_sq);
    return out;
  }

  const ClickBasisState source = probe.n_mean == 0.0 ? ClickBasisState{} : click_probs(probe);
  const OutcomeProbs p = outcome_probs(source, ch.alpha, ch.gamma, ch.n_dark);
  const double slope = mode == DefectMode::exact
                           ? defect_slope(source, ch.gamma, ch.n_dark)
                           : defect_slope_fd(source, ch.alpha, ch.gamma, ch.n_dark);
  const PopulationStats stats = population_stats(p, static_cast<double>(m));
  DifferentialStats out;
  out.i_minus = stats.i_minus;
  out.gamma_minus = static_cast<double>(m) * ch.delta_alpha * slope;
  out.noise_sq = stats.noise_sq;
  out.snr_star = snr_from(out.gamma_minus, out.noise_sq);
  return out;
}

}  // namespace twinimg
