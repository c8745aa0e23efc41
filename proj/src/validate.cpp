#include "twinimg/validate.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "twinimg/analytic.hpp"
#include "twinimg/channels.hpp"
#include "twinimg/clickstats.hpp"
#include "twinimg/format.hpp"
#include "twinimg/montecarlo.hpp"
#include "twinimg/params.hpp"

namespace twinimg {

namespace {

constexpr std::array<StateKind, 3> kStates = {StateKind::coherent, StateKind::tmsv,
                                              StateKind::twin_fock};

struct McPoint {
  double alpha;
  double gamma;
  double n_dark;
};

// Three states at four channel settings: 12 Monte Carlo points.
constexpr std::array<McPoint, 4> kMcPoints = {
    McPoint{0.01, 0.0, 0.0},
    McPoint{0.5, 0.3, 0.0},
    McPoint{0.99, 0.0, 1e-3},
    McPoint{0.3, 0.1, 1e-4},
};

double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

// Per-cell z-score of pooled outcome counts against the model moments.
double max_frequency_sigma(const std::array<std::int64_t, 4>& counts, const ClickMoments& per_run,
                           int runs) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double expected = static_cast<double>(runs) * per_run.e[i];
    const double variance = static_cast<double>(runs) * per_run.var[i];
    const double observed = static_cast<double>(counts[i]);
    double z;
    if (variance > 0.0) {
      z = std::abs(observed - expected) / std::sqrt(variance);
    } else {
      z = observed == std::round(expected) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, z);
  }
  return worst;
}

ClickMoments model_moments(StateKind kind, double n_mean, double alpha, double gamma,
                           double n_dark, std::int64_t m) {
  if (kind == StateKind::twin_fock) {
    const OutcomeProbs occupied =
        outcome_probs(ClickBasisState{0.0, 0.0, 0.0, 1.0}, alpha, gamma, n_dark);
    const OutcomeProbs idle = apply_dark_counts(ClickBasisState{}, n_dark);
    return tf_mixed_moments(occupied, idle, n_mean, m);
  }
  return multinomial_moments(outcome_probs(click_probs(kind, n_mean), alpha, gamma, n_dark), m);
}

}  // namespace

ValidateConfig ValidateConfig::quick() {
  ValidateConfig config;
  config.mc_m = 100'000;
  config.mc_runs = 30;
  return config;
}

ValidateReport run_validate(const ValidateConfig& config) {
  ValidateReport report;
  std::ostringstream os;

  os << "twinimg validate report\n";
  os << "seed=" << config.seed << " n_mean=" << format_double(config.n_mean)
     << " delta_alpha=" << format_double(config.delta_alpha)
     << " m_click=" << format_int(config.m_click) << " mc_m=" << format_int(config.mc_m)
     << " mc_runs=" << config.mc_runs << "\n";

  // Click statistics against the photon-number model at matched n_eff.
  os << "section=click_vs_analytic\n";
  os << "state,alpha,gamma,eta,snr_analytic,snr_click,rel_gap\n";
  const double n_eff =
      config.delta_alpha * config.delta_alpha * static_cast<double>(config.m_click) * config.n_mean;
  for (StateKind kind : kStates) {
    const TwinModeDescriptor d = descriptor_for(kind, config.n_mean);
    for (double alpha : {0.01, 0.5, 0.99}) {
      for (double gamma : {0.0, 0.3}) {
        for (double eta : {0.0, 1.0}) {
          const double analytic = snr_star_imperfect(alpha, d.q, d.sigma, gamma, eta, n_eff);
          const ChannelParams ch{alpha, config.delta_alpha, gamma, eta * config.n_mean};
          const double click =
              snr_star_click(Probe{kind, config.n_mean, {}}, ch, config.m_click).snr_star;
          const double gap = std::abs(click / analytic - 1.0);
          report.max_click_gap = std::max(report.max_click_gap, gap);
          os << state_name(kind) << ',' << format_double(alpha) << ',' << format_double(gamma)
             << ',' << format_double(eta) << ',' << format_double(analytic) << ','
             << format_double(click) << ',' << format_double(gap) << '\n';
        }
      }
    }
  }

  // Monte Carlo against the click-statistics model.
  os << "section=mc_vs_clickstats\n";
  os << "state,alpha,gamma,n_dark,snr_click,mc_snr,mc_se,z_snr,z_var,max_z_freq\n";
  for (StateKind kind : kStates) {
    for (std::size_t pi = 0; pi < kMcPoints.size(); ++pi) {
      const McPoint& point = kMcPoints[pi];
      const Probe probe{kind, config.n_mean, {}};
      const ChannelParams ch{point.alpha, config.delta_alpha, point.gamma, point.n_dark};
      const DifferentialStats predicted = snr_star_click(probe, ch, config.mc_m);

      // Distinct sub-seed per (state, point) so the frequency pool and the
      // estimator see independent streams.
      const std::uint64_t freq_seed =
          config.seed ^ (0x517C + static_cast<std::uint64_t>(kind) * 131u + pi);
      const std::vector<ExposureCounts> exposures =
          run_exposures(probe, point.alpha, point.gamma, point.n_dark, config.mc_m, config.mc_runs,
                        freq_seed, config.threads);
      std::array<std::int64_t, 4> pooled{};
      std::vector<double> diffs;
      diffs.reserve(exposures.size());
      for (const ExposureCounts& e : exposures) {
        for (int i = 0; i < 4; ++i) pooled[i] += e.nu[i];
        diffs.push_back(static_cast<double>(e.c_minus()));
      }
      const ClickMoments moments =
          model_moments(kind, config.n_mean, point.alpha, point.gamma, point.n_dark, config.mc_m);
      const double z_freq = max_frequency_sigma(pooled, moments, config.mc_runs);

      const double var_hat = sample_variance(diffs);
      const double var_se = predicted.noise_sq * std::sqrt(2.0 / (config.mc_runs - 1.0));
      const double z_var = std::abs(var_hat - predicted.noise_sq) / var_se;

      McConfig mc;
      mc.m = config.mc_m;
      mc.runs = config.mc_runs;
      mc.seed = config.seed ^ (0xA5A5'0000ull + static_cast<std::uint64_t>(kind) * 131u + pi);
      mc.threads = config.threads;
      const McEstimate est = estimate_snr_star(probe, ch, mc);
      const double z_snr = est.se_snr_star > 0.0
                               ? std::abs(est.snr_star - predicted.snr_star) / est.se_snr_star
                               : (est.snr_star == predicted.snr_star
                                      ? 0.0
                                      : std::numeric_limits<double>::infinity());

      report.max_mc_sigma = std::max({report.max_mc_sigma, z_freq, z_var, z_snr});
      os << state_name(kind) << ',' << format_double(point.alpha) << ','
         << format_double(point.gamma) << ',' << format_double(point.n_dark) << ','
         << format_double(predicted.snr_star) << ',' << format_double(est.snr_star) << ','
         << format_double(est.se_snr_star) << ',' << format_double(z_snr) << ','
         << format_double(z_var) << ',' << format_double(z_freq) << '\n';
    }
  }

  const bool click_ok = report.max_click_gap <= config.tol_click;
  const bool mc_ok = report.max_mc_sigma <= config.tol_mc_sigma;
  report.pass = click_ok && mc_ok;
  os << "summary max_click_gap=" << format_double(report.max_click_gap)
     << " tol=" << format_double(config.tol_click) << " -> " << (click_ok ? "PASS" : "FAIL")
     << '\n';
  os << "summary max_mc_sigma=" << format_double(report.max_mc_sigma)
     << " tol=" << format_double(config.tol_mc_sigma) << " -> " << (mc_ok ? "PASS" : "FAIL")
     << '\n';
  os << "result=" << (report.pass ? "PASS" : "FAIL") << '\n';
  report.text = os.str();
  return report;
}

}  // namespace twinimg
