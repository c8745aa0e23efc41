#include "twinimg/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "twinimg/clickstats.hpp"
#include "twinimg/rng.hpp"

namespace twinimg {

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs body(i) for i in [0, n). Results must go to per-index slots so the
// schedule cannot leak into the output.
template <typename F>
void parallel_for(int n, int threads, F&& body) {
  const int workers = std::min(resolve_threads(threads), n > 0 ? n : 1);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&body, w, workers, n] {
      for (int i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Uniform stream with optional antithetic mirroring.
struct BitStream {
  SplitMix64 rng;
  bool mirror = false;

  double uniform() {
    const double u = rng.uniform();
    return mirror ? 1.0 - u : u;
  }
  bool bernoulli(double p) { return uniform() < p; }
};

void check_channel(double alpha, double gamma, double n_dark) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::domain_error("gamma must lie in [0, 1)");
  if (!(n_dark >= 0.0)) throw std::domain_error("n_dark must be non-negative");
}

// One exposure. Every bin consumes a fixed number of uniforms per state
// family, keeping paired/antithetic streams aligned across parameter values.
ExposureCounts simulate_bins(const Probe& probe, double alpha, double gamma, double n_dark,
                             std::int64_t m, BitStream& bs) {
  const double keep1 = (1.0 - alpha) * (1.0 - gamma);
  const double keep2 = 1.0 - gamma;
  const double dark = -std::expm1(-n_dark);
  ExposureCounts out{};
  auto tally = [&out](bool click1, bool click2) {
    ++out.nu[(click1 ? 2 : 0) + (click2 ? 1 : 0)];
  };

  switch (probe.kind) {
    case StateKind::coherent: {
      const double present = -std::expm1(-probe.n_mean);
      for (std::int64_t i = 0; i < m; ++i) {
        const bool emit1 = bs.bernoulli(present);
        const bool emit2 = bs.bernoulli(present);
        const bool live1 = bs.bernoulli(keep1);
        const bool live2 = bs.bernoulli(keep2);
        const bool dark1 = bs.bernoulli(dark);
        const bool dark2 = bs.bernoulli(dark);
        tally((emit1 && live1) || dark1, (emit2 && live2) || dark2);
      }
      return out;
    }
    case StateKind::tmsv: {
      const double present = -std::expm1(-probe.n_mean);
      for (std::int64_t i = 0; i < m; ++i) {
        const bool pair = bs.bernoulli(present);
        const bool live1 = bs.bernoulli(keep1);
        const bool live2 = bs.bernoulli(keep2);
        const bool dark1 = bs.bernoulli(dark);
        const bool dark2 = bs.bernoulli(dark);
        tally((pair && live1) || dark1, (pair && live2) || dark2);
      }
      return out;
    }
    case StateKind::twin_fock: {
      // Exactly round(m N) occupied bins. The counts are invariant under the
      // random placement, so the occupied block is simulated first.
      const std::int64_t occupied = tf_occupancy(probe.n_mean, m);
      for (std::int64_t i = 0; i < m; ++i) {
        const bool pair = i < occupied;
        const bool live1 = bs.bernoulli(keep1);
        const bool live2 = bs.bernoulli(keep2);
        const bool dark1 = bs.bernoulli(dark);
        const bool dark2 = bs.bernoulli(dark);
        tally((pair && live1) || dark1, (pair && live2) || dark2);
      }
      return out;
    }
    case StateKind::custom: {
      const ClickBasisState s = click_probs(probe);
      const double c01 = s.p00 + s.p01;
      const double c10 = c01 + s.p10;
      for (std::int64_t i = 0; i < m; ++i) {
        const double u = bs.uniform();
        const bool emit1 = u >= c01;
        const bool emit2 = (u >= s.p00 && u < c01) || u >= c10;
        const bool live1 = bs.bernoulli(keep1);
        const bool live2 = bs.bernoulli(keep2);
        const bool dark1 = bs.bernoulli(dark);
        const bool dark2 = bs.bernoulli(dark);
        tally((emit1 && live1) || dark1, (emit2 && live2) || dark2);
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown state kind");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

ExposureCounts simulate_exposure(const Probe& probe, double alpha, double gamma, double n_dark,
                                 std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw std::domain_error("m must be at least 1");
  check_channel(alpha, gamma, n_dark);
  if (!(probe.n_mean >= 0.0)) throw std::domain_error("n_mean must be non-negative");
  BitStream bs{SplitMix64{seed}};
  return simulate_bins(probe, alpha, gamma, n_dark, m, bs);
}

std::vector<ExposureCounts> run_exposures(const Probe& probe, double alpha, double gamma,
                                          double n_dark, std::int64_t m, int runs,
                                          std::uint64_t seed, int threads) {
  if (runs < 1) throw std::domain_error("runs must be at least 1");
  if (m < 1) throw std::domain_error("m must be at least 1");
  check_channel(alpha, gamma, n_dark);
  std::vector<ExposureCounts> out(static_cast<std::size_t>(runs));
  parallel_for(runs, threads, [&](int i) {
    BitStream bs{SplitMix64{stream_seed(seed, static_cast<std::uint64_t>(i), 0)}};
    out[static_cast<std::size_t>(i)] = simulate_bins(probe, alpha, gamma, n_dark, m, bs);
  });
  return out;
}

McEstimate estimate_snr_star(const Probe& probe, const ChannelParams& ch, const McConfig& mc) {
  ch.validate();
  if (mc.m < 1) throw std::domain_error("m must be at least 1");
  if (mc.runs < 2) throw std::domain_error("at least 2 runs are needed for variance estimation");
  if (mc.antithetic && mc.runs % 2 != 0) {
    throw std::domain_error("antithetic sampling needs an even number of runs");
  }

  const int runs = mc.runs;
  std::vector<double> base(static_cast<std::size_t>(runs));
  std::vector<double> defect(static_cast<std::size_t>(runs));
  parallel_for(runs, mc.threads, [&](int i) {
    const std::uint64_t run = mc.antithetic ? static_cast<std::uint64_t>(i / 2)
                                            : static_cast<std::uint64_t>(i);
    const bool mirror = mc.antithetic && (i % 2 == 1);
    BitStream b0{SplitMix64{stream_seed(mc.seed, run, 0)}, mirror};
    base[static_cast<std::size_t>(i)] = static_cast<double>(
        simulate_bins(probe, ch.alpha, ch.gamma, ch.n_dark, mc.m, b0).c_minus());
    BitStream b1{SplitMix64{stream_seed(mc.seed, run, mc.paired ? 0u : 1u)}, mirror};
    defect[static_cast<std::size_t>(i)] = static_cast<double>(
        simulate_bins(probe, ch.alpha + ch.delta_alpha, ch.gamma, ch.n_dark, mc.m, b1).c_minus());
  });

  // With antithetic pairs only the pair means are independent; the variance
  // estimate falls back to the even-run subset.
  std::vector<double> base_units, defect_units, base_indep;
  if (mc.antithetic) {
    for (int i = 0; i < runs; i += 2) {
      base_units.push_back(0.5 * (base[i] + base[i + 1]));
      defect_units.push_back(0.5 * (defect[i] + defect[i + 1]));
      base_indep.push_back(base[i]);
    }
  } else {
    base_units = base;
    defect_units = defect;
    base_indep = base;
  }

  const double n_units = static_cast<double>(base_units.size());
  const double n_indep = static_cast<double>(base_indep.size());

  McEstimate est;
  const double base_mean = mean_of(base_units);
  const double defect_mean = mean_of(defect_units);
  const double base_var_units = sample_variance(base_units, base_mean);
  const double defect_var_units = sample_variance(defect_units, defect_mean);

  est.mean_i_minus = base_mean;
  est.se_i_minus = std::sqrt(base_var_units / n_units);
  est.mean_gamma_minus = defect_mean - base_mean;
  est.se_gamma_minus = std::sqrt((base_var_units + defect_var_units) / n_units);

  const double indep_mean = mean_of(base_indep);
  est.noise_sq = sample_variance(base_indep, indep_mean);
  est.se_noise_sq = est.noise_sq * std::sqrt(2.0 / (n_indep - 1.0));

  if (est.noise_sq > 0.0) {
    est.snr_star = est.mean_gamma_minus / std::sqrt(est.noise_sq);
    // Delta method over (gamma_minus, noise_sq).
    const double g = est.mean_gamma_minus;
    const double v = est.noise_sq;
    est.se_snr_star = std::sqrt(est.se_gamma_minus * est.se_gamma_minus / v +
                                g * g * est.se_noise_sq * est.se_noise_sq / (4.0 * v * v * v));
  } else {
    est.degenerate = true;
    est.snr_star = est.mean_gamma_minus == 0.0
                       ? 0.0
                       : std::numeric_limits<double>::infinity();
    est.se_snr_star = 0.0;
  }
  return est;
}

}  // namespace twinimg
