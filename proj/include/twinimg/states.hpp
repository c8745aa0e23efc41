#pragma once

#include <optional>

namespace twinimg {

/// Input state families for the twin-beam probe.
enum class StateKind { coherent, tmsv, twin_fock, custom };

/// Coarse per-mode statistics of a twin-mode input: mean photon number per
/// mode, Mandel Q-parameter, and the noise reduction factor sigma of the
/// photon-number difference.
struct TwinModeDescriptor {
  double n_mean = 0.0;
  double q = 0.0;
  double sigma = 1.0;

  void validate() const;  // throws std::domain_error on invalid values
};

/// Truncated per-bin photon-presence probabilities of a twin-mode state.
/// First digit: signal mode, second: reference mode (0 = empty, 1 = photon).
struct ClickBasisState {
  double p00 = 1.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;

  double sum() const { return p00 + p01 + p10 + p11; }
  void validate(double tol = 1e-12) const;
};

/// Payload for user-defined states. The moment pipeline needs (Q, sigma)
/// while the click pipeline needs per-bin probabilities, so a custom state
/// carries both.
struct CustomState {
  ClickBasisState clicks{};
  double q = 0.0;
  double sigma = 1.0;
};

/// A probe: state family plus per-bin brightness (plus payload when custom).
struct Probe {
  StateKind kind = StateKind::coherent;
  double n_mean = 0.0;
  CustomState custom{};

  static Probe coherent(double n_mean);
  static Probe tmsv(double n_mean);
  static Probe twin_fock(double n_mean);
  static Probe custom_state(double n_mean, const CustomState& s);
};

/// The single-photon truncation degrades above this per-bin occupancy.
inline constexpr double kTruncationThreshold = 0.1;

struct TruncationWarning {
  double n_mean = 0.0;
};

/// Non-empty when the truncated click-basis model is suspect (N > 0.1).
std::optional<TruncationWarning> truncation_warning(double n_mean);

/// (N, Q, sigma) for a built-in family. Throws for StateKind::custom; use
/// the Probe overload, which passes the stored pair through.
TwinModeDescriptor descriptor_for(StateKind kind, double n_mean);
TwinModeDescriptor descriptor_for(const Probe& probe);

/// Mean photon number of a two-mode squeezed vacuum with squeezing r.
double tmsv_n_from_r(double r);

/// Per-bin click-basis probabilities of the probe. The twin-Fock family
/// always returns (0, 0, 0, 1); its occupancy is handled by the exposure
/// model, not here.
ClickBasisState click_probs(StateKind kind, double n_mean);
ClickBasisState click_probs(const Probe& probe);

}  // namespace twinimg
