#pragma once

#include <optional>
#include <vector>

#include "mlqkd/phase_bound.hpp"

namespace mlqkd {

/// h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

enum class RateMode { kFinite, kAsymptotic };

struct KeyRateResult {
  double e_bit = 0.0;
  double e_ph = 0.0;
  double bracket = 0.0;  // 1 - h(e_bit) - h(e_ph), sign preserved
  double gain = 0.0;     // clamped at zero; never silently negative
  RateMode mode = RateMode::kFinite;
  std::optional<double> gamma;
  std::optional<int> K;
};

/// Key length from observed fractions: N * r_con * [1 - h(r_err/r_con)
/// - h(r_ph_bar/r_con)], with the phase-error argument clamped to [0, 1/2]
/// and zero gain once the clamp binds.
KeyRateResult key_length_finite(double n_detected, double r_con, double r_err,
                                double r_ph_bar);

/// Scaling-normalized gain G/eta^((K+1)/K) = gamma^(1/K) beta(eps) / M *
/// bracket with beta(eps) = 1 - cos^2(Theta)(1-eps).  The even-M doubling
/// flag on params multiplies the gain by two and changes nothing else.
KeyRateResult asymptotic_gain(const ProtocolParams& params, int K, double gamma,
                              double eps);

/// Maximize the asymptotic gain over gamma (golden-section on a log-spaced
/// bracket).  Returns gamma* = 0 with a zero-gain result when no gamma gives
/// a positive bracket.
std::pair<double, KeyRateResult> optimize_gamma(const ProtocolParams& params,
                                                int K, double eps);

/// Largest eps at which the optimized gain is still positive, to 1e-5.
/// Depends only on (K, Theta): M enters the gain as a positive factor.
double threshold_eps(int K, double big_theta);

struct FiniteRateOptions {
  bool optimize_mu = false;
  bool scan_phi = false;           // minimize the bound over 64 phase offsets
  std::optional<int> k_override;   // analysis order; defaults to max_k(M, L)
};

struct FiniteRateResult {
  KeyRateResult rate;  // gain is per pulse: eta_d times the per-event gain
  double mu = 0.0;
  double phi_prime = 0.0;
  ObservedStats stats{};
  PhaseErrorBound bound;
};

/// Full finite-loss pipeline: honest statistics -> loss constraints ->
/// maximized phase-error bound -> key rate.
FiniteRateResult finite_rate(const ProtocolParams& params, double mu,
                             const ChannelModel& channel,
                             const FiniteRateOptions& options = {});

struct ScanPoint {
  double eps = 0.0;
  double gamma_star = 0.0;
  double bracket = 0.0;
  double gain = 0.0;
};

/// Gamma-optimized asymptotic gain over a list of eps values.
std::vector<ScanPoint> scan_eps(const ProtocolParams& params, int K,
                                const std::vector<double>& eps_values);

}  // namespace mlqkd
