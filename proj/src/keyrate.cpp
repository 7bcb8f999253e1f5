#include "mlqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "golden.hpp"

namespace mlqkd {

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("binary_entropy: x must be in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

KeyRateResult key_length_finite(double n_detected, double r_con, double r_err,
                                double r_ph_bar) {
  if (!(r_con > 0.0)) throw std::invalid_argument("key_length_finite: r_con must be > 0");
  if (r_err < 0.0 || r_err > r_con)
    throw std::invalid_argument("key_length_finite: need 0 <= r_err <= r_con");
  if (r_ph_bar < 0.0)
    throw std::invalid_argument("key_length_finite: r_ph_bar must be >= 0");
  KeyRateResult out;
  out.mode = RateMode::kFinite;
  out.e_bit = std::min(r_err / r_con, 0.5);
  const bool bit_clamped = r_err / r_con > 0.5;
  out.e_ph = std::clamp(r_ph_bar / r_con, 0.0, 0.5);
  const bool ph_clamped = r_ph_bar / r_con >= 0.5;
  out.bracket = 1.0 - binary_entropy(out.e_bit) - binary_entropy(out.e_ph);
  out.gain = (ph_clamped || bit_clamped || out.bracket <= 0.0)
                 ? 0.0
                 : n_detected * r_con * out.bracket;
  return out;
}

namespace {

double beta_of(const ProtocolParams& params, double eps) {
  const double c = std::cos(params.theta());
  return 1.0 - c * c * (1.0 - eps);
}

}  // namespace

KeyRateResult asymptotic_gain(const ProtocolParams& params, int K, double gamma,
                              double eps) {
  const double beta = beta_of(params, eps);
  const AsymptoticWitness wit = g_asymptotic(K, params.theta(), gamma, eps);
  KeyRateResult out;
  out.mode = RateMode::kAsymptotic;
  out.gamma = gamma;
  out.K = K;
  out.e_bit = eps / (2.0 * beta);
  const double e_ph_raw = 0.5 + wit.g_value / (2.0 * beta);
  out.e_ph = std::clamp(e_ph_raw, 0.0, 0.5);
  out.bracket = 1.0 - binary_entropy(out.e_bit) - binary_entropy(out.e_ph);
  const bool clamped = e_ph_raw >= 0.5;
  out.gain = (clamped || out.bracket <= 0.0 || gamma <= 0.0)
                 ? 0.0
                 : std::pow(gamma, 1.0 / K) * beta / params.M * out.bracket;
  if (params.double_even && params.M % 2 == 0) out.gain *= 2.0;
  return out;
}

std::pair<double, KeyRateResult> optimize_gamma(const ProtocolParams& params,
                                                int K, double eps) {
  auto gain_at = [&](double lg) { return asymptotic_gain(params, K, std::pow(10.0, lg), eps); };

  // Upper end of the bracket: first gamma with a nonpositive bracket.
  double lg_hi = 0.0;
  for (int i = 0; i < 60 && gain_at(lg_hi).bracket > 0.0; ++i) lg_hi += 0.5;

  const double lg_lo = -12.0;
  const int n_scan = 49;
  double best_lg = lg_lo, best_gain = -1.0;
  for (int i = 0; i < n_scan; ++i) {
    const double lg = lg_lo + (lg_hi - lg_lo) * i / (n_scan - 1);
    const double v = gain_at(lg).gain;
    if (v > best_gain) {
      best_gain = v;
      best_lg = lg;
    }
  }
  if (best_gain <= 0.0) {
    KeyRateResult zero = asymptotic_gain(params, K, 0.0, eps);
    zero.gamma = 0.0;
    return {0.0, zero};
  }
  const double step = (lg_hi - lg_lo) / (n_scan - 1);
  const auto [lg_star, unused] = detail::golden_max(
      [&](double lg) { return gain_at(lg).gain; }, best_lg - step, best_lg + step, 70);
  (void)unused;
  const double gamma_star = std::pow(10.0, lg_star);
  return {gamma_star, asymptotic_gain(params, K, gamma_star, eps)};
}

double threshold_eps(int K, double big_theta) {
  // Positivity of the optimized gain equals positivity of the bracket in the
  // gamma -> 0 limit: the budget-zero maximization is exact and the bracket
  // is nonincreasing in gamma.
  auto positive = [&](double eps) {
    const double beta = 1.0 - std::cos(big_theta) * std::cos(big_theta) * (1.0 - eps);
    const AsymptoticWitness wit = g_asymptotic(K, big_theta, 0.0, eps);
    const double e_ph_raw = 0.5 + wit.g_value / (2.0 * beta);
    if (e_ph_raw >= 0.5) return false;
    const double e_bit = eps / (2.0 * beta);
    const double bracket = 1.0 - binary_entropy(std::min(e_bit, 0.5)) -
                           binary_entropy(std::clamp(e_ph_raw, 0.0, 0.5));
    return bracket > 0.0;
  };
  if (!positive(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (positive(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

FiniteRateResult finite_rate(const ProtocolParams& params, double mu,
                             const ChannelModel& channel,
                             const FiniteRateOptions& options) {
  const int K = options.k_override.value_or(max_k(params.M, params.L));

  auto rate_at_mu = [&](double m) -> FiniteRateResult {
    FiniteRateResult out;
    out.mu = m;
    out.stats = honest_stats(params, m, channel);
    const AngularWeights weights =
        angular_weights(poisson_dist(m, default_n_max(m)), params.M);
    const double phi_default = choose_phi_prime(K, params.theta());
    out.phi_prime = phi_default;
    out.bound = phase_error_bound_finite(params, phi_default, out.stats, weights);
    if (options.scan_phi) {
      for (int i = 0; i < 64; ++i) {
        const double phi = -std::numbers::pi / 2.0 + std::numbers::pi * i / 64.0;
        const PhaseErrorBound cand =
            phase_error_bound_finite(params, phi, out.stats, weights);
        if (cand.r_ph_bar < out.bound.r_ph_bar) {
          out.bound = cand;
          out.phi_prime = phi;
        }
      }
    }
    out.rate = key_length_finite(1.0, out.stats.r_con, out.stats.r_bit,
                                 out.bound.r_ph_bar);
    out.rate.gain *= out.stats.eta_d;  // per pulse
    if (params.double_even && params.M % 2 == 0) out.rate.gain *= 2.0;
    out.rate.K = K;
    out.rate.gamma = std::pow(m, K) / channel.eta;  // implied scaling parameter
    return out;
  };

  if (!options.optimize_mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("finite_rate: mu must be > 0");
    return rate_at_mu(mu);
  }

  // Log-spaced scan then golden refinement over the source intensity.
  const double lg_lo = std::log10(std::max(channel.eta * 1e-2, 1e-10));
  const double lg_hi = 0.0;
  const int n_scan = 25;
  double best_lg = lg_lo, best_gain = -1.0;
  for (int i = 0; i < n_scan; ++i) {
    const double lg = lg_lo + (lg_hi - lg_lo) * i / (n_scan - 1);
    const double v = rate_at_mu(std::pow(10.0, lg)).rate.gain;
    if (v > best_gain) {
      best_gain = v;
      best_lg = lg;
    }
  }
  const double step = (lg_hi - lg_lo) / (n_scan - 1);
  const auto [lg_star, unused] = detail::golden_max(
      [&](double lg) { return rate_at_mu(std::pow(10.0, lg)).rate.gain; },
      std::max(lg_lo, best_lg - step), std::min(lg_hi, best_lg + step), 40);
  (void)unused;
  return rate_at_mu(std::pow(10.0, lg_star));
}

std::vector<ScanPoint> scan_eps(const ProtocolParams& params, int K,
                                const std::vector<double>& eps_values) {
  std::vector<ScanPoint> points;
  points.reserve(eps_values.size());
  for (double eps : eps_values) {
    const auto [gamma_star, rate] = optimize_gamma(params, K, eps);
    points.push_back({eps, gamma_star, rate.bracket, rate.gain});
  }
  return points;
}

}  // namespace mlqkd
