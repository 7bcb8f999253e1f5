// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "mlqkd/keyrate.hpp"
#include "mlqkd/montecarlo.hpp"
#include "mlqkd/operators.hpp"
#include "mlqkd/source.hpp"

using namespace mlqkd;
using std::numbers::pi;

namespace {

int failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// --- 1: brute-force operators match the closed-form blocks ---
void criterion_operator_oracle() {
  Timer timer;
  const std::vector<double> phis = {0.0, 0.3, 1.234, -0.7};
  double worst_dev = 0.0, worst_leak = 0.0;
  for (int m : {4, 5, 6, 8}) {
    for (int l : {1, 2}) {
      if (2 * l > m) continue;
      const ClosedFormReport rep = verify_closed_forms(ProtocolParams(m, l), phis);
      worst_dev = std::max(worst_dev, rep.max_deviation);
      worst_leak = std::max(worst_leak, rep.max_leakage);
    }
  }
  const double t = timer.seconds();
  report(1, "operator oracle",
         worst_dev <= 1e-10 && worst_leak <= 1e-12 && t < 5.0,
         fmt("max dev %.2e, leakage %.2e, %.2fs", worst_dev, worst_leak, t));
}

// --- 2: source state oracle ---
void criterion_state_oracle() {
  Timer timer;
  double worst_proj = 0.0, worst_rot = 0.0, worst_w = 0.0;
  bool ok = true;
  for (int m : {4, 5, 6, 8}) {
    for (double mu : {0.2, 0.5}) {
      const PhotonNumberDist dist = poisson_dist(mu, 6);
      const StateConsistencyReport rep =
          verify_state_consistency(ProtocolParams(m, 1), dist);
      worst_proj = std::max(worst_proj, rep.projection_deviation);
      worst_rot = std::max(worst_rot, rep.rotation_deviation);
      worst_w = std::max(worst_w, rep.weight_deviation - dist.tail_mass);
      ok = ok && rep.passed;
    }
  }
  const double t = timer.seconds();
  report(2, "state oracle",
         ok && worst_proj <= 1e-10 && worst_rot <= 1e-10 && worst_w <= 1e-12 &&
             t < 10.0,
         fmt("proj %.2e, rot %.2e, weights %.2e, %.2fs", worst_proj, worst_rot,
             worst_w, t));
}

// --- 3: optimal source intensity scaling ---
void criterion_optimal_intensity() {
  Timer timer;
  const auto [gamma_star, rate] = optimize_gamma(ProtocolParams(4, 1), 2, 0.0);
  const double root = std::sqrt(gamma_star);
  const double t = timer.seconds();
  report(3, "optimal intensity",
         std::abs(root - 1.51) <= 0.02 && t < 5.0,
         fmt("sqrt(gamma*) = %.4f (want 1.51 +- 0.02), gain %.5f, %.2fs", root,
             rate.gain, t));
}

// --- 4: zero-budget value of the scaling objective ---
void criterion_g_zero() {
  struct Case {
    int k;
    double theta;
  };
  bool ok = true;
  std::string detail;
  for (const Case& c : {Case{2, pi / 4}, {3, pi / 6}, {3, pi / 5}}) {
    const double got = g_asymptotic(c.k, c.theta, 0.0, 0.0).g_value;
    const double want = -std::cos((c.k - 1) * c.theta) * std::sin(c.theta) *
                        std::sin(c.theta);
    ok = ok && std::abs(got - want) <= 1e-6;
  }
  const double sarg = g_asymptotic(2, pi / 4, 0.0, 0.0).g_value;
  ok = ok && std::abs(sarg + std::sqrt(2.0) / 4.0) <= 1e-6;
  report(4, "g(0,0) closed form", ok, fmt("g(0,0) sarg = %.8f", sarg));
}

// --- 5: finite-loss scaling exponent ---
double optimized_finite_gain(const ProtocolParams& params, double eta) {
  FiniteRateOptions options;
  options.optimize_mu = true;
  return finite_rate(params, 0.0, ChannelModel(eta, 0.0), options).rate.gain;
}

void criterion_scaling_exponent() {
  Timer timer;
  bool ok = true;
  std::string detail;
  for (auto [m, l] : {std::pair{4, 1}, {6, 1}}) {
    const ProtocolParams params(m, l);
    const double expected = (max_k(m, l) + 1.0) / max_k(m, l);
    const double g4 = optimized_finite_gain(params, 1e-4);
    const double g5 = optimized_finite_gain(params, 1e-5);
    const double slope = std::log10(g4 / g5);
    ok = ok && std::abs(slope - expected) <= 0.05;
    detail += fmt("(%d,%d): %.4f vs %.4f; ", m, l, slope, expected);
  }
  const double t = timer.seconds();
  report(5, "scaling exponent", ok && t < 120.0, detail + fmt("%.1fs", t));
}

// --- 6: finite bound approaches the scaling limit ---
void criterion_finite_asymptotic() {
  const ProtocolParams params(4, 1);
  const int k_order = 2;
  const double eta = 1e-5;
  bool ok = true;
  std::string detail;
  for (double gamma : {1.0, 2.2728}) {
    for (double eps : {0.0, 0.02}) {
      const double mu = std::sqrt(gamma * eta);
      const ObservedStats stats = honest_stats(params, mu, ChannelModel(eta, eps));
      const AngularWeights weights =
          angular_weights(poisson_dist(mu, default_n_max(mu)), params.M);
      const PhaseErrorBound bound = phase_error_bound_finite(
          params, choose_phi_prime(k_order, params.theta()), stats, weights);
      const double finite_ratio = bound.r_ph_bar / stats.r_con;
      const double beta = params.M * stats.r_con;
      const double g = g_asymptotic(k_order, params.theta(), gamma, eps).g_value;
      const double asym_ratio = 0.5 + g / (2.0 * beta);
      const double rel = std::abs(finite_ratio - asym_ratio) / asym_ratio;
      ok = ok && rel <= 0.02;
      detail += fmt("g=%.2f e=%.2f: %.3f%%; ", gamma, eps, 100.0 * rel);
    }
  }
  report(6, "finite vs asymptotic bound", ok, detail);
}

// --- 7: threshold M-independence and peak location ---
void criterion_thresholds() {
  Timer timer;
  const double t41 = threshold_eps(2, ProtocolParams(4, 1).theta());
  const double t82 = threshold_eps(2, ProtocolParams(8, 2).theta());
  bool ok = std::abs(t41 - t82) <= 1e-4;
  std::string detail = fmt("K=2: %.5f vs %.5f; ", t41, t82);
  for (int k : {3, 4}) {
    const double theta_star = pi / (4.0 * (k - 1));
    const double at_star = threshold_eps(k, theta_star);
    double best_other = 0.0;
    for (int i = 0; i < 9; ++i) {
      const double theta = theta_star * (0.5 + i / 8.0);  // 0.5x .. 1.5x
      best_other = std::max(best_other, threshold_eps(k, theta));
    }
    ok = ok && at_star >= best_other - 1e-9;
    detail += fmt("K=%d peak %.5f >= grid %.5f; ", k, at_star, best_other);
  }
  report(7, "threshold M-independence and peak", ok,
         detail + fmt("%.1fs", timer.seconds()));
}

// --- 8: Monte Carlo agreement ---
void criterion_montecarlo() {
  Timer timer;
  bool ok = true;
  std::string detail;
  const ProtocolParams params(4, 1);
  for (double eps : {0.0, 0.1}) {
    const SimConfig config{params, 0.1, ChannelModel(0.1, eps), 10000000, 20240810};
    const SimResult sim = simulate(config);
    const ObservedStats analytic = honest_stats(params, 0.1, config.channel);
    const CompareReport rep = compare(sim, analytic);
    ok = ok && rep.pass && !rep.inconclusive;
    if (eps == 0.0) {
      ok = ok && sim.conclusive_errors == 0;
      detail += fmt("eps=0: errors=%llu; ",
                    static_cast<unsigned long long>(sim.conclusive_errors));
    } else {
      detail += fmt("eps=0.1: |z| = %.2f/%.2f/%.2f; ", std::abs(rep.z_eta_d),
                    std::abs(rep.z_r_con), std::abs(rep.z_r_bit));
    }
  }
  const double t = timer.seconds();
  report(8, "Monte Carlo agreement", ok && t < 60.0, detail + fmt("%.1fs", t));
}

// --- 9: optimizer honesty against the exhaustive grid ---
void criterion_optimizer_honesty() {
  Timer timer;
  struct Case {
    int m, l;
    double mu, eta, eps;
  };
  bool ok = true;
  std::string detail;
  for (const Case& c :
       {Case{4, 1, 0.2, 1e-2, 0.0}, {4, 1, 0.2, 1e-2, 0.1}, {4, 2, 0.3, 1e-2, 0.05}}) {
    const ProtocolParams params(c.m, c.l);
    const ObservedStats stats = honest_stats(params, c.mu, ChannelModel(c.eta, c.eps));
    const AngularWeights weights =
        angular_weights(poisson_dist(c.mu, default_n_max(c.mu)), c.m);
    const double phi_p = choose_phi_prime(max_k(c.m, c.l), params.theta());
    const std::vector<double> rhs = loss_constraint_rhs(weights, stats.eta_d);

    const PhaseErrorBound bound =
        phase_error_bound_finite(params, phi_p, stats, weights);

    double grid_best = -1e18;
    std::vector<double> xs(4);
    for (int i0 = 0; i0 <= 20; ++i0)
      for (int i1 = 0; i1 <= 20; ++i1)
        for (int i2 = 0; i2 <= 20; ++i2)
          for (int i3 = 0; i3 <= 20; ++i3) {
            xs = {-1.0 + 0.1 * i0, -1.0 + 0.1 * i1, -1.0 + 0.1 * i2,
                  -1.0 + 0.1 * i3};
            const InnerLpResult lp =
                phase_bound_inner_lp(params, phi_p, stats, rhs, xs);
            if (lp.feasible) grid_best = std::max(grid_best, lp.value);
          }
    const double grid_bound = stats.r_con / 2.0 + grid_best / (2.0 * c.m);

    const double recomputed =
        finite_bound_objective(params, phi_p, stats, bound.witness);
    const double violation =
        finite_witness_violation(params, stats, rhs, bound.witness);
    const bool case_ok = bound.r_ph_bar >= grid_bound - 1e-9 &&
                         bound.r_ph_bar <= grid_bound + 5e-3 &&
                         std::abs(recomputed - bound.r_ph_bar) <= 1e-9 &&
                         violation <= 1e-9;
    ok = ok && case_ok;
    detail += fmt("(%d,%d,e=%.2f): opt-grid=%+.1e; ", c.m, c.l, c.eps,
                  bound.r_ph_bar - grid_bound);
  }
  report(9, "optimizer honesty", ok, detail + fmt("%.1fs", timer.seconds()));
}

// --- 10: even-M doubling ---
void criterion_doubling() {
  const KeyRateResult plain =
      asymptotic_gain(ProtocolParams(4, 1, false), 2, 2.2728, 0.0);
  const KeyRateResult doubled =
      asymptotic_gain(ProtocolParams(4, 1, true), 2, 2.2728, 0.0);
  bool ok = plain.gain > 0.0 && doubled.gain == 2.0 * plain.gain;

  const SimConfig config{ProtocolParams(4, 1, true), 0.1, ChannelModel(0.1, 0.0),
                         10000000, 77};
  const SimResult sim = simulate(config);
  const double n1 = static_cast<double>(sim.conclusive);
  const double n2 = static_cast<double>(sim.mirror_conclusive);
  const double z = (n1 - n2) / std::sqrt(n1 + n2);
  ok = ok && sim.mirror_conclusive > 0 && std::abs(z) <= 4.0;
  report(10, "even-M doubling", ok,
         fmt("gain x%.1f, mirror class z = %.2f", doubled.gain / plain.gain, z));
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_operator_oracle();
  criterion_state_oracle();
  criterion_optimal_intensity();
  criterion_g_zero();
  criterion_scaling_exponent();
  criterion_finite_asymptotic();
  criterion_thresholds();
  criterion_montecarlo();
  criterion_optimizer_honesty();
  criterion_doubling();
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
