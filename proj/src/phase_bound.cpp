#include "mlqkd/phase_bound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "mlqkd/simplex.hpp"
#include "golden.hpp"

namespace mlqkd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double subspace_phase(const ProtocolParams& params, double phi_prime, int k) {
  return 2.0 * (k * params.theta() + phi_prime);
}

double loss_weight(double x) { return 1.0 - std::sqrt(std::max(0.0, 1.0 - x * x)); }

}  // namespace

InnerLpResult phase_bound_inner_lp(const ProtocolParams& params, double phi_prime,
                                   const ObservedStats& stats,
                                   const std::vector<double>& loss_rhs,
                                   const std::vector<double>& x_assign) {
  const int m = params.M;
  std::vector<double> objective(m);
  std::vector<double> w(m);
  for (int k = 0; k < m; ++k) {
    objective[k] = f_phi(subspace_phase(params, phi_prime, k), params.theta(), x_assign[k]);
    w[k] = loss_weight(x_assign[k]);
  }
  std::vector<std::vector<double>> a_eq(2, std::vector<double>(m));
  for (int k = 0; k < m; ++k) {
    a_eq[0][k] = 1.0;
    a_eq[1][k] = x_assign[k];
  }
  std::vector<double> b_eq = {1.0, stats.X};
  std::vector<std::vector<double>> a_ub(m, std::vector<double>(m, 0.0));
  for (int k = 0; k < m; ++k) {
    a_ub[k][k] += w[k];
    a_ub[k][(k + m - 1) % m] += w[(k + m - 1) % m];
  }
  const LpResult lp = simplex_maximize(objective, a_eq, b_eq, a_ub, loss_rhs);
  return InnerLpResult{lp.feasible, lp.value, lp.x};
}

double finite_bound_objective(const ProtocolParams& params, double phi_prime,
                              const ObservedStats& stats,
                              const SubspaceAssignment& witness) {
  double sum = 0.0;
  for (int k = 0; k < params.M; ++k)
    sum += witness.p[k] *
           f_phi(subspace_phase(params, phi_prime, k), params.theta(), witness.X[k]);
  return stats.r_con / 2.0 + sum / (2.0 * params.M);
}

double finite_witness_violation(const ProtocolParams& params,
                                const ObservedStats& stats,
                                const std::vector<double>& loss_rhs,
                                const SubspaceAssignment& witness) {
  const int m = params.M;
  double viol = 0.0;
  double psum = 0.0, xsum = 0.0;
  for (int k = 0; k < m; ++k) {
    viol = std::max(viol, -witness.p[k]);
    viol = std::max(viol, std::abs(witness.X[k]) - 1.0);
    psum += witness.p[k];
    xsum += witness.p[k] * witness.X[k];
  }
  viol = std::max(viol, std::abs(psum - 1.0));
  viol = std::max(viol, std::abs(xsum - stats.X));
  for (int k = 0; k < m; ++k) {
    const int prev = (k + m - 1) % m;
    const double lhs = loss_weight(witness.X[k]) * witness.p[k] +
                       loss_weight(witness.X[prev]) * witness.p[prev];
    viol = std::max(viol, lhs - loss_rhs[k]);
  }
  return std::max(viol, 0.0);
}

namespace {

uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::vector<double>> ascent_seeds(const ProtocolParams& params,
                                              double x_obs) {
  const int m = params.M;
  const int k_order = max_k(params.M, params.L);
  std::vector<std::vector<double>> seeds;
  seeds.push_back(std::vector<double>(m, x_obs));
  seeds.push_back(std::vector<double>(m, 1.0));
  seeds.push_back(std::vector<double>(m, 0.0));
  // Structured: transparent good subspaces, a bad subspace at K, optionally
  // mass on the wraparound subspace M-1.
  for (double t : {1.0, 0.9, 0.5, 0.0, -0.5}) {
    std::vector<double> s(m, 0.0);
    for (int k = 0; k < std::min(k_order, m); ++k) s[k] = 1.0;
    if (k_order < m) s[k_order] = t;
    seeds.push_back(s);
    s[m - 1] = t;
    seeds.push_back(s);
  }
  // Coarse product grid for small M, deterministic sample otherwise.
  const double levels[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  double total = 1.0;
  for (int k = 0; k < m; ++k) total *= 5.0;
  if (total <= 20000.0) {
    std::vector<int> digit(m, 0);
    while (true) {
      std::vector<double> s(m);
      for (int k = 0; k < m; ++k) s[k] = levels[digit[k]];
      seeds.push_back(std::move(s));
      int pos = 0;
      while (pos < m && ++digit[pos] == 5) digit[pos++] = 0;
      if (pos == m) break;
    }
  } else {
    uint64_t rng_state = 0x12345678ULL;
    for (int i = 0; i < 4000; ++i) {
      std::vector<double> s(m);
      for (int k = 0; k < m; ++k) {
        const double u = (splitmix64(rng_state) >> 11) * 0x1.0p-53;
        s[k] = 2.0 * u - 1.0;
      }
      seeds.push_back(std::move(s));
    }
  }
  return seeds;
}

}  // namespace

PhaseErrorBound phase_error_bound_finite(const ProtocolParams& params,
                                         double phi_prime,
                                         const ObservedStats& stats,
                                         const AngularWeights& weights) {
  const int m = params.M;
  const std::vector<double> rhs = loss_constraint_rhs(weights, stats.eta_d);

  auto lp_value = [&](const std::vector<double>& xs) -> InnerLpResult {
    return phase_bound_inner_lp(params, phi_prime, stats, rhs, xs);
  };

  // Rank all seeds by inner-LP value, then polish the best few.
  const std::vector<std::vector<double>> seeds = ascent_seeds(params, stats.X);
  struct Ranked {
    double value;
    int index;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(seeds.size());
  for (int i = 0; i < static_cast<int>(seeds.size()); ++i) {
    const InnerLpResult lp = lp_value(seeds[i]);
    if (lp.feasible) ranked.push_back({lp.value, i});
  }
  if (ranked.empty())
    throw std::runtime_error(
        "phase_error_bound_finite: observed statistics admit no feasible "
        "subspace assignment");
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) { return a.value > b.value; });
  const int n_polish = std::min<int>(6, static_cast<int>(ranked.size()));

  double best_value = kNegInf;
  std::vector<double> best_x;
  for (int s = 0; s < n_polish; ++s) {
    std::vector<double> xs = seeds[ranked[s].index];
    double value = ranked[s].value;
    for (int sweep = 0; sweep < 40; ++sweep) {
      double improved = 0.0;
      for (int k = 0; k < m; ++k) {
        const double saved = xs[k];
        auto coord = [&](double x) {
          xs[k] = x;
          const InnerLpResult lp = lp_value(xs);
          return lp.feasible ? lp.value : kNegInf;
        };
        double cand_x = saved, cand_v = value;
        for (double x : {-1.0, 0.0, 1.0, stats.X, saved}) {
          const double v = coord(x);
          if (v > cand_v) {
            cand_v = v;
            cand_x = x;
          }
        }
        const auto [gx, gv] = detail::golden_max(coord, -1.0, 1.0, 60);
        if (gv > cand_v) {
          cand_v = gv;
          cand_x = gx;
        }
        xs[k] = cand_x;
        improved += std::max(0.0, cand_v - value);
        value = std::max(value, cand_v);
      }
      if (improved < 1e-9) break;
    }
    if (value > best_value) {
      best_value = value;
      best_x = xs;
    }
  }

  const InnerLpResult lp = lp_value(best_x);
  if (!lp.feasible)
    throw std::runtime_error("phase_error_bound_finite: lost feasibility");
  PhaseErrorBound bound;
  bound.witness.p = lp.p;
  bound.witness.X = best_x;
  bound.phi_prime = phi_prime;
  bound.method = BoundMethod::kFinite;
  bound.r_ph_bar = stats.r_con / 2.0 + lp.value / (2.0 * m);
  return bound;
}

AsymptoticWitness g_asymptotic(int K, double big_theta, double gamma, double eps) {
  if (gamma < 0.0) throw std::invalid_argument("g_asymptotic: gamma must be >= 0");
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("g_asymptotic: eps must be in [0, 1]");
  const ConcaveEnvelope env = good_envelope(K, big_theta);
  const double budget = zeta(K) * gamma;
  const double target = 1.0 - eps;
  auto f_bad = [&](double x) {
    return f_phi((K + 1) * big_theta, big_theta, std::clamp(x, -1.0, 1.0));
  };

  struct QValue {
    double value;
    double x_prime;
  };
  auto value_at_q = [&](double q) -> QValue {
    if (q >= 1.0 - 1e-15) {
      if (loss_weight(target) <= budget + 1e-15) return {f_bad(target), target};
      return {kNegInf, 0.0};
    }
    if (q <= 1e-15) return {env(target), 0.0};
    double xlo = std::max(-1.0, (target - (1.0 - q)) / q);
    double xhi = std::min(1.0, (target + (1.0 - q)) / q);
    if (budget < q) {
      const double b = budget / q;
      const double xmax = std::sqrt(std::max(0.0, 1.0 - (1.0 - b) * (1.0 - b)));
      xlo = std::max(xlo, -xmax);
      xhi = std::min(xhi, xmax);
    }
    if (xlo > xhi + 1e-15) return {kNegInf, 0.0};
    xhi = std::max(xhi, xlo);
    // For fixed q the objective is concave in X' (affine composition with a
    // concave envelope), so golden-section is exact here.
    auto slice = [&](double xp) {
      return q * f_bad(xp) + (1.0 - q) * env((target - q * xp) / (1.0 - q));
    };
    const auto [x, v] = detail::golden_max(slice, xlo, xhi, 70);
    return {v, x};
  };

  const int n_grid = 1000;
  double best = kNegInf, best_q = 0.0;
  for (int i = 0; i <= n_grid; ++i) {
    const double q = static_cast<double>(i) / n_grid;
    const QValue qv = value_at_q(q);
    if (qv.value > best) {
      best = qv.value;
      best_q = q;
    }
  }
  if (best == kNegInf)
    throw std::runtime_error("g_asymptotic: no feasible point");
  const double h = 2.0 / n_grid;
  const auto [qr, vr] = detail::golden_max(
      [&](double q) { return value_at_q(q).value; },
      std::max(0.0, best_q - h), std::min(1.0, best_q + h), 70);
  if (vr > best) {
    best = vr;
    best_q = qr;
  }

  AsymptoticWitness wit;
  wit.q = best_q;
  wit.x_prime = value_at_q(best_q).x_prime;
  wit.x_dprime =
      best_q < 1.0 - 1e-15 ? (target - best_q * wit.x_prime) / (1.0 - best_q) : 0.0;
  wit.g_value = best;
  return wit;
}

}  // namespace mlqkd
