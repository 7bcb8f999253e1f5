#include "mlqkd/source.hpp"

#include <cmath>
#include <stdexcept>

namespace mlqkd {

namespace {

// C(n, k) / 2^n.  Exact 64-bit integer arithmetic holds through n = 60
// (C(60,30) and the loop intermediates fit in uint64); beyond that the
// log-gamma route is accurate to well below the tolerances in play.
double binom_over_pow2(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n <= 60) {
    unsigned long long c = 1;
    const int kk = std::min(k, n - k);
    for (int i = 1; i <= kk; ++i) c = c * (n - kk + i) / i;
    return std::ldexp(static_cast<double>(c), -n);
  }
  const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(n - k + 1.0) - n * std::numbers::ln2;
  return std::exp(lg);
}

constexpr int kFockGuard = 8;

int fock_dim(int n_max) { return (n_max + 1) * (n_max + 2) / 2; }

// Two-mode Fock state (n_minus, n_plus), enumerated by total photon number.
int fock_index(int n_minus, int n_plus) {
  const int n = n_minus + n_plus;
  return n * (n + 1) / 2 + n_minus;
}

// rho_AC on the basis |2a>_A (x) |n_minus, n_plus>_C, optionally with one
// amplitude of the two-photon component shifted (test hook).
ComplexMatrix fock_density(const PhotonNumberDist& dist, int M, double perturbation) {
  const int n_max = dist.n_max();
  const int f = fock_dim(n_max);
  const int dim = M * f;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n <= n_max; ++n) {
    ComplexVector phi = ComplexVector::Zero(dim);
    for (int k = 0; k <= n; ++k) {
      const int a = k % M;
      phi(a * f + fock_index(k, n - k)) = std::sqrt(binom_over_pow2(n, k));
    }
    if (n == 2 && perturbation != 0.0) phi(0 * f + fock_index(0, 2)) += perturbation;
    rho += dist.weights[n] * (phi * phi.adjoint());
  }
  return rho;
}

}  // namespace

int default_n_max(double mu) {
  return std::max(20, static_cast<int>(std::ceil(10.0 * mu + 10.0)));
}

PhotonNumberDist poisson_dist(double mu, int n_max) {
  if (mu < 0.0) throw std::invalid_argument("poisson_dist: mu must be >= 0");
  if (n_max < 0) throw std::invalid_argument("poisson_dist: n_max must be >= 0");
  PhotonNumberDist dist;
  dist.weights.resize(n_max + 1);
  double w = std::exp(-mu);
  double total = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    dist.weights[n] = w;
    total += w;
    w *= mu / (n + 1);
  }
  dist.tail_mass = std::max(0.0, 1.0 - total);
  return dist;
}

AngularWeights angular_weights(const PhotonNumberDist& dist, int M) {
  if (M < 3) throw std::invalid_argument("angular_weights: M must be >= 3");
  AngularWeights out;
  out.T.assign(M, 0.0);
  for (int n = 0; n <= dist.n_max(); ++n) {
    const double mn = dist.weights[n];
    if (mn == 0.0) continue;
    for (int k = 0; k <= n; ++k) out.T[k % M] += mn * binom_over_pow2(n, k);
  }
  out.truncation_error_bound = dist.tail_mass;
  return out;
}

AngularWeights fock_oracle_weights(const PhotonNumberDist& dist, int M) {
  if (dist.n_max() > kFockGuard)
    throw std::invalid_argument("fock_oracle_weights: n_max must be <= 8");
  const int f = fock_dim(dist.n_max());
  const ComplexMatrix rho = fock_density(dist, M, 0.0);
  AngularWeights out;
  out.T.assign(M, 0.0);
  for (int a = 0; a < M; ++a)
    for (int i = 0; i < f; ++i) out.T[a] += rho(a * f + i, a * f + i).real();
  out.truncation_error_bound = dist.tail_mass;
  return out;
}

StateConsistencyReport verify_state_consistency(const ProtocolParams& params,
                                                const PhotonNumberDist& dist,
                                                double perturbation) {
  if (dist.n_max() > kFockGuard)
    throw std::invalid_argument("verify_state_consistency: n_max must be <= 8");
  const int m = params.M;
  const int n_max = dist.n_max();
  const int f = fock_dim(n_max);
  const ComplexMatrix rho = fock_density(dist, m, perturbation);

  StateConsistencyReport report;

  for (int l = 0; l < m; ++l) {
    const double theta = std::numbers::pi * l / m;

    // Projection onto |xi_theta>_A, scaled by M, against the emitted state.
    ComplexMatrix projected = ComplexMatrix::Zero(f, f);
    for (int a = 0; a < m; ++a) {
      const Complex wa = std::polar(1.0 / std::sqrt(static_cast<double>(m)), -2.0 * a * theta);
      for (int b = 0; b < m; ++b) {
        const Complex wb = std::polar(1.0 / std::sqrt(static_cast<double>(m)), -2.0 * b * theta);
        projected += std::conj(wa) * wb * rho.block(a * f, b * f, f, f);
      }
    }
    projected *= static_cast<double>(m);

    ComplexMatrix direct = ComplexMatrix::Zero(f, f);
    for (int n = 0; n <= n_max; ++n) {
      ComplexVector state = ComplexVector::Zero(f);
      for (int k = 0; k <= n; ++k) {
        state(fock_index(k, n - k)) =
            std::polar(std::sqrt(binom_over_pow2(n, k)), (2.0 * k - n) * theta);
      }
      direct += dist.weights[n] * (state * state.adjoint());
    }
    report.projection_deviation = std::max(report.projection_deviation,
                                           (projected - direct).cwiseAbs().maxCoeff());

    // Discrete rotation invariance: diagonal phase e^{2ia theta} on A and
    // e^{i(n_plus - n_minus) theta} on the Fock modes.
    ComplexVector phases(m * f);
    for (int a = 0; a < m; ++a) {
      for (int nm = 0; nm <= n_max; ++nm) {
        for (int np = 0; nm + np <= n_max; ++np) {
          phases(a * f + fock_index(nm, np)) =
              std::polar(1.0, 2.0 * a * theta + (np - nm) * theta);
        }
      }
    }
    double rot_dev = 0.0;
    for (int i = 0; i < m * f; ++i) {
      for (int j = 0; j < m * f; ++j) {
        const Complex rotated = phases(i) * rho(i, j) * std::conj(phases(j));
        rot_dev = std::max(rot_dev, std::abs(rotated - rho(i, j)));
      }
    }
    report.rotation_deviation = std::max(report.rotation_deviation, rot_dev);
  }

  const AngularWeights closed = angular_weights(dist, m);
  const AngularWeights oracle = fock_oracle_weights(dist, m);
  for (int k = 0; k < m; ++k)
    report.weight_deviation =
        std::max(report.weight_deviation, std::abs(closed.T[k] - oracle.T[k]));

  report.passed = report.projection_deviation <= 1e-10 &&
                  report.rotation_deviation <= 1e-10 &&
                  report.weight_deviation <= kAlgebraTol + dist.tail_mass;
  return report;
}

}  // namespace mlqkd
