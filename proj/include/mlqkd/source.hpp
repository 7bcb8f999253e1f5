#pragma once

#include <string>
#include <vector>

#include "mlqkd/protocol.hpp"

namespace mlqkd {

/// Truncated photon-number distribution.  weights[n] is the probability of
/// emitting n photons; tail_mass is whatever lies beyond the truncation.
struct PhotonNumberDist {
  std::vector<double> weights;
  double tail_mass = 0.0;

  int n_max() const { return static_cast<int>(weights.size()) - 1; }
};

/// Truncation that keeps the Poisson tail below 1e-12 for mu <= 5.
int default_n_max(double mu);

PhotonNumberDist poisson_dist(double mu, int n_max);

/// Diagonal weights of the source's virtual state on the angular-momentum
/// basis states |2k>_A, k = 0..M-1.
struct AngularWeights {
  std::vector<double> T;
  double truncation_error_bound = 0.0;
};

/// Closed-form weights T_k = sum_n mu_n 2^-n sum_{k' = k mod M} C(n, k').
AngularWeights angular_weights(const PhotonNumberDist& dist, int M);

/// Independent check: builds each n-photon virtual state explicitly in a
/// two-mode Fock space, assembles the density operator, and reads the
/// diagonal weights.  Guarded to n_max <= 8.
AngularWeights fock_oracle_weights(const PhotonNumberDist& dist, int M);

struct StateConsistencyReport {
  double projection_deviation = 0.0;  // M<xi|rho|xi> vs directly built rho(theta)
  double rotation_deviation = 0.0;    // U rho U^dag vs rho over the discrete angles
  double weight_deviation = 0.0;      // closed-form T_k vs Fock oracle
  bool passed = false;
  std::string detail;
};

/// Checks that the virtual-source construction reproduces the emitted states
/// and is invariant under the discrete rotations.  `perturbation`, when
/// nonzero, corrupts one amplitude of the two-photon component first.
StateConsistencyReport verify_state_consistency(const ProtocolParams& params,
                                                const PhotonNumberDist& dist,
                                                double perturbation = 0.0);

}  // namespace mlqkd
