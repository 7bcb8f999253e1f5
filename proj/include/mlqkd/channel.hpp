#pragma once

#include <vector>

#include "mlqkd/protocol.hpp"
#include "mlqkd/source.hpp"

namespace mlqkd {

/// Honest channel: transmission eta, plus a random polarization rotation
/// applied with probability eps.
struct ChannelModel {
  double eta;
  double eps;

  ChannelModel(double eta_, double eps_);
};

/// Observable statistics of a run.  eta_d is per pulse; r_con and r_bit are
/// fractions per detected event.  X is the average transverse observable over
/// the angular-momentum subspaces; the three fractions are tied together by
///   2*M*r_bit = 1 - X,   M*r_con = 1 - X cos^2(Theta).
struct ObservedStats {
  double eta_d;
  double X;
  double r_con;
  double r_bit;

  /// Build from an X value so the linear relations hold exactly.
  static ObservedStats from_x(const ProtocolParams& params, double x, double eta_d);
};

/// Statistics of the honest channel with a Poisson source of intensity mu:
/// X = 1 - eps and eta_d is the exact single-arrival probability
/// mu*eta*exp(-mu*eta).
ObservedStats honest_stats(const ProtocolParams& params, double mu,
                           const ChannelModel& channel);

/// zeta_K = 1 / (2^K (K+1)!), the limiting per-subspace loss budget when the
/// source intensity scales as (gamma*eta)^(1/K).
double zeta(int K);

/// Largest K >= 1 with K <= M-2 and 2L(K-1) < M, i.e. cos((K-1)*Theta) > 0.
int max_k(int M, int L);

/// Right-hand sides R_k = min(2*T_k/eta_d, 2) of the per-subspace loss
/// constraints.  Throws on eta_d <= 0.
std::vector<double> loss_constraint_rhs(const AngularWeights& weights, double eta_d);

}  // namespace mlqkd
