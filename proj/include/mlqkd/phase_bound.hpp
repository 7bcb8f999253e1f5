#pragma once

#include <vector>

#include "mlqkd/channel.hpp"
#include "mlqkd/envelope.hpp"
#include "mlqkd/protocol.hpp"

namespace mlqkd {

/// Adversarial decomposition over the M angular-momentum subspaces:
/// weights p_k (nonnegative, summing to one) and per-subspace transverse
/// expectations X_k in [-1, 1].
struct SubspaceAssignment {
  std::vector<double> p;
  std::vector<double> X;
};

enum class BoundMethod { kFinite, kAsymptotic };

struct PhaseErrorBound {
  double r_ph_bar = 0.0;
  SubspaceAssignment witness;
  double phi_prime = 0.0;
  BoundMethod method = BoundMethod::kFinite;
};

/// Witness of the scaling-limit maximization: the bad-subspace weight q and
/// mean X', the good-subspace mean X'', and the achieved objective value.
struct AsymptoticWitness {
  double q = 0.0;
  double x_prime = 0.0;
  double x_dprime = 0.0;
  double g_value = 0.0;
};

struct InnerLpResult {
  bool feasible = false;
  double value = 0.0;  // sum_k p_k f_{2(k Theta + phi')}(X_k)
  std::vector<double> p;
};

/// Exact linear program over the subspace weights for a fixed assignment of
/// {X_k}: maximize the phase-error objective subject to normalization, the
/// observed X, and the per-subspace loss constraints.
InnerLpResult phase_bound_inner_lp(const ProtocolParams& params, double phi_prime,
                                   const ObservedStats& stats,
                                   const std::vector<double>& loss_rhs,
                                   const std::vector<double>& x_assign);

/// Maximized phase-error fraction r_con/2 + (1/2M) sum_k p_k f(X_k) under
/// the loss constraints.  Outer maximization over {X_k} is multi-start
/// coordinate ascent (golden-section per coordinate, boundary candidates
/// evaluated explicitly) over an exact inner LP; the result is a certified
/// lower bound on the true maximum.  Throws std::runtime_error if no
/// assignment is feasible (inconsistent observed statistics).
PhaseErrorBound phase_error_bound_finite(const ProtocolParams& params,
                                         double phi_prime,
                                         const ObservedStats& stats,
                                         const AngularWeights& weights);

/// Recompute the objective of a finite witness; used to validate results.
double finite_bound_objective(const ProtocolParams& params, double phi_prime,
                              const ObservedStats& stats,
                              const SubspaceAssignment& witness);

/// Worst constraint violation of a finite witness (0 when feasible).
double finite_witness_violation(const ProtocolParams& params,
                                const ObservedStats& stats,
                                const std::vector<double>& loss_rhs,
                                const SubspaceAssignment& witness);

/// Scaling-limit maximization: maximize q f_{(K+1)Theta}(X') + (1-q) f(X'')
/// over q in [0,1], X' in [-1,1], X'' = (1-eps-qX')/(1-q), subject to
/// q(1 - sqrt(1-X'^2)) <= zeta_K * gamma, where f is the good-subspace
/// concave envelope.  Grid over q with an exact concave maximization in X'
/// per q, then local refinement.
AsymptoticWitness g_asymptotic(int K, double big_theta, double gamma, double eps);

}  // namespace mlqkd
