#pragma once

#include <span>
#include <string>
#include <vector>

#include "mlqkd/protocol.hpp"

namespace mlqkd {

// Single-photon basis order is (|-1>_B, |1>_B); the virtual system uses
// (|0>_A, |2>_A, ..., |2(M-1)>_A); tensor products are A (x) B.

/// Virtual-system state with components M^(-1/2) exp(-2ik*theta).
ComplexVector xi_state_a(const ProtocolParams& params, double theta);

/// Single-photon state (e^{i theta}|-1> - e^{-i theta}|1>)/sqrt(2), i.e. the
/// linear polarization orthogonal to angle theta.
Eigen::Vector2cd xi_state_b(double theta);

/// Alice's POVM elements P(|xi_theta>_A)/2 at theta = a*Theta + pi*j/M,
/// indexed elements[a][j].  Sums to the identity on the M-dim space.
struct AlicePovm {
  std::vector<ComplexMatrix> elements[2];
};
AlicePovm alice_povm(const ProtocolParams& params);

/// Alice's x-basis prediction POVM
/// P(e^{i phi}|xi_{pi j/M}> - (-1)^a e^{-i phi}|xi_{Theta+pi j/M}>)/4.
/// For any phi, summing over a reproduces the direct POVM pair.
ComplexMatrix alice_x_povm(const ProtocolParams& params, int a, int j, double phi);

/// Bob's conclusive-outcome POVM element for analyzer setting j and bit b:
/// rank one, trace 1/M.
Matrix2c bob_povm(const ProtocolParams& params, int j, int b);

/// Filter from the photon space onto the virtual qubit D.  Satisfies
/// bob_povm(j, b) == F^dag |b_z><b_z| F.
Matrix2c filter_op(const ProtocolParams& params, int j);

/// Bob's x-basis measurement on the filtered qubit: F^dag |b_x><b_x| F.
Matrix2c bob_x_povm(const ProtocolParams& params, int j, int b);

enum class Observable { kConclusive, kBitError, kPhaseError };

/// Brute-force sum over analyzer settings j of the tensor-product operators
/// for the given event class, acting on the 2M-dim space A (x) B.
/// `phi` is the free phase of the x-basis prediction (phase-error class only).
ComplexMatrix build_observable(const ProtocolParams& params, Observable which,
                               double phi = 0.0);

/// Extract the M angular-momentum blocks and the worst off-block magnitude.
/// Throws std::invalid_argument unless R is 2M x 2M.
BlockDecomposition block_decompose(const ComplexMatrix& r, const ProtocolParams& params);

/// Closed-form block k of the given observable (phase-error blocks use
/// phi' = phi + Theta/2).
std::vector<Matrix2c> closed_form_blocks(const ProtocolParams& params,
                                         Observable which, double phi = 0.0);

/// Unitary representation of the discrete rotation by theta:
/// phase e^{2ik theta} on |2k>_A and e^{ik theta} on |k>_B (k = +-1).
ComplexMatrix rotation_unitary(const ProtocolParams& params, double theta);

struct ClosedFormEntry {
  std::string label;
  double deviation = 0.0;
  double leakage = 0.0;
};

struct ClosedFormReport {
  std::vector<ClosedFormEntry> entries;
  double max_deviation = 0.0;
  double max_leakage = 0.0;
  bool passed = false;
};

/// Compare brute-force operators against their closed-form blocks for the
/// three event classes and every phi sample.  `perturbation`, when nonzero,
/// is added to one matrix element first (detector sanity hook).
ClosedFormReport verify_closed_forms(const ProtocolParams& params,
                                     std::span<const double> phi_samples,
                                     double perturbation = 0.0);

struct IdentityEntry {
  std::string label;
  double deviation = 0.0;
  double tolerance = 0.0;
};

struct IdentityReport {
  std::vector<IdentityEntry> entries;
  bool passed = false;
};

/// The full operator identity suite for one protocol: POVM completeness and
/// positivity, the filter reconstruction, the announcement equivalence of the
/// two Alice measurements, discrete-rotation invariance, operator bounds, and
/// the closed-form block regression.
IdentityReport verify_operator_identities(const ProtocolParams& params,
                                          std::span<const double> phi_samples,
                                          double perturbation = 0.0);

}  // namespace mlqkd
