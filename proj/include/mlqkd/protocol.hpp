#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace mlqkd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Matrix2c = Eigen::Matrix2cd;

// Tolerance for identities that hold exactly in real arithmetic.
inline constexpr double kAlgebraTol = 1e-12;
// Tolerance for closed-form regressions, which accumulate rounding over
// the sum over analyzer settings.
inline constexpr double kClosedFormTol = 1e-10;

/// Protocol family indexed by (M, L): M linear-polarization angles pi*l/M,
/// bit values encoded at angular separation theta = pi*L/M.  (4,2) is BB84,
/// (4,1) is SARG04.  `double_even` enables the mirrored-detector key pool
/// available when M is even.
struct ProtocolParams {
  int M;
  int L;
  bool double_even = false;

  ProtocolParams(int m, int l, bool double_even_flag = false);

  /// Bit separation angle, always recomputed from (M, L).
  double theta() const { return std::numbers::pi * L / M; }
};

/// Result of projecting a 2M x 2M operator onto the M angular-momentum
/// qubit blocks.  Block k couples |2k>_A|1>_B with |2(k+1 mod M)>_A|-1>_B
/// (total angular momentum 2k+1 mod 2M).  `leakage` is the largest
/// magnitude found outside the block structure.
struct BlockDecomposition {
  std::vector<Matrix2c> blocks;
  double leakage = 0.0;
};

inline bool is_hermitian(const ComplexMatrix& m, double tol = kAlgebraTol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Smallest eigenvalue of a Hermitian matrix (for PSD checks).
double min_eigenvalue(const ComplexMatrix& m);

}  // namespace mlqkd
