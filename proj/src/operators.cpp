#include "mlqkd/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace mlqkd {

ProtocolParams::ProtocolParams(int m, int l, bool double_even_flag)
    : M(m), L(l), double_even(double_even_flag) {
  if (M < 3) throw std::invalid_argument("ProtocolParams: M must be >= 3");
  if (L < 1 || 2 * L > M)
    throw std::invalid_argument("ProtocolParams: need 1 <= L and 2L <= M");
  if (double_even && M % 2 != 0)
    throw std::invalid_argument("ProtocolParams: doubling requires even M");
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

ComplexVector xi_state_a(const ProtocolParams& params, double theta) {
  const int m = params.M;
  ComplexVector v(m);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  for (int k = 0; k < m; ++k) {
    v(k) = std::polar(norm, -2.0 * k * theta);
  }
  return v;
}

Eigen::Vector2cd xi_state_b(double theta) {
  Eigen::Vector2cd v;
  v(0) = std::polar(1.0, theta);    // |-1>
  v(1) = -std::polar(1.0, -theta);  // |1>
  return v / std::sqrt(2.0);
}

namespace {

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

double analyzer_angle(const ProtocolParams& params, int j) {
  return std::numbers::pi * j / params.M;
}

}  // namespace

AlicePovm alice_povm(const ProtocolParams& params) {
  AlicePovm povm;
  const double big_theta = params.theta();
  for (int a = 0; a < 2; ++a) {
    povm.elements[a].reserve(params.M);
    for (int j = 0; j < params.M; ++j) {
      const double theta = a * big_theta + analyzer_angle(params, j);
      povm.elements[a].push_back(projector(xi_state_a(params, theta)) / 2.0);
    }
  }
  return povm;
}

ComplexMatrix alice_x_povm(const ProtocolParams& params, int a, int j, double phi) {
  const double big_theta = params.theta();
  const Complex ep = std::polar(1.0, phi);
  const Complex em = std::polar(1.0, -phi);
  const double sign = (a == 0) ? -1.0 : 1.0;
  ComplexVector v = ep * xi_state_a(params, analyzer_angle(params, j)) +
                    sign * em * xi_state_a(params, big_theta + analyzer_angle(params, j));
  return projector(v) / 4.0;
}

Matrix2c bob_povm(const ProtocolParams& params, int j, int b) {
  if (j < 0 || j >= params.M) throw std::invalid_argument("bob_povm: bad j");
  const double base = analyzer_angle(params, j);
  const double theta = (b == 0) ? params.theta() + base : base;
  const Eigen::Vector2cd v = xi_state_b(theta);
  return (v * v.adjoint()) / static_cast<double>(params.M);
}

Matrix2c filter_op(const ProtocolParams& params, int j) {
  if (j < 0 || j >= params.M) throw std::invalid_argument("filter_op: bad j");
  const double big_theta = params.theta();
  const double base = analyzer_angle(params, j);
  const double s = std::sqrt(2.0 / params.M);
  Eigen::Vector2cd x0, x1;  // z-basis coordinates of |0_x>, |1_x>
  x0 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  x1 << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const Eigen::Vector2cd bra1 = xi_state_b((big_theta + std::numbers::pi) / 2.0 + base);
  const Eigen::Vector2cd bra0 = xi_state_b(big_theta / 2.0 + base);
  return s * (std::sin(big_theta / 2.0) * x1 * bra1.adjoint() +
              std::cos(big_theta / 2.0) * x0 * bra0.adjoint());
}

Matrix2c bob_x_povm(const ProtocolParams& params, int j, int b) {
  const Matrix2c f = filter_op(params, j);
  Eigen::Vector2cd bx;
  bx << 1.0 / std::sqrt(2.0), (b == 0 ? 1.0 : -1.0) / std::sqrt(2.0);
  return f.adjoint() * (bx * bx.adjoint()) * f;
}

namespace {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

ComplexMatrix build_observable(const ProtocolParams& params, Observable which,
                               double phi) {
  const int m = params.M;
  ComplexMatrix r = ComplexMatrix::Zero(2 * m, 2 * m);
  const AlicePovm a = alice_povm(params);
  for (int j = 0; j < m; ++j) {
    switch (which) {
      case Observable::kConclusive:
        r += kron(a.elements[0][j] + a.elements[1][j],
                  bob_povm(params, j, 0) + bob_povm(params, j, 1));
        break;
      case Observable::kBitError:
        r += kron(a.elements[0][j], bob_povm(params, j, 1)) +
             kron(a.elements[1][j], bob_povm(params, j, 0));
        break;
      case Observable::kPhaseError:
        r += kron(alice_x_povm(params, 0, j, phi), bob_x_povm(params, j, 1)) +
             kron(alice_x_povm(params, 1, j, phi), bob_x_povm(params, j, 0));
        break;
    }
  }
  return r;
}

namespace {

// Composite index of |2k>_A |b>_B with B basis order (|-1>, |1>).
inline int idx(int k, int b_is_plus) { return 2 * k + b_is_plus; }

}  // namespace

BlockDecomposition block_decompose(const ComplexMatrix& r, const ProtocolParams& params) {
  const int m = params.M;
  if (r.rows() != 2 * m || r.cols() != 2 * m)
    throw std::invalid_argument("block_decompose: operator must be 2M x 2M");
  BlockDecomposition out;
  out.blocks.reserve(m);
  std::vector<std::vector<bool>> covered(2 * m, std::vector<bool>(2 * m, false));
  for (int k = 0; k < m; ++k) {
    const int i0 = idx(k, 1);              // |2k>_A |1>_B
    const int i1 = idx((k + 1) % m, 0);    // |2(k+1)>_A |-1>_B
    Matrix2c blk;
    blk << r(i0, i0), r(i0, i1), r(i1, i0), r(i1, i1);
    out.blocks.push_back(blk);
    covered[i0][i0] = covered[i0][i1] = covered[i1][i0] = covered[i1][i1] = true;
  }
  for (int i = 0; i < 2 * m; ++i)
    for (int j = 0; j < 2 * m; ++j)
      if (!covered[i][j]) out.leakage = std::max(out.leakage, std::abs(r(i, j)));
  return out;
}

std::vector<Matrix2c> closed_form_blocks(const ProtocolParams& params,
                                         Observable which, double phi) {
  const int m = params.M;
  const double big_theta = params.theta();
  const double c2 = std::cos(big_theta) * std::cos(big_theta);
  Matrix2c eye = Matrix2c::Identity();
  Matrix2c pauli_x, pauli_z;
  pauli_x << 0, 1, 1, 0;
  pauli_z << 1, 0, 0, -1;

  std::vector<Matrix2c> blocks;
  blocks.reserve(m);
  for (int k = 0; k < m; ++k) {
    switch (which) {
      case Observable::kConclusive:
        blocks.push_back((eye - c2 * pauli_x) / m);
        break;
      case Observable::kBitError:
        blocks.push_back((eye - pauli_x) / (2.0 * m));
        break;
      case Observable::kPhaseError: {
        const double phi_p = phi + big_theta / 2.0;
        const double arg = 2.0 * (k * big_theta + phi_p);
        Matrix2c blk = (std::cos(arg) * (c2 * eye - pauli_x) +
                        0.5 * std::sin(2.0 * big_theta) * std::sin(arg) * pauli_z) /
                       (2.0 * m);
        blk += (eye - c2 * pauli_x) / (2.0 * m);
        blocks.push_back(blk);
        break;
      }
    }
  }
  return blocks;
}

ComplexMatrix rotation_unitary(const ProtocolParams& params, double theta) {
  const int m = params.M;
  ComplexMatrix u = ComplexMatrix::Zero(2 * m, 2 * m);
  for (int k = 0; k < m; ++k) {
    u(idx(k, 0), idx(k, 0)) = std::polar(1.0, 2.0 * k * theta - theta);
    u(idx(k, 1), idx(k, 1)) = std::polar(1.0, 2.0 * k * theta + theta);
  }
  return u;
}

ClosedFormReport verify_closed_forms(const ProtocolParams& params,
                                     std::span<const double> phi_samples,
                                     double perturbation) {
  ClosedFormReport report;
  auto run = [&](Observable which, double phi, const std::string& label) {
    ComplexMatrix r = build_observable(params, which, phi);
    if (perturbation != 0.0) r(0, 0) += perturbation;
    const BlockDecomposition dec = block_decompose(r, params);
    const std::vector<Matrix2c> expected = closed_form_blocks(params, which, phi);
    double dev = 0.0;
    for (int k = 0; k < params.M; ++k)
      dev = std::max(dev, (dec.blocks[k] - expected[k]).cwiseAbs().maxCoeff());
    report.entries.push_back({label, dev, dec.leakage});
    report.max_deviation = std::max(report.max_deviation, dev);
    report.max_leakage = std::max(report.max_leakage, dec.leakage);
  };
  run(Observable::kConclusive, 0.0, "conclusive");
  run(Observable::kBitError, 0.0, "bit-error");
  for (double phi : phi_samples)
    run(Observable::kPhaseError, phi, "phase-error phi=" + std::to_string(phi));
  report.passed =
      report.max_deviation <= kClosedFormTol && report.max_leakage <= kAlgebraTol;
  return report;
}

IdentityReport verify_operator_identities(const ProtocolParams& params,
                                          std::span<const double> phi_samples,
                                          double perturbation) {
  const int m = params.M;
  IdentityReport report;
  auto add = [&](const std::string& label, double dev, double tol) {
    report.entries.push_back({label, dev, tol});
  };

  const AlicePovm a = alice_povm(params);
  ComplexMatrix sum = ComplexMatrix::Zero(m, m);
  double psd_dev = 0.0;
  for (int aa = 0; aa < 2; ++aa) {
    for (int j = 0; j < m; ++j) {
      sum += a.elements[aa][j];
      psd_dev = std::max(psd_dev, -min_eigenvalue(a.elements[aa][j]));
    }
  }
  add("alice povm completeness",
      (sum - ComplexMatrix::Identity(m, m)).cwiseAbs().maxCoeff(), kAlgebraTol);
  add("alice povm positivity", std::max(psd_dev, 0.0), kAlgebraTol);

  double bob_rem = 0.0, filter_dev = 0.0;
  for (int j = 0; j < m; ++j) {
    const Matrix2c rem =
        Matrix2c::Identity() - bob_povm(params, j, 0) - bob_povm(params, j, 1);
    bob_rem = std::max(bob_rem, -min_eigenvalue(rem));
    const Matrix2c f = filter_op(params, j);
    for (int b = 0; b < 2; ++b) {
      Eigen::Vector2cd bz = Eigen::Vector2cd::Zero();
      bz(b) = 1.0;
      const Matrix2c rebuilt = f.adjoint() * (bz * bz.adjoint()) * f;
      filter_dev = std::max(
          filter_dev, (rebuilt - bob_povm(params, j, b)).cwiseAbs().maxCoeff());
    }
  }
  add("bob inconclusive remainder psd", std::max(bob_rem, 0.0), kAlgebraTol);
  add("filter reconstruction", filter_dev, kAlgebraTol);

  double announce_dev = 0.0;
  for (double phi : phi_samples) {
    for (int j = 0; j < m; ++j) {
      const ComplexMatrix direct = a.elements[0][j] + a.elements[1][j];
      const ComplexMatrix alt =
          alice_x_povm(params, 0, j, phi) + alice_x_povm(params, 1, j, phi);
      announce_dev = std::max(announce_dev, (direct - alt).cwiseAbs().maxCoeff());
    }
  }
  add("announcement equivalence", announce_dev, kAlgebraTol);

  double rot_dev = 0.0, bound_dev = 0.0;
  const double phi0 = phi_samples.empty() ? 0.3 : phi_samples.front();
  for (Observable which :
       {Observable::kConclusive, Observable::kBitError, Observable::kPhaseError}) {
    const ComplexMatrix r = build_observable(params, which, phi0);
    for (int ll = 0; ll < m; ++ll) {
      const ComplexMatrix u =
          rotation_unitary(params, std::numbers::pi * ll / m);
      rot_dev = std::max(rot_dev, (u * r - r * u).cwiseAbs().maxCoeff());
    }
    bound_dev = std::max(bound_dev, -min_eigenvalue(r));
    bound_dev = std::max(
        bound_dev, -min_eigenvalue(ComplexMatrix::Identity(2 * m, 2 * m) - r));
  }
  add("rotation invariance", rot_dev, kAlgebraTol);
  add("operator bounds 0 <= R <= 1", std::max(bound_dev, 0.0), kAlgebraTol);

  const ClosedFormReport closed =
      verify_closed_forms(params, phi_samples, perturbation);
  add("closed-form blocks", closed.max_deviation, kClosedFormTol);
  add("block leakage", closed.max_leakage, kAlgebraTol);

  report.passed = true;
  for (const IdentityEntry& e : report.entries)
    if (e.deviation > e.tolerance) report.passed = false;
  return report;
}

}  // namespace mlqkd
