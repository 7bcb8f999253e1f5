#include "mlqkd/simplex.hpp"

#include <cmath>
#include <stdexcept>

namespace mlqkd {

namespace {

constexpr double kPivotEps = 1e-11;

// Dense tableau: `rows` constraint rows plus one objective row, columns
// 0..cols-1 plus the rhs column.
struct Tableau {
  int rows;
  int cols;
  std::vector<double> t;  // (rows + 1) * (cols + 1)
  std::vector<int> basis;

  double& at(int r, int c) { return t[r * (cols + 1) + c]; }
  double at(int r, int c) const { return t[r * (cols + 1) + c]; }
  double& rhs(int r) { return t[r * (cols + 1) + cols]; }
  double rhs(int r) const { return t[r * (cols + 1) + cols]; }

  void pivot(int pr, int pc) {
    const double pv = at(pr, pc);
    for (int c = 0; c <= cols; ++c) at(pr, c) /= pv;
    for (int r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double factor = at(r, pc);
      if (factor == 0.0) continue;
      for (int c = 0; c <= cols; ++c) at(r, c) -= factor * at(pr, c);
    }
    basis[pr] = pc;
  }

  // Bland's rule on the columns [0, limit).  Returns false once no reduced
  // cost is positive (objective row holds c_j - z_j for maximization).
  bool bland_step(int limit) {
    int enter = -1;
    for (int c = 0; c < limit; ++c) {
      if (at(rows, c) > kPivotEps) {
        enter = c;
        break;
      }
    }
    if (enter < 0) return false;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < rows; ++r) {
      const double a = at(r, enter);
      if (a <= kPivotEps) continue;
      const double ratio = rhs(r) / a;
      if (leave < 0 || ratio < best_ratio - kPivotEps ||
          (ratio < best_ratio + kPivotEps && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) throw std::runtime_error("simplex: unbounded program");
    pivot(leave, enter);
    return true;
  }
};

}  // namespace

LpResult simplex_maximize(const std::vector<double>& c,
                          const std::vector<std::vector<double>>& a_eq,
                          const std::vector<double>& b_eq,
                          const std::vector<std::vector<double>>& a_ub,
                          const std::vector<double>& b_ub) {
  const int n = static_cast<int>(c.size());
  const int m_eq = static_cast<int>(a_eq.size());
  const int m_ub = static_cast<int>(a_ub.size());
  const int m = m_eq + m_ub;
  const int n_slack = m_ub;
  const int n_struct = n + n_slack;

  Tableau tab;
  tab.rows = m;
  tab.cols = n_struct + m;  // one artificial per row
  tab.t.assign((m + 1) * (tab.cols + 1), 0.0);
  tab.basis.assign(m, -1);

  for (int r = 0; r < m; ++r) {
    const bool is_eq = r < m_eq;
    const std::vector<double>& row = is_eq ? a_eq[r] : a_ub[r - m_eq];
    const double b = is_eq ? b_eq[r] : b_ub[r - m_eq];
    const double sign = (b < 0.0) ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tab.at(r, j) = sign * row[j];
    if (!is_eq) tab.at(r, n + (r - m_eq)) = sign;
    tab.at(r, n_struct + r) = 1.0;
    tab.rhs(r) = sign * b;
    tab.basis[r] = n_struct + r;
  }

  // Phase 1: maximize -(sum of artificials); seed the objective row so the
  // reduced costs of the basic artificials are zero.
  for (int r = 0; r < m; ++r)
    for (int jc = 0; jc <= tab.cols; ++jc) tab.at(m, jc) += tab.at(r, jc);
  for (int r = 0; r < m; ++r) tab.at(m, n_struct + r) = 0.0;

  while (tab.bland_step(n_struct)) {
  }
  if (tab.rhs(m) > 1e-8) return LpResult{false, 0.0, {}};

  // Drive any remaining artificials out of the basis; rows that cannot be
  // pivoted are redundant and stay harmlessly at level zero.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n_struct) continue;
    for (int jc = 0; jc < n_struct; ++jc) {
      if (std::abs(tab.at(r, jc)) > kPivotEps) {
        tab.pivot(r, jc);
        break;
      }
    }
  }

  // Phase 2 objective: reduced costs of c over the current basis.
  for (int jc = 0; jc <= tab.cols; ++jc) tab.at(m, jc) = 0.0;
  for (int j = 0; j < n; ++j) tab.at(m, j) = c[j];
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] >= n || tab.basis[r] < 0) continue;
    const double cb = c[tab.basis[r]];
    if (cb == 0.0) continue;
    for (int jc = 0; jc <= tab.cols; ++jc) tab.at(m, jc) -= cb * tab.at(r, jc);
  }
  // Artificials must never re-enter.
  while (tab.bland_step(n_struct)) {
  }

  LpResult result;
  result.feasible = true;
  result.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] >= 0 && tab.basis[r] < n) result.x[tab.basis[r]] = tab.rhs(r);
  }
  result.value = 0.0;
  for (int j = 0; j < n; ++j) result.value += c[j] * result.x[j];
  return result;
}

}  // namespace mlqkd
