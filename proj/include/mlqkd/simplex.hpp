#pragma once

#include <vector>

namespace mlqkd {

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<double> x;
};

/// Maximize c.x subject to a_eq x = b_eq, a_ub x <= b_ub, x >= 0.
/// Dense two-phase primal simplex with Bland's rule (lowest-index entering
/// column, lowest-index basic variable on ratio ties), so the pivot sequence
/// is deterministic and cycling-free.  Intended for the small problems this
/// library produces (tens of variables).
LpResult simplex_maximize(const std::vector<double>& c,
                          const std::vector<std::vector<double>>& a_eq,
                          const std::vector<double>& b_eq,
                          const std::vector<std::vector<double>>& a_ub,
                          const std::vector<double>& b_ub);

}  // namespace mlqkd
