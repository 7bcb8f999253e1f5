#pragma once

#include <cmath>
#include <utility>

namespace mlqkd::detail {

// Golden-section maximization on [a, b].  Works on the closed interval
// without derivatives, so square-root terms with infinite slope at the
// domain edge are handled by the explicit endpoint evaluations.
template <typename F>
std::pair<double, double> golden_max(F&& fn, double a, double b, int iters = 80) {
  const double inv_phi = 0.6180339887498949;
  if (!(b > a)) return {a, fn(a)};
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  double bx = c, bv = fc;
  if (fd > bv) {
    bx = d;
    bv = fd;
  }
  const double fa = fn(a), fb = fn(b);
  if (fa > bv) {
    bx = a;
    bv = fa;
  }
  if (fb > bv) {
    bx = b;
    bv = fb;
  }
  return {bx, bv};
}

}  // namespace mlqkd::detail
