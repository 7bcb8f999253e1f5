#include "mlqkd/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mlqkd {

double f_phi(double phi, double big_theta, double x) {
  if (std::abs(x) > 1.0 + 1e-12)
    throw std::invalid_argument("f_phi: x must be in [-1, 1]");
  x = std::clamp(x, -1.0, 1.0);
  const double c = std::cos(big_theta);
  return std::cos(phi) * (c * c - x) +
         0.5 * std::sin(2.0 * big_theta) * std::abs(std::sin(phi)) *
             std::sqrt(std::max(0.0, 1.0 - x * x));
}

double choose_phi_prime(int K, double big_theta) {
  if (K < 1) throw std::invalid_argument("choose_phi_prime: K must be >= 1");
  return -(K - 1) * big_theta / 2.0;
}

double ConcaveEnvelope::Member::eval(double x) const {
  return a - b * x + c * std::sqrt(std::max(0.0, 1.0 - x * x));
}

namespace {

// Support value s(t) = max_x [member(x) - t x] over [-1, 1] and the abscissa
// where it is attained.  For c > 0 the maximizer is interior; for c = 0 it
// sits at an endpoint.
double support(const ConcaveEnvelope::Member& m, double t) {
  return m.a + std::hypot(m.b + t, m.c);
}

double touch_point(const ConcaveEnvelope::Member& m, double t) {
  const double u = m.b + t;
  if (m.c == 0.0) return u > 0.0 ? -1.0 : (u < 0.0 ? 1.0 : 0.0);
  return -u / std::hypot(u, m.c);
}

int argmax_support(const std::vector<ConcaveEnvelope::Member>& mem, double t) {
  int best = 0;
  double bv = support(mem[0], t);
  for (int i = 1; i < static_cast<int>(mem.size()); ++i) {
    const double v = support(mem[i], t);
    if (v > bv + 1e-15) {
      bv = v;
      best = i;
    }
  }
  return best;
}

}  // namespace

ConcaveEnvelope ConcaveEnvelope::upper_hull(std::vector<Member> members) {
  if (members.empty())
    throw std::invalid_argument("ConcaveEnvelope: need at least one member");
  ConcaveEnvelope env;
  for (const Member& m : members) {
    const bool dup = std::any_of(env.members_.begin(), env.members_.end(), [&](const Member& o) {
      return std::abs(m.a - o.a) < 1e-15 && std::abs(m.b - o.b) < 1e-15 &&
             std::abs(m.c - o.c) < 1e-15;
    });
    if (!dup) env.members_.push_back(m);
  }
  const std::vector<Member>& mem = env.members_;
  if (mem.size() == 1) {
    env.segments_.push_back({-1.0, 1.0, 0, 0.0, 0.0});
    return env;
  }

  // Sweep the supporting-line slope from +inf to -inf (touch point sweeps
  // x from -1 to +1); record the slope intervals on which each member is
  // the one touched.
  const double t_cap = 1e8;
  const int n_sweep = 20001;
  const double psi_hi = std::atan(t_cap);
  struct Interval {
    double t_hi, t_lo;
    int member;
  };
  std::vector<Interval> intervals;
  double t_prev = std::tan(psi_hi);
  int cur = argmax_support(mem, t_prev);
  double seg_t_hi = t_prev;
  for (int i = 1; i < n_sweep; ++i) {
    const double psi = psi_hi - 2.0 * psi_hi * i / (n_sweep - 1);
    const double t = std::tan(psi);
    const int a = argmax_support(mem, t);
    if (a != cur) {
      double lo = t, hi = t_prev;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (argmax_support(mem, mid) == cur)
          hi = mid;
        else
          lo = mid;
      }
      const double t_cross = 0.5 * (lo + hi);
      intervals.push_back({seg_t_hi, t_cross, cur});
      seg_t_hi = t_cross;
      cur = a;
    }
    t_prev = t;
  }
  intervals.push_back({seg_t_hi, -t_cap, cur});

  // Turn slope intervals into x-space arcs; consecutive arcs are joined by
  // their common tangent at the crossing slope.
  double x_cursor = -1.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const Interval& iv = intervals[i];
    double x_from = (i == 0) ? -1.0 : touch_point(mem[iv.member], iv.t_hi);
    double x_to = (i + 1 == intervals.size()) ? 1.0 : touch_point(mem[iv.member], iv.t_lo);
    x_from = std::clamp(x_from, -1.0, 1.0);
    x_to = std::clamp(x_to, -1.0, 1.0);
    if (i > 0 && x_from > x_cursor + 1e-14) {
      // Bridge with slope t_hi, anchored at the incoming tangent point.
      const double y = mem[iv.member].eval(x_from);
      env.segments_.push_back({x_cursor, x_from, -1, y - iv.t_hi * x_from, iv.t_hi});
      x_cursor = x_from;
    }
    if (x_to > x_cursor + 1e-14 || i + 1 == intervals.size()) {
      env.segments_.push_back({x_cursor, std::max(x_to, x_cursor), iv.member, 0.0, 0.0});
      x_cursor = std::max(x_to, x_cursor);
    }
  }
  env.segments_.front().x0 = -1.0;
  env.segments_.back().x1 = 1.0;
  return env;
}

double ConcaveEnvelope::operator()(double x) const {
  x = std::clamp(x, -1.0, 1.0);
  // segments_ is ordered; find the first segment whose right end covers x.
  int lo = 0, hi = static_cast<int>(segments_.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (segments_[mid].x1 < x)
      lo = mid + 1;
    else
      hi = mid;
  }
  const Segment& s = segments_[lo];
  if (s.member >= 0) return members_[s.member].eval(x);
  return s.line_a + s.line_b * x;
}

ConcaveEnvelope good_envelope(int K, double big_theta) {
  if (K < 1) throw std::invalid_argument("good_envelope: K must be >= 1");
  if (!(std::cos((K - 1) * big_theta) > 0.0))
    throw std::invalid_argument("good_envelope: need cos((K-1)*Theta) > 0");
  const double c = std::cos(big_theta);
  std::vector<ConcaveEnvelope::Member> members;
  for (int m = K - 1; m >= 0; m -= 2) {
    const double phi = m * big_theta;
    members.push_back({std::cos(phi) * c * c, std::cos(phi),
                       0.5 * std::sin(2.0 * big_theta) * std::abs(std::sin(phi))});
  }
  return ConcaveEnvelope::upper_hull(std::move(members));
}

}  // namespace mlqkd
