#pragma once

#include <vector>

namespace mlqkd {

/// The per-subspace phase-error weight
///   f_phi(x) = cos(phi) (cos^2 Theta - x) + (1/2) sin(2 Theta) |sin phi| sqrt(1-x^2).
/// Even in phi; concave in x on [-1, 1].  Throws if |x| > 1.
double f_phi(double phi, double big_theta, double x);

/// Phase offset -(K-1)*Theta/2, which centres the subspace phases
/// 2(k*Theta + phi') = (2k-K+1)*Theta symmetrically so the first K
/// subspaces all keep cos > 0.
double choose_phi_prime(int K, double big_theta);

/// Upper concave envelope of finitely many members a - b x + c sqrt(1-x^2)
/// (c >= 0) on [-1, 1].  Stored as an ordered list of segments, each either
/// an arc of one member or a common-tangent bridge line, so evaluation is
/// exact up to the bridge abscissae (located to ~1e-12).
class ConcaveEnvelope {
 public:
  struct Member {
    double a, b, c;
    double eval(double x) const;
  };

  struct Segment {
    double x0, x1;
    int member;      // -1 for a bridge line
    double line_a, line_b;  // bridge: y = line_a + line_b * x
  };

  static ConcaveEnvelope upper_hull(std::vector<Member> members);

  double operator()(double x) const;
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Member>& members() const { return members_; }

 private:
  std::vector<Member> members_;
  std::vector<Segment> segments_;
};

/// Envelope of the "good subspace" members f_{(K-1)Theta}, f_{(K-3)Theta},
/// ..., ending at f_Theta or f_0.  Requires cos((K-1)*Theta) > 0.
ConcaveEnvelope good_envelope(int K, double big_theta);

}  // namespace mlqkd
