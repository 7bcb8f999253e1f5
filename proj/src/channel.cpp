#include "mlqkd/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace mlqkd {

ChannelModel::ChannelModel(double eta_, double eps_) : eta(eta_), eps(eps_) {
  if (!(eta > 0.0) || eta > 1.0)
    throw std::invalid_argument("ChannelModel: eta must be in (0, 1]");
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("ChannelModel: eps must be in [0, 1]");
}

ObservedStats ObservedStats::from_x(const ProtocolParams& params, double x,
                                    double eta_d) {
  if (x < -1.0 || x > 1.0)
    throw std::invalid_argument("ObservedStats: X must be in [-1, 1]");
  if (eta_d < 0.0 || eta_d > 1.0)
    throw std::invalid_argument("ObservedStats: eta_d must be in [0, 1]");
  const double c2 = std::cos(params.theta()) * std::cos(params.theta());
  return ObservedStats{eta_d, x, (1.0 - x * c2) / params.M,
                       (1.0 - x) / (2.0 * params.M)};
}

ObservedStats honest_stats(const ProtocolParams& params, double mu,
                           const ChannelModel& channel) {
  if (mu < 0.0) throw std::invalid_argument("honest_stats: mu must be >= 0");
  const double arrived = mu * channel.eta;
  const double eta_d = arrived * std::exp(-arrived);
  return ObservedStats::from_x(params, 1.0 - channel.eps, eta_d);
}

double zeta(int K) {
  if (K < 1) throw std::invalid_argument("zeta: K must be >= 1");
  double factorial = 1.0;
  for (int i = 2; i <= K + 1; ++i) factorial *= i;
  return std::ldexp(1.0, -K) / factorial;
}

int max_k(int M, int L) {
  int best = 1;
  for (int k = 1; k <= M - 2; ++k) {
    if (2 * L * (k - 1) < M) best = k;
  }
  return best;
}

std::vector<double> loss_constraint_rhs(const AngularWeights& weights,
                                        double eta_d) {
  if (!(eta_d > 0.0))
    throw std::invalid_argument("loss_constraint_rhs: eta_d must be > 0");
  std::vector<double> rhs(weights.T.size());
  for (std::size_t k = 0; k < weights.T.size(); ++k)
    rhs[k] = std::min(2.0 * weights.T[k] / eta_d, 2.0);
  return rhs;
}

}  // namespace mlqkd
