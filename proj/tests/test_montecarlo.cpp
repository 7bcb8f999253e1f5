#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "mlqkd/montecarlo.hpp"

using namespace mlqkd;

namespace {

SimConfig config_41(double mu, double eta, double eps, std::uint64_t pulses,
                    std::uint64_t seed, bool doubling = false) {
  return SimConfig{ProtocolParams(4, 1, doubling), mu, ChannelModel(eta, eps),
                   pulses, seed};
}

double two_run_z(double p1, double se1, double p2, double se2) {
  const double se = std::sqrt(se1 * se1 + se2 * se2);
  return se > 0.0 ? (p1 - p2) / se : 0.0;
}

}  // namespace

TEST_CASE("simulation counts nest and frequencies are exact ratios") {
  const SimResult r = simulate(config_41(0.2, 0.2, 0.1, 200000, 7));
  CHECK(r.conclusive_errors <= r.conclusive);
  CHECK(r.conclusive <= r.detected);
  CHECK(r.detected <= r.pulses);
  CHECK(r.eta_d_hat == static_cast<double>(r.detected) / r.pulses);
  CHECK(r.r_con_hat == static_cast<double>(r.conclusive) / r.detected);
  CHECK(r.r_bit_hat == static_cast<double>(r.conclusive_errors) / r.detected);
  CHECK(r.seed == 7);
}

TEST_CASE("identical configs give bit-identical results") {
  const SimResult a = simulate(config_41(0.1, 0.1, 0.05, 300000, 123));
  const SimResult b = simulate(config_41(0.1, 0.1, 0.05, 300000, 123));
  CHECK(a.detected == b.detected);
  CHECK(a.conclusive == b.conclusive);
  CHECK(a.conclusive_errors == b.conclusive_errors);
}

TEST_CASE("thread count does not change the counts") {
  const SimConfig config = config_41(0.1, 0.1, 0.05, 400000, 99);
  const SimResult serial = simulate(config);
  setenv("MLQKD_THREADS", "4", 1);
  const SimResult parallel = simulate(config);
  unsetenv("MLQKD_THREADS");
  CHECK(serial.detected == parallel.detected);
  CHECK(serial.conclusive == parallel.conclusive);
  CHECK(serial.conclusive_errors == parallel.conclusive_errors);
}

TEST_CASE("noiseless runs never click the orthogonal port") {
  for (auto [m, l] : {std::pair{4, 1}, {5, 2}, {6, 1}}) {
    const SimConfig config{ProtocolParams(m, l), 0.3, ChannelModel(0.5, 0.0),
                           200000, 11};
    const SimResult r = simulate(config);
    CHECK(r.conclusive > 0);
    CHECK(r.conclusive_errors == 0);
  }
}

TEST_CASE("empirical frequencies match the analytic statistics") {
  const ProtocolParams params(4, 1);
  const SimConfig config = config_41(0.1, 0.1, 0.1, 2000000, 2024);
  const SimResult r = simulate(config);
  const ObservedStats analytic = honest_stats(params, 0.1, config.channel);
  const CompareReport rep = compare(r, analytic);
  CHECK_FALSE(rep.inconclusive);
  CHECK(rep.pass);
  // A wrong channel is flagged through the bit-error fraction.
  const ObservedStats wrong = honest_stats(params, 0.1, ChannelModel(0.1, 0.2));
  const CompareReport bad = compare(r, wrong);
  CHECK_FALSE(bad.pass);
  CHECK(std::abs(bad.z_r_bit) > 4.0);
}

TEST_CASE("tiny runs are inconclusive or trivially wide") {
  const SimResult r = simulate(config_41(1e-4, 1e-3, 0.0, 1000, 5));
  const ObservedStats analytic =
      honest_stats(ProtocolParams(4, 1), 1e-4, ChannelModel(1e-3, 0.0));
  const CompareReport rep = compare(r, analytic);
  if (r.detected == 0) {
    CHECK(rep.inconclusive);
  } else {
    CHECK(rep.pass);
  }
}

TEST_CASE("global angle offset leaves the statistics unchanged") {
  const SimConfig a = config_41(0.1, 0.1, 0.1, 2000000, 31);
  const SimConfig b = config_41(0.1, 0.1, 0.1, 2000000, 77);
  const SimResult ra = simulate(a, 0.0);
  const SimResult rb = simulate(b, std::numbers::pi / 4);  // theta_0 in Omega_4
  CHECK(std::abs(two_run_z(ra.eta_d_hat, ra.eta_d_se, rb.eta_d_hat, rb.eta_d_se)) <= 4.0);
  CHECK(std::abs(two_run_z(ra.r_con_hat, ra.r_con_se, rb.r_con_hat, rb.r_con_se)) <= 4.0);
  CHECK(std::abs(two_run_z(ra.r_bit_hat, ra.r_bit_se, rb.r_bit_hat, rb.r_bit_se)) <= 4.0);
}

TEST_CASE("mirrored pool matches the primary pool when doubling") {
  const SimResult r = simulate(config_41(0.1, 0.1, 0.0, 2000000, 13, true));
  CHECK(r.mirror_conclusive > 0);
  CHECK(r.mirror_errors == 0);
  const double n1 = static_cast<double>(r.conclusive);
  const double n2 = static_cast<double>(r.mirror_conclusive);
  CHECK(std::abs(n1 - n2) / std::sqrt(n1 + n2) <= 4.0);
}

TEST_CASE("event log has one row per pulse") {
  std::ostringstream log;
  const SimResult r = simulate(config_41(0.5, 0.5, 0.1, 500, 3), 0.0, &log);
  std::size_t rows = 0;
  std::string line;
  std::istringstream in(log.str());
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 500);
  CHECK(r.pulses == 500);
}
