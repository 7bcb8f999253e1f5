#include <doctest.h>

#include <cmath>

#include "mlqkd/channel.hpp"

using namespace mlqkd;

TEST_CASE("honest statistics") {
  const ProtocolParams params(4, 1);
  SUBCASE("noiseless channel") {
    const ObservedStats s = honest_stats(params, 0.1, ChannelModel(0.5, 0.0));
    CHECK(s.X == 1.0);
    CHECK(s.r_con == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(s.r_bit == 0.0);
  }
  SUBCASE("ten percent rotation probability") {
    const ObservedStats s = honest_stats(params, 0.1, ChannelModel(0.5, 0.1));
    CHECK(s.X == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(s.r_con == doctest::Approx(0.1375).epsilon(1e-13));
    CHECK(s.r_bit == doctest::Approx(0.0125).epsilon(1e-13));
  }
  SUBCASE("detection rate is the exact single-arrival probability") {
    const ObservedStats s = honest_stats(params, 0.1, ChannelModel(0.1, 0.0));
    CHECK(s.eta_d == doctest::Approx(0.01 * std::exp(-0.01)).epsilon(1e-14));
  }
  SUBCASE("linear relations are exact by construction") {
    const ObservedStats s = honest_stats(params, 0.2, ChannelModel(0.3, 0.07));
    CHECK(2 * params.M * s.r_bit == doctest::Approx(1.0 - s.X).epsilon(1e-14));
    const double c2 = std::cos(params.theta()) * std::cos(params.theta());
    CHECK(params.M * s.r_con == doctest::Approx(1.0 - s.X * c2).epsilon(1e-14));
    // X reconstructed through either fraction agrees.
    const double x_from_bit = 1.0 - 2 * params.M * s.r_bit;
    const double x_from_con = (1.0 - params.M * s.r_con) / c2;
    CHECK(std::abs(x_from_bit - x_from_con) < 1e-12);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(ChannelModel(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ChannelModel(0.5, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(honest_stats(params, -1.0, ChannelModel(0.5, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(ObservedStats::from_x(params, 1.5, 0.1),
                    std::invalid_argument);
  }
}

TEST_CASE("zeta constants") {
  CHECK(zeta(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(zeta(2) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK(zeta(3) == doctest::Approx(1.0 / 192.0).epsilon(1e-15));
  CHECK_THROWS_AS(zeta(0), std::invalid_argument);
}

TEST_CASE("largest admissible analysis order") {
  CHECK(max_k(4, 1) == 2);
  CHECK(max_k(5, 1) == 3);
  CHECK(max_k(6, 1) == 3);
  CHECK(max_k(8, 1) == 4);
  CHECK(max_k(4, 2) == 1);
  CHECK(max_k(8, 2) == 2);
  CHECK(max_k(3, 1) == 1);
}

TEST_CASE("loss constraint right-hand sides") {
  SUBCASE("clipped at two") {
    AngularWeights w;
    w.T = {0.999, 0.001, 0.0, 0.0};
    const std::vector<double> rhs = loss_constraint_rhs(w, 0.5);
    CHECK(rhs[0] == 2.0);
    CHECK(rhs[1] == doctest::Approx(0.004).epsilon(1e-13));
    CHECK_THROWS_AS(loss_constraint_rhs(w, 0.0), std::invalid_argument);
  }
  SUBCASE("scaling limit of the binding constraint") {
    // mu = (gamma eta)^(1/K): the k = K+1 budget approaches zeta_K gamma and
    // everything beyond K+1 vanishes.
    const int K = 2;
    const double gamma = 1.0, eta = 1e-6;
    const double mu = std::sqrt(gamma * eta);
    const AngularWeights w = angular_weights(poisson_dist(mu, 30), 4);
    const double eta_d = mu * eta * std::exp(-mu * eta);
    const std::vector<double> rhs = loss_constraint_rhs(w, eta_d);
    CHECK(rhs[K + 1] / (zeta(K) * gamma) == doctest::Approx(1.0).epsilon(0.01));

    const AngularWeights w6 = angular_weights(poisson_dist(mu, 40), 6);
    const std::vector<double> rhs6 = loss_constraint_rhs(w6, eta_d);
    CHECK(rhs6[K + 2] < 1e-3);
    CHECK(rhs6[K + 3] < 1e-6);
  }
}
