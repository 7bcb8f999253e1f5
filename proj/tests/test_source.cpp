#include <doctest.h>

#include <cmath>

#include "mlqkd/source.hpp"

using namespace mlqkd;

TEST_CASE("poisson distribution") {
  SUBCASE("vacuum") {
    const PhotonNumberDist d = poisson_dist(0.0, 3);
    CHECK(d.weights[0] == 1.0);
    CHECK(d.weights[1] == 0.0);
    CHECK(d.tail_mass == 0.0);
  }
  SUBCASE("single term") {
    const PhotonNumberDist d = poisson_dist(1.0, 0);
    CHECK(d.weights[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(d.tail_mass == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("tail is negligible at the default truncation") {
    const PhotonNumberDist d = poisson_dist(0.2, 20);
    CHECK(d.tail_mass < 1e-20);
    CHECK(default_n_max(0.2) == 20);
    CHECK(default_n_max(5.0) == 60);
  }
  SUBCASE("negative intensity rejected") {
    CHECK_THROWS_AS(poisson_dist(-0.1, 5), std::invalid_argument);
  }
}

TEST_CASE("angular weights closed form") {
  SUBCASE("vacuum concentrates on k = 0") {
    const AngularWeights w = angular_weights(poisson_dist(0.0, 4), 4);
    CHECK(w.T[0] == doctest::Approx(1.0).epsilon(1e-15));
    for (int k = 1; k < 4; ++k) CHECK(w.T[k] == 0.0);
  }
  SUBCASE("single photon-number components") {
    PhotonNumberDist one;
    one.weights = {0.0, 1.0};
    const AngularWeights w1 = angular_weights(one, 4);
    CHECK(w1.T[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w1.T[1] == doctest::Approx(0.5).epsilon(1e-15));

    PhotonNumberDist two;
    two.weights = {0.0, 0.0, 1.0};
    const AngularWeights w2 = angular_weights(two, 4);
    CHECK(w2.T[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w2.T[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w2.T[2] == doctest::Approx(0.25).epsilon(1e-15));

    double total = 0.0;
    for (double t : w2.T) total += t;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("poisson weights: frozen value and leading order") {
    const double mu = 0.1;
    const AngularWeights w = angular_weights(poisson_dist(mu, 25), 4);
    CHECK(w.T[1] == doctest::Approx(0.04756147370219567).epsilon(1e-12));
    CHECK(std::abs(w.T[1] - mu / 2.0 * std::exp(-mu)) < mu * mu);
  }
}

TEST_CASE("fock oracle agrees with the closed form") {
  for (double mu : {0.1, 0.3, 0.5}) {
    for (int m : {4, 5}) {
      const PhotonNumberDist dist = poisson_dist(mu, 6);
      const AngularWeights closed = angular_weights(dist, m);
      const AngularWeights oracle = fock_oracle_weights(dist, m);
      for (int k = 0; k < m; ++k)
        CHECK(std::abs(closed.T[k] - oracle.T[k]) < 1e-12 + dist.tail_mass);
    }
  }
  CHECK_THROWS_AS(fock_oracle_weights(poisson_dist(0.1, 9), 4),
                  std::invalid_argument);
}

TEST_CASE("truncation is monotone and normalization holds") {
  for (int n_max : {4, 8, 12}) {
    const AngularWeights lo = angular_weights(poisson_dist(0.4, n_max), 5);
    const AngularWeights hi = angular_weights(poisson_dist(0.4, n_max + 5), 5);
    for (int k = 0; k < 5; ++k) CHECK(hi.T[k] >= lo.T[k] - 1e-16);
  }
  const PhotonNumberDist dist = poisson_dist(0.4, 30);
  const AngularWeights w = angular_weights(dist, 5);
  double total = 0.0;
  for (double t : w.T) total += t;
  CHECK(std::abs(total - 1.0) <= 1e-12 + dist.tail_mass);
}

TEST_CASE("small-intensity scaling of the weights") {
  // T_k ~ mu^k 2^-k / k! as mu -> 0.
  const double mu = 1e-4;
  const AngularWeights w = angular_weights(poisson_dist(mu, 20), 4);
  CHECK(w.T[1] / mu == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(w.T[2] / (mu * mu) == doctest::Approx(0.125).epsilon(1e-3));
}

TEST_CASE("state consistency oracle") {
  SUBCASE("passes for the honest construction") {
    const StateConsistencyReport rep =
        verify_state_consistency(ProtocolParams(4, 1), poisson_dist(0.2, 6));
    CHECK(rep.passed);
    CHECK(rep.projection_deviation < 1e-10);
    CHECK(rep.rotation_deviation < 1e-10);
  }
  SUBCASE("passes across the discrete angles for M = 5") {
    const StateConsistencyReport rep =
        verify_state_consistency(ProtocolParams(5, 1), poisson_dist(0.4, 6));
    CHECK(rep.passed);
  }
  SUBCASE("perturbed amplitude is detected at its own scale") {
    const StateConsistencyReport rep =
        verify_state_consistency(ProtocolParams(4, 1), poisson_dist(0.2, 6), 1e-5);
    CHECK_FALSE(rep.passed);
    const double worst =
        std::max(rep.projection_deviation, rep.rotation_deviation);
    CHECK(worst > 1e-7);
    CHECK(worst < 1e-3);
  }
}
