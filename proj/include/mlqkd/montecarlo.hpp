#pragma once

#include <cstdint>
#include <iosfwd>

#include "mlqkd/channel.hpp"
#include "mlqkd/protocol.hpp"

namespace mlqkd {

struct SimConfig {
  ProtocolParams params;
  double mu;
  ChannelModel channel;
  std::uint64_t pulses;
  std::uint64_t seed;
};

/// Event counts and the derived frequencies of one simulation run.
/// Frequencies are exact count ratios: eta_d per pulse, r_con and r_bit per
/// detected event.  Standard errors are binomial.  The mirror pool is only
/// populated when even-M doubling is enabled.
struct SimResult {
  std::uint64_t pulses = 0;
  std::uint64_t detected = 0;
  std::uint64_t conclusive = 0;
  std::uint64_t conclusive_errors = 0;
  std::uint64_t mirror_conclusive = 0;
  std::uint64_t mirror_errors = 0;
  double eta_d_hat = 0.0;
  double r_con_hat = 0.0;
  double r_bit_hat = 0.0;
  double eta_d_se = 0.0;
  double r_con_se = 0.0;
  double r_bit_se = 0.0;
  std::uint64_t seed = 0;
};

/// Event-level simulation of the honest protocol: Poisson source, per-photon
/// loss, optional per-pulse random rotation, rotated analyzer with two
/// photon-counting detectors, and sifting.  Deterministic for a fixed config
/// regardless of the thread count (per-pulse counter-based generator).
/// `angle_offset` shifts every polarization and analyzer angle (covariance
/// checks); `event_log`, when given, receives one CSV row per pulse and
/// forces a serial run.
SimResult simulate(const SimConfig& config, double angle_offset = 0.0,
                   std::ostream* event_log = nullptr);

struct CompareReport {
  double z_eta_d = 0.0;
  double z_r_con = 0.0;
  double z_r_bit = 0.0;
  bool inconclusive = false;  // no detected events
  bool pass = false;          // all |z| <= 4
};

/// z-scores of the empirical frequencies against analytic statistics.
CompareReport compare(const SimResult& sim, const ObservedStats& analytic);

}  // namespace mlqkd
