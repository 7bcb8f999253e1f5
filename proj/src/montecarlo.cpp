#include "mlqkd/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <future>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace mlqkd {

namespace {

// Counter-based stream: the pulse index is avalanched into the generator
// state, so any batch partition reproduces the serial draw sequence.
class PulseRng {
 public:
  PulseRng(std::uint64_t seed, std::uint64_t pulse) {
    state_ = mix(seed ^ mix(pulse + 0x9E3779B97F4A7C15ULL));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  int uniform_int(int n) {
    const int v = static_cast<int>(next_double() * n);
    return v >= n ? n - 1 : v;
  }

  int poisson(double mu) {
    const double u = next_double();
    double term = std::exp(-mu);
    double cum = term;
    int k = 0;
    while (u > cum && k < 4096) {
      ++k;
      term *= mu / k;
      cum += term;
    }
    return k;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

struct Counts {
  std::uint64_t detected = 0;
  std::uint64_t conclusive = 0;
  std::uint64_t conclusive_errors = 0;
  std::uint64_t mirror_conclusive = 0;
  std::uint64_t mirror_errors = 0;

  Counts& operator+=(const Counts& o) {
    detected += o.detected;
    conclusive += o.conclusive;
    conclusive_errors += o.conclusive_errors;
    mirror_conclusive += o.mirror_conclusive;
    mirror_errors += o.mirror_errors;
    return *this;
  }
};

Counts run_range(const SimConfig& config, double angle_offset,
                 std::uint64_t begin, std::uint64_t end, std::ostream* log) {
  const int m = config.params.M;
  const int l = config.params.L;
  const bool doubling = config.params.double_even && m % 2 == 0;
  const double pi = std::numbers::pi;
  Counts counts;
  for (std::uint64_t i = begin; i < end; ++i) {
    PulseRng rng(config.seed, i);
    const int a = rng.uniform_int(2);
    const int j = rng.uniform_int(m);
    const int n_sent = rng.poisson(config.mu);
    int n_arrived = 0;
    for (int ph = 0; ph < n_sent; ++ph)
      if (rng.bernoulli(config.channel.eta)) ++n_arrived;

    const bool detected = n_arrived == 1;
    bool conclusive = false, error = false, mirror = false, mirror_error = false;
    int theta_idx = -1, d1 = 0, d2 = 0, b = -1;
    if (detected || log != nullptr) {
      double rotation = 0.0;
      if (rng.bernoulli(config.channel.eps)) rotation = pi * rng.next_double();
      theta_idx = rng.uniform_int(m);
      if (detected) {
        const double theta_pol =
            (a * l + j) * pi / m + rotation + angle_offset;
        const double theta_prime = theta_idx * pi / m + angle_offset;
        const double amp = std::cos(theta_pol - theta_prime);
        d1 = rng.bernoulli(amp * amp) ? 1 : 0;
        d2 = 1 - d1;
        counts.detected += 1;
        if (d2 == 1) {
          if (theta_idx == (j + l) % m)
            b = 0;
          else if (theta_idx == j)
            b = 1;
          conclusive = b >= 0;
        } else if (doubling) {
          int mb = -1;
          if (theta_idx == (j + l + m / 2) % m)
            mb = 0;
          else if (theta_idx == (j + m / 2) % m)
            mb = 1;
          if (mb >= 0) {
            mirror = true;
            mirror_error = mb != a;
          }
        }
        if (conclusive) {
          counts.conclusive += 1;
          error = b != a;
          if (error) counts.conclusive_errors += 1;
        }
        if (mirror) {
          counts.mirror_conclusive += 1;
          if (mirror_error) counts.mirror_errors += 1;
        }
      }
    }
    if (log != nullptr) {
      *log << i << ',' << a << ',' << j << ',' << n_sent << ',' << n_arrived
           << ',' << theta_idx << ',' << d1 << ',' << d2 << ',' << (detected ? 1 : 0)
           << ',' << (conclusive ? 1 : 0) << ',' << b << ',' << (error ? 1 : 0)
           << '\n';
    }
  }
  return counts;
}

int thread_count_from_env() {
  const char* env = std::getenv("MLQKD_THREADS");
  if (env == nullptr) return 1;
  const int n = std::atoi(env);
  if (n <= 1) return 1;
  return std::min(n, 64);
}

double binomial_se(double p, double n) {
  if (n <= 0.0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / n);
}

}  // namespace

SimResult simulate(const SimConfig& config, double angle_offset,
                   std::ostream* event_log) {
  if (config.pulses < 1) throw std::invalid_argument("simulate: pulses must be >= 1");
  if (config.mu < 0.0) throw std::invalid_argument("simulate: mu must be >= 0");

  Counts total;
  const int threads =
      (event_log == nullptr) ? thread_count_from_env() : 1;
  if (threads <= 1 || config.pulses < 1000) {
    total = run_range(config, angle_offset, 0, config.pulses, event_log);
  } else {
    std::vector<std::future<Counts>> futures;
    const std::uint64_t chunk = (config.pulses + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::uint64_t begin = t * chunk;
      const std::uint64_t end = std::min(config.pulses, begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, [&, begin, end] {
        return run_range(config, angle_offset, begin, end, nullptr);
      }));
    }
    for (auto& f : futures) total += f.get();
  }

  SimResult result;
  result.pulses = config.pulses;
  result.detected = total.detected;
  result.conclusive = total.conclusive;
  result.conclusive_errors = total.conclusive_errors;
  result.mirror_conclusive = total.mirror_conclusive;
  result.mirror_errors = total.mirror_errors;
  result.seed = config.seed;
  result.eta_d_hat = static_cast<double>(total.detected) / config.pulses;
  if (total.detected > 0) {
    result.r_con_hat = static_cast<double>(total.conclusive) / total.detected;
    result.r_bit_hat = static_cast<double>(total.conclusive_errors) / total.detected;
  }
  result.eta_d_se = binomial_se(result.eta_d_hat, static_cast<double>(config.pulses));
  result.r_con_se = binomial_se(result.r_con_hat, static_cast<double>(total.detected));
  result.r_bit_se = binomial_se(result.r_bit_hat, static_cast<double>(total.detected));
  return result;
}

CompareReport compare(const SimResult& sim, const ObservedStats& analytic) {
  CompareReport report;
  if (sim.detected == 0) {
    report.inconclusive = true;
    return report;
  }
  auto z_score = [](double hat, double expect, double n) {
    const double se = binomial_se(expect, n);
    if (se == 0.0) return hat == expect ? 0.0 : 1e18;
    return (hat - expect) / se;
  };
  report.z_eta_d = z_score(sim.eta_d_hat, analytic.eta_d, static_cast<double>(sim.pulses));
  report.z_r_con = z_score(sim.r_con_hat, analytic.r_con, static_cast<double>(sim.detected));
  report.z_r_bit = z_score(sim.r_bit_hat, analytic.r_bit, static_cast<double>(sim.detected));
  report.pass = std::abs(report.z_eta_d) <= 4.0 && std::abs(report.z_r_con) <= 4.0 &&
                std::abs(report.z_r_bit) <= 4.0;
  return report;
}

}  // namespace mlqkd
