#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlqkd/io.hpp"
#include "mlqkd/keyrate.hpp"
#include "mlqkd/montecarlo.hpp"
#include "mlqkd/operators.hpp"
#include "mlqkd/source.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) s += ' ';
    s += argv[i];
  }
  return s;
}

// Output sink: stdout by default, file when -o is given.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> parse_range(const std::string& spec) {
  // start:stop:count, endpoints inclusive
  double start = 0.0, stop = 0.0;
  int count = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &start, &stop, &count) != 3 ||
      count < 1)
    throw std::invalid_argument("range must be start:stop:count, e.g. 0:0.05:51");
  std::vector<double> values;
  values.reserve(count);
  for (int i = 0; i < count; ++i) {
    values.push_back(count == 1 ? start
                                : start + (stop - start) * i / (count - 1));
  }
  return values;
}

struct VerifyArgs {
  std::vector<int> m_list = {4, 5, 6, 8};
  std::vector<int> l_list = {1, 2};
  int n_max = 0;
  double perturb = 0.0;
};

int cmd_verify(const VerifyArgs& args, Sink& sink) {
  std::ostream& out = sink.stream();
  const std::vector<double> phis = {0.0, 0.3, 1.234, -0.7};
  bool all_passed = true;
  out << std::left << std::setw(8) << "(M,L)" << std::setw(36) << "check"
      << std::setw(14) << "deviation" << "tolerance\n";
  for (int m : args.m_list) {
    for (int l : args.l_list) {
      if (2 * l > m) continue;
      const mlqkd::ProtocolParams params(m, l);
      const mlqkd::IdentityReport rep =
          mlqkd::verify_operator_identities(params, phis, args.perturb);
      for (const mlqkd::IdentityEntry& e : rep.entries) {
        out << std::left << std::setw(8)
            << ("(" + std::to_string(m) + "," + std::to_string(l) + ")")
            << std::setw(36) << e.label << std::setw(14)
            << mlqkd::format_double(e.deviation)
            << mlqkd::format_double(e.tolerance) << "\n";
      }
      all_passed = all_passed && rep.passed;
      if (args.n_max > 0) {
        for (double mu : {0.2, 0.5}) {
          const mlqkd::PhotonNumberDist dist = mlqkd::poisson_dist(mu, args.n_max);
          const mlqkd::StateConsistencyReport st =
              mlqkd::verify_state_consistency(params, dist, args.perturb);
          out << std::left << std::setw(8)
              << ("(" + std::to_string(m) + "," + std::to_string(l) + ")")
              << std::setw(36) << ("state projection mu=" + mlqkd::format_double(mu))
              << std::setw(14) << mlqkd::format_double(st.projection_deviation)
              << "1e-10\n";
          out << std::left << std::setw(8)
              << ("(" + std::to_string(m) + "," + std::to_string(l) + ")")
              << std::setw(36) << ("state rotation mu=" + mlqkd::format_double(mu))
              << std::setw(14) << mlqkd::format_double(st.rotation_deviation)
              << "1e-10\n";
          out << std::left << std::setw(8)
              << ("(" + std::to_string(m) + "," + std::to_string(l) + ")")
              << std::setw(36) << ("weights vs oracle mu=" + mlqkd::format_double(mu))
              << std::setw(14) << mlqkd::format_double(st.weight_deviation)
              << "1e-12+tail\n";
          all_passed = all_passed && st.passed;
        }
      }
    }
  }
  out << "RESULT: " << (all_passed ? "PASS" : "FAIL") << "\n";
  return all_passed ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Security analysis of polarization-encoded (M,L) QKD protocols"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mlqkd::kVersion);
  const std::string invocation = join_args(argc, argv);

  // --- verify ---
  VerifyArgs vargs;
  std::string verify_out;
  CLI::App* verify = app.add_subcommand("verify", "Run the operator and source identity suites");
  verify->set_config("--config", "", "Read options from a TOML-style config file");
  verify->add_option("--M", vargs.m_list, "Values of M to check");
  verify->add_option("--L", vargs.l_list, "Values of L to check");
  verify->add_option("--nmax", vargs.n_max, "Fock-space truncation for source checks (0 = skip)")
      ->check(CLI::Range(0, 8));
  verify->add_option("--perturb", vargs.perturb, "Inject a perturbation (test hook)");
  verify->add_option("-o,--output", verify_out, "Write the report to a file");

  // --- rate ---
  int rate_m = 4, rate_l = 1;
  std::string rate_mu = "auto";
  double rate_eta = 1e-3, rate_eps = 0.0;
  bool rate_opt_mu = false, rate_scan_phi = false, rate_double = false;
  int rate_k = 0;
  std::string rate_out;
  CLI::App* rate = app.add_subcommand("rate", "Finite-loss secret-key rate");
  rate->set_config("--config", "", "Read options from a TOML-style config file");
  rate->add_option("--M", rate_m, "Number of polarization angles")->required();
  rate->add_option("--L", rate_l, "Bit separation index")->required();
  rate->add_option("--mu", rate_mu, "Source intensity, or 'auto' to optimize");
  rate->add_option("--eta", rate_eta, "Channel transmission")->required();
  rate->add_option("--eps", rate_eps, "Channel noise probability")->required();
  rate->add_flag("--optimize-mu", rate_opt_mu, "Optimize the source intensity");
  rate->add_flag("--scan-phi", rate_scan_phi, "Minimize the bound over 64 phase offsets");
  rate->add_flag("--double-even", rate_double, "Enable the even-M mirrored key pool");
  rate->add_option("--K", rate_k, "Analysis order (0 = auto)");
  rate->add_option("-o,--output", rate_out, "Write JSON to a file");

  // --- asymptotic ---
  int asym_m = 4, asym_l = 1, asym_k = 0;
  double asym_eps = 0.0, asym_gamma = -1.0;
  bool asym_optimize = false, asym_double = false;
  std::string asym_out;
  CLI::App* asym = app.add_subcommand("asymptotic", "High-loss-limit key gain");
  asym->set_config("--config", "", "Read options from a TOML-style config file");
  asym->add_option("--M", asym_m)->required();
  asym->add_option("--L", asym_l)->required();
  asym->add_option("--K", asym_k, "Analysis order (0 = auto)");
  asym->add_option("--eps", asym_eps)->required();
  asym->add_option("--gamma", asym_gamma, "Scaling parameter gamma");
  asym->add_flag("--optimize", asym_optimize, "Optimize over gamma");
  asym->add_flag("--double-even", asym_double);
  asym->add_option("-o,--output", asym_out);

  // --- scan ---
  int scan_m = 4, scan_l = 1, scan_k = 0;
  std::string scan_range = "0:0.05:51", scan_out;
  bool scan_double = false;
  CLI::App* scan = app.add_subcommand("scan", "Gamma-optimized gain over a noise range (CSV)");
  scan->set_config("--config", "", "Read options from a TOML-style config file");
  scan->add_option("--M", scan_m)->required();
  scan->add_option("--L", scan_l)->required();
  scan->add_option("--K", scan_k, "Analysis order (0 = auto)");
  scan->add_option("--eps-range", scan_range, "start:stop:count");
  scan->add_flag("--double-even", scan_double);
  scan->add_option("-o,--output", scan_out);

  // --- threshold ---
  int thr_k = 0, thr_m = 0, thr_l = 0;
  double thr_theta = -1.0;
  std::string thr_out;
  CLI::App* thr = app.add_subcommand("threshold", "Noise threshold for the scaling gain (CSV)");
  thr->set_config("--config", "", "Read options from a TOML-style config file");
  thr->add_option("--K", thr_k, "Analysis order");
  thr->add_option("--Theta", thr_theta, "Bit separation angle (radians)");
  thr->add_option("--M", thr_m);
  thr->add_option("--L", thr_l);
  thr->add_option("-o,--output", thr_out);

  // --- simulate ---
  int sim_m = 4, sim_l = 1;
  double sim_mu = 0.1, sim_eta = 0.1, sim_eps = 0.0;
  std::uint64_t sim_pulses = 1000000, sim_seed = 1;
  bool sim_compare = false, sim_double = false;
  std::string sim_out, sim_log;
  CLI::App* sim = app.add_subcommand("simulate", "Event-level Monte Carlo run (JSON)");
  sim->set_config("--config", "", "Read options from a TOML-style config file");
  sim->add_option("--M", sim_m)->required();
  sim->add_option("--L", sim_l)->required();
  sim->add_option("--mu", sim_mu)->required();
  sim->add_option("--eta", sim_eta)->required();
  sim->add_option("--eps", sim_eps)->required();
  sim->add_option("--pulses", sim_pulses);
  sim->add_option("--seed", sim_seed);
  sim->add_flag("--compare", sim_compare, "z-test against the analytic statistics");
  sim->add_flag("--double-even", sim_double);
  sim->add_option("--event-log", sim_log, "Write a per-pulse CSV event log");
  sim->add_option("-o,--output", sim_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) {
      Sink sink(verify_out);
      return cmd_verify(vargs, sink);
    }

    if (rate->parsed()) {
      const mlqkd::ProtocolParams params(rate_m, rate_l, rate_double);
      const mlqkd::ChannelModel channel(rate_eta, rate_eps);
      mlqkd::FiniteRateOptions options;
      options.scan_phi = rate_scan_phi;
      if (rate_k > 0) options.k_override = rate_k;
      double mu = 0.0;
      if (rate_opt_mu || rate_mu == "auto") {
        options.optimize_mu = true;
      } else {
        mu = std::stod(rate_mu);
      }
      const mlqkd::FiniteRateResult result = mlqkd::finite_rate(params, mu, channel, options);
      Sink sink(rate_out);
      sink.stream() << mlqkd::finite_rate_json(params, channel, result).dump(2) << "\n";
      return kExitOk;
    }

    if (asym->parsed()) {
      const mlqkd::ProtocolParams params(asym_m, asym_l, asym_double);
      const int k = asym_k > 0 ? asym_k : mlqkd::max_k(asym_m, asym_l);
      nlohmann::json j;
      if (asym_optimize) {
        const auto [gamma_star, result] = mlqkd::optimize_gamma(params, k, asym_eps);
        j = mlqkd::key_rate_json(result);
        j["gamma_star"] = gamma_star;
      } else {
        if (asym_gamma < 0.0)
          throw std::invalid_argument("asymptotic: give --gamma or --optimize");
        j = mlqkd::key_rate_json(mlqkd::asymptotic_gain(params, k, asym_gamma, asym_eps));
      }
      j["config"] = {{"M", asym_m}, {"L", asym_l}, {"K", k}, {"eps", asym_eps},
                     {"double_even", asym_double}};
      Sink sink(asym_out);
      sink.stream() << j.dump(2) << "\n";
      return kExitOk;
    }

    if (scan->parsed()) {
      const mlqkd::ProtocolParams params(scan_m, scan_l, scan_double);
      const int k = scan_k > 0 ? scan_k : mlqkd::max_k(scan_m, scan_l);
      const std::vector<double> eps_values = parse_range(scan_range);
      const std::vector<mlqkd::ScanPoint> points = mlqkd::scan_eps(params, k, eps_values);
      Sink sink(scan_out);
      std::ostream& out = sink.stream();
      mlqkd::write_csv_comment(out, invocation);
      mlqkd::write_csv_row(out, {"eps", "gamma_star", "bracket", "gain"});
      for (const mlqkd::ScanPoint& p : points) {
        mlqkd::write_csv_row(out, {mlqkd::format_double(p.eps),
                                   mlqkd::format_double(p.gamma_star),
                                   mlqkd::format_double(p.bracket),
                                   mlqkd::format_double(p.gain)});
      }
      return kExitOk;
    }

    if (thr->parsed()) {
      int k = thr_k;
      double theta = thr_theta;
      if (thr_m > 0) {
        const mlqkd::ProtocolParams params(thr_m, thr_l);
        theta = params.theta();
        if (k <= 0) k = mlqkd::max_k(thr_m, thr_l);
      }
      if (k <= 0 || theta <= 0.0)
        throw std::invalid_argument("threshold: give --K with --Theta, or --M with --L");
      const double eps_star = mlqkd::threshold_eps(k, theta);
      Sink sink(thr_out);
      std::ostream& out = sink.stream();
      mlqkd::write_csv_comment(out, invocation);
      mlqkd::write_csv_row(out, {"K", "Theta", "eps_star"});
      mlqkd::write_csv_row(out, {std::to_string(k), mlqkd::format_double(theta),
                                 mlqkd::format_double(eps_star)});
      return kExitOk;
    }

    if (sim->parsed()) {
      const mlqkd::ProtocolParams params(sim_m, sim_l, sim_double);
      const mlqkd::SimConfig config{params, sim_mu,
                                    mlqkd::ChannelModel(sim_eta, sim_eps),
                                    sim_pulses, sim_seed};
      std::unique_ptr<std::ofstream> log;
      if (!sim_log.empty()) {
        log = std::make_unique<std::ofstream>(sim_log);
        if (!*log) throw std::invalid_argument("cannot open event log: " + sim_log);
        mlqkd::write_csv_comment(*log, invocation);
        mlqkd::write_csv_row(*log, {"pulse_index", "a", "j", "n_sent", "n_arrived",
                                    "theta_prime_index", "d1", "d2", "detected",
                                    "conclusive", "b", "error"});
      }
      const mlqkd::SimResult result = mlqkd::simulate(config, 0.0, log.get());
      nlohmann::json j = mlqkd::sim_result_json(config, result);
      bool ok = true;
      if (sim_compare) {
        const mlqkd::ObservedStats analytic =
            mlqkd::honest_stats(params, sim_mu, config.channel);
        const mlqkd::CompareReport rep = mlqkd::compare(result, analytic);
        j["compare"] = {{"z_eta_d", rep.z_eta_d},
                        {"z_r_con", rep.z_r_con},
                        {"z_r_bit", rep.z_r_bit},
                        {"inconclusive", rep.inconclusive},
                        {"pass", rep.pass}};
        ok = rep.pass && !rep.inconclusive;
      }
      Sink sink(sim_out);
      sink.stream() << j.dump(2) << "\n";
      return ok ? kExitOk : kExitFailure;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
