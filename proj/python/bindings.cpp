#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mlqkd/io.hpp"
#include "mlqkd/keyrate.hpp"
#include "mlqkd/montecarlo.hpp"
#include "mlqkd/operators.hpp"
#include "mlqkd/source.hpp"

namespace py = pybind11;
using namespace mlqkd;

namespace {

Observable observable_from_string(const std::string& name) {
  if (name == "con" || name == "conclusive") return Observable::kConclusive;
  if (name == "bit" || name == "bit_error") return Observable::kBitError;
  if (name == "ph" || name == "phase_error") return Observable::kPhaseError;
  throw std::invalid_argument("observable must be one of: con, bit, ph");
}

}  // namespace

PYBIND11_MODULE(_mlqkd, m) {
  m.doc() = "Security analysis of polarization-encoded (M,L) QKD protocols";
  m.attr("__version__") = kVersion;

  py::class_<ProtocolParams>(m, "ProtocolParams")
      .def(py::init<int, int, bool>(), py::arg("M"), py::arg("L"),
           py::arg("double_even") = false)
      .def_readonly("M", &ProtocolParams::M)
      .def_readonly("L", &ProtocolParams::L)
      .def_readonly("double_even", &ProtocolParams::double_even)
      .def_property_readonly("theta", &ProtocolParams::theta)
      .def("__repr__", [](const ProtocolParams& p) {
        return "ProtocolParams(M=" + std::to_string(p.M) +
               ", L=" + std::to_string(p.L) + ")";
      });

  py::class_<ChannelModel>(m, "ChannelModel")
      .def(py::init<double, double>(), py::arg("eta"), py::arg("eps"))
      .def_readonly("eta", &ChannelModel::eta)
      .def_readonly("eps", &ChannelModel::eps);

  py::class_<ObservedStats>(m, "ObservedStats")
      .def_static("from_x", &ObservedStats::from_x, py::arg("params"),
                  py::arg("X"), py::arg("eta_d"))
      .def_readonly("eta_d", &ObservedStats::eta_d)
      .def_readonly("X", &ObservedStats::X)
      .def_readonly("r_con", &ObservedStats::r_con)
      .def_readonly("r_bit", &ObservedStats::r_bit);

  py::class_<PhotonNumberDist>(m, "PhotonNumberDist")
      .def_readonly("weights", &PhotonNumberDist::weights)
      .def_readonly("tail_mass", &PhotonNumberDist::tail_mass);

  py::class_<AngularWeights>(m, "AngularWeights")
      .def_readonly("T", &AngularWeights::T)
      .def_readonly("truncation_error_bound",
                    &AngularWeights::truncation_error_bound);

  py::class_<SubspaceAssignment>(m, "SubspaceAssignment")
      .def_readonly("p", &SubspaceAssignment::p)
      .def_readonly("X", &SubspaceAssignment::X);

  py::class_<PhaseErrorBound>(m, "PhaseErrorBound")
      .def_readonly("r_ph_bar", &PhaseErrorBound::r_ph_bar)
      .def_readonly("witness", &PhaseErrorBound::witness)
      .def_readonly("phi_prime", &PhaseErrorBound::phi_prime);

  py::class_<AsymptoticWitness>(m, "AsymptoticWitness")
      .def_readonly("q", &AsymptoticWitness::q)
      .def_readonly("x_prime", &AsymptoticWitness::x_prime)
      .def_readonly("x_dprime", &AsymptoticWitness::x_dprime)
      .def_readonly("g_value", &AsymptoticWitness::g_value);

  py::class_<KeyRateResult>(m, "KeyRateResult")
      .def_readonly("e_bit", &KeyRateResult::e_bit)
      .def_readonly("e_ph", &KeyRateResult::e_ph)
      .def_readonly("bracket", &KeyRateResult::bracket)
      .def_readonly("gain", &KeyRateResult::gain)
      .def_readonly("gamma", &KeyRateResult::gamma)
      .def_readonly("K", &KeyRateResult::K);

  py::class_<FiniteRateResult>(m, "FiniteRateResult")
      .def_readonly("rate", &FiniteRateResult::rate)
      .def_readonly("mu", &FiniteRateResult::mu)
      .def_readonly("phi_prime", &FiniteRateResult::phi_prime)
      .def_readonly("stats", &FiniteRateResult::stats)
      .def_readonly("bound", &FiniteRateResult::bound);

  py::class_<SimResult>(m, "SimResult")
      .def_readonly("pulses", &SimResult::pulses)
      .def_readonly("detected", &SimResult::detected)
      .def_readonly("conclusive", &SimResult::conclusive)
      .def_readonly("conclusive_errors", &SimResult::conclusive_errors)
      .def_readonly("mirror_conclusive", &SimResult::mirror_conclusive)
      .def_readonly("mirror_errors", &SimResult::mirror_errors)
      .def_readonly("eta_d_hat", &SimResult::eta_d_hat)
      .def_readonly("r_con_hat", &SimResult::r_con_hat)
      .def_readonly("r_bit_hat", &SimResult::r_bit_hat)
      .def_readonly("seed", &SimResult::seed);

  py::class_<CompareReport>(m, "CompareReport")
      .def_readonly("z_eta_d", &CompareReport::z_eta_d)
      .def_readonly("z_r_con", &CompareReport::z_r_con)
      .def_readonly("z_r_bit", &CompareReport::z_r_bit)
      .def_readonly("inconclusive", &CompareReport::inconclusive)
      .def_readonly("pass_", &CompareReport::pass);

  // Operators (dense complex matrices come back as numpy arrays).
  m.def("xi_state_a", &xi_state_a, py::arg("params"), py::arg("theta"));
  m.def(
      "bob_povm",
      [](const ProtocolParams& p, int j, int b) -> ComplexMatrix {
        return bob_povm(p, j, b);
      },
      py::arg("params"), py::arg("j"), py::arg("b"));
  m.def(
      "filter_op",
      [](const ProtocolParams& p, int j) -> ComplexMatrix {
        return filter_op(p, j);
      },
      py::arg("params"), py::arg("j"));
  m.def(
      "build_observable",
      [](const ProtocolParams& p, const std::string& which, double phi) {
        return build_observable(p, observable_from_string(which), phi);
      },
      py::arg("params"), py::arg("which"), py::arg("phi") = 0.0);
  m.def(
      "verify_closed_forms",
      [](const ProtocolParams& p, const std::vector<double>& phis) {
        const ClosedFormReport rep = verify_closed_forms(p, phis);
        return py::make_tuple(rep.passed, rep.max_deviation, rep.max_leakage);
      },
      py::arg("params"), py::arg("phi_samples"));

  // Source model.
  m.def("poisson_dist", &poisson_dist, py::arg("mu"), py::arg("n_max"));
  m.def("default_n_max", &default_n_max, py::arg("mu"));
  m.def("angular_weights", &angular_weights, py::arg("dist"), py::arg("M"));
  m.def("fock_oracle_weights", &fock_oracle_weights, py::arg("dist"), py::arg("M"));

  // Channel statistics.
  m.def("honest_stats", &honest_stats, py::arg("params"), py::arg("mu"),
        py::arg("channel"));
  m.def("zeta", &zeta, py::arg("K"));
  m.def("max_k", &max_k, py::arg("M"), py::arg("L"));
  m.def("loss_constraint_rhs", &loss_constraint_rhs, py::arg("weights"),
        py::arg("eta_d"));

  // Phase-error bound.
  m.def("f_phi", &f_phi, py::arg("phi"), py::arg("big_theta"), py::arg("x"));
  m.def("choose_phi_prime", &choose_phi_prime, py::arg("K"), py::arg("big_theta"));
  m.def("phase_error_bound_finite", &phase_error_bound_finite, py::arg("params"),
        py::arg("phi_prime"), py::arg("stats"), py::arg("weights"));
  m.def("g_asymptotic", &g_asymptotic, py::arg("K"), py::arg("big_theta"),
        py::arg("gamma"), py::arg("eps"));

  // Key rates.
  m.def("binary_entropy", &binary_entropy, py::arg("x"));
  m.def("key_length_finite", &key_length_finite, py::arg("n_detected"),
        py::arg("r_con"), py::arg("r_err"), py::arg("r_ph_bar"));
  m.def("asymptotic_gain", &asymptotic_gain, py::arg("params"), py::arg("K"),
        py::arg("gamma"), py::arg("eps"));
  m.def("optimize_gamma", &optimize_gamma, py::arg("params"), py::arg("K"),
        py::arg("eps"));
  m.def("threshold_eps", &threshold_eps, py::arg("K"), py::arg("big_theta"));
  m.def(
      "finite_rate",
      [](const ProtocolParams& params, double mu, const ChannelModel& channel,
         bool optimize_mu, bool scan_phi) {
        FiniteRateOptions options;
        options.optimize_mu = optimize_mu;
        options.scan_phi = scan_phi;
        return finite_rate(params, mu, channel, options);
      },
      py::arg("params"), py::arg("mu"), py::arg("channel"),
      py::arg("optimize_mu") = false, py::arg("scan_phi") = false);

  // Simulation.
  m.def(
      "simulate",
      [](const ProtocolParams& params, double mu, const ChannelModel& channel,
         std::uint64_t pulses, std::uint64_t seed, double angle_offset) {
        return simulate(SimConfig{params, mu, channel, pulses, seed},
                        angle_offset);
      },
      py::arg("params"), py::arg("mu"), py::arg("channel"), py::arg("pulses"),
      py::arg("seed"), py::arg("angle_offset") = 0.0);
  m.def("compare", &compare, py::arg("sim"), py::arg("analytic"));
}
