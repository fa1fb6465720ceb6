#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsdi/errors.hpp"
#include "qsdi/experiments.hpp"
#include "qsdi/purify.hpp"

namespace py = pybind11;
using namespace qsdi;

PYBIND11_MODULE(_qsdi, m) {
  m.doc() = "Steering-certified key rates, noise channels, and purification "
            "for one-sided device-independent QKD";

  py::register_exception<NeverSecure>(m, "NeverSecure");
  py::register_exception<ZeroSuccessProbability>(m, "ZeroSuccessProbability");
  py::register_exception<NotBellDiagonal>(m, "NotBellDiagonal");

  py::enum_<BellIndex>(m, "BellIndex")
      .value("phi_plus", BellIndex::phi_plus)
      .value("phi_minus", BellIndex::phi_minus)
      .value("psi_plus", BellIndex::psi_plus)
      .value("psi_minus", BellIndex::psi_minus);

  py::enum_<ChannelKind>(m, "ChannelKind")
      .value("dephasing", ChannelKind::dephasing)
      .value("depolarizing", ChannelKind::depolarizing)
      .value("amplitude_damping", ChannelKind::amplitude_damping)
      .value("identity", ChannelKind::identity)
      .value("composite", ChannelKind::composite);

  py::enum_<Side>(m, "Side")
      .value("traveling", Side::traveling)
      .value("stationary", Side::stationary);

  py::enum_<Binning>(m, "Binning")
      .value("assign_zero", Binning::assign_zero)
      .value("discard", Binning::discard);

  py::enum_<BoundMethod>(m, "BoundMethod")
      .value("steering_analytic", BoundMethod::steering_analytic);

  py::class_<TwoQubitState>(m, "TwoQubitState")
      .def(py::init<const CMatrix&>(), py::arg("rho"))
      .def_property_readonly("matrix", &TwoQubitState::matrix);

  py::class_<DistanceModel>(m, "DistanceModel")
      .def(py::init([](double length_km, double coherence_km) {
             return DistanceModel{length_km, coherence_km};
           }),
           py::arg("length_km"), py::arg("coherence_km"))
      .def_readwrite("length_km", &DistanceModel::length_km)
      .def_readwrite("coherence_km", &DistanceModel::coherence_km);

  py::class_<KrausChannel>(m, "KrausChannel")
      .def_readonly("kind", &KrausChannel::kind)
      .def_readonly("param", &KrausChannel::param)
      .def_readonly("ops", &KrausChannel::ops)
      .def("is_cptp", &KrausChannel::is_cptp, py::arg("tol") = 1e-12);

  py::class_<BellDiagonal>(m, "BellDiagonal")
      .def(py::init([](const std::array<double, 4>& w) {
             return BellDiagonal{w};
           }),
           py::arg("weights"))
      .def_readwrite("weights", &BellDiagonal::weights)
      .def("to_state", &BellDiagonal::to_state);

  m.def("tensor", &tensor, py::arg("a"), py::arg("b"));
  m.def("partial_trace", &partial_trace, py::arg("m"), py::arg("keep"),
        "Trace out all qubits not in `keep` (0 = most significant).");

  m.def("bell_state", &bell_state, py::arg("which"));
  m.def("psi_theta", &psi_theta, py::arg("theta"),
        "cos(theta)|00> + sin(theta)|11>");
  m.def("fidelity_phi_plus", &fidelity_phi_plus, py::arg("state"));
  m.def("purity", &purity, py::arg("state"));
  m.def("concurrence", &concurrence, py::arg("state"));
  m.def("as_bell_diagonal", &as_bell_diagonal, py::arg("state"));

  m.def("identity_channel", &identity_channel);
  m.def("dephasing", &dephasing, py::arg("p"));
  m.def("depolarizing", &depolarizing, py::arg("q"));
  m.def("amplitude_damping", &amplitude_damping, py::arg("gamma"));
  m.def("compose", &compose, py::arg("first"), py::arg("second"));
  m.def("make_channel", &make_channel, py::arg("kind"), py::arg("param"));
  m.def("noise_at_distance", &noise_at_distance, py::arg("kind"),
        py::arg("distance"));
  m.def("from_distance", &from_distance, py::arg("kind"), py::arg("distance"));
  m.def("default_coherence_km", &default_coherence_km, py::arg("kind"));
  m.def("max_noise_param", &max_noise_param, py::arg("kind"));
  m.def("apply_one_sided", &apply_one_sided, py::arg("channel"),
        py::arg("state"), py::arg("side") = Side::traveling);

  m.attr("steering_lhs_bound") = steering_lhs_bound;
  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def("eve_entropy_bound", &eve_entropy_bound, py::arg("s2"),
        py::arg("method") = BoundMethod::steering_analytic);
  m.def("theta_min", &theta_min);

  py::class_<KeyRateOptions>(m, "KeyRateOptions")
      .def(py::init<>())
      .def_readwrite("eta_b", &KeyRateOptions::eta_b)
      .def_readwrite("binning", &KeyRateOptions::binning)
      .def_readwrite("method", &KeyRateOptions::method);

  py::class_<KeyRateReport>(m, "KeyRateReport")
      .def_readonly("s2", &KeyRateReport::s2)
      .def_readonly("h_ab", &KeyRateReport::h_ab)
      .def_readonly("h_ae_bound", &KeyRateReport::h_ae_bound)
      .def_readonly("key_rate", &KeyRateReport::key_rate)
      .def_readonly("key_rate_clamped", &KeyRateReport::key_rate_clamped)
      .def_readonly("concurrence", &KeyRateReport::concurrence)
      .def_readonly("eta_b", &KeyRateReport::eta_b)
      .def_readonly("binning", &KeyRateReport::binning)
      .def_readonly("method", &KeyRateReport::method)
      .def_readonly("secure", &KeyRateReport::secure);

  py::class_<NoiseThresholds>(m, "NoiseThresholds")
      .def_readonly("steering", &NoiseThresholds::steering)
      .def_readonly("key_rate", &NoiseThresholds::key_rate);

  m.def("evaluate_key_rate", &evaluate_key_rate, py::arg("state"),
        py::arg("opts") = KeyRateOptions{});
  m.def("minimum_efficiency", &minimum_efficiency, py::arg("state"),
        py::arg("opts") = KeyRateOptions{}, py::arg("tol") = 1e-6);
  m.def("critical_noise", &critical_noise, py::arg("kind"), py::arg("theta"),
        py::arg("opts") = KeyRateOptions{}, py::arg("tol") = 1e-6);

  m.def("pauli_twirl", &pauli_twirl, py::arg("state"));
  m.def("align_error_basis", &align_error_basis, py::arg("state"));

  py::class_<WernerRound>(m, "WernerRound")
      .def_readonly("fidelity", &WernerRound::fidelity)
      .def_readonly("success_prob", &WernerRound::success_prob);

  py::class_<RoundOutcome>(m, "RoundOutcome")
      .def_readonly("state", &RoundOutcome::state)
      .def_readonly("success_prob", &RoundOutcome::success_prob);

  py::class_<ExactRound>(m, "ExactRound")
      .def_readonly("state", &ExactRound::state)
      .def_readonly("success_prob", &ExactRound::success_prob);

  m.def("bbpssw_recurrence", &bbpssw_recurrence, py::arg("fidelity"));
  m.def("bbpssw_weights", &bbpssw_weights, py::arg("weights"));
  m.def("bbpssw_exact", &bbpssw_exact, py::arg("state"));

  py::class_<PurifyRound>(m, "PurifyRound")
      .def_readonly("round", &PurifyRound::round)
      .def_readonly("fidelity", &PurifyRound::fidelity)
      .def_readonly("success_prob", &PurifyRound::success_prob)
      .def_readonly("yield_", &PurifyRound::yield)
      .def_readonly("key_rate", &PurifyRound::key_rate)
      .def_readonly("effective_rate", &PurifyRound::effective_rate);

  py::class_<PurifyOptions>(m, "PurifyOptions")
      .def(py::init<>())
      .def_readwrite("rounds", &PurifyOptions::rounds)
      .def_readwrite("twirl_each_round", &PurifyOptions::twirl_each_round)
      .def_readwrite("align_each_round", &PurifyOptions::align_each_round)
      .def_readwrite("security", &PurifyOptions::security);

  m.def("purify_iterate", &purify_iterate, py::arg("state"),
        py::arg("opts") = PurifyOptions{});
  m.def("best_round", &best_round, py::arg("trace"));

  m.def("esd_threshold", &esd_threshold, py::arg("kind"),
        py::arg("theta") = std::numbers::pi / 4, py::arg("tol") = 1e-6);

  py::class_<ThresholdRow>(m, "ThresholdRow")
      .def_readonly("kind", &ThresholdRow::kind)
      .def_readonly("lc_km", &ThresholdRow::lc_km)
      .def_readonly("param_at_30km", &ThresholdRow::param_at_30km)
      .def_readonly("fidelity_at_30km", &ThresholdRow::fidelity_at_30km)
      .def_readonly("steering_threshold", &ThresholdRow::steering_threshold)
      .def_readonly("key_rate_threshold", &ThresholdRow::key_rate_threshold)
      .def_readonly("esd", &ThresholdRow::esd)
      .def_readonly("residual_concurrence", &ThresholdRow::residual_concurrence);

  m.def("threshold_table", &threshold_table,
        py::arg("opts") = KeyRateOptions{},
        py::arg("theta") = std::numbers::pi / 4);
}
