#include "qsdi/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsdi/channels.hpp"
#include "qsdi/protocol.hpp"
#include "qsdi/purify.hpp"
#include "qsdi/states.hpp"

namespace qsdi {

namespace {

double max_abs(const CMatrix& m) {
  double worst = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

CMatrix bell_columns() {
  CMatrix b(4, 4);
  for (int i = 0; i < 4; ++i) b.col(i) = bell_ket(static_cast<BellIndex>(i));
  return b;
}

/// Largest Bell-basis off-diagonal magnitude; zero iff Bell-diagonal.
double bell_offdiag(const TwoQubitState& s) {
  CMatrix b = bell_columns();
  CMatrix r = b.adjoint() * s.matrix() * b;
  double worst = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) worst = std::max(worst, std::abs(r(i, j)));
  return worst;
}

TwoQubitState random_state(std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  CMatrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  CMatrix rho = m * m.adjoint();
  return TwoQubitState(rho / rho.trace().real());
}

double werner_success(double f) {
  return f * f + 2.0 / 3.0 * f * (1 - f) + 5.0 / 9.0 * (1 - f) * (1 - f);
}

class Suite {
 public:
  void add(const std::string& name, double error, double tolerance) {
    checks_.push_back({name, error, tolerance, error <= tolerance});
  }

  std::vector<ValidationCheck> take() { return std::move(checks_); }

 private:
  std::vector<ValidationCheck> checks_;
};

void check_channels(Suite& suite) {
  const struct {
    ChannelKind kind;
    double param;
    const char* name;
  } cases[] = {
      {ChannelKind::dephasing, 0.3, "kraus_completeness_dephasing"},
      {ChannelKind::depolarizing, 0.4, "kraus_completeness_depolarizing"},
      {ChannelKind::amplitude_damping, 0.5, "kraus_completeness_damping"},
  };
  double output_err = 0;
  for (const auto& c : cases) {
    KrausChannel ch = make_channel(c.kind, c.param);
    CMatrix sum = CMatrix::Zero(2, 2);
    for (const CMatrix& k : ch.ops) sum += k.adjoint() * k;
    suite.add(c.name, max_abs(sum - identity(2)), 1e-12);

    // Output of a valid input must reconstruct as a valid state; measure
    // the worst constraint violation directly.
    TwoQubitState out = apply_one_sided(ch, psi_theta(0.6));
    const CMatrix& m = out.matrix();
    double err = max_abs(m - m.adjoint());
    err = std::max(err, std::abs(m.trace().real() - 1.0));
    for (Complex ev : eigvals_general(m))
      err = std::max(err, std::max(0.0, -ev.real()));
    output_err = std::max(output_err, err);
  }
  suite.add("channel_output_valid", output_err, 1e-10);

  // Two dephasing passes compose to one with 1-2p multiplicative; two
  // depolarizing passes with 1-q multiplicative.
  TwoQubitState probe = psi_theta(0.7);
  {
    double p1 = 0.11, p2 = 0.17;
    double p12 = p1 + p2 - 2 * p1 * p2;
    TwoQubitState seq = apply_one_sided(
        dephasing(p2), apply_one_sided(dephasing(p1), probe));
    TwoQubitState direct = apply_one_sided(dephasing(p12), probe);
    suite.add("dephasing_composition", max_abs(seq.matrix() - direct.matrix()),
              1e-10);
  }
  {
    double q1 = 0.2, q2 = 0.3;
    double q12 = 1 - (1 - q1) * (1 - q2);
    TwoQubitState seq = apply_one_sided(
        depolarizing(q2),
        apply_one_sided(depolarizing(q1), probe));
    TwoQubitState direct = apply_one_sided(depolarizing(q12), probe);
    suite.add("depolarizing_composition",
              max_abs(seq.matrix() - direct.matrix()), 1e-10);
  }

  double mono = 0;
  for (ChannelKind kind : {ChannelKind::dephasing, ChannelKind::depolarizing,
                           ChannelKind::amplitude_damping}) {
    double prev = -1;
    for (int i = 0; i <= 80; ++i) {
      double p = noise_at_distance(kind, {i * 1.0, default_coherence_km(kind)});
      mono = std::max(mono, prev - p);
      prev = p;
    }
  }
  suite.add("distance_param_monotone", mono, 0.0);
}

void check_statistics(Suite& suite) {
  MeasurementModel model;
  model.eta_b = 0.7;
  double povm_err = 0;
  for (int y = 0; y < 2; ++y) {
    CMatrix sum = CMatrix::Zero(2, 2);
    for (int b = 0; b < 3; ++b) sum += model.bob_effect(y, b);
    povm_err = std::max(povm_err, max_abs(sum - identity(2)));
  }
  suite.add("povm_completeness", povm_err, 1e-12);

  TwoQubitState s =
      apply_one_sided(amplitude_damping(0.25), psi_theta(0.55));
  ProbabilityTable table = statistics(s, model);
  double norm_err = 0, signal_err = 0, click_err = 0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      double total = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 3; ++b) total += table.p[x][y][a][b];
      norm_err = std::max(norm_err, std::abs(total - 1.0));
      click_err = std::max(
          click_err, std::abs(table.no_click_probability(x, y) - (1 - 0.7)));
    }
    for (int a = 0; a < 2; ++a) {
      double m0 = 0, m1 = 0;
      for (int b = 0; b < 3; ++b) {
        m0 += table.p[x][0][a][b];
        m1 += table.p[x][1][a][b];
      }
      signal_err = std::max(signal_err, std::abs(m0 - m1));
    }
  }
  suite.add("table_normalization", norm_err, 1e-12);
  suite.add("no_signaling_alice", signal_err, 1e-10);
  suite.add("no_click_probability_exact", click_err, 1e-14);
}

void check_formulas(Suite& suite) {
  TwoQubitState phi = bell_state(BellIndex::phi_plus);
  {
    double theta = 0.5;
    KeyRateReport r = evaluate_key_rate(psi_theta(theta));
    suite.add("steering_theta_formula",
              std::abs(r.s2 - 0.5 * (1 + std::sin(2 * theta))), 1e-9);
    suite.add("concurrence_theta_formula",
              std::abs(concurrence(psi_theta(theta)) - std::sin(2 * theta)),
              1e-9);
  }
  {
    double p = 0.23;
    TwoQubitState s = apply_one_sided(dephasing(p), phi);
    suite.add("steering_dephasing_formula",
              std::abs(evaluate_key_rate(s).s2 - (1 - p)), 1e-9);
    suite.add("concurrence_dephasing_formula",
              std::abs(concurrence(s) - std::abs(1 - 2 * p)), 1e-9);
  }
  {
    double q = 0.37;
    TwoQubitState s = apply_one_sided(depolarizing(q), phi);
    suite.add("steering_depolarizing_formula",
              std::abs(evaluate_key_rate(s).s2 - (1 - q)), 1e-9);
    suite.add("concurrence_depolarizing_formula",
              std::abs(concurrence(s) - std::max(0.0, 1 - 1.5 * q)), 1e-9);
  }
  {
    double g = 0.41;
    TwoQubitState s = apply_one_sided(amplitude_damping(g), phi);
    suite.add("steering_damping_formula",
              std::abs(evaluate_key_rate(s).s2 -
                       0.5 * (1 - g + std::sqrt(1 - g))),
              1e-9);
    suite.add("concurrence_damping_formula",
              std::abs(concurrence(s) - std::sqrt(1 - g)), 1e-9);
  }

  double endpoint_err =
      std::max(std::abs(eve_entropy_bound(steering_lhs_bound)),
               std::abs(eve_entropy_bound(1.0) - 1.0));
  suite.add("entropy_bound_endpoints", endpoint_err, 0.0);
  double mono = 0, prev = -1;
  for (int i = 0; i <= 100; ++i) {
    double s2 = 0.70 + i * 0.003;
    double bound = eve_entropy_bound(std::min(s2, 1.0));
    mono = std::max(mono, prev - bound);
    prev = bound;
  }
  suite.add("entropy_bound_monotone", mono, 0.0);

  // Ideal state, lossy detector: the no-click branch contributes exactly
  // (1-eta) bits of conditional entropy.
  KeyRateOptions opts;
  opts.eta_b = 0.9;
  suite.add("conditional_entropy_efficiency",
            std::abs(evaluate_key_rate(phi, opts).h_ab - 0.1), 1e-12);
}

void check_twirl(Suite& suite) {
  TwoQubitState s =
      apply_one_sided(amplitude_damping(0.3), psi_theta(0.6));
  TwoQubitState t = pauli_twirl(s);
  suite.add("twirl_fidelity_invariant",
            std::abs(fidelity_phi_plus(t) - fidelity_phi_plus(s)), 1e-12);
  suite.add("twirl_bell_diagonal", bell_offdiag(t), 1e-12);
  suite.add("twirl_idempotent",
            max_abs(pauli_twirl(t).matrix() - t.matrix()), 1e-12);
  suite.add("twirl_concurrence_monotone",
            std::max(0.0, concurrence(t) - concurrence(s)), 1e-12);
}

void check_recurrence(Suite& suite, std::mt19937& rng) {
  double fixed_err = std::max(
      {std::abs(bbpssw_recurrence(1.0).fidelity - 1.0),
       std::abs(bbpssw_recurrence(0.5).fidelity - 0.5),
       std::abs(bbpssw_recurrence(0.25).fidelity - 0.25)});
  suite.add("recurrence_fixed_points", fixed_err, 1e-12);

  // 0.5 is repelling: above it the map climbs to 1, below it falls away.
  double f = 0.55;
  for (int i = 0; i < 200; ++i) f = bbpssw_recurrence(f).fidelity;
  double conv_err =
      std::max(1.0 - f, bbpssw_recurrence(0.45).fidelity - 0.45);
  suite.add("recurrence_convergence", conv_err, 1e-9);

  std::uniform_real_distribution<double> uni(0.3, 1.0);
  double werner_err = 0;
  for (int i = 0; i < 100; ++i) {
    double f0 = uni(rng);
    BellDiagonal w{{f0, (1 - f0) / 3, (1 - f0) / 3, (1 - f0) / 3}};
    ExactRound round = bbpssw_exact(w.to_state());
    werner_err =
        std::max(werner_err, std::abs(fidelity_phi_plus(round.state) -
                                      bbpssw_recurrence(f0).fidelity));
    werner_err = std::max(
        werner_err, std::abs(round.success_prob - werner_success(f0)));
  }
  suite.add("circuit_matches_recurrence", werner_err, 1e-10);

  std::uniform_real_distribution<double> raw(0.0, 1.0);
  double map_err = 0;
  for (int i = 0; i < 100; ++i) {
    std::array<double, 4> w{raw(rng), raw(rng), raw(rng), raw(rng)};
    double total = w[0] + w[1] + w[2] + w[3];
    for (double& v : w) v /= total;
    BellDiagonal in{w};
    RoundOutcome mapped = bbpssw_weights(in);
    ExactRound circuit = bbpssw_exact(in.to_state());
    BellDiagonal out = as_bell_diagonal(circuit.state);
    for (int k = 0; k < 4; ++k)
      map_err = std::max(map_err,
                         std::abs(mapped.state.weights[k] - out.weights[k]));
    map_err =
        std::max(map_err, std::abs(mapped.success_prob - circuit.success_prob));
  }
  suite.add("circuit_matches_weight_map", map_err, 1e-10);
}

void check_key_rate(Suite& suite) {
  TwoQubitState s = apply_one_sided(dephasing(0.1), psi_theta(0.65));
  KeyRateOptions opts;
  opts.eta_b = 0.85;
  KeyRateReport r = evaluate_key_rate(s, opts);
  double identity_err = std::abs(r.key_rate - (r.h_ae_bound - r.h_ab));
  identity_err = std::max(
      identity_err, std::abs(r.key_rate_clamped - std::max(r.key_rate, 0.0)));
  suite.add("key_rate_identity", identity_err, 0.0);

  for (ChannelKind kind : {ChannelKind::dephasing, ChannelKind::depolarizing,
                           ChannelKind::amplitude_damping}) {
    const int n = 50;
    double max_param = max_noise_param(kind);
    std::vector<std::vector<double>> rate(n, std::vector<double>(n));
    TwoQubitState phi = bell_state(BellIndex::phi_plus);
    for (int i = 0; i < n; ++i) {
      double param = max_param * i / (n - 1);
      TwoQubitState noisy = apply_one_sided(make_channel(kind, param), phi);
      for (int j = 0; j < n; ++j) {
        KeyRateOptions grid_opts;
        grid_opts.eta_b = 0.3 + 0.7 * j / (n - 1);
        rate[i][j] = evaluate_key_rate(noisy, grid_opts).key_rate_clamped;
      }
    }
    double eta_viol = 0, noise_viol = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j + 1 < n; ++j)
        eta_viol = std::max(eta_viol, rate[i][j] - rate[i][j + 1]);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i + 1 < n; ++i)
        noise_viol = std::max(noise_viol, rate[i + 1][j] - rate[i][j]);
    std::string kind_name =
        kind == ChannelKind::dephasing
            ? "dephasing"
            : (kind == ChannelKind::depolarizing ? "depolarizing" : "damping");
    suite.add("clamped_rate_monotone_eta_" + kind_name, eta_viol, 1e-12);
    suite.add("clamped_rate_monotone_noise_" + kind_name, noise_viol, 1e-12);
  }
}

void check_structure(Suite& suite, std::mt19937& rng) {
  TwoQubitState a = random_state(rng);
  TwoQubitState b = random_state(rng);
  CMatrix joint = tensor(a.matrix(), b.matrix());
  double err =
      max_abs(partial_trace(joint, {0, 1}) - a.matrix());
  err = std::max(err, max_abs(partial_trace(joint, {2, 3}) - b.matrix()));
  err = std::max(
      err, std::abs(partial_trace(joint, {1, 2}).trace().real() - 1.0));
  suite.add("tensor_partial_trace_roundtrip", err, 1e-12);

  BellDiagonal w{{0.4, 0.3, 0.2, 0.1}};
  BellDiagonal back = as_bell_diagonal(w.to_state());
  double round_err = 0;
  for (int k = 0; k < 4; ++k)
    round_err = std::max(round_err, std::abs(back.weights[k] - w.weights[k]));
  round_err =
      std::max(round_err, std::abs(fidelity_phi_plus(w.to_state()) - 0.4));
  suite.add("bell_weights_roundtrip", round_err, 1e-12);
}

void check_purify(Suite& suite) {
  KrausChannel ch =
      from_distance(ChannelKind::dephasing, {30.0, 40.0});
  TwoQubitState s = apply_one_sided(ch, bell_state(BellIndex::phi_plus));
  PurifyOptions opts;
  opts.rounds = 6;
  std::vector<PurifyRound> trace = purify_iterate(s, opts);
  double yield_err = 0, fid_err = 0, succ_err = 0;
  for (const PurifyRound& r : trace) {
    yield_err = std::max(yield_err, r.yield - std::pow(2.0, -r.round));
    succ_err = std::max({succ_err, -r.success_prob, r.success_prob - 1.0});
  }
  for (size_t i = 0; i + 1 < trace.size(); ++i)
    if (trace[i].fidelity > 0.5)
      fid_err = std::max(fid_err, trace[i].fidelity - trace[i + 1].fidelity);
  suite.add("purify_yield_bound", yield_err, 1e-12);
  suite.add("purify_fidelity_monotone", fid_err, 1e-9);
  suite.add("purify_success_in_range", succ_err, 0.0);
}

}  // namespace

std::vector<ValidationCheck> run_validation() {
  Suite suite;
  std::mt19937 rng(0x5d1c0de);
  check_channels(suite);
  check_statistics(suite);
  check_formulas(suite);
  check_twirl(suite);
  check_recurrence(suite, rng);
  check_key_rate(suite);
  check_structure(suite, rng);
  check_purify(suite);
  return suite.take();
}

bool all_passed(const std::vector<ValidationCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

}  // namespace qsdi
