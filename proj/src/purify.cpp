#include "qsdi/purify.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qsdi/errors.hpp"

namespace qsdi {

TwoQubitState pauli_twirl(const TwoQubitState& s) {
  const CMatrix paulis[4] = {identity(2), sigma_x(), sigma_y(), sigma_z()};
  CMatrix out = CMatrix::Zero(4, 4);
  for (const CMatrix& g : paulis) {
    CMatrix u = tensor(g, g);
    out += u * s.matrix() * u.adjoint();
  }
  return TwoQubitState(0.25 * out);
}

TwoQubitState align_error_basis(const TwoQubitState& s) {
  const Complex i(0, 1);
  const double r = 1.0 / std::numbers::sqrt2;
  CMatrix u = tensor(r * (identity(2) - i * sigma_x()),
                     r * (identity(2) + i * sigma_x()));
  return TwoQubitState(u * s.matrix() * u.adjoint());
}

WernerRound bbpssw_recurrence(double fidelity) {
  if (fidelity < 0 || fidelity > 1)
    throw std::domain_error("bbpssw_recurrence: fidelity outside [0, 1]");
  const double f = fidelity, g = 1 - fidelity;
  const double succ = f * f + (2.0 / 3.0) * f * g + (5.0 / 9.0) * g * g;
  return {(f * f + g * g / 9.0) / succ, succ};
}

RoundOutcome bbpssw_weights(const BellDiagonal& in) {
  const auto& w = in.weights;
  const double phi = w[0] + w[1], psi = w[2] + w[3];
  const double succ = phi * phi + psi * psi;
  if (succ < 1e-14)
    throw ZeroSuccessProbability("bbpssw_weights: kept-branch mass below 1e-14");
  return {BellDiagonal{{(w[0] * w[0] + w[1] * w[1]) / succ,
                        2 * w[0] * w[1] / succ,
                        (w[2] * w[2] + w[3] * w[3]) / succ,
                        2 * w[2] * w[3] / succ}},
          succ};
}

ExactRound bbpssw_exact(const TwoQubitState& s) {
  // Qubit order (A1, B1, A2, B2); pair 1 is kept, pair 2 sacrificed.
  CMatrix two = tensor(s.matrix(), s.matrix());
  CMatrix u = cnot(4, 1, 3) * cnot(4, 0, 2);
  CMatrix evolved = u * two * u.adjoint();
  CMatrix equal = CMatrix::Zero(4, 4);
  equal(0, 0) = 1;
  equal(3, 3) = 1;
  CMatrix proj = tensor(identity(4), equal);
  CMatrix reduced = partial_trace(proj * evolved * proj, {0, 1});
  const double succ = reduced.trace().real();
  if (succ < 1e-14)
    throw ZeroSuccessProbability("bbpssw_exact: kept-branch mass below 1e-14");
  return {TwoQubitState(reduced / succ), succ};
}

std::vector<PurifyRound> purify_iterate(const TwoQubitState& s,
                                        const PurifyOptions& opts) {
  if (opts.rounds < 0 || opts.rounds > 12)
    throw std::domain_error("purify_iterate: rounds outside [0, 12]");
  std::vector<PurifyRound> trace;
  trace.reserve(opts.rounds + 1);
  TwoQubitState cur = s;
  double yield = 1;
  auto record = [&](int n, double success) {
    KeyRateReport k = evaluate_key_rate(cur, opts.security);
    trace.push_back({n, fidelity_phi_plus(cur), success, yield, k.key_rate,
                     k.key_rate_clamped * yield});
  };
  record(0, 1.0);
  for (int n = 1; n <= opts.rounds; ++n) {
    TwoQubitState stage = opts.twirl_each_round || !is_bell_diagonal(cur)
                              ? pauli_twirl(cur)
                              : cur;
    if (opts.align_each_round) stage = align_error_basis(stage);
    ExactRound out = bbpssw_exact(stage);
    cur = out.state;
    yield *= out.success_prob / 2;
    record(n, out.success_prob);
  }
  return trace;
}

int best_round(const std::vector<PurifyRound>& trace) {
  if (trace.empty()) throw std::domain_error("best_round: empty trace");
  int best = 0;
  for (int i = 1; i < static_cast<int>(trace.size()); ++i)
    if (trace[i].effective_rate > trace[best].effective_rate) best = i;
  return trace[best].round;
}

}  // namespace qsdi
