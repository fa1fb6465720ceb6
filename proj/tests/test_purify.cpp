#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qsdi/channels.hpp"
#include "qsdi/errors.hpp"
#include "qsdi/purify.hpp"
#include "qsdi/qmat.hpp"
#include "qsdi/states.hpp"

using namespace qsdi;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TwoQubitState random_state(std::mt19937& rng) {
  std::normal_distribution<double> g;
  CMatrix m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Complex(g(rng), g(rng));
  CMatrix rho = m * m.adjoint();
  rho /= rho.trace();
  return TwoQubitState(rho);
}

BellDiagonal werner(double f) {
  double g = (1 - f) / 3;
  return BellDiagonal{{f, g, g, g}};
}

// Bell weights of an arbitrary state, read off directly.
std::array<double, 4> bell_weights_of(const TwoQubitState& s) {
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) {
    CVector v = bell_ket(static_cast<BellIndex>(i));
    w[i] = (v.adjoint() * s.matrix() * v)(0, 0).real();
  }
  return w;
}

// Reference for one aligned round on Bell weights: swap the phi- and psi-
// weights, then apply the kept-branch weight map.
struct RefRound {
  std::array<double, 4> w;
  double succ;
};

RefRound ref_aligned_round(std::array<double, 4> w, bool align) {
  if (align) std::swap(w[1], w[3]);
  double phi = w[0] + w[1], psi = w[2] + w[3];
  double succ = phi * phi + psi * psi;
  return {{(w[0] * w[0] + w[1] * w[1]) / succ, 2 * w[0] * w[1] / succ,
           (w[2] * w[2] + w[3] * w[3]) / succ, 2 * w[2] * w[3] / succ},
          succ};
}

}  // namespace

TEST_CASE("pauli twirl projects onto the bell diagonal") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    TwoQubitState s = random_state(rng);
    std::array<double, 4> before = bell_weights_of(s);
    TwoQubitState t = pauli_twirl(s);
    CHECK(is_bell_diagonal(t));
    BellDiagonal after = as_bell_diagonal(t);
    for (int i = 0; i < 4; ++i)
      CHECK(after.weights[i] == doctest::Approx(before[i]).epsilon(1e-12));
    CHECK(max_abs(pauli_twirl(t).matrix() - t.matrix()) < 1e-12);
    CHECK(concurrence(t) <= concurrence(s) + 1e-12);
  }
}

TEST_CASE("twirled amplitude damping keeps fidelity, loses concurrence") {
  double gamma = 0.3;
  TwoQubitState damped = apply_one_sided(amplitude_damping(gamma),
                                         bell_state(BellIndex::phi_plus));
  double f = (2 - gamma + 2 * std::sqrt(1 - gamma)) / 4;
  CHECK(fidelity_phi_plus(damped) == doctest::Approx(f).epsilon(1e-12));
  CHECK(concurrence(damped) ==
        doctest::Approx(std::sqrt(1 - gamma)).epsilon(1e-9));

  TwoQubitState twirled = pauli_twirl(damped);
  CHECK(fidelity_phi_plus(twirled) == doctest::Approx(f).epsilon(1e-12));
  CHECK(concurrence(twirled) ==
        doctest::Approx(2 * f - 1).epsilon(1e-9));  // 0.687 < 0.837

  BellDiagonal w = as_bell_diagonal(twirled);
  CHECK(w.weights[1] ==
        doctest::Approx((2 - gamma - 2 * std::sqrt(1 - gamma)) / 4)
            .epsilon(1e-12));
  CHECK(w.weights[2] == doctest::Approx(gamma / 4).epsilon(1e-12));
  CHECK(w.weights[3] == doctest::Approx(gamma / 4).epsilon(1e-12));
}

TEST_CASE("align_error_basis swaps phi- with psi-") {
  auto weight = [](const TwoQubitState& s, BellIndex i) {
    CVector v = bell_ket(i);
    return (v.adjoint() * s.matrix() * v)(0, 0).real();
  };
  CHECK(weight(align_error_basis(bell_state(BellIndex::phi_minus)),
               BellIndex::psi_minus) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(weight(align_error_basis(bell_state(BellIndex::psi_minus)),
               BellIndex::phi_minus) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity_phi_plus(align_error_basis(bell_state(BellIndex::phi_plus))) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(weight(align_error_basis(bell_state(BellIndex::psi_plus)),
               BellIndex::psi_plus) == doctest::Approx(1.0).epsilon(1e-12));

  // Identity on the Werner line; unitary in general.
  TwoQubitState w = werner(0.7).to_state();
  CHECK(max_abs(align_error_basis(w).matrix() - w.matrix()) < 1e-12);
  std::mt19937 rng(3);
  TwoQubitState s = random_state(rng);
  CHECK(purity(align_error_basis(s)) ==
        doctest::Approx(purity(s)).epsilon(1e-12));
}

TEST_CASE("werner recurrence closed form") {
  WernerRound r = bbpssw_recurrence(0.7);
  CHECK(r.fidelity == doctest::Approx(0.5 / 0.68).epsilon(1e-12));
  CHECK(r.success_prob == doctest::Approx(0.68).epsilon(1e-12));

  WernerRound half = bbpssw_recurrence(0.5);
  CHECK(half.fidelity == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half.success_prob == doctest::Approx(5.0 / 9.0).epsilon(1e-12));

  CHECK(bbpssw_recurrence(1.0).fidelity == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bbpssw_recurrence(0.25).fidelity ==
        doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(bbpssw_recurrence(-0.1), std::domain_error);
  CHECK_THROWS_AS(bbpssw_recurrence(1.1), std::domain_error);
}

TEST_CASE("weight map hand cases") {
  // Two phi- pairs purify to a perfect phi+.
  RoundOutcome flip = bbpssw_weights(BellDiagonal{{0, 1, 0, 0}});
  CHECK(flip.success_prob == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(flip.state.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

  // A psi mixture stays in the psi sector.
  RoundOutcome psi = bbpssw_weights(BellDiagonal{{0, 0, 0.5, 0.5}});
  CHECK(psi.success_prob == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(psi.state.weights[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(psi.state.weights[3] == doctest::Approx(0.5).epsilon(1e-12));

  RoundOutcome mixed = bbpssw_weights(BellDiagonal{{0.6, 0.2, 0.15, 0.05}});
  CHECK(mixed.success_prob == doctest::Approx(0.68).epsilon(1e-12));
  CHECK(mixed.state.weights[0] == doctest::Approx(0.4 / 0.68).epsilon(1e-12));
  CHECK(mixed.state.weights[1] == doctest::Approx(0.24 / 0.68).epsilon(1e-12));

  CHECK_THROWS_AS(bbpssw_weights(BellDiagonal{{0, 0, 0, 0}}),
                  ZeroSuccessProbability);
}

TEST_CASE("weight map reduces to the recurrence on werner input") {
  for (double f : {0.3, 0.5, 0.7, 0.95}) {
    RoundOutcome out = bbpssw_weights(werner(f));
    WernerRound ref = bbpssw_recurrence(f);
    CHECK(out.state.weights[0] ==
          doctest::Approx(ref.fidelity).epsilon(1e-12));
    CHECK(out.success_prob ==
          doctest::Approx(ref.success_prob).epsilon(1e-12));
  }
}

TEST_CASE("exact circuit round matches the weight map") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::array<double, 4> w{uni(rng), uni(rng), uni(rng), uni(rng)};
    double total = w[0] + w[1] + w[2] + w[3];
    for (double& v : w) v /= total;
    BellDiagonal in{w};

    ExactRound circuit = bbpssw_exact(in.to_state());
    RoundOutcome map = bbpssw_weights(in);
    CHECK(circuit.success_prob ==
          doctest::Approx(map.success_prob).epsilon(1e-10));
    BellDiagonal out = as_bell_diagonal(circuit.state);
    for (int i = 0; i < 4; ++i)
      CHECK(out.weights[i] ==
            doctest::Approx(map.state.weights[i]).epsilon(1e-10));
  }
}

TEST_CASE("one raw circuit round lifts twirled amplitude-damping noise") {
  KrausChannel ch =
      from_distance(ChannelKind::amplitude_damping, {30, 24});
  TwoQubitState twirled = pauli_twirl(
      apply_one_sided(ch, bell_state(BellIndex::phi_plus)));
  double f0 = fidelity_phi_plus(twirled);
  CHECK(f0 == doctest::Approx(0.589256913475).epsilon(1e-9));
  ExactRound out = bbpssw_exact(twirled);
  CHECK(fidelity_phi_plus(out.state) > f0 + 0.01);
}

TEST_CASE("iterated distillation of amplitude damping at 30 km") {
  KrausChannel ch =
      from_distance(ChannelKind::amplitude_damping, {30, 24});
  TwoQubitState in = apply_one_sided(ch, bell_state(BellIndex::phi_plus));

  PurifyOptions opts;
  opts.rounds = 6;
  opts.security = {0.9, Binning::assign_zero};
  std::vector<PurifyRound> trace = purify_iterate(in, opts);
  REQUIRE(trace.size() == 7);

  // Reference: aligned weight-map iteration on the initial Bell weights.
  std::array<double, 4> w = bell_weights_of(in);
  for (int n = 1; n <= 6; ++n) {
    RefRound ref = ref_aligned_round(w, true);
    w = ref.w;
    CHECK(trace[n].fidelity == doctest::Approx(ref.w[0]).epsilon(1e-9));
    CHECK(trace[n].success_prob ==
          doctest::Approx(ref.succ).epsilon(1e-9));
  }

  // For one-sided amplitude damping the aligned first round returns the
  // input fidelity: F0 = ((1 + sqrt(1-gamma))/2)^2 makes the kept phi
  // branch mass equal F0.
  CHECK(trace[0].fidelity == doctest::Approx(0.589256913475).epsilon(1e-9));
  CHECK(trace[1].fidelity ==
        doctest::Approx(trace[0].fidelity).epsilon(1e-9));
  CHECK(trace[1].success_prob ==
        doctest::Approx(0.64325239843).epsilon(1e-9));
  CHECK(trace[2].fidelity == doctest::Approx(0.658796752598).epsilon(1e-9));
  CHECK(trace[6].fidelity == doctest::Approx(0.964208496097).epsilon(1e-9));

  // Entry 0 is the raw input.
  CHECK(trace[0].round == 0);
  CHECK(trace[0].success_prob == 1.0);
  CHECK(trace[0].yield == 1.0);

  double yield = 1;
  for (int n = 1; n <= 6; ++n) {
    yield *= trace[n].success_prob / 2;
    CHECK(trace[n].yield == doctest::Approx(yield).epsilon(1e-12));
    CHECK(trace[n].yield <= std::pow(2.0, -n) + 1e-12);
    CHECK(trace[n].effective_rate ==
          doctest::Approx(std::max(trace[n].key_rate, 0.0) * trace[n].yield)
              .epsilon(1e-12));
  }
}

TEST_CASE("plain iteration matches the weight map when twirl is off") {
  TwoQubitState in = werner(0.7).to_state();
  PurifyOptions opts;
  opts.rounds = 4;
  opts.twirl_each_round = false;
  opts.align_each_round = false;
  std::vector<PurifyRound> trace = purify_iterate(in, opts);

  std::array<double, 4> w = bell_weights_of(in);
  for (int n = 1; n <= 4; ++n) {
    RefRound ref = ref_aligned_round(w, false);
    w = ref.w;
    CHECK(trace[n].fidelity == doctest::Approx(ref.w[0]).epsilon(1e-10));
    CHECK(trace[n].success_prob ==
          doctest::Approx(ref.succ).epsilon(1e-10));
  }
  // Round 1 from Werner input is the classic recurrence step.
  CHECK(trace[1].fidelity ==
        doctest::Approx(bbpssw_recurrence(0.7).fidelity).epsilon(1e-10));
}

TEST_CASE("round count validation and degenerate traces") {
  TwoQubitState in = werner(0.8).to_state();
  PurifyOptions none;
  none.rounds = 0;
  CHECK(purify_iterate(in, none).size() == 1);

  PurifyOptions over;
  over.rounds = 13;
  CHECK_THROWS_AS(purify_iterate(in, over), std::domain_error);
  PurifyOptions negative;
  negative.rounds = -1;
  CHECK_THROWS_AS(purify_iterate(in, negative), std::domain_error);
}

TEST_CASE("best_round picks the earliest maximum") {
  std::vector<PurifyRound> trace;
  trace.push_back({0, 0.7, 1, 1, 0.1, 0.5});
  trace.push_back({1, 0.8, 0.6, 0.3, 0.2, 0.5});
  trace.push_back({2, 0.9, 0.6, 0.09, 0.3, 0.4});
  CHECK(best_round(trace) == 0);
  trace[1].effective_rate = 0.6;
  CHECK(best_round(trace) == 1);
  CHECK_THROWS_AS(best_round({}), std::domain_error);
}
