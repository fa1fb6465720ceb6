#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <functional>

#include "doctest.h"
#include "qsdi/errors.hpp"
#include "qsdi/protocol.hpp"

using namespace qsdi;

namespace {

constexpr double pi = 3.14159265358979323846;

// Reference entropy written with natural logs only.
double h2_ref(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -(p * std::log(p) + (1 - p) * std::log(1 - p)) / std::log(2.0);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol) {
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    double mid = (lo + hi) / 2;
    if ((f(mid) > 0) == (flo > 0))
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  for (double p : {0.01, 0.1, 0.3, 0.42, 0.77, 0.99}) {
    CHECK(binary_entropy(p) == doctest::Approx(h2_ref(p)).epsilon(1e-12));
    CHECK(binary_entropy(p) ==
          doctest::Approx(binary_entropy(1 - p)).epsilon(1e-12));
  }
}

TEST_CASE("measurement model effects") {
  MeasurementModel m{0.7};
  for (int y : {0, 1}) {
    CMatrix total = CMatrix::Zero(2, 2);
    for (int b : {0, 1, 2}) total += m.bob_effect(y, b);
    CHECK((total - CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    CMatrix no_click = m.bob_effect(y, 2);
    CHECK((no_click - 0.3 * CMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-12);
  }
  for (int x : {0, 1}) {
    CMatrix proj = m.alice_projector(x, 0);
    CHECK((proj * proj - proj).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("efficiency outside [0, 1] is rejected") {
  CHECK_THROWS_AS(statistics(bell_state(BellIndex::phi_plus), {1.2}),
                  std::domain_error);
  CHECK_THROWS_AS(statistics(bell_state(BellIndex::phi_plus), {-0.1}),
                  std::domain_error);
}

TEST_CASE("no-click probability is exactly 1 - eta") {
  ProbabilityTable t =
      statistics(bell_state(BellIndex::phi_plus), MeasurementModel{0.9});
  for (int x : {0, 1})
    for (int y : {0, 1})
      CHECK(std::abs(t.no_click_probability(x, y) - 0.1) < 1e-14);
}

TEST_CASE("table is normalized and non-signaling") {
  ProbabilityTable t = statistics(psi_theta(0.6), MeasurementModel{0.8});
  for (int x : {0, 1}) {
    for (int y : {0, 1}) {
      double total = 0;
      for (int a : {0, 1})
        for (int b : {0, 1, 2}) total += t.p[x][y][a][b];
      CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(t.alice_expectation(x) ==
          doctest::Approx(x == 0 ? std::cos(1.2) : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("steering parameter closed forms") {
  // Ideal detectors: S2(theta) = (1 + sin 2 theta) / 2.
  for (int i = 0; i <= 8; ++i) {
    double theta = pi / 2 * i / 8;
    ProbabilityTable t = statistics(psi_theta(theta), MeasurementModel{1.0});
    CHECK(steering_parameter(t, Binning::assign_zero) ==
          doctest::Approx((1 + std::sin(2 * theta)) / 2).epsilon(1e-9));
  }

  // Finite efficiency mixes in (1 - eta) <A_x> per setting.
  for (double eta : {0.5, 0.8, 0.95}) {
    for (double theta : {0.3, 0.7, pi / 4}) {
      ProbabilityTable t = statistics(psi_theta(theta), MeasurementModel{eta});
      double ideal = (1 + std::sin(2 * theta)) / 2;
      double expected = eta * ideal + (1 - eta) * std::cos(2 * theta) / 2;
      CHECK(steering_parameter(t, Binning::assign_zero) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }

  // One-sided noise at eta = 1.
  auto s2_for = [](const KrausChannel& ch) {
    ProbabilityTable t = statistics(
        apply_one_sided(ch, bell_state(BellIndex::phi_plus)),
        MeasurementModel{1.0});
    return steering_parameter(t, Binning::assign_zero);
  };
  CHECK(s2_for(dephasing(0.2)) == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(s2_for(depolarizing(0.3)) == doctest::Approx(0.7).epsilon(1e-9));
  double g = 0.4;
  CHECK(s2_for(amplitude_damping(g)) ==
        doctest::Approx((1 - g + std::sqrt(1 - g)) / 2).epsilon(1e-9));
}

TEST_CASE("discard binning renormalizes over clicks") {
  ProbabilityTable t =
      statistics(bell_state(BellIndex::phi_plus), MeasurementModel{0.6});
  CHECK(t.correlator(0, 0, Binning::discard) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.correlator(0, 0, Binning::assign_zero) ==
        doctest::Approx(0.6).epsilon(1e-12));

  ProbabilityTable dead =
      statistics(bell_state(BellIndex::phi_plus), MeasurementModel{0.0});
  CHECK_THROWS_AS(dead.correlator(0, 0, Binning::discard), std::domain_error);
}

TEST_CASE("eve entropy bound") {
  CHECK(eve_entropy_bound(1.0) == 1.0);
  CHECK(eve_entropy_bound(steering_lhs_bound) == 0.0);
  CHECK(eve_entropy_bound(0.3) == 0.0);

  double s2 = 0.9;
  double expected = 1 - h2_ref((1 + std::sqrt(2 * s2 * s2 - 1)) / 2);
  CHECK(eve_entropy_bound(s2) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(eve_entropy_bound(0.9) == doctest::Approx(0.511).epsilon(1e-3));

  double prev = 0;
  for (double v = 0.72; v <= 1.0; v += 0.01) {
    double b = eve_entropy_bound(v);
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("conditional entropy keeps the no-click symbol") {
  // Perfect correlations: the only uncertainty about Alice left after
  // seeing Bob's symbol is the no-click branch, worth (1 - eta) H(A).
  ProbabilityTable t =
      statistics(bell_state(BellIndex::phi_plus), MeasurementModel{0.9});
  CHECK(entropy_alice_given_bob(t, Binning::assign_zero) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK(entropy_alice_given_bob(t, Binning::discard) ==
        doctest::Approx(0.0).epsilon(1e-12));

  ProbabilityTable ideal =
      statistics(bell_state(BellIndex::phi_plus), MeasurementModel{1.0});
  CHECK(entropy_alice_given_bob(ideal, Binning::assign_zero) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("key rate report is internally consistent") {
  KeyRateReport r = evaluate_key_rate(bell_state(BellIndex::phi_plus),
                                      {0.9, Binning::assign_zero});
  CHECK(r.key_rate == r.h_ae_bound - r.h_ab);
  CHECK(r.key_rate_clamped == std::max(0.0, r.key_rate));
  CHECK(r.eta_b == 0.9);
  CHECK(r.s2 == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(r.h_ab == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.key_rate == doctest::Approx(0.4113474471156222).epsilon(1e-10));
  CHECK(r.concurrence == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.secure);

  KeyRateReport ideal = evaluate_key_rate(bell_state(BellIndex::phi_plus));
  CHECK(ideal.key_rate == 1.0);
  CHECK(ideal.s2 == 1.0);
  CHECK(ideal.h_ab == 0.0);

  // Post-selected numbers are never certified.
  KeyRateReport d = evaluate_key_rate(bell_state(BellIndex::phi_plus),
                                      {0.9, Binning::discard});
  CHECK_FALSE(d.secure);
  CHECK(d.key_rate > 0);

  KeyRateReport separable = evaluate_key_rate(psi_theta(0.05));
  CHECK(separable.h_ae_bound == 0.0);
  CHECK(separable.key_rate <= 0);
  CHECK_FALSE(separable.secure);
  CHECK(separable.key_rate_clamped == 0.0);
}

TEST_CASE("minimum efficiency for the ideal singlet fraction") {
  double eta = minimum_efficiency(bell_state(BellIndex::phi_plus));

  // Independent root: for phi+ the rate reduces to
  // 1 - h2((1 + sqrt(2 eta^2 - 1)) / 2) - (1 - eta).
  double expected = bisect(
      [](double e) {
        double bound = e > steering_lhs_bound
                           ? 1 - h2_ref((1 + std::sqrt(2 * e * e - 1)) / 2)
                           : 0.0;
        return bound - (1 - e);
      },
      steering_lhs_bound, 1.0, 1e-9);
  CHECK(eta == doctest::Approx(expected).epsilon(1e-4));
  CHECK(eta == doctest::Approx(0.7964434623718262).epsilon(1e-4));

  CHECK(evaluate_key_rate(bell_state(BellIndex::phi_plus), {eta + 1e-4})
            .key_rate > 0);
  CHECK(evaluate_key_rate(bell_state(BellIndex::phi_plus), {eta - 1e-4})
            .key_rate < 0);

  CHECK_THROWS_AS(minimum_efficiency(psi_theta(0.05)), NeverSecure);
}

TEST_CASE("critical noise thresholds") {
  NoiseThresholds deph = critical_noise(ChannelKind::dephasing, pi / 4);
  CHECK(deph.steering == doctest::Approx(1 - std::sqrt(0.5)).epsilon(1e-5));
  // Dephasing leaves the key settings noiseless, so both zeros coincide.
  CHECK(deph.key_rate == doctest::Approx(deph.steering).epsilon(1e-5));

  NoiseThresholds depol = critical_noise(ChannelKind::depolarizing, pi / 4);
  CHECK(depol.steering == doctest::Approx(1 - std::sqrt(0.5)).epsilon(1e-5));
  CHECK(depol.key_rate == doctest::Approx(0.142983913422).epsilon(1e-4));
  CHECK(depol.key_rate < depol.steering);

  // Independent root for the depolarizing key-rate zero at eta = 1:
  // s2 = 1 - q and H(A|B) comes from the two-symbol table
  // {(2-q)/4, q/4} per matching pair.
  double expected = bisect(
      [](double q) {
        double bound = 1 - q > steering_lhs_bound
                           ? 1 - h2_ref((1 + std::sqrt(2 * (1 - q) * (1 - q) -
                                                       1)) /
                                        2)
                           : 0.0;
        return bound - h2_ref(q / 2);
      },
      0.01, 0.29, 1e-9);
  CHECK(depol.key_rate == doctest::Approx(expected).epsilon(1e-4));

  NoiseThresholds ad = critical_noise(ChannelKind::amplitude_damping, pi / 4);
  CHECK(ad.steering == doctest::Approx(0.375830173492).epsilon(1e-4));
  CHECK(ad.key_rate == doctest::Approx(0.194354534149).epsilon(1e-4));

  CHECK_THROWS_AS(critical_noise(ChannelKind::dephasing, 0.05), NeverSecure);
}

TEST_CASE("theta_min satisfies its defining equation") {
  double tm = theta_min();
  CHECK(tm == doctest::Approx(std::asin(std::sqrt(2.0) - 1) / 2)
                  .epsilon(1e-12));
  CHECK((1 + std::sin(2 * tm)) / 2 ==
        doctest::Approx(steering_lhs_bound).epsilon(1e-12));

  // Strictly inside (theta_min, pi/2 - theta_min) the bound is violated.
  auto s2_at = [](double theta) {
    ProbabilityTable t = statistics(psi_theta(theta), MeasurementModel{1.0});
    return steering_parameter(t, Binning::assign_zero);
  };
  CHECK(s2_at(tm + 1e-3) > steering_lhs_bound);
  CHECK(s2_at(tm - 1e-3) < steering_lhs_bound);
  CHECK(s2_at(pi / 2 - tm - 1e-3) > steering_lhs_bound);
  CHECK(s2_at(pi / 2 - tm + 1e-3) < steering_lhs_bound);
}
