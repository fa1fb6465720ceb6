#include "qsdi/protocol.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "qsdi/errors.hpp"

namespace qsdi {

namespace {

constexpr double kSign[2] = {+1.0, -1.0};

double plogp(double p) {
  if (p <= 0) return 0;
  return -p * std::log2(p);
}

/// Bisection for the largest x in [lo, hi] with pred(x) true, assuming a
/// single true-to-false transition on the bracket.
double bisect_transition(const std::function<bool(double)>& pred, double lo,
                         double hi, double tol) {
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (pred(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double binary_entropy(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

CMatrix MeasurementModel::alice_projector(int x, int a) const {
  if (x < 0 || x > 1 || a < 0 || a > 1)
    throw std::domain_error("alice_projector: index out of range");
  const CMatrix obs = x == 0 ? sigma_z() : sigma_x();
  return 0.5 * (identity(2) + kSign[a] * obs);
}

CMatrix MeasurementModel::bob_effect(int y, int b) const {
  if (y < 0 || y > 1 || b < 0 || b > 2)
    throw std::domain_error("bob_effect: index out of range");
  if (b == 2) return (1 - eta_b) * identity(2);
  const CMatrix obs = y == 0 ? sigma_z() : sigma_x();
  return eta_b * 0.5 * (identity(2) + kSign[b] * obs);
}

ProbabilityTable statistics(const TwoQubitState& s, const MeasurementModel& m) {
  if (m.eta_b < 0 || m.eta_b > 1)
    throw std::domain_error("statistics: eta_b outside [0, 1]");
  ProbabilityTable t;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 3; ++b) {
          double v = (tensor(m.alice_projector(x, a), m.bob_effect(y, b)) *
                      s.matrix())
                         .trace()
                         .real();
          // clamp trace residue; anything materially negative is a bug
          if (v < 0 && v > -1e-14) v = 0;
          t.p[x][y][a][b] = v;
        }
  return t;
}

double ProbabilityTable::correlator(int x, int y, Binning binning) const {
  if (binning == Binning::assign_zero) {
    double c = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 3; ++b)
        c += kSign[a] * (b == 1 ? -1.0 : 1.0) * p[x][y][a][b];
    return c;
  }
  double c = 0, clicks = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      c += kSign[a] * kSign[b] * p[x][y][a][b];
      clicks += p[x][y][a][b];
    }
  if (clicks <= 1e-15)
    throw std::domain_error("correlator: no click events to post-select on");
  return c / clicks;
}

double ProbabilityTable::alice_expectation(int x) const {
  double e = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b) e += kSign[a] * p[x][0][a][b];
  return e;
}

double ProbabilityTable::no_click_probability(int x, int y) const {
  return p[x][y][0][2] + p[x][y][1][2];
}

double steering_parameter(const ProbabilityTable& t, Binning binning) {
  return 0.5 * (t.correlator(0, 0, binning) + t.correlator(1, 1, binning));
}

double entropy_alice_given_bob(const ProbabilityTable& t, Binning binning) {
  const int n_bob = binning == Binning::assign_zero ? 3 : 2;
  double norm = 1;
  if (binning == Binning::discard) {
    norm = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) norm += t.p[0][0][a][b];
    if (norm <= 1e-15)
      throw std::domain_error("entropy_alice_given_bob: no click events");
  }
  double joint = 0, bob = 0;
  for (int b = 0; b < n_bob; ++b) {
    bob += plogp((t.p[0][0][0][b] + t.p[0][0][1][b]) / norm);
    for (int a = 0; a < 2; ++a) joint += plogp(t.p[0][0][a][b] / norm);
  }
  return joint - bob;
}

double eve_entropy_bound(double s2, BoundMethod method) {
  if (method != BoundMethod::steering_analytic)
    throw std::invalid_argument("unknown entropy-bound method");
  if (s2 <= steering_lhs_bound) return 0;
  return 1 - binary_entropy(0.5 * (1 + std::sqrt(2 * s2 * s2 - 1)));
}

KeyRateReport evaluate_key_rate(const TwoQubitState& s, const KeyRateOptions& opts) {
  ProbabilityTable t = statistics(s, MeasurementModel{opts.eta_b});
  KeyRateReport r;
  r.eta_b = opts.eta_b;
  r.binning = opts.binning;
  r.method = opts.method;
  r.s2 = steering_parameter(t, opts.binning);
  r.h_ab = entropy_alice_given_bob(t, opts.binning);
  r.h_ae_bound = eve_entropy_bound(r.s2, opts.method);
  r.key_rate = r.h_ae_bound - r.h_ab;
  r.key_rate_clamped = std::max(r.key_rate, 0.0);
  r.concurrence = concurrence(s);
  r.secure = opts.binning == Binning::assign_zero && r.key_rate > 0;
  return r;
}

double minimum_efficiency(const TwoQubitState& s, const KeyRateOptions& opts,
                          double tol) {
  auto rate = [&](double eta) {
    KeyRateOptions o = opts;
    o.eta_b = eta;
    return evaluate_key_rate(s, o).key_rate;
  };
  if (rate(1.0) <= 0)
    throw NeverSecure("no positive key rate even at unit detection efficiency");
  // rate(0) <= 0 always: Bob never clicks, so nothing is certified
  return bisect_transition([&](double eta) { return rate(eta) <= 0; }, 0.0, 1.0,
                           tol);
}

NoiseThresholds critical_noise(ChannelKind kind, double theta,
                               const KeyRateOptions& opts, double tol) {
  const double max_param = max_noise_param(kind);
  const TwoQubitState base = psi_theta(theta);
  auto at = [&](double param) {
    return evaluate_key_rate(apply_one_sided(make_channel(kind, param), base),
                             opts);
  };
  KeyRateReport clean = at(0);
  if (clean.s2 <= steering_lhs_bound)
    throw NeverSecure("steering bound not violated even at zero noise");
  if (clean.key_rate <= 0)
    throw NeverSecure("no positive key rate even at zero noise");
  NoiseThresholds out;
  out.steering = bisect_transition(
      [&](double q) { return at(q).s2 > steering_lhs_bound; }, 0, max_param, tol);
  out.key_rate = bisect_transition(
      [&](double q) { return at(q).key_rate > 0; }, 0, max_param, tol);
  return out;
}

double theta_min() {
  return 0.5 * std::asin(std::numbers::sqrt2 - 1);
}

}  // namespace qsdi
