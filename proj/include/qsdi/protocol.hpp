#pragma once

#include "qsdi/channels.hpp"
#include "qsdi/states.hpp"

namespace qsdi {

/// Local hidden-state bound on the two-setting steering parameter.
inline constexpr double steering_lhs_bound = 0.7071067811865476;

/// h2(p) = -p log2 p - (1-p) log2 (1-p); 0 outside (0,1).
double binary_entropy(double p);

/// Treatment of Bob's no-click outcome. assign_zero deterministically maps
/// it to the +1 outcome and is the only loophole-free choice; discard
/// post-selects on clicks and is diagnostic only (reports always carry
/// secure = false).
enum class Binning { assign_zero, discard };

/// How H(A|E) is bounded from the observed statistics. A single analytic
/// steering-based bound is provided; the enum leaves room for tighter
/// numerical bounds without touching the pipeline.
enum class BoundMethod { steering_analytic };

/// Alice measures sz (x=0) or sx (x=1) projectively; Bob nominally the
/// same but each projector is scaled by the detection efficiency eta_b,
/// with the leftover (1-eta_b) I forming the no-click effect.
struct MeasurementModel {
  double eta_b = 1.0;

  CMatrix alice_projector(int x, int a) const;
  /// b = 0, 1 click outcomes; b = 2 no-click.
  CMatrix bob_effect(int y, int b) const;
};

/// p(a, b | x, y) with a in {0,1} mapping to +1/-1 and b in {0,1,2}
/// where 2 is the no-click outcome.
struct ProbabilityTable {
  double p[2][2][2][3] = {};

  /// <A_x B_y> with outcomes valued +-1. Under assign_zero the no-click
  /// outcome counts as +1; under discard the correlator is renormalized
  /// over click events only.
  double correlator(int x, int y, Binning binning) const;
  /// <A_x>, independent of Bob's setting by no-signaling.
  double alice_expectation(int x) const;
  double no_click_probability(int x, int y) const;
};

ProbabilityTable statistics(const TwoQubitState& s, const MeasurementModel& m);

/// S2 = (<A_0 B_0> + <A_1 B_1>) / 2.
double steering_parameter(const ProbabilityTable& t, Binning binning);

/// H(A|B) for the key-generation settings x = y = 0. With assign_zero the
/// no-click symbol stays a third outcome on Bob's side (conservative: the
/// binning applies to the steering test, not to error correction); with
/// discard it is evaluated on the post-selected click table.
double entropy_alice_given_bob(const ProbabilityTable& t, Binning binning);

/// Lower bound on H(A|E) certified by the steering violation:
/// 1 - h2((1 + sqrt(2 s2^2 - 1)) / 2) for s2 > 1/sqrt(2), else 0.
double eve_entropy_bound(double s2, BoundMethod method = BoundMethod::steering_analytic);

struct KeyRateOptions {
  double eta_b = 1.0;
  Binning binning = Binning::assign_zero;
  BoundMethod method = BoundMethod::steering_analytic;
};

struct KeyRateReport {
  double s2 = 0;
  double h_ab = 0;
  double h_ae_bound = 0;
  /// h_ae_bound - h_ab, kept signed so zero contours can be interpolated.
  double key_rate = 0;
  double key_rate_clamped = 0;
  double concurrence = 0;
  double eta_b = 1;
  Binning binning = Binning::assign_zero;
  BoundMethod method = BoundMethod::steering_analytic;
  bool secure = false;
};

KeyRateReport evaluate_key_rate(const TwoQubitState& s, const KeyRateOptions& opts = {});

/// Smallest eta_b with a positive key rate, found by bisection. Throws
/// NeverSecure when even a perfect detector certifies nothing.
double minimum_efficiency(const TwoQubitState& s, const KeyRateOptions& opts = {},
                          double tol = 1e-6);

struct NoiseThresholds {
  /// Where s2 falls to 1/sqrt(2).
  double steering = 0;
  /// Where the key rate falls to zero (bound-dependent).
  double key_rate = 0;
};

/// Critical noise parameters for cos(theta)|00> + sin(theta)|11> sent
/// through the given channel kind on the traveling side.
NoiseThresholds critical_noise(ChannelKind kind, double theta,
                               const KeyRateOptions& opts = {}, double tol = 1e-6);

/// Smallest theta whose state violates the steering bound with perfect
/// detectors: the root of (1 + sin 2 theta) / 2 = 1/sqrt(2), i.e.
/// asin(sqrt(2) - 1) / 2. By symmetry pi/2 - theta_min bounds from above.
double theta_min();

}  // namespace qsdi
