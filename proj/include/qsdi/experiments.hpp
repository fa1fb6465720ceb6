#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qsdi/channels.hpp"
#include "qsdi/protocol.hpp"
#include "qsdi/purify.hpp"

namespace qsdi {

/// One channel leg of a scenario: the noise strength is given either
/// directly or through a distance model (exactly one of the two).
struct ChannelSpec {
  ChannelKind kind = ChannelKind::identity;
  std::optional<double> param;
  std::optional<DistanceModel> distance;
  Side side = Side::traveling;

  double resolved_param() const;
  KrausChannel channel() const;
};

struct Scenario {
  double theta = std::numbers::pi / 4;
  /// Applied to psi_theta(theta) in list order.
  std::vector<ChannelSpec> channels;
  KeyRateOptions security;

  TwoQubitState state() const;
  /// Kind/param reported in sweep rows: the single channel's, identity
  /// when there is none, composite when there are several.
  ChannelKind primary_kind() const;
  double primary_param() const;
};

struct SweepRow {
  ChannelKind noise_kind = ChannelKind::identity;
  double param = 0;
  double eta_b = 1;
  double theta = 0;
  KeyRateReport report;
};

/// A located zero crossing of one reported column along the sweep axis:
/// the linear interpolation between the bracketing grid points and the
/// bisection-refined root (tolerance 1e-4).
struct Annotation {
  std::string label;
  std::string axis;
  double interpolated = 0;
  double refined = 0;
};

struct SweepResult {
  std::string axis;  // "eta_b", "param", or "theta"
  std::vector<SweepRow> rows;
  std::vector<Annotation> annotations;
};

/// Key-rate curve over Bob's efficiency, grid endpoints inclusive.
SweepResult sweep_efficiency(const Scenario& sc, int points = 100,
                             double eta_lo = 0.4, double eta_hi = 1.0);

/// Key rate, steering parameter, and concurrence over the noise strength
/// of `kind` from 0 to its maximum. The scenario's channel list is
/// replaced by the swept channel.
SweepResult sweep_noise(ChannelKind kind, const Scenario& base,
                        double step = 0.01, Side side = Side::traveling);

/// Key-rate curve over theta in [0, pi/2] with the scenario's channels.
SweepResult sweep_theta(const Scenario& base, int points = 100);

struct ContourCell {
  double l_km = 0;
  int round = 0;
  double fidelity = 0;
  double success_prob = 1;
  double yield = 1;
  double key_rate = 0;
  double effective_rate = 0;
  /// True when the round-0 fidelity sits below the recurrence fixed point
  /// 1/2; such cells carry the unpurified (round-0) key rate.
  bool diverged = false;
};

struct ContourGrid {
  ChannelKind kind = ChannelKind::identity;
  double lc_km = 0;
  double eta_b = 1;
  /// Length-major, round-minor; (l_points) x (rounds + 1) cells.
  std::vector<ContourCell> cells;
};

/// Signed key rate over the (fiber length, purification round) grid.
ContourGrid contour_grid(ChannelKind kind, double lc_km,
                         const KeyRateOptions& security, double l_max = 60,
                         double l_step = 1, int rounds = 10,
                         double theta = std::numbers::pi / 4);

/// Smallest noise strength at which the concurrence of the channel output
/// on psi_theta(theta) reaches zero; the parameter maximum when
/// entanglement survives all the way (amplitude damping).
double esd_threshold(ChannelKind kind, double theta = std::numbers::pi / 4,
                     double tol = 1e-6);

struct ThresholdRow {
  ChannelKind kind = ChannelKind::identity;
  double lc_km = 0;
  double param_at_30km = 0;
  double fidelity_at_30km = 0;
  double steering_threshold = 0;
  double key_rate_threshold = 0;
  double esd = 0;
  /// Concurrence left at the key-rate zero.
  double residual_concurrence = 0;
};

/// Per-channel critical values plus the noise implied at L = 30 km under
/// the default coherence lengths.
std::vector<ThresholdRow> threshold_table(const KeyRateOptions& opts = {},
                                          double theta = std::numbers::pi / 4);

}  // namespace qsdi
