#include "qsdi/experiments.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "qsdi/errors.hpp"

namespace qsdi {

namespace {

/// Largest x in [lo, hi] with pred(x) true, given one true-to-false
/// transition on the bracket.
double bisect_transition(const std::function<bool(double)>& pred, double lo,
                         double hi, double tol) {
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (pred(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Column {
  const char* label;
  std::function<double(const SweepRow&)> value;
  double threshold;
};

/// Scans each column for grid cells that bracket its threshold and
/// annotates the crossing, refining with the continuous evaluator.
void annotate_crossings(SweepResult& result, const std::vector<double>& grid,
                        const std::function<SweepRow(double)>& row_at) {
  const Column columns[] = {
      {"key_rate_zero", [](const SweepRow& r) { return r.report.key_rate; }, 0.0},
      {"steering_zero", [](const SweepRow& r) { return r.report.s2; },
       steering_lhs_bound},
      {"concurrence_zero",
       [](const SweepRow& r) { return r.report.concurrence; }, 1e-12},
  };
  for (const Column& col : columns) {
    for (size_t i = 0; i + 1 < result.rows.size(); ++i) {
      const double a = col.value(result.rows[i]) - col.threshold;
      const double b = col.value(result.rows[i + 1]) - col.threshold;
      if ((a > 0) == (b > 0)) continue;
      const double x0 = grid[i], x1 = grid[i + 1];
      Annotation ann;
      ann.label = col.label;
      ann.axis = result.axis;
      ann.interpolated = b == a ? x0 : x0 + (x1 - x0) * (-a) / (b - a);
      ann.refined = bisect_transition(
          [&](double x) { return (col.value(row_at(x)) - col.threshold > 0) == (a > 0); },
          x0, x1, 1e-4);
      result.annotations.push_back(ann);
    }
  }
}

SweepResult run_sweep(const std::string& axis, const std::vector<double>& grid,
                      const std::function<SweepRow(double)>& row_at) {
  SweepResult result;
  result.axis = axis;
  result.rows.reserve(grid.size());
  for (double x : grid) result.rows.push_back(row_at(x));
  annotate_crossings(result, grid, row_at);
  return result;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2) throw std::domain_error("sweep needs at least 2 grid points");
  if (!(hi > lo)) throw std::domain_error("sweep range must be increasing");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * i / (points - 1);
  return grid;
}

}  // namespace

double ChannelSpec::resolved_param() const {
  if (param.has_value() == distance.has_value())
    throw std::domain_error(
        "channel spec needs exactly one of param and distance");
  return param ? *param : noise_at_distance(kind, *distance);
}

KrausChannel ChannelSpec::channel() const {
  return make_channel(kind, resolved_param());
}

TwoQubitState Scenario::state() const {
  TwoQubitState s = psi_theta(theta);
  for (const ChannelSpec& spec : channels)
    s = apply_one_sided(spec.channel(), s, spec.side);
  return s;
}

ChannelKind Scenario::primary_kind() const {
  if (channels.empty()) return ChannelKind::identity;
  if (channels.size() == 1) return channels[0].kind;
  return ChannelKind::composite;
}

double Scenario::primary_param() const {
  return channels.size() == 1 ? channels[0].resolved_param() : 0.0;
}

SweepResult sweep_efficiency(const Scenario& sc, int points, double eta_lo,
                             double eta_hi) {
  const TwoQubitState s = sc.state();
  auto row_at = [&](double eta) {
    KeyRateOptions opts = sc.security;
    opts.eta_b = eta;
    return SweepRow{sc.primary_kind(), sc.primary_param(), eta, sc.theta,
                    evaluate_key_rate(s, opts)};
  };
  return run_sweep("eta_b", linear_grid(eta_lo, eta_hi, points), row_at);
}

SweepResult sweep_noise(ChannelKind kind, const Scenario& base, double step,
                        Side side) {
  if (step <= 0) throw std::domain_error("sweep step must be positive");
  const double max_param = max_noise_param(kind);
  std::vector<double> grid;
  for (int i = 0; i * step < max_param - 1e-12; ++i) grid.push_back(i * step);
  grid.push_back(max_param);
  const TwoQubitState clean = psi_theta(base.theta);
  auto row_at = [&](double q) {
    TwoQubitState s = apply_one_sided(make_channel(kind, q), clean, side);
    return SweepRow{kind, q, base.security.eta_b, base.theta,
                    evaluate_key_rate(s, base.security)};
  };
  return run_sweep("param", grid, row_at);
}

SweepResult sweep_theta(const Scenario& base, int points) {
  auto row_at = [&](double theta) {
    Scenario sc = base;
    sc.theta = theta;
    return SweepRow{sc.primary_kind(), sc.primary_param(), sc.security.eta_b,
                    theta, evaluate_key_rate(sc.state(), sc.security)};
  };
  return run_sweep("theta", linear_grid(0, std::numbers::pi / 2, points), row_at);
}

ContourGrid contour_grid(ChannelKind kind, double lc_km,
                         const KeyRateOptions& security, double l_max,
                         double l_step, int rounds, double theta) {
  if (l_step <= 0) throw std::domain_error("contour step must be positive");
  if (l_max < 0) throw std::domain_error("contour length range must be nonnegative");
  ContourGrid grid;
  grid.kind = kind;
  grid.lc_km = lc_km;
  grid.eta_b = security.eta_b;
  PurifyOptions opts;
  opts.rounds = rounds;
  opts.security = security;
  const TwoQubitState clean = psi_theta(theta);
  for (int i = 0;; ++i) {
    const double l = i * l_step;
    if (l > l_max + 1e-12) break;
    TwoQubitState s = apply_one_sided(
        from_distance(kind, DistanceModel{l, lc_km}), clean, Side::traveling);
    std::vector<PurifyRound> trace = purify_iterate(s, opts);
    const bool diverged = trace[0].fidelity < 0.5;
    for (const PurifyRound& r : trace) {
      ContourCell cell;
      cell.l_km = l;
      cell.round = r.round;
      cell.fidelity = r.fidelity;
      cell.success_prob = r.success_prob;
      cell.yield = r.yield;
      // below the F = 1/2 fixed point iteration cannot help; such cells
      // carry the unpurified rate so the zero contour stays meaningful
      cell.key_rate = diverged ? trace[0].key_rate : r.key_rate;
      cell.effective_rate =
          diverged ? std::max(trace[0].key_rate, 0.0) * r.yield : r.effective_rate;
      cell.diverged = diverged;
      grid.cells.push_back(cell);
    }
  }
  return grid;
}

double esd_threshold(ChannelKind kind, double theta, double tol) {
  const double max_param = max_noise_param(kind);
  const TwoQubitState clean = psi_theta(theta);
  auto entangled = [&](double q) {
    return concurrence(apply_one_sided(make_channel(kind, q), clean,
                                       Side::traveling)) > 1e-12;
  };
  if (!entangled(0)) return 0;
  return bisect_transition(entangled, 0, max_param, tol);
}

std::vector<ThresholdRow> threshold_table(const KeyRateOptions& opts,
                                          double theta) {
  const ChannelKind kinds[] = {ChannelKind::dephasing, ChannelKind::depolarizing,
                               ChannelKind::amplitude_damping};
  const TwoQubitState clean = psi_theta(theta);
  std::vector<ThresholdRow> table;
  for (ChannelKind kind : kinds) {
    ThresholdRow row;
    row.kind = kind;
    row.lc_km = default_coherence_km(kind);
    row.param_at_30km =
        noise_at_distance(kind, DistanceModel{30, row.lc_km});
    row.fidelity_at_30km = fidelity_phi_plus(apply_one_sided(
        make_channel(kind, row.param_at_30km), clean, Side::traveling));
    NoiseThresholds crit = critical_noise(kind, theta, opts);
    row.steering_threshold = crit.steering;
    row.key_rate_threshold = crit.key_rate;
    row.esd = esd_threshold(kind, theta);
    row.residual_concurrence = concurrence(apply_one_sided(
        make_channel(kind, crit.key_rate), clean, Side::traveling));
    table.push_back(row);
  }
  return table;
}

}  // namespace qsdi
