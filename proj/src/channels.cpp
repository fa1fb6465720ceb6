#include "qsdi/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace qsdi {

bool KrausChannel::is_cptp(double tol) const {
  CMatrix sum = CMatrix::Zero(2, 2);
  for (const CMatrix& k : ops) sum += k.adjoint() * k;
  return (sum - identity(2)).cwiseAbs().maxCoeff() <= tol;
}

KrausChannel identity_channel() {
  return {ChannelKind::identity, 0.0, {identity(2)}};
}

KrausChannel dephasing(double p) {
  if (p < 0 || p > 0.5) throw std::domain_error("dephasing: p outside [0, 0.5]");
  return {ChannelKind::dephasing, p,
          {std::sqrt(1 - p) * identity(2), std::sqrt(p) * sigma_z()}};
}

KrausChannel depolarizing(double q) {
  if (q < 0 || q > 1) throw std::domain_error("depolarizing: q outside [0, 1]");
  return {ChannelKind::depolarizing, q,
          {std::sqrt(1 - 0.75 * q) * identity(2), std::sqrt(0.25 * q) * sigma_x(),
           std::sqrt(0.25 * q) * sigma_y(), std::sqrt(0.25 * q) * sigma_z()}};
}

KrausChannel amplitude_damping(double gamma) {
  if (gamma < 0 || gamma > 1)
    throw std::domain_error("amplitude_damping: gamma outside [0, 1]");
  CMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return {ChannelKind::amplitude_damping, gamma, {k0, k1}};
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  KrausChannel out{ChannelKind::composite, 0.0, {}};
  out.ops.reserve(first.ops.size() * second.ops.size());
  for (const CMatrix& b : second.ops)
    for (const CMatrix& a : first.ops) out.ops.push_back(b * a);
  return out;
}

double noise_at_distance(ChannelKind kind, const DistanceModel& d) {
  if (d.length_km < 0) throw std::domain_error("distance must be nonnegative");
  if (d.coherence_km <= 0) throw std::domain_error("coherence length must be positive");
  const double decay = 1 - std::exp(-d.length_km / d.coherence_km);
  switch (kind) {
    case ChannelKind::dephasing:
      return 0.5 * decay;
    case ChannelKind::depolarizing:
    case ChannelKind::amplitude_damping:
      return decay;
    default:
      throw std::invalid_argument("no distance model for this channel kind");
  }
}

KrausChannel from_distance(ChannelKind kind, const DistanceModel& d) {
  const double param = noise_at_distance(kind, d);
  switch (kind) {
    case ChannelKind::dephasing:
      return dephasing(param);
    case ChannelKind::depolarizing:
      return depolarizing(param);
    case ChannelKind::amplitude_damping:
      return amplitude_damping(param);
    default:
      throw std::invalid_argument("no distance model for this channel kind");
  }
}

KrausChannel make_channel(ChannelKind kind, double param) {
  switch (kind) {
    case ChannelKind::dephasing:
      return dephasing(param);
    case ChannelKind::depolarizing:
      return depolarizing(param);
    case ChannelKind::amplitude_damping:
      return amplitude_damping(param);
    case ChannelKind::identity:
      return identity_channel();
    default:
      throw std::invalid_argument("composite channels are built via compose()");
  }
}

double default_coherence_km(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::dephasing:
    case ChannelKind::depolarizing:
      return 40.0;
    case ChannelKind::amplitude_damping:
      return 24.0;
    default:
      throw std::invalid_argument("no distance model for this channel kind");
  }
}

TwoQubitState apply_one_sided(const KrausChannel& ch, const TwoQubitState& s,
                              Side side) {
  CMatrix out = CMatrix::Zero(4, 4);
  for (const CMatrix& k : ch.ops) {
    CMatrix lifted = side == Side::traveling ? tensor(k, identity(2))
                                             : tensor(identity(2), k);
    out += lifted * s.matrix() * lifted.adjoint();
  }
  return TwoQubitState(out);
}

double max_noise_param(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::dephasing:
      return 0.5;
    case ChannelKind::depolarizing:
    case ChannelKind::amplitude_damping:
      return 1.0;
    default:
      throw std::invalid_argument("channel kind has no noise parameter");
  }
}

}  // namespace qsdi
