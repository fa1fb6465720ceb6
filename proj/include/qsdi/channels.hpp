#pragma once

#include <vector>

#include "qsdi/states.hpp"

namespace qsdi {

enum class ChannelKind { dephasing, depolarizing, amplitude_damping, identity, composite };

/// Which qubit of the pair the channel acts on. The traveling qubit is
/// Alice's (first tensor factor); Bob's stays at the source.
enum class Side { traveling, stationary };

/// Exponential distance-to-parameter model with coherence length l_c.
struct DistanceModel {
  double length_km = 0;
  double coherence_km = 1;
};

/// Single-qubit channel in Kraus form; factories validate the parameter
/// range (dephasing p in [0, 0.5], depolarizing q in [0,1], amplitude
/// damping gamma in [0,1]) and the completeness relation.
struct KrausChannel {
  ChannelKind kind = ChannelKind::identity;
  double param = 0;
  std::vector<CMatrix> ops;

  /// sum K^dag K == I within tol.
  bool is_cptp(double tol = 1e-12) const;
};

KrausChannel identity_channel();

/// K0 = sqrt(1-p) I, K1 = sqrt(p) sz; damps the off-diagonals by (1-2p).
KrausChannel dephasing(double p);

/// K0 = sqrt(1-3q/4) I, Ki = sqrt(q/4) si; equals (1-q) rho + q I/2.
KrausChannel depolarizing(double q);

/// K0 = diag(1, sqrt(1-gamma)), K1 = sqrt(gamma) |0><1|.
KrausChannel amplitude_damping(double gamma);

/// Sequential composition: `second` applied after `first`.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

/// Noise parameter at distance L: dephasing p = (1-exp(-L/Lc))/2,
/// depolarizing q = 1-exp(-L/Lc), amplitude damping gamma = 1-exp(-L/Lc).
double noise_at_distance(ChannelKind kind, const DistanceModel& d);

KrausChannel from_distance(ChannelKind kind, const DistanceModel& d);

KrausChannel make_channel(ChannelKind kind, double param);

/// Default l_c used when none is given: 40 km for dephasing and
/// depolarizing, 24 km for amplitude damping.
double default_coherence_km(ChannelKind kind);

/// rho' = (E (x) I)(rho) or (I (x) E)(rho) depending on side.
TwoQubitState apply_one_sided(const KrausChannel& ch, const TwoQubitState& s,
                              Side side = Side::traveling);

double max_noise_param(ChannelKind kind);

}  // namespace qsdi
