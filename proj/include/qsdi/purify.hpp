#pragma once

#include <vector>

#include "qsdi/protocol.hpp"
#include "qsdi/states.hpp"

namespace qsdi {

/// (1/4) sum_i (s_i (x) s_i) rho (s_i (x) s_i) over {I, sx, sy, sz}.
/// Projects onto the Bell-diagonal part: all four Bell weights (and with
/// them the phi+ fidelity) are preserved, Bell-basis coherences vanish.
TwoQubitState pauli_twirl(const TwoQubitState& s);

/// Bilateral quarter rotation Rx(pi/2) (x) Rx(-pi/2). Permutes the Bell
/// basis: phi- and psi- swap, phi+ and psi+ stay put. Applied between
/// rounds it converts accumulated phase errors, which a recurrence round
/// would double, into bit errors the round removes; on Werner states it is
/// the identity, so the Werner fixed-point analysis is untouched.
TwoQubitState align_error_basis(const TwoQubitState& s);

struct WernerRound {
  double fidelity = 0;
  double success_prob = 0;
};

/// Closed-form recurrence on the Werner line:
///   F' = (F^2 + (1-F)^2/9) / P,  P = F^2 + 2F(1-F)/3 + 5(1-F)^2/9.
/// Fixed points F = 1 (stable) and F = 1/2 (unstable).
WernerRound bbpssw_recurrence(double fidelity);

struct RoundOutcome {
  BellDiagonal state;
  double success_prob = 0;
};

/// One round on general Bell weights (a, b, c, d) for (phi+, phi-, psi+,
/// psi-): kept weights ((a^2+b^2), 2ab, (c^2+d^2), 2cd) / P with
/// P = (a+b)^2 + (c+d)^2. Reduces to bbpssw_recurrence on Werner input.
RoundOutcome bbpssw_weights(const BellDiagonal& in);

struct ExactRound {
  TwoQubitState state;
  double success_prob = 0;
};

/// One purification round simulated on the explicit two-pair (16x16)
/// state: bilateral CNOTs from the kept pair onto the sacrificial pair,
/// computational-basis measurement of the sacrificial qubits, post-
/// selection on equal outcomes. Throws ZeroSuccessProbability if the kept
/// branch carries mass below 1e-14.
ExactRound bbpssw_exact(const TwoQubitState& s);

struct PurifyRound {
  int round = 0;
  double fidelity = 0;
  /// Acceptance probability of this round (1 for the raw round-0 entry).
  double success_prob = 1;
  /// Surviving pairs per initially distributed pair: prod P_i / 2^n.
  double yield = 1;
  double key_rate = 0;
  /// max(key_rate, 0) * yield, bits per initially distributed pair.
  double effective_rate = 0;
};

struct PurifyOptions {
  int rounds = 4;
  /// Re-twirl before every round. Even when off, a non-Bell-diagonal state
  /// is twirled before its first round.
  bool twirl_each_round = true;
  bool align_each_round = true;
  KeyRateOptions security;
};

/// Iterates bbpssw_exact, recording one entry per round; entry 0 is the
/// raw input state. Fidelity, yield, and the key rate under `security`
/// are evaluated on the state as it stands after each round.
std::vector<PurifyRound> purify_iterate(const TwoQubitState& s,
                                        const PurifyOptions& opts = {});

/// Round index with the highest effective rate; ties go to fewer rounds.
int best_round(const std::vector<PurifyRound>& trace);

}  // namespace qsdi
