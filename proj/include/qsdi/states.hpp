#pragma once

#include <array>

#include "qsdi/qmat.hpp"

namespace qsdi {

/// Two-qubit density operator, first tensor factor = Alice (the qubit that
/// traverses the channel), second = Bob. Construction validates
/// Hermiticity (1e-12), unit trace (1e-12), and positivity (min eigenvalue
/// >= -1e-10); violations throw std::domain_error.
class TwoQubitState {
 public:
  explicit TwoQubitState(const CMatrix& rho);

  const CMatrix& matrix() const { return rho_; }

 private:
  CMatrix rho_;
};

enum class BellIndex { phi_plus = 0, phi_minus = 1, psi_plus = 2, psi_minus = 3 };

/// Bell-basis ket, ordering (phi+, phi-, psi+, psi-).
CVector bell_ket(BellIndex which);

TwoQubitState bell_state(BellIndex which);

/// |psi(theta)> = cos(theta)|00> + sin(theta)|11>, theta in [0, pi/2].
TwoQubitState psi_theta(double theta);

/// Mixture of Bell projectors; weights ordered (phi+, phi-, psi+, psi-),
/// each in [0,1], summing to 1 within 1e-9.
struct BellDiagonal {
  std::array<double, 4> weights;

  TwoQubitState to_state() const;
};

/// Overlap with |phi+>, clamped to [0,1].
double fidelity_phi_plus(const TwoQubitState& s);

double purity(const TwoQubitState& s);

/// Wootters concurrence: C = max{0, sqrt(l1)-sqrt(l2)-sqrt(l3)-sqrt(l4)}
/// with l_i the eigenvalues of rho*rho_tilde in non-increasing order and
/// rho_tilde = (sy (x) sy) rho^* (sy (x) sy).
double concurrence(const TwoQubitState& s);

/// Spin-flipped operator rho_tilde (exposed for cross-checks).
CMatrix spin_flip(const TwoQubitState& s);

/// Bell-basis weights of a Bell-diagonal state. Throws NotBellDiagonal if
/// any Bell-basis off-diagonal element exceeds 1e-9 in magnitude.
BellDiagonal as_bell_diagonal(const TwoQubitState& s);

bool is_bell_diagonal(const TwoQubitState& s, double tol = 1e-9);

}  // namespace qsdi
