#include "qsdi/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qsdi/errors.hpp"

namespace qsdi {

namespace {

CMatrix bell_basis() {
  CMatrix b(4, 4);
  const double r = 1.0 / std::numbers::sqrt2;
  // columns: phi+, phi-, psi+, psi-
  b << r, r, 0, 0,
       0, 0, r, r,
       0, 0, r, -r,
       r, -r, 0, 0;
  return b;
}

}  // namespace

TwoQubitState::TwoQubitState(const CMatrix& rho) : rho_(rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::domain_error("TwoQubitState: matrix must be 4x4");
  if (!is_hermitian(rho, 1e-12))
    throw std::domain_error("TwoQubitState: matrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12)
    throw std::domain_error("TwoQubitState: trace must be 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-10)
    throw std::domain_error("TwoQubitState: matrix not positive semidefinite");
}

CVector bell_ket(BellIndex which) {
  return bell_basis().col(static_cast<int>(which));
}

TwoQubitState bell_state(BellIndex which) {
  // Built from the +-1 amplitude pattern so every entry is an exact half;
  // squaring 1/sqrt(2) would land one ulp off and leak into ideal-case runs.
  static constexpr double amp[4][4] = {
      {1, 0, 0, 1},
      {1, 0, 0, -1},
      {0, 1, 1, 0},
      {0, 1, -1, 0},
  };
  const double* a = amp[static_cast<int>(which)];
  CMatrix rho(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho(i, j) = 0.5 * a[i] * a[j];
  return TwoQubitState(rho);
}

TwoQubitState psi_theta(double theta) {
  if (theta < 0 || theta > std::numbers::pi / 2)
    throw std::domain_error("psi_theta: theta outside [0, pi/2]");
  CVector v = CVector::Zero(4);
  v(0) = std::cos(theta);
  v(3) = std::sin(theta);
  return TwoQubitState(v * v.adjoint());
}

TwoQubitState BellDiagonal::to_state() const {
  double sum = 0;
  for (double w : weights) {
    if (w < -1e-12 || w > 1 + 1e-12)
      throw std::domain_error("BellDiagonal: weight outside [0,1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::domain_error("BellDiagonal: weights must sum to 1");
  CMatrix rho = CMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    CVector v = bell_ket(static_cast<BellIndex>(i));
    rho += (weights[i] / sum) * (v * v.adjoint());
  }
  return TwoQubitState(rho);
}

double fidelity_phi_plus(const TwoQubitState& s) {
  CVector v = bell_ket(BellIndex::phi_plus);
  double f = (v.adjoint() * s.matrix() * v)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

double purity(const TwoQubitState& s) {
  return (s.matrix() * s.matrix()).trace().real();
}

CMatrix spin_flip(const TwoQubitState& s) {
  CMatrix yy = tensor(sigma_y(), sigma_y());
  return yy * s.matrix().conjugate() * yy;
}

double concurrence(const TwoQubitState& s) {
  std::vector<Complex> vals = eigvals_general(s.matrix() * spin_flip(s));
  // rho*rho_tilde has nonnegative real spectrum; clamp numerical residue.
  // Eigenvalues at the noise floor are exact zeros whose square roots
  // would otherwise pollute the difference at the 1e-8 scale.
  std::array<double, 4> r;
  for (int i = 0; i < 4; ++i) {
    double lam = vals[i].real() < 1e-12 ? 0.0 : vals[i].real();
    r[i] = std::sqrt(lam);
  }
  std::sort(r.begin(), r.end(), std::greater<>());
  return std::max(0.0, r[0] - r[1] - r[2] - r[3]);
}

BellDiagonal as_bell_diagonal(const TwoQubitState& s) {
  CMatrix b = bell_basis();
  CMatrix in_bell = b.adjoint() * s.matrix() * b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && std::abs(in_bell(i, j)) > 1e-9)
        throw NotBellDiagonal("state has Bell-basis coherences");
  BellDiagonal out{};
  for (int i = 0; i < 4; ++i) out.weights[i] = in_bell(i, i).real();
  return out;
}

bool is_bell_diagonal(const TwoQubitState& s, double tol) {
  CMatrix b = bell_basis();
  CMatrix in_bell = b.adjoint() * s.matrix() * b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && std::abs(in_bell(i, j)) > tol) return false;
  return true;
}

}  // namespace qsdi
