#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

// Minimal dense complex linear algebra for few-qubit density operators.
// Dimensions in use are 2 (single qubit), 4 (pair), and 16 (two pairs).

namespace qsdi {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

CMatrix identity(int dim);

// Pauli matrices.
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();

CMatrix dagger(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol = 1e-12);

/// Kronecker product a (x) b; the left factor occupies the high-order qubits.
CMatrix tensor(const CMatrix& a, const CMatrix& b);

/// Partial trace over an n-qubit operator (dim must be a power of two).
/// `keep` lists the qubit indices to retain, 0 = most significant factor;
/// indices must be valid, distinct, and ascending. Tracing out everything
/// yields a 1x1 matrix holding the trace.
CMatrix partial_trace(const CMatrix& m, const std::vector<int>& keep);

/// Eigenvalues of a general (not necessarily Hermitian) square matrix,
/// sorted by real part, non-increasing. Throws std::runtime_error if the
/// QR iteration fails to converge.
std::vector<Complex> eigvals_general(const CMatrix& m);

/// Principal square root of a Hermitian PSD matrix via spectral
/// decomposition. Eigenvalues in [-1e-10, 0) are clamped to 0; a value
/// below -1e-8 signals an invalid state upstream and throws
/// std::domain_error.
CMatrix hermitian_sqrt(const CMatrix& m);

/// CNOT on an n-qubit register as a 2^n x 2^n unitary, qubit 0 = most
/// significant factor.
CMatrix cnot(int n_qubits, int control, int target);

}  // namespace qsdi
