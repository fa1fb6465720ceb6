#include "qsdi/qmat.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsdi {

CMatrix identity(int dim) { return CMatrix::Identity(dim, dim); }

CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix sigma_y() {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

CMatrix sigma_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMatrix dagger(const CMatrix& m) { return m.adjoint(); }

bool is_hermitian(const CMatrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

int qubit_count(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  if (d != dim) throw std::invalid_argument("dimension is not a power of two");
  return n;
}

}  // namespace

CMatrix partial_trace(const CMatrix& m, const std::vector<int>& keep) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix not square");
  const int n = qubit_count(m.rows());
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n)
      throw std::invalid_argument("partial_trace: qubit index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: indices must be ascending");
  }

  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);

  const int nk = static_cast<int>(keep.size());
  const int nt = static_cast<int>(traced.size());
  const Eigen::Index dk = Eigen::Index(1) << nk;
  const Eigen::Index dt = Eigen::Index(1) << nt;

  // Qubit q holds bit (n-1-q) of the basis index.
  auto assemble = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
    Eigen::Index idx = 0;
    for (int i = 0; i < nk; ++i)
      if (kept_bits >> (nk - 1 - i) & 1) idx |= Eigen::Index(1) << (n - 1 - keep[i]);
    for (int i = 0; i < nt; ++i)
      if (traced_bits >> (nt - 1 - i) & 1) idx |= Eigen::Index(1) << (n - 1 - traced[i]);
    return idx;
  };

  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r)
    for (Eigen::Index c = 0; c < dk; ++c)
      for (Eigen::Index t = 0; t < dt; ++t)
        out(r, c) += m(assemble(r, t), assemble(c, t));
  return out;
}

std::vector<Complex> eigvals_general(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix not square");
  Eigen::ComplexEigenSolver<CMatrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigvals_general: QR iteration did not converge");
  std::vector<Complex> vals(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + m.rows());
  std::sort(vals.begin(), vals.end(),
            [](const Complex& a, const Complex& b) { return a.real() > b.real(); });
  return vals;
}

CMatrix hermitian_sqrt(const CMatrix& m) {
  if (!is_hermitian(m, 1e-9))
    throw std::domain_error("hermitian_sqrt: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_sqrt: eigensolver did not converge");
  Eigen::VectorXd vals = solver.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < -1e-8)
      throw std::domain_error("hermitian_sqrt: materially negative eigenvalue");
    vals[i] = vals[i] < 0 ? 0 : std::sqrt(vals[i]);
  }
  return solver.eigenvectors() * vals.asDiagonal().toDenseMatrix().cast<Complex>() *
         solver.eigenvectors().adjoint();
}

CMatrix cnot(int n_qubits, int control, int target) {
  if (control == target || control < 0 || target < 0 || control >= n_qubits ||
      target >= n_qubits)
    throw std::invalid_argument("cnot: bad qubit indices");
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  const Eigen::Index cbit = Eigen::Index(1) << (n_qubits - 1 - control);
  const Eigen::Index tbit = Eigen::Index(1) << (n_qubits - 1 - target);
  CMatrix u = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) u((i & cbit) ? i ^ tbit : i, i) = 1;
  return u;
}

}  // namespace qsdi
