#include "bb84/linalg.hpp"

#include "bb84/errors.hpp"

#include <cmath>
#include <string>

namespace bb84 {

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("matrix is not square");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Spectrum eig_hermitian(const ComplexMatrix& m, double tolerance) {
  const double defect = hermiticity_defect(m);
  if (!(defect <= tolerance)) {
    throw NotHermitian("eig_hermitian: |M - M^dagger| = " +
                       std::to_string(defect));
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eig_hermitian: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  const Eigen::Index n = sym.rows();
  Spectrum s{Eigen::VectorXd(n), ComplexMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    s.values(i) = solver.eigenvalues()(n - 1 - i);
    s.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return s;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index dim_a,
                            Eigen::Index dim_b, Keep keep) {
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b ||
      m.cols() != dim_a * dim_b) {
    throw DimensionMismatch("partial_trace: " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()) +
                            " does not factor as " + std::to_string(dim_a) +
                            "*" + std::to_string(dim_b));
  }
  if (keep == Keep::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index k = 0; k < dim_b; ++k)
          out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index i = 0; i < dim_b; ++i)
    for (Eigen::Index j = 0; j < dim_b; ++j)
      for (Eigen::Index k = 0; k < dim_a; ++k)
        out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

const Eigen::Matrix2cd& pauli(int index) {
  static const std::array<Eigen::Matrix2cd, 4> sigma = [] {
    const Complex i{0.0, 1.0};
    std::array<Eigen::Matrix2cd, 4> s;
    s[0] << 1.0, 0.0, 0.0, 1.0;
    s[1] << 0.0, 1.0, 1.0, 0.0;
    s[2] << 0.0, -i, i, 0.0;
    s[3] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  if (index < 0 || index > 3) throw OutOfRange("pauli index must be 0..3");
  return sigma[static_cast<std::size_t>(index)];
}

DensityOperator::DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw DimensionMismatch("density operator must be a non-empty square matrix");
  }
  if (!m_.allFinite()) {
    throw std::invalid_argument("density operator has non-finite entries");
  }
  const double defect = hermiticity_defect(m_);
  if (defect > tol::kHermitian) {
    throw NotHermitian("density operator: |M - M^dagger| = " +
                       std::to_string(defect));
  }
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
  const double trace = m_.trace().real();
  if (std::abs(trace - 1.0) > tol::kTrace) {
    throw NotNormalized("density operator: trace = " + std::to_string(trace));
  }
  const double smallest = eig_hermitian(m_).values.minCoeff();
  if (smallest < -tol::kNegativeEigenvalue) {
    throw NotPositive("density operator: smallest eigenvalue " +
                          std::to_string(smallest),
                      smallest);
  }
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  return DensityOperator(psi * psi.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Eigen::Index dim) {
  return DensityOperator(ComplexMatrix::Identity(dim, dim) /
                         static_cast<double>(dim));
}

Eigen::VectorXd DensityOperator::eigenvalues() const {
  Eigen::VectorXd v = eig_hermitian(m_).values;
  for (auto& x : v) {
    if (x < 0.0 && x >= -tol::kNegativeEigenvalue) x = 0.0;
  }
  return v;
}

double shannon_entropy(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) {
    if (w > tol::kEntropyCutoff) s -= w * std::log2(w);
  }
  return s;
}

double von_neumann_entropy(const DensityOperator& rho) {
  const Eigen::VectorXd v = rho.eigenvalues();
  return shannon_entropy(std::span<const double>(v.data(),
                                                 static_cast<std::size_t>(v.size())));
}

const std::array<Ket4, 4>& bell_basis() {
  static const std::array<Ket4, 4> basis = [] {
    const double r = 1.0 / std::sqrt(2.0);
    std::array<Ket4, 4> b;
    // order: |z+z+>, |z+z->, |z-z+>, |z-z->
    b[0] << 0.0, r, -r, 0.0;  // singlet
    b[1] << 0.0, r, r, 0.0;
    b[2] << r, 0.0, 0.0, r;
    b[3] << r, 0.0, 0.0, -r;
    return b;
  }();
  return basis;
}

}  // namespace bb84
