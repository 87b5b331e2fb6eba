// linalg.hpp - small dense complex matrix kernel.
//
// Everything here works on Eigen dynamic complex matrices of dimension
// 2, 4 or 16. Logarithms are base 2 throughout the library.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <span>

namespace bb84 {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Ket4 = Eigen::Vector4cd;

namespace tol {
inline constexpr double kHermitian = 1e-12;       // DensityOperator check
inline constexpr double kHermitianEig = 1e-10;    // eig_hermitian precondition
inline constexpr double kTrace = 1e-12;
inline constexpr double kNegativeEigenvalue = 1e-10;
inline constexpr double kEntropyCutoff = 1e-14;
inline constexpr double kZeroWeight = 1e-12;
}  // namespace tol

/// Eigenvalues sorted descending, eigenvectors as matching orthonormal columns.
struct Spectrum {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
};

/// Largest entrywise |m - m^dagger|.
double hermiticity_defect(const ComplexMatrix& m);

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized
/// before solving; throws NotHermitian if the defect exceeds `tolerance`.
Spectrum eig_hermitian(const ComplexMatrix& m,
                       double tolerance = tol::kHermitianEig);

/// f(m) = V f(lambda) V^dagger for Hermitian m.
template <typename F>
ComplexMatrix hermitian_function(const ComplexMatrix& m, F&& f) {
  const Spectrum s = eig_hermitian(m);
  Eigen::VectorXcd mapped(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) mapped(i) = f(s.values(i));
  return s.vectors * mapped.asDiagonal() * s.vectors.adjoint();
}

/// Which factor of H_A (x) H_B survives a partial trace.
enum class Keep { A, B };

/// Partial trace of an operator on H_A (x) H_B with the given factor
/// dimensions. Throws DimensionMismatch unless m is (dimA dimB)-square.
ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index dim_a,
                            Eigen::Index dim_b, Keep keep);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// sigma_0 = identity, sigma_1..3 = X, Y, Z.
const Eigen::Matrix2cd& pauli(int index);

/// A validated density operator: Hermitian, unit trace, positive
/// semidefinite up to the tolerances in bb84::tol.
class DensityOperator {
 public:
  /// Validates and stores `m`; throws std::invalid_argument on failure.
  explicit DensityOperator(ComplexMatrix m);

  /// Pure state |psi><psi| of a normalized ket.
  static DensityOperator pure(const ComplexVector& psi);

  /// identity(dim) / dim.
  static DensityOperator maximally_mixed(Eigen::Index dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  /// Eigenvalues descending with values in [-1e-10, 0) clipped to 0.
  Eigen::VectorXd eigenvalues() const;

 private:
  ComplexMatrix m_;
};

/// Shannon entropy in bits of a weight vector; entries below the entropy
/// cutoff contribute nothing.
double shannon_entropy(std::span<const double> weights);

/// S(rho) = -tr rho log2 rho.
double von_neumann_entropy(const DensityOperator& rho);

/// The four Bell states in the computational order |z+z+>, |z+z->,
/// |z-z+>, |z-z->. Index 0 is the singlet.
const std::array<Ket4, 4>& bell_basis();

}  // namespace bb84
