#include "bb84/povm.hpp"

#include "bb84/errors.hpp"
#include "bb84/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace bb84 {

Povm povm_from_kets(const std::vector<ComplexVector>& kets) {
  if (kets.empty()) throw std::invalid_argument("povm_from_kets: no kets");
  Povm m;
  const Eigen::Index d = kets.front().size();
  m.support = ComplexMatrix::Identity(d, d);
  for (std::size_t k = 0; k < kets.size(); ++k) {
    if (kets[k].size() != d) throw DimensionMismatch("povm_from_kets: ragged kets");
    m.elements.push_back(kets[k] * kets[k].adjoint());
    m.labels.push_back(std::to_string(k));
  }
  return m;
}

PovmResiduals povm_residuals(const Povm& m) {
  PovmResiduals r;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  ComplexMatrix sum = ComplexMatrix::Zero(m.dim(), m.dim());
  for (const auto& e : m.elements) {
    if (e.rows() != m.dim() || e.cols() != m.dim()) {
      throw DimensionMismatch("POVM elements disagree in dimension");
    }
    r.min_eigenvalue = std::min(r.min_eigenvalue, eig_hermitian(e).values.minCoeff());
    r.max_imaginary = std::max(r.max_imaginary, e.imag().cwiseAbs().maxCoeff());
    sum += e;
  }
  r.completeness = (sum - m.support).cwiseAbs().maxCoeff();
  return r;
}

bool is_valid(const Povm& m) {
  if (m.elements.empty()) return false;
  const PovmResiduals r = povm_residuals(m);
  return r.min_eigenvalue >= -tol::kNegativeEigenvalue && r.completeness <= 1e-9;
}

Povm analytic_povm(const FamilyPoint& p) {
  require_feasible(p);
  const auto w = bell_weights(p);
  const double eps = p.epsilon;
  const double c = p.c22;

  // Coefficients in the orthonormal basis e_j: the printed factor times
  // sqrt(w_j). They reduce to 1/2, a/2, 1/2, b/2 in magnitude with
  // a^2 = (3 - 2 eps - c)/(1 - c) and a^2 + b^2 = 2.
  double a2 = 2.0;
  if (1.0 - c > tol::kZeroWeight) {
    a2 = std::clamp((3.0 - 2.0 * eps - c) / (1.0 - c), 0.0, 2.0);
  }
  const double a = std::sqrt(a2);
  const double b = std::sqrt(std::max(0.0, 2.0 - a2));
  const Complex i{0.0, 1.0};

  std::vector<ComplexVector> kets;
  for (double s : {1.0, -1.0}) {
    Ket4 k;
    k << 0.5, 0.5 * s * a, -0.5 * i, -0.5 * s * i * b;
    kets.emplace_back(k);
  }
  for (double s : {1.0, -1.0}) {
    Ket4 k;
    k << 0.5, 0.5 * s * i * b, 0.5 * i, -0.5 * s * a;
    kets.emplace_back(k);
  }

  ComplexMatrix support = ComplexMatrix::Zero(4, 4);
  for (Eigen::Index j = 0; j < 4; ++j) {
    if (w[static_cast<std::size_t>(j)] > 0.0) {
      support(j, j) = 1.0;
    } else {
      for (auto& k : kets) k(j) = 0.0;
    }
  }

  Povm m = povm_from_kets(kets);
  m.labels = {"P1", "P2", "P3", "P4"};
  m.support = support;
  return m;
}

Povm canonical_povm(const FamilyPoint& p) {
  const Povm m = analytic_povm(p);
  return convex_combine(m, conjugate_povm(m), 0.5);
}

double accessible_info(const AncillaEnsemble& ensemble, const Povm& m) {
  const Eigen::Index d = ensemble.states[0].rows();
  if (m.elements.empty()) throw std::invalid_argument("accessible_info: empty POVM");
  Eigen::MatrixXd joint(4, static_cast<Eigen::Index>(m.size()));
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      const auto& e = m.elements[k];
      if (e.rows() != d || e.cols() != d) {
        throw DimensionMismatch("accessible_info: POVM dimension " +
                                std::to_string(e.rows()) + " vs ensemble " +
                                std::to_string(d));
      }
      joint(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k)) =
          std::max(0.0, ensemble.priors[a] *
                            (ensemble.states[a] * e).trace().real());
    }
  }
  // Outcomes outside the support carry no probability; renormalize for
  // rounding only.
  joint /= joint.sum();
  return mutual_information(joint);
}

Povm conjugate_povm(const Povm& m) {
  Povm out = m;
  for (auto& e : out.elements) e = e.conjugate().eval();
  out.support = m.support.conjugate();
  return out;
}

Povm convex_combine(const Povm& m1, const Povm& m2, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw OutOfRange("convex_combine: weight must lie in [0, 1]");
  }
  if (m1.size() != m2.size() || m1.dim() != m2.dim()) {
    throw DimensionMismatch("convex_combine: POVMs differ in outcome count or dimension");
  }
  Povm out = m1;
  for (std::size_t k = 0; k < m1.size(); ++k)
    out.elements[k] = weight * m1.elements[k] + (1.0 - weight) * m2.elements[k];
  out.support = weight * m1.support + (1.0 - weight) * m2.support;
  return out;
}

}  // namespace bb84
