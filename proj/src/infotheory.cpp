#include "bb84/infotheory.hpp"

#include "bb84/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bb84 {

namespace {

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw OutOfRange(std::string(what) + " must lie in [0, 1], got " +
                     std::to_string(x));
  }
}

// t log2 t with the t -> 0 limit.
double xlog2x(double t) { return t > 0.0 ? t * std::log2(t) : 0.0; }

}  // namespace

double phi(double x) {
  require_unit_interval(x, "phi: argument");
  if (x == 1.0) return 1.0;
  return 0.5 * (xlog2x(1.0 - x) + xlog2x(1.0 + x));
}

double binary_entropy(double p) {
  require_unit_interval(p, "binary_entropy: p");
  return -xlog2x(p) - xlog2x(1.0 - p);
}

double mi_alice_bob(double epsilon) {
  require_unit_interval(epsilon, "mi_alice_bob: epsilon");
  return 0.5 * phi(1.0 - epsilon);
}

double mi_eve_analytic(double c22) {
  if (!(std::abs(c22) <= 1.0)) {
    throw OutOfRange("mi_eve_analytic: |c22| must be <= 1");
  }
  return 0.5 * phi(std::sqrt(std::max(0.0, 1.0 - c22 * c22)));
}

double min_abs_c22(double epsilon) {
  require_unit_interval(epsilon, "min_abs_c22: epsilon");
  return epsilon >= 0.5 ? 0.0 : -(1.0 - 2.0 * epsilon);
}

double mi_eve_optimal(double epsilon) {
  require_unit_interval(epsilon, "mi_eve_optimal: epsilon");
  if (epsilon >= 0.5) return 0.5;
  // sqrt(1 - (1 - 2 eps)^2) = 2 sqrt(eps (1 - eps))
  return 0.5 * phi(std::min(1.0, 2.0 * std::sqrt(epsilon * (1.0 - epsilon))));
}

double hsw_bound(const AncillaEnsemble& ensemble) {
  const double total = ensemble.average().trace().real();
  double mixed = von_neumann_entropy(DensityOperator(ensemble.average() / total));
  for (std::size_t a = 0; a < 4; ++a) {
    if (ensemble.priors[a] <= 0.0) continue;
    mixed -= ensemble.priors[a] / total *
             von_neumann_entropy(DensityOperator(ensemble.states[a]));
  }
  return std::max(0.0, mixed);
}

double hsw_optimal(double epsilon) {
  require_unit_interval(epsilon, "hsw_optimal: epsilon");
  return 1.0 - phi(1.0 - epsilon);
}

EntanglementNumbers entanglement_numbers(const FamilyPoint& p) {
  require_feasible(p);
  EntanglementNumbers n;
  n.separability = std::min(1.0, p.epsilon + 0.5 * (1.0 + p.c22));
  n.concurrence = std::max(0.0, 0.5 * (1.0 - p.c22) - p.epsilon);
  return n;
}

double wootters_concurrence(const DensityOperator& rho) {
  if (rho.dim() != 4) throw DimensionMismatch("concurrence needs a two-qubit state");
  const ComplexMatrix yy = kron(pauli(2), pauli(2));
  const ComplexMatrix root = hermitian_function(
      rho.matrix(), [](double v) { return Complex(std::sqrt(std::max(0.0, v))); });
  // The l_i are the singular values of sqrt(rho) sqrt(rho~); going through
  // the product sqrt(rho) rho~ sqrt(rho) would square them first.
  const ComplexMatrix flipped_root = yy * root.conjugate() * yy;
  const Eigen::VectorXd l = Eigen::JacobiSVD<ComplexMatrix>(root * flipped_root).singularValues();
  double c = l(0);
  for (Eigen::Index i = 1; i < l.size(); ++i) c -= l(i);
  return std::max(0.0, c);
}

double mutual_information(const Eigen::MatrixXd& joint) {
  constexpr double kSlack = 1e-9;
  if (joint.size() == 0) throw NotNormalized("mutual_information: empty table");
  if (!joint.allFinite() || joint.minCoeff() < -kSlack ||
      std::abs(joint.sum() - 1.0) > kSlack) {
    throw NotNormalized("mutual_information: table must be a probability table");
  }
  const Eigen::VectorXd rows = joint.rowwise().sum();
  const Eigen::RowVectorXd cols = joint.colwise().sum();
  double info = 0.0;
  for (Eigen::Index i = 0; i < joint.rows(); ++i)
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      const double p = joint(i, j);
      if (p > 0.0) info += p * std::log2(p / (rows(i) * cols(j)));
    }
  return std::max(0.0, info);
}

double mutual_information(const JointTable& table) {
  Eigen::MatrixXd m(4, 4);
  for (Eigen::Index b = 0; b < 4; ++b)
    for (Eigen::Index a = 0; a < 4; ++a)
      m(b, a) = table.p[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
  return mutual_information(m);
}

double key_rate(double epsilon, Attack attack) {
  require_unit_interval(epsilon, "key_rate: epsilon");
  const double eve =
      attack == Attack::Hsw ? hsw_optimal(epsilon) : mi_eve_optimal(epsilon);
  return mi_alice_bob(epsilon) - eve;
}

}  // namespace bb84
