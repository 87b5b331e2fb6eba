#include "bb84/states.hpp"

#include "bb84/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace bb84 {

namespace {

std::string describe(const FamilyPoint& p) {
  return "(epsilon=" + std::to_string(p.epsilon) +
         ", c22=" + std::to_string(p.c22) + ")";
}

ComplexMatrix dyad(const Ket4& a) { return a * a.adjoint(); }

// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::ZPlus: return "z+";
    case Outcome::ZMinus: return "z-";
    case Outcome::XPlus: return "x+";
    case Outcome::XMinus: return "x-";
  }
  return "?";
}

const Eigen::Vector2cd& outcome_ket(Outcome o) {
  static const std::array<Eigen::Vector2cd, 4> kets = [] {
    const double r = 1.0 / std::sqrt(2.0);
    std::array<Eigen::Vector2cd, 4> k;
    k[0] << 1.0, 0.0;
    k[1] << 0.0, 1.0;
    k[2] << r, r;
    k[3] << r, -r;
    return k;
  }();
  return kets[static_cast<std::size_t>(o)];
}

ComplexMatrix PauliCoefficients::compose() const {
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      const double cjk = c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      if (cjk != 0.0) rho += cjk * kron(pauli(j), pauli(k));
    }
  return rho / 4.0;
}

PauliCoefficients PauliCoefficients::decompose(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw DimensionMismatch("Pauli decomposition needs a 4x4 operator");
  }
  PauliCoefficients out;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      out.c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
          (rho * kron(pauli(j), pauli(k))).trace().real();
  return out;
}

bool FamilyPoint::feasible(double slack) const {
  return epsilon >= -slack && epsilon <= 1.0 + slack && c22 >= -1.0 - slack &&
         c22 <= 2.0 * epsilon - 1.0 + slack;
}

void require_feasible(const FamilyPoint& p) {
  if (!std::isfinite(p.epsilon) || !std::isfinite(p.c22) || !p.feasible()) {
    throw InfeasiblePoint("infeasible family point " + describe(p) +
                          ": need -1 <= c22 <= 2 epsilon - 1");
  }
}

std::array<double, 4> bell_weights(const FamilyPoint& p) {
  const double eps = p.epsilon;
  const double c = p.c22;
  std::array<double, 4> w = {(3.0 - 2.0 * eps - c) / 4.0, (1.0 + c) / 4.0,
                             (-1.0 + 2.0 * eps - c) / 4.0, (1.0 + c) / 4.0};
  for (auto& x : w) {
    if (std::abs(x) <= tol::kZeroWeight) x = 0.0;
  }
  return w;
}

DensityOperator unbiased_noise_state(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw OutOfRange("unbiased_noise_state: epsilon must lie in [0, 1]");
  }
  const Ket4& singlet = bell_basis()[0];
  return DensityOperator((1.0 - epsilon) * dyad(singlet) +
                         (epsilon / 4.0) * ComplexMatrix::Identity(4, 4));
}

DensityOperator bell_diagonal_state(const FamilyPoint& p) {
  require_feasible(p);
  const auto w = bell_weights(p);
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (std::size_t j = 0; j < 4; ++j) rho += w[j] * dyad(bell_basis()[j]);
  return DensityOperator(std::move(rho));
}

PauliCoefficients constrained_coefficients(double epsilon,
                                           const HiddenCoefficients& h) {
  PauliCoefficients pc;
  auto& c = pc.c;
  c[0][0] = 1.0;
  c[1][1] = c[3][3] = -(1.0 - epsilon);
  c[0][2] = h.c02;
  c[2][0] = h.c20;
  c[1][2] = h.c12;
  c[2][1] = h.c21;
  c[2][2] = h.c22;
  c[2][3] = h.c23;
  c[3][2] = h.c32;
  return pc;
}

DensityOperator general_state(double epsilon, const HiddenCoefficients& hidden) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw OutOfRange("general_state: epsilon must lie in [0, 1]");
  }
  for (double v : hidden.as_array()) {
    if (!(std::abs(v) <= 1.0)) {
      throw OutOfRange("general_state: Pauli coefficients must lie in [-1, 1]");
    }
  }
  const ComplexMatrix rho = constrained_coefficients(epsilon, hidden).compose();
  const double smallest = eig_hermitian(rho).values.minCoeff();
  if (smallest < -tol::kNegativeEigenvalue) {
    throw NotPositive("general_state: smallest eigenvalue " +
                          std::to_string(smallest),
                      smallest);
  }
  return DensityOperator(rho);
}

Purification purification(const FamilyPoint& p) {
  require_feasible(p);
  const auto w = bell_weights(p);
  Purification out;
  out.psi = ComplexVector::Zero(16);
  for (std::size_t j = 0; j < 4; ++j) {
    out.ancilla[j] = Ket4::Zero();
    out.ancilla[j](static_cast<Eigen::Index>(j)) = std::sqrt(w[j]);
    for (Eigen::Index ab = 0; ab < 4; ++ab)
      out.psi.segment(4 * ab, 4) += bell_basis()[j](ab) * out.ancilla[j];
  }
  return out;
}

ComplexVector purify(const DensityOperator& rho_ab) {
  if (rho_ab.dim() != 4) throw DimensionMismatch("purify expects a two-qubit state");
  const Spectrum s = eig_hermitian(rho_ab.matrix());
  ComplexVector psi = ComplexVector::Zero(16);
  for (Eigen::Index i = 0; i < 4; ++i) {
    const double lambda = s.values(i);
    if (lambda <= 0.0) continue;
    const double amp = std::sqrt(lambda);
    for (Eigen::Index ab = 0; ab < 4; ++ab)
      psi(4 * ab + i) += amp * s.vectors(ab, i);
  }
  return psi;
}

ComplexMatrix AncillaEnsemble::average() const {
  ComplexMatrix avg = ComplexMatrix::Zero(states[0].rows(), states[0].cols());
  for (std::size_t a = 0; a < 4; ++a) avg += priors[a] * states[a];
  return avg;
}

AncillaEnsemble conditioned_ancilla(const FamilyPoint& p) {
  const Purification pur = purification(p);
  const auto& e = pur.ancilla;
  AncillaEnsemble ens;
  ens.states[0] = dyad(e[0] + e[1]) + dyad(e[2] + e[3]);
  ens.states[1] = dyad(e[0] - e[1]) + dyad(e[2] - e[3]);
  ens.states[2] = dyad(e[0] - e[3]) + dyad(e[1] + e[2]);
  ens.states[3] = dyad(e[0] + e[3]) + dyad(e[1] - e[2]);
  ens.priors = {0.25, 0.25, 0.25, 0.25};
  return ens;
}

AncillaEnsemble conditioned_ancilla(const ComplexVector& psi_abe) {
  if (psi_abe.size() != 16) {
    throw DimensionMismatch("conditioned_ancilla expects a 16-entry ket");
  }
  AncillaEnsemble ens;
  for (Outcome o : kOutcomes) {
    const auto idx = static_cast<std::size_t>(o);
    const Eigen::Vector2cd& k = outcome_ket(o);
    ComplexMatrix sigma = ComplexMatrix::Zero(4, 4);
    for (Eigen::Index b = 0; b < 2; ++b) {
      ComplexVector v = ComplexVector::Zero(4);
      for (Eigen::Index a = 0; a < 2; ++a)
        v += std::conj(k(a)) * psi_abe.segment(4 * (2 * a + b), 4);
      sigma += v * v.adjoint();
    }
    const double weight = sigma.trace().real();
    // Alice chooses the basis with probability 1/2.
    ens.priors[idx] = 0.5 * weight;
    ens.states[idx] = weight > 0.0
                          ? ComplexMatrix(sigma / weight)
                          : ComplexMatrix(ComplexMatrix::Identity(4, 4) / 4.0);
  }
  return ens;
}

double JointTable::total() const {
  double s = 0.0;
  for (const auto& row : p)
    for (double v : row) s += v;
  return s;
}

JointTable joint_table(const DensityOperator& rho_ab) {
  if (rho_ab.dim() != 4) throw DimensionMismatch("joint_table expects a two-qubit state");
  JointTable t;
  for (Outcome b : kOutcomes) {
    for (Outcome a : kOutcomes) {
      const Eigen::Vector4cd ket =
          kron(outcome_ket(a), outcome_ket(b)).col(0);
      const double prob =
          (ket.adjoint() * rho_ab.matrix() * ket)(0, 0).real();
      t.p[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] =
          0.25 * prob;
    }
  }
  return t;
}

JointTable SampledTable::frequencies() const {
  JointTable t;
  if (n == 0) return t;
  for (std::size_t b = 0; b < 4; ++b)
    for (std::size_t a = 0; a < 4; ++a)
      t.p[b][a] = static_cast<double>(counts[b][a]) / static_cast<double>(n);
  return t;
}

SampledTable simulate_raw_data(const FamilyPoint& p, std::uint64_t n,
                               std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("simulate_raw_data: n must be >= 1");
  const JointTable t = joint_table(bell_diagonal_state(p));
  std::array<double, 16> cumulative{};
  double acc = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    acc += std::max(0.0, t.p[i / 4][i % 4]);
    cumulative[i] = acc;
  }
  std::mt19937_64 gen(seed);
  SampledTable out;
  out.n = n;
  for (std::uint64_t draw = 0; draw < n; ++draw) {
    const double u = unit_uniform(gen) * acc;
    std::size_t cell = 0;
    // First cell whose cumulative weight exceeds u; never a zero cell.
    while (cell < 15 && !(u < cumulative[cell])) ++cell;
    ++out.counts[cell / 4][cell % 4];
  }
  return out;
}

}  // namespace bb84
