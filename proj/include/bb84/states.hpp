// states.hpp - the two-qubit states Eve may distribute, their purification,
// Eve's conditioned ancilla ensemble, and the Alice/Bob joint table.
//
// Qubit order is A (x) B (x) E. |z+> = |0>, |z-> = |1>,
// |x+-> = (|z+> +- |z->)/sqrt(2). Outcomes are ordered z+, z-, x+, x-
// everywhere.

#pragma once

#include "bb84/linalg.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace bb84 {

enum class Outcome { ZPlus = 0, ZMinus = 1, XPlus = 2, XMinus = 3 };

inline constexpr std::array<Outcome, 4> kOutcomes = {
    Outcome::ZPlus, Outcome::ZMinus, Outcome::XPlus, Outcome::XMinus};

std::string_view outcome_name(Outcome o);

/// Single-qubit eigenket for a measurement outcome.
const Eigen::Vector2cd& outcome_ket(Outcome o);

/// c[j][k] = <sigma_j (x) sigma_k>, so rho = (1/4) sum c_jk sigma_j (x) sigma_k.
struct PauliCoefficients {
  std::array<std::array<double, 4>, 4> c{};

  ComplexMatrix compose() const;
  static PauliCoefficients decompose(const ComplexMatrix& rho);
};

/// A state of the symmetric Bell-diagonal family.
struct FamilyPoint {
  double epsilon = 0.0;
  double c22 = -1.0;

  /// -1 <= c22 <= 2 epsilon - 1 with 0 <= epsilon <= 1, up to `slack`.
  bool feasible(double slack = 1e-12) const;
};

/// Throws InfeasiblePoint unless the point is feasible.
void require_feasible(const FamilyPoint& p);

/// Bell-basis weights <E_j|E_j>, j = 1..4. Values within the zero-weight
/// tolerance of 0 are returned as exactly 0.
std::array<double, 4> bell_weights(const FamilyPoint& p);

/// (1 - eps) |phi1><phi1| + eps/4.
DensityOperator unbiased_noise_state(double epsilon);

/// sum_j w_j |phi_j><phi_j|.
DensityOperator bell_diagonal_state(const FamilyPoint& p);

/// The seven Pauli coefficients that partial tomography leaves open.
struct HiddenCoefficients {
  double c02 = 0.0;
  double c20 = 0.0;
  double c12 = 0.0;
  double c21 = 0.0;
  double c22 = 0.0;
  double c23 = 0.0;
  double c32 = 0.0;

  std::array<double, 7> as_array() const {
    return {c02, c20, c12, c21, c22, c23, c32};
  }
  static HiddenCoefficients from_array(const std::array<double, 7>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }
};

/// Pauli coefficients with the tomographic constraints applied:
/// c01 = c03 = c10 = c30 = c13 = c31 = 0, c11 = c33 = -(1 - eps).
PauliCoefficients constrained_coefficients(double epsilon,
                                           const HiddenCoefficients& hidden);

/// Assembles the constrained state; throws NotPositive (carrying the
/// smallest eigenvalue) if the coefficients are unphysical.
DensityOperator general_state(double epsilon, const HiddenCoefficients& hidden);

/// |Psi_ABE> = sum_j |phi_j>|E_j> with |E_j> = sqrt(w_j) e_j.
struct Purification {
  ComplexVector psi;             // 16 entries, index = 4 * (2a + b) + e
  std::array<Ket4, 4> ancilla;   // the unnormalized |E_j>
};

Purification purification(const FamilyPoint& p);

/// Purification of an arbitrary two-qubit state through its eigenbasis:
/// sum_i sqrt(lambda_i) |u_i>|e_i>.
ComplexVector purify(const DensityOperator& rho_ab);

/// Eve's four ancilla states conditioned on Alice's outcome.
struct AncillaEnsemble {
  std::array<ComplexMatrix, 4> states;   // trace 1 each, order z+ z- x+ x-
  std::array<double, 4> priors{};

  /// sum_alpha prior_alpha rho_alpha.
  ComplexMatrix average() const;
};

/// Closed-form conditioned states built from the |E_j> kets.
AncillaEnsemble conditioned_ancilla(const FamilyPoint& p);

/// Conditioned states obtained by projecting Alice's qubit of a 16-entry
/// purification onto each outcome ket and tracing out Bob. Alice picks
/// each basis with probability 1/2.
AncillaEnsemble conditioned_ancilla(const ComplexVector& psi_abe);

/// p[bob][alice] over outcomes z+, z-, x+, x-.
struct JointTable {
  std::array<std::array<double, 4>, 4> p{};

  double total() const;
};

/// p[b][a] = (1/4) tr{rho (A_a (x) B_b)}.
JointTable joint_table(const DensityOperator& rho_ab);

/// Empirical outcome counts drawn from the joint table of a family point.
struct SampledTable {
  std::array<std::array<std::uint64_t, 4>, 4> counts{};
  std::uint64_t n = 0;

  JointTable frequencies() const;
};

/// Draws n i.i.d. outcome pairs. Deterministic for a fixed seed on every
/// platform (mt19937_64 with explicit 53-bit uniform conversion).
SampledTable simulate_raw_data(const FamilyPoint& p, std::uint64_t n,
                               std::uint64_t seed);

}  // namespace bb84
