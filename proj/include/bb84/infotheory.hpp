// infotheory.hpp - closed-form information functionals, in bits.

#pragma once

#include "bb84/linalg.hpp"
#include "bb84/states.hpp"

#include <Eigen/Dense>

namespace bb84 {

/// Phi(x) = [(1-x) log2(1-x) + (1+x) log2(1+x)] / 2 on [0, 1], Phi(1) = 1.
double phi(double x);

/// Binary entropy h(p) in bits.
double binary_entropy(double p);

/// I_AB(eps) = Phi(1 - eps) / 2.
double mi_alice_bob(double epsilon);

/// Eve's information from the von Neumann measurement built for c22:
/// Phi(sqrt(1 - c22^2)) / 2. Independent of epsilon.
double mi_eve_analytic(double c22);

/// The c22 of smallest magnitude that is still feasible at epsilon.
double min_abs_c22(double epsilon);

/// I_AE after Eve picks c22 of smallest magnitude.
double mi_eve_optimal(double epsilon);

/// S(average) - sum_alpha prior_alpha S(rho_alpha).
double hsw_bound(const AncillaEnsemble& ensemble);

/// 1 - Phi(1 - eps), the HSW bound at the maximum-entropy c22.
double hsw_optimal(double epsilon);

struct EntanglementNumbers {
  double separability = 0.0;
  double concurrence = 0.0;
};

/// Degree of separability and concurrence of a Bell-diagonal family state.
EntanglementNumbers entanglement_numbers(const FamilyPoint& p);

/// Hill-Wootters concurrence of an arbitrary two-qubit state:
/// max(0, l1 - l2 - l3 - l4) with l_i the square roots of the eigenvalues
/// of sqrt(rho) rho~ sqrt(rho), rho~ = (Y (x) Y) rho* (Y (x) Y).
double wootters_concurrence(const DensityOperator& rho);

/// Shannon mutual information of a joint probability table (rows and
/// columns are the two variables). Throws NotNormalized if the entries do
/// not sum to 1 within 1e-9 or any entry is negative beyond that.
double mutual_information(const Eigen::MatrixXd& joint);

double mutual_information(const JointTable& table);

enum class Attack { RawAnalytic, Hsw };

/// I_AB - I_AE for the given attack; negative beyond the threshold.
double key_rate(double epsilon, Attack attack);

}  // namespace bb84
