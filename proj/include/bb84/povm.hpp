// povm.hpp - measurements on Eve's ancilla.
//
// A Povm carries its elements plus the projector onto the subspace where
// completeness is required. For measurements built at a boundary of the
// feasible region that subspace is the span of the ancilla axes with
// non-zero weight; otherwise it is the identity.

#pragma once

#include "bb84/linalg.hpp"
#include "bb84/states.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bb84 {

struct Povm {
  std::vector<ComplexMatrix> elements;
  std::vector<std::string> labels;
  ComplexMatrix support;

  Eigen::Index dim() const { return support.rows(); }
  std::size_t size() const { return elements.size(); }
};

/// Rank-one POVM from kets; labels default to "0", "1", ...
Povm povm_from_kets(const std::vector<ComplexVector>& kets);

struct PovmResiduals {
  double min_eigenvalue = 0.0;   // smallest over all elements
  double completeness = 0.0;     // max |sum Pi_k - support|
  double max_imaginary = 0.0;    // largest |Im| over all entries
};

PovmResiduals povm_residuals(const Povm& m);

/// Positivity within -1e-10 and completeness within 1e-9.
bool is_valid(const Povm& m);

/// The four-outcome von Neumann measurement that is optimal for the
/// symmetric family at `p`, written in the orthonormal ancilla basis e_j.
/// Components along zero-weight axes are dropped and the support shrinks
/// accordingly.
Povm analytic_povm(const FamilyPoint& p);

/// The real measurement obtained by averaging analytic_povm with its
/// complex conjugate. Used as the canonical representative.
Povm canonical_povm(const FamilyPoint& p);

/// Mutual information between Alice's outcome and Eve's POVM outcome.
double accessible_info(const AncillaEnsemble& ensemble, const Povm& m);

Povm conjugate_povm(const Povm& m);

/// weight m1 + (1 - weight) m2, outcome by outcome.
Povm convex_combine(const Povm& m1, const Povm& m2, double weight);

struct OptimizerConfig {
  int restarts = 20;
  int max_iterations = 4000;
  double step_tolerance = 1e-13;   // stop once gains stay below this
  std::uint64_t seed = 0;
  int outcome_budget = 16;
  /// Optional extra starting point, run before the random restarts.
  std::optional<Povm> initial;
  /// 0 means use BB84_THREADS or the hardware concurrency.
  int threads = 0;
};

struct RestartDiagnostics {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct OptimizerResult {
  Povm povm;
  double value = 0.0;
  std::vector<RestartDiagnostics> restarts;
};

/// Numerical maximization of accessible information over rank-one POVMs
/// with `outcome_budget` outcomes. Each restart starts from a random
/// isometry and alternates between evaluating the outcome likelihoods
/// tr{rho_alpha Pi_k} and a gradient step on the outcome kets followed by
/// the normalization v_k <- (sum_j v_j v_j^dagger)^(-1/2) v_k. Deterministic
/// for a fixed seed regardless of thread count.
OptimizerResult optimize_povm(const AncillaEnsemble& ensemble,
                              const OptimizerConfig& cfg);

/// Seed for restart `index`, derived with splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Worker count for parallel loops: `requested` if positive, else the
/// BB84_THREADS environment variable, else the hardware concurrency.
unsigned worker_count(int requested = 0);

}  // namespace bb84
