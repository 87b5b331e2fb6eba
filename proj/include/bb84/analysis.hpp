// analysis.hpp - Eve's information curves, their security thresholds, the
// maximum-entropy locus and the search over nonsymmetric states.

#pragma once

#include "bb84/povm.hpp"
#include "bb84/states.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bb84 {

/// Which c22 Eve picks as a function of epsilon.
///   honest  : -(1 - eps), the unbiased-noise state
///   maxent  : -(1 - eps)^2, the maximum-entropy state
///   minconc : smallest feasible |c22|, i.e. minimum concurrence
///   hsw     : maxent locus scored with the HSW bound instead of I_AE
enum class Curve { Honest, MaxEnt, MinConc, Hsw };

inline constexpr std::array<Curve, 4> kCurves = {Curve::Honest, Curve::MaxEnt,
                                                 Curve::MinConc, Curve::Hsw};

std::string_view curve_name(Curve c);
std::optional<Curve> parse_curve(std::string_view name);

/// The c22 rule of a curve; always feasible for eps in [0, 1].
double curve_c22(Curve c, double epsilon);

/// Eve's information along a curve, for 0 <= eps <= 1/2.
double eve_curve(Curve c, double epsilon);

struct ThresholdResult {
  Curve curve = Curve::Honest;
  double epsilon_star = 0.0;
  double residual = 0.0;   // |I_AB - I_Eve| at epsilon_star
  int iterations = 0;

  double qber() const { return 0.5 * epsilon_star; }
};

/// Bisection on I_AB - I_Eve over (0, 1/2). Stops once the bracket is
/// narrower than `tolerance` and the residual is at most `tolerance`, or
/// after 64 halvings. Throws NoSignChange if the bracket is not valid.
ThresholdResult find_threshold(Curve c, double tolerance = 1e-12);

/// Golden-section maximization of the Bell-diagonal entropy over the
/// feasible c22 interval.
double max_entropy_c22(double epsilon);

struct ScanRow {
  double epsilon = 0.0;
  double i_ab = 0.0;
  double honest = 0.0;
  double maxent = 0.0;
  double minconc = 0.0;
  double hsw = 0.0;

  double qber() const { return 0.5 * epsilon; }
};

std::vector<ScanRow> scan_curves(std::span<const double> grid);

/// Inclusive grid start, start + step, ..., up to stop (with a small slack
/// so that stop itself is included when it lies on the grid).
std::vector<double> make_grid(double start, double stop, double step);

struct SearchConfig {
  int restarts = 8;   // optimizer restarts per accepted sample
  int max_iterations = 1000;
  /// Fraction of trials drawn as perturbations around the symmetric
  /// optimum instead of from the walk over all positive states.
  double local_fraction = 0.5;
  double local_scale = 0.05;
  /// Rejection-sampling attempts allowed per local trial before giving up.
  int max_attempts_per_trial = 100000;
  int threads = 0;
};

struct SearchTrial {
  std::array<double, 7> parameters{};
  bool local = false;
  double value = 0.0;
};

struct SearchReport {
  double epsilon = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t rejected = 0;
  double best_value = 0.0;
  std::array<double, 7> best_parameters{};
  double symmetric_optimum = 0.0;
  /// Trials whose value lies within 1e-6 of the symmetric optimum.
  int near_symmetric = 0;
  std::vector<SearchTrial> log;

  double excess() const { return best_value - symmetric_optimum; }
};

/// Eve's best accessible information for a general state with the given
/// hidden coefficients, via purification, conditioning on Alice's outcome
/// and numerical POVM optimization.
double nonsymmetric_information(double epsilon, const HiddenCoefficients& hidden,
                                const OptimizerConfig& cfg);

/// Samples hidden coefficients and reports the largest information found
/// against mi_eve_optimal(eps). Global samples come from a hit-and-run walk
/// that is uniform on the positive states; local samples are Gaussian
/// perturbations of the symmetric optimum with positivity rejection. At
/// eps = 0 every trial is the singlet. Throws NoFeasibleSample if a local
/// trial exhausts its attempts.
SearchReport nonsymmetric_search(double epsilon, int trials, std::uint64_t seed,
                                 const SearchConfig& cfg = {});

}  // namespace bb84
