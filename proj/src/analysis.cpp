#include "bb84/analysis.hpp"

#include "bb84/errors.hpp"
#include "bb84/infotheory.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace bb84 {

std::string_view curve_name(Curve c) {
  switch (c) {
    case Curve::Honest: return "honest";
    case Curve::MaxEnt: return "maxent";
    case Curve::MinConc: return "minconc";
    case Curve::Hsw: return "hsw";
  }
  return "?";
}

std::optional<Curve> parse_curve(std::string_view name) {
  for (Curve c : kCurves) {
    if (curve_name(c) == name) return c;
  }
  return std::nullopt;
}

double curve_c22(Curve c, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw OutOfRange("curve_c22: epsilon must lie in [0, 1]");
  }
  switch (c) {
    case Curve::Honest: return -(1.0 - epsilon);
    case Curve::MaxEnt:
    case Curve::Hsw: return -(1.0 - epsilon) * (1.0 - epsilon);
    case Curve::MinConc: return min_abs_c22(epsilon);
  }
  return 0.0;
}

double eve_curve(Curve c, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.5)) {
    throw OutOfRange("eve_curve: epsilon must lie in [0, 1/2]");
  }
  if (c == Curve::Hsw) return hsw_optimal(epsilon);
  return mi_eve_analytic(curve_c22(c, epsilon));
}

ThresholdResult find_threshold(Curve c, double tolerance) {
  if (!(tolerance >= 1e-12)) {
    throw std::invalid_argument("find_threshold: tolerance must be >= 1e-12");
  }
  auto gap = [c](double eps) { return mi_alice_bob(eps) - eve_curve(c, eps); };
  double lo = 0.0;
  double hi = 0.5;
  const double f_lo = gap(lo);
  const double f_hi = gap(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw NoSignChange("find_threshold: no sign change of the key rate on (0, 1/2) for " +
                       std::string(curve_name(c)));
  }
  ThresholdResult r;
  r.curve = c;
  double mid = 0.5 * (lo + hi);
  double f_mid = gap(mid);
  for (r.iterations = 1; r.iterations < 64; ++r.iterations) {
    if (f_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tolerance && std::abs(f_mid) <= tolerance) break;
    const double next = 0.5 * (lo + hi);
    if (next == mid) break;
    mid = next;
    f_mid = gap(mid);
  }
  r.epsilon_star = mid;
  r.residual = std::abs(f_mid);
  return r;
}

double max_entropy_c22(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw OutOfRange("max_entropy_c22: epsilon must lie in [0, 1]");
  }
  double lo = -1.0;
  double hi = 2.0 * epsilon - 1.0;
  if (hi - lo <= 0.0) return lo;
  auto entropy = [epsilon](double c22) {
    return von_neumann_entropy(bell_diagonal_state({epsilon, c22}));
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = entropy(x1);
  double f2 = entropy(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = entropy(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = entropy(x1);
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<ScanRow> scan_curves(std::span<const double> grid) {
  std::vector<ScanRow> rows;
  rows.reserve(grid.size());
  for (double eps : grid) {
    if (!(eps >= 0.0 && eps <= 0.5)) {
      throw OutOfRange("scan_curves: grid points must lie in [0, 1/2]");
    }
    ScanRow r;
    r.epsilon = eps;
    r.i_ab = mi_alice_bob(eps);
    r.honest = eve_curve(Curve::Honest, eps);
    r.maxent = eve_curve(Curve::MaxEnt, eps);
    r.minconc = eve_curve(Curve::MinConc, eps);
    r.hsw = eve_curve(Curve::Hsw, eps);
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) {
    throw std::invalid_argument("make_grid: need step > 0 and stop >= start");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(std::min(stop, start + static_cast<double>(i) * step));
  }
  return grid;
}

double nonsymmetric_information(double epsilon, const HiddenCoefficients& hidden,
                                const OptimizerConfig& cfg) {
  const DensityOperator rho = general_state(epsilon, hidden);
  const AncillaEnsemble ens = conditioned_ancilla(purify(rho));
  return optimize_povm(ens, cfg).value;
}

namespace {

using Params = std::array<double, 7>;

double smallest_eigenvalue(double epsilon, const Params& x) {
  for (double v : x) {
    if (std::abs(v) > 1.0) return -1.0;
  }
  const ComplexMatrix rho =
      constrained_coefficients(epsilon, HiddenCoefficients::from_array(x)).compose();
  return eig_hermitian(rho).values.minCoeff();
}

// Largest t >= 0 with x + t d still positive, by bisection.
double chord_end(double epsilon, const Params& x, const Params& d) {
  auto at = [&](double t) {
    Params y;
    for (std::size_t i = 0; i < 7; ++i) y[i] = x[i] + t * d[i];
    return y;
  };
  double lo = 0.0;
  double hi = 2.0 * std::sqrt(7.0);  // the coefficient cube has this diameter
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (smallest_eigenvalue(epsilon, at(mid)) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Hit-and-run walk: uniform samples on the convex set of positive states.
class FeasibleWalk {
 public:
  FeasibleWalk(double epsilon, std::uint64_t seed) : epsilon_(epsilon), gen_(seed) {
    // The unbiased-noise state is interior for epsilon > 0.
    x_.fill(0.0);
    x_[4] = -(1.0 - epsilon);
  }

  Params next(int thinning) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int s = 0; s < thinning; ++s) {
      Params d;
      double norm = 0.0;
      for (auto& v : d) {
        v = normal(gen_);
        norm += v * v;
      }
      norm = std::sqrt(norm);
      Params back;
      for (std::size_t i = 0; i < 7; ++i) {
        d[i] /= norm;
        back[i] = -d[i];
      }
      const double t_plus = chord_end(epsilon_, x_, d);
      const double t_minus = chord_end(epsilon_, x_, back);
      const double t = -t_minus + uniform(gen_) * (t_plus + t_minus);
      for (std::size_t i = 0; i < 7; ++i) x_[i] += t * d[i];
    }
    return x_;
  }

 private:
  double epsilon_;
  std::mt19937_64 gen_;
  Params x_{};
};

constexpr int kWalkThinning = 5;
constexpr double kNearSymmetric = 1e-6;

}  // namespace

SearchReport nonsymmetric_search(double epsilon, int trials, std::uint64_t seed,
                                 const SearchConfig& cfg) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw OutOfRange("nonsymmetric_search: epsilon must lie in [0, 1]");
  }
  if (trials < 1) throw std::invalid_argument("nonsymmetric_search: trials must be >= 1");

  SearchReport report;
  report.epsilon = epsilon;
  report.trials = trials;
  report.seed = seed;
  report.symmetric_optimum = mi_eve_optimal(epsilon);

  Params optimum{};
  optimum[4] = min_abs_c22(epsilon);

  // Samples are drawn sequentially so the set of states does not depend on
  // how the evaluations are scheduled.
  std::vector<SearchTrial> log(static_cast<std::size_t>(trials));
  FeasibleWalk walk(epsilon, derive_seed(seed, 0));
  std::mt19937_64 local_gen(derive_seed(seed, 1));
  std::normal_distribution<double> jitter(0.0, cfg.local_scale);
  for (int i = 0; i < trials; ++i) {
    auto& t = log[static_cast<std::size_t>(i)];
    if (epsilon == 0.0) {
      // Only the singlet is feasible.
      t.parameters = optimum;
      continue;
    }
    t.local = std::floor((i + 1) * cfg.local_fraction) > std::floor(i * cfg.local_fraction);
    if (!t.local) {
      t.parameters = walk.next(kWalkThinning);
      continue;
    }
    int attempts = 0;
    for (;; ++attempts) {
      if (attempts >= cfg.max_attempts_per_trial) {
        throw NoFeasibleSample("nonsymmetric_search: no positive sample near the symmetric optimum after " +
                               std::to_string(attempts) + " attempts");
      }
      Params x = optimum;
      for (auto& v : x) v = std::clamp(v + jitter(local_gen), -1.0, 1.0);
      if (smallest_eigenvalue(epsilon, x) >= -tol::kNegativeEigenvalue) {
        t.parameters = x;
        break;
      }
    }
    report.rejected += static_cast<std::uint64_t>(attempts);
  }

  auto evaluate = [&](std::size_t i) {
    OptimizerConfig oc;
    oc.restarts = cfg.restarts;
    oc.max_iterations = cfg.max_iterations;
    oc.seed = derive_seed(seed, 2 + i);
    oc.threads = 1;
    log[i].value = nonsymmetric_information(
        epsilon, HiddenCoefficients::from_array(log[i].parameters), oc);
  };
  detail::parallel_for(log.size(), worker_count(cfg.threads), evaluate);

  report.best_value = -1.0;
  for (const auto& t : log) {
    if (t.value > report.best_value) {
      report.best_value = t.value;
      report.best_parameters = t.parameters;
    }
    if (std::abs(t.value - report.symmetric_optimum) <= kNearSymmetric) ++report.near_symmetric;
  }
  report.log = std::move(log);
  return report;
}

}  // namespace bb84
