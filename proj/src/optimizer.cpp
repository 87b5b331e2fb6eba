#include "bb84/povm.hpp"

#include "bb84/errors.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace bb84 {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the combined value.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

unsigned worker_count(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  if (const char* env = std::getenv("BB84_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Lower clamp on likelihood ratios inside the gradient; log2 of this is
// about -60.
constexpr double kRatioFloor = 1e-18;
constexpr double kMinStep = 1e-14;
constexpr int kStallLimit = 8;

class Objective {
 public:
  explicit Objective(const AncillaEnsemble& ens) : d_(ens.states[0].rows()) {
    for (std::size_t a = 0; a < 4; ++a) {
      weighted_[a] = ens.priors[a] * ens.states[a];
    }
  }

  Eigen::Index dim() const { return d_; }

  // Joint table J(alpha, k) = prior_alpha <v_k| rho_alpha |v_k>, and the
  // images rho_alpha v_k kept for the gradient.
  double evaluate(const ComplexMatrix& v, ComplexMatrix* gradient) const {
    const Eigen::Index k_count = v.cols();
    Eigen::MatrixXd joint(4, k_count);
    std::array<ComplexMatrix, 4> images;
    for (std::size_t a = 0; a < 4; ++a) {
      images[a] = weighted_[a] * v;
      joint.row(static_cast<Eigen::Index>(a)) =
          (v.conjugate().cwiseProduct(images[a])).colwise().sum().real().cwiseMax(0.0);
    }
    const Eigen::VectorXd prior = joint.rowwise().sum();
    const Eigen::RowVectorXd outcome = joint.colwise().sum();
    double info = 0.0;
    for (Eigen::Index a = 0; a < 4; ++a)
      for (Eigen::Index k = 0; k < k_count; ++k) {
        const double p = joint(a, k);
        if (p > 0.0) info += p * std::log2(p / (prior(a) * outcome(k)));
      }
    if (gradient != nullptr) {
      gradient->setZero(d_, k_count);
      for (Eigen::Index k = 0; k < k_count; ++k) {
        if (!(outcome(k) > 0.0)) continue;
        for (std::size_t a = 0; a < 4; ++a) {
          const auto ai = static_cast<Eigen::Index>(a);
          if (!(prior(ai) > 0.0)) continue;
          const double ratio =
              std::max(kRatioFloor, joint(ai, k) / (prior(ai) * outcome(k)));
          gradient->col(k) += std::log2(ratio) * images[a].col(k);
        }
      }
    }
    return info;
  }

 private:
  Eigen::Index d_;
  std::array<ComplexMatrix, 4> weighted_;
};

// v <- (v v^dagger)^(-1/2) v, restoring sum_k v_k v_k^dagger = identity.
ComplexMatrix normalize(const ComplexMatrix& v) {
  const ComplexMatrix gram = v * v.adjoint();
  const ComplexMatrix inv_root = hermitian_function(
      gram, [](double x) { return Complex(1.0 / std::sqrt(std::max(x, 1e-300))); });
  return inv_root * v;
}

ComplexMatrix random_isometry(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix v(d, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < d; ++i) v(i, j) = Complex(normal(gen), normal(gen));
  return normalize(v);
}

// Kets whose dyads reproduce the elements of m, completed to the identity
// when m is only complete on a subspace.
ComplexMatrix kets_of(const Povm& m) {
  std::vector<ComplexVector> kets;
  auto add_dyads = [&kets](const ComplexMatrix& e) {
    const Spectrum s = eig_hermitian(e);
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
      if (s.values(i) > 1e-12) kets.emplace_back(std::sqrt(s.values(i)) * s.vectors.col(i));
    }
  };
  ComplexMatrix rest = ComplexMatrix::Identity(m.dim(), m.dim());
  for (const auto& e : m.elements) {
    add_dyads(e);
    rest -= e;
  }
  add_dyads(rest);
  ComplexMatrix v(m.dim(), static_cast<Eigen::Index>(kets.size()));
  for (std::size_t k = 0; k < kets.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = kets[k];
  return v;
}

struct RestartOutcome {
  ComplexMatrix kets;
  RestartDiagnostics diag;
};

RestartOutcome ascend(const Objective& obj, ComplexMatrix v, const OptimizerConfig& cfg) {
  ComplexMatrix grad;
  double current = obj.evaluate(v, &grad);
  double step = 1.0;
  int stalls = 0;
  RestartOutcome out;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    bool moved = false;
    double gain = 0.0;
    for (double s = step; s > kMinStep; s *= 0.5) {
      ComplexMatrix trial = normalize(v + s * grad);
      ComplexMatrix trial_grad;
      const double value = obj.evaluate(trial, &trial_grad);
      if (value > current) {
        gain = value - current;
        v = std::move(trial);
        grad = std::move(trial_grad);
        current = value;
        step = 1.5 * s;
        moved = true;
        break;
      }
    }
    if (!moved) {
      out.diag.converged = true;
      break;
    }
    stalls = gain < cfg.step_tolerance ? stalls + 1 : 0;
    if (stalls >= kStallLimit) {
      out.diag.converged = true;
      break;
    }
  }
  out.kets = std::move(v);
  out.diag.value = current;
  out.diag.iterations = it;
  return out;
}

}  // namespace

OptimizerResult optimize_povm(const AncillaEnsemble& ensemble, const OptimizerConfig& cfg) {
  if (cfg.restarts < 1) throw std::invalid_argument("optimize_povm: restarts must be >= 1");
  const Objective obj(ensemble);
  const Eigen::Index d = obj.dim();
  if (cfg.outcome_budget < d) {
    throw std::invalid_argument("optimize_povm: outcome_budget must be >= dimension");
  }

  // Start 0 is the supplied POVM when present; the rest are random.
  const int extra = cfg.initial ? 1 : 0;
  const int total = cfg.restarts + extra;
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(total));

  if (cfg.initial && cfg.initial->dim() != d) {
    throw DimensionMismatch("optimize_povm: seed POVM dimension");
  }

  auto run = [&](std::size_t i) {
    const int index = static_cast<int>(i);
    ComplexMatrix start;
    if (index < extra) {
      start = kets_of(*cfg.initial);
    } else {
      start = random_isometry(d, cfg.outcome_budget,
                              derive_seed(cfg.seed, static_cast<std::uint64_t>(index - extra)));
    }
    outcomes[static_cast<std::size_t>(index)] = ascend(obj, std::move(start), cfg);
  };

  detail::parallel_for(static_cast<std::size_t>(total), worker_count(cfg.threads), run);

  OptimizerResult result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    result.restarts.push_back(outcomes[i].diag);
    if (outcomes[i].diag.value > outcomes[best].diag.value) best = i;
  }
  std::vector<ComplexVector> kets;
  for (Eigen::Index k = 0; k < outcomes[best].kets.cols(); ++k) kets.emplace_back(outcomes[best].kets.col(k));
  result.povm = povm_from_kets(kets);
  result.value = accessible_info(ensemble, result.povm);
  return result;
}

}  // namespace bb84
