#include "bb84/errors.hpp"
#include "bb84/infotheory.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace bb84 {
namespace {

// Reference values computed to 30 digits with mpmath.
constexpr double kPhi08 = 0.531004406410718779;
constexpr double kBinaryEntropy01 = 0.468995593589281221;
constexpr double kEveOptimal01 = 0.139035952556318826;
constexpr double kEveAnalyticM02 = 0.459265542492822894;
constexpr double kHswRoot = 0.122980940157448358;

TEST(Phi, Endpoints) {
  EXPECT_EQ(phi(0.0), 0.0);
  EXPECT_EQ(phi(1.0), 1.0);
}

TEST(Phi, ReferenceValue) { EXPECT_NEAR(phi(0.8), kPhi08, 1e-15); }

TEST(Phi, ContinuousAtOne) { EXPECT_NEAR(phi(1.0 - 1e-12), 1.0, 1e-9); }

TEST(Phi, MonotoneAndConvexOnGrid) {
  constexpr int n = 10000;
  double prev2 = phi(0.0);
  double prev = phi(1.0 / n);
  EXPECT_GT(prev, prev2);
  for (int i = 2; i <= n; ++i) {
    const double cur = phi(static_cast<double>(i) / n);
    EXPECT_GT(cur, prev) << i;
    EXPECT_GE(cur - 2.0 * prev + prev2, -1e-15) << i;
    prev2 = prev;
    prev = cur;
  }
}

TEST(Phi, RejectsOutOfRange) {
  EXPECT_THROW(phi(-0.01), OutOfRange);
  EXPECT_THROW(phi(1.01), OutOfRange);
}

TEST(BinaryEntropy, Values) {
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
  EXPECT_NEAR(binary_entropy(0.1), kBinaryEntropy01, 1e-15);
}

TEST(MiAliceBob, Values) {
  EXPECT_EQ(mi_alice_bob(0.0), 0.5);
  EXPECT_EQ(mi_alice_bob(1.0), 0.0);
  EXPECT_NEAR(mi_alice_bob(0.2), 0.5 * kPhi08, 1e-15);
  EXPECT_THROW(mi_alice_bob(1.5), OutOfRange);
}

TEST(MiAliceBob, EqualsOneMinusBinaryEntropyOfQberHalved) {
  for (double eps = 0.0; eps <= 1.0; eps += 0.01) {
    EXPECT_NEAR(mi_alice_bob(eps), 0.5 * (1.0 - binary_entropy(0.5 * eps)), 1e-14) << eps;
  }
}

TEST(MiEveAnalytic, Values) {
  EXPECT_EQ(mi_eve_analytic(0.0), 0.5);
  EXPECT_EQ(mi_eve_analytic(1.0), 0.0);
  EXPECT_EQ(mi_eve_analytic(-1.0), 0.0);
  EXPECT_NEAR(mi_eve_analytic(-0.6), mi_alice_bob(0.2), 1e-15);
  EXPECT_NEAR(mi_eve_analytic(-0.2), kEveAnalyticM02, 1e-15);
  EXPECT_THROW(mi_eve_analytic(1.2), OutOfRange);
}

TEST(MiEveAnalytic, EvenAndDecreasingInMagnitude) {
  double prev = mi_eve_analytic(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double c = i / 1000.0;
    EXPECT_EQ(mi_eve_analytic(c), mi_eve_analytic(-c));
    EXPECT_LT(mi_eve_analytic(c), prev);
    prev = mi_eve_analytic(c);
  }
}

TEST(MiEveOptimal, Values) {
  EXPECT_EQ(mi_eve_optimal(0.0), 0.0);
  EXPECT_EQ(mi_eve_optimal(0.5), 0.5);
  EXPECT_EQ(mi_eve_optimal(0.8), 0.5);
  EXPECT_NEAR(mi_eve_optimal(0.2), mi_alice_bob(0.2), 1e-15);
  EXPECT_NEAR(mi_eve_optimal(0.1), kEveOptimal01, 1e-15);
}

TEST(MiEveOptimal, ContinuousAtHalf) {
  EXPECT_NEAR(mi_eve_optimal(0.5 - 1e-9), 0.5, 1e-6);
  EXPECT_EQ(min_abs_c22(0.7), 0.0);
  EXPECT_NEAR(min_abs_c22(0.3), -0.4, 1e-15);
}

TEST(MiEveOptimal, MatchesAnalyticAtMinimalC22) {
  for (double eps = 0.0; eps <= 1.0; eps += 0.02) {
    EXPECT_NEAR(mi_eve_optimal(eps), mi_eve_analytic(min_abs_c22(eps)), 1e-12) << eps;
  }
}

TEST(HswBound, NoiselessIsZero) {
  EXPECT_NEAR(hsw_bound(conditioned_ancilla(FamilyPoint{0.0, -1.0})), 0.0, 1e-12);
}

TEST(HswBound, FullNoiseIsOne) {
  EXPECT_NEAR(hsw_bound(conditioned_ancilla(FamilyPoint{1.0, 0.0})), 1.0, 1e-12);
}

TEST(HswBound, MaxEntropyLocusMatchesClosedForm) {
  for (int i = 0; i <= 100; ++i) {
    const double eps = i / 100.0;
    const double c22 = -(1.0 - eps) * (1.0 - eps);
    EXPECT_NEAR(hsw_bound(conditioned_ancilla(FamilyPoint{eps, c22})), 1.0 - phi(1.0 - eps), 1e-10) << eps;
  }
}

TEST(HswOptimal, Values) {
  EXPECT_EQ(hsw_optimal(0.0), 0.0);
  EXPECT_EQ(hsw_optimal(1.0), 1.0);
  EXPECT_NEAR(hsw_optimal(0.123), 1.0 / 3.0, 1e-4);
  EXPECT_NEAR(hsw_optimal(0.123), mi_alice_bob(0.123), 1e-4);
  EXPECT_NEAR(hsw_optimal(kHswRoot), 1.0 / 3.0, 1e-14);
}

TEST(HswOptimal, IsOneMinusTwiceAliceBob) {
  for (double eps = 0.0; eps <= 1.0; eps += 0.01) {
    EXPECT_NEAR(hsw_optimal(eps), 1.0 - 2.0 * mi_alice_bob(eps), 1e-15) << eps;
  }
}

TEST(EntanglementNumbers, Examples) {
  EntanglementNumbers e = entanglement_numbers({0.0, -1.0});
  EXPECT_NEAR(e.concurrence, 1.0, 1e-15);
  EXPECT_NEAR(e.separability, 0.0, 1e-15);
  e = entanglement_numbers({0.2, -0.6});
  EXPECT_NEAR(e.concurrence, 0.6, 1e-15);
  EXPECT_NEAR(e.separability, 0.4, 1e-15);
  e = entanglement_numbers({0.5, 0.0});
  EXPECT_NEAR(e.concurrence, 0.0, 1e-15);
  EXPECT_NEAR(e.separability, 1.0, 1e-15);
  EXPECT_THROW(entanglement_numbers({0.2, 0.0}), InfeasiblePoint);
}

TEST(EntanglementNumbers, SumToOneAndMatchWootters) {
  for (int i = 0; i <= 40; ++i) {
    const double eps = i / 40.0;
    for (int j = 0; j <= 40; ++j) {
      const FamilyPoint pt{eps, -1.0 + 2.0 * eps * j / 40.0};
      const EntanglementNumbers e = entanglement_numbers(pt);
      EXPECT_NEAR(e.separability + e.concurrence, 1.0, 1e-12);
      EXPECT_NEAR(wootters_concurrence(bell_diagonal_state(pt)), e.concurrence, 1e-9) << eps << " " << pt.c22;
    }
  }
}

TEST(WoottersConcurrence, ProductStateIsZero) {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = 1.0;
  EXPECT_NEAR(wootters_concurrence(DensityOperator::pure(psi)), 0.0, 1e-9);
}

TEST(MutualInformation, ProductTableIsZero) {
  Eigen::MatrixXd t = Eigen::Vector3d(0.2, 0.3, 0.5) * Eigen::RowVector2d(0.4, 0.6);
  EXPECT_NEAR(mutual_information(t), 0.0, 1e-15);
}

TEST(MutualInformation, PerfectCorrelation) {
  Eigen::MatrixXd t(2, 2);
  t << 0.5, 0.0, 0.0, 0.5;
  EXPECT_NEAR(mutual_information(t), 1.0, 1e-15);
}

TEST(MutualInformation, NoiseTableGivesAliceBob) {
  for (double eps : {0.0, 0.1, 0.2, 0.35, 0.5, 1.0}) {
    EXPECT_NEAR(mutual_information(joint_table(unbiased_noise_state(eps))), mi_alice_bob(eps), 1e-12) << eps;
  }
}

TEST(MutualInformation, RejectsUnnormalized) {
  Eigen::MatrixXd t(2, 2);
  t << 0.5, 0.1, 0.0, 0.5;
  EXPECT_THROW(mutual_information(t), NotNormalized);
  t << 0.6, -0.1, 0.0, 0.5;
  EXPECT_THROW(mutual_information(t), NotNormalized);
}

TEST(KeyRate, Examples) {
  EXPECT_NEAR(key_rate(0.2, Attack::RawAnalytic), 0.0, 1e-9);
  EXPECT_NEAR(key_rate(0.123, Attack::Hsw), 0.0, 1e-4);
  EXPECT_EQ(key_rate(0.0, Attack::RawAnalytic), 0.5);
  EXPECT_THROW(key_rate(-0.1, Attack::Hsw), OutOfRange);
}

TEST(KeyRate, SingleSignChangeAtOneFifth) {
  constexpr int n = 5000;
  int changes = 0;
  double last_positive = 0.0;
  double prev = key_rate(1e-9, Attack::RawAnalytic);
  for (int i = 1; i < n; ++i) {
    const double eps = 0.5 * i / n;
    const double cur = key_rate(eps, Attack::RawAnalytic);
    if (cur > 0.0) last_positive = eps;
    if ((cur > 0.0) != (prev > 0.0)) ++changes;
    prev = cur;
  }
  EXPECT_EQ(changes, 1);
  EXPECT_NEAR(last_positive, 0.2, 1.5 * 0.5 / n);
  EXPECT_GT(key_rate(0.2 - 1e-9, Attack::RawAnalytic), 0.0);
  EXPECT_LT(key_rate(0.2 + 1e-9, Attack::RawAnalytic), 0.0);
}

}  // namespace
}  // namespace bb84
