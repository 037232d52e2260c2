#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "holoshannon/thermo_identities.hpp"
#include "holoshannon/verify/oracles.hpp"

using namespace holoshannon;
using namespace holoshannon::thermo;

namespace {
const std::vector<double> kSpectrum{0.0, 0.7, 1.3, 2.0};
}

TEST(CoarseGrain, IdentityOverlapKeepsSpectrum) {
  const RedefinedHamiltonian h = coarse_grain_hamiltonian(kSpectrum, Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(h.coarse, kSpectrum);
  EXPECT_TRUE(h.doubly_stochastic());
}

TEST(CoarseGrain, UniformOverlapAverages) {
  const RedefinedHamiltonian h = coarse_grain_hamiltonian(kSpectrum, Eigen::MatrixXd::Constant(4, 4, 0.25));
  for (double e : h.coarse) EXPECT_NEAR(e, 1.0, 1e-15);
}

TEST(CoarseGrain, ConvexCombinationsOfSpectrum) {
  std::mt19937_64 rng(11);
  for (std::size_t n : {2u, 5u, 16u}) {
    std::vector<double> e(n);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (double& x : e) x = u(rng);
    const RedefinedHamiltonian h = coarse_grain_hamiltonian(e, verify::random_overlap_matrix(n, rng));
    EXPECT_TRUE(h.doubly_stochastic());
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    double sum_e = 0.0, sum_c = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      EXPECT_GE(h.coarse[k], *lo - 1e-12);
      EXPECT_LE(h.coarse[k], *hi + 1e-12);
      sum_e += e[k];
      sum_c += h.coarse[k];
    }
    EXPECT_NEAR(sum_c, sum_e, 1e-12);
  }
}

TEST(CoarseGrain, Errors) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(4, 4);
  p(0, 0) = 0.9;
  EXPECT_THROW(coarse_grain_hamiltonian(kSpectrum, p), DomainError);
  p(0, 1) = 0.1;
  EXPECT_NO_THROW(coarse_grain_hamiltonian(kSpectrum, p));
  p(0, 1) = -0.1;
  p(0, 0) = 1.1;
  EXPECT_THROW(coarse_grain_hamiltonian(kSpectrum, p), DomainError);
  EXPECT_THROW(coarse_grain_hamiltonian(kSpectrum, Eigen::MatrixXd::Identity(3, 3)), DomainError);
  EXPECT_THROW(coarse_grain_hamiltonian(std::vector<double>{}, Eigen::MatrixXd(0, 1)), DomainError);
}

TEST(EntropyIdentity, TwoLevelAnalytic) {
  const RedefinedHamiltonian h = coarse_grain_hamiltonian(std::vector<double>{0.0, 1.0}, Eigen::MatrixXd::Identity(2, 2));
  const double beta = 1.3;
  const double w1 = std::exp(-beta) / (1.0 + std::exp(-beta));
  const double expected = -(1.0 - w1) * std::log(1.0 - w1) - w1 * std::log(w1);
  const EntropyIdentity id = entropy_identity_check(beta, h);
  EXPECT_NEAR(id.entropy_nats, expected, 1e-12);
  EXPECT_NEAR(id.thermodynamic, expected, 1e-12);
  EXPECT_NEAR(*id.free_energy, -std::log(1.0 + std::exp(-beta)) / beta, 1e-12);
}

TEST(EntropyIdentity, DegenerateSpectrumGivesLogK) {
  const RedefinedHamiltonian h = coarse_grain_hamiltonian(std::vector<double>(5, 2.5), Eigen::MatrixXd::Identity(5, 5));
  for (double beta : {0.0, 0.5, 40.0}) EXPECT_NEAR(entropy_identity_check(beta, h).entropy_nats, std::log(5.0), 1e-12);
}

TEST(EntropyIdentity, InfiniteTemperature) {
  const RedefinedHamiltonian h = coarse_grain_hamiltonian(kSpectrum, Eigen::MatrixXd::Identity(4, 4));
  const EntropyIdentity id = entropy_identity_check(0.0, h);
  EXPECT_FALSE(id.free_energy.has_value());
  EXPECT_NEAR(id.entropy_nats, std::log(4.0), 1e-14);
  EXPECT_NEAR(id.residual, 0.0, 1e-14);
  EXPECT_THROW(canonical_state(-1.0, h), DomainError);
}

TEST(EntropyIdentity, HoldsForRandomHamiltonians) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5.0, 5.0), b(0.0, 20.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 12;
    std::vector<double> e(n);
    for (double& x : e) x = u(rng);
    const RedefinedHamiltonian h = coarse_grain_hamiltonian(e, verify::random_overlap_matrix(n, rng));
    const double beta = b(rng);
    const EntropyIdentity id = entropy_identity_check(beta, h);
    EXPECT_LT(id.residual, 1e-10);
    EXPECT_GE(id.entropy_nats, -1e-15);
    EXPECT_LE(id.entropy_nats, std::log(static_cast<double>(n)) + 1e-12);
  }
}

TEST(EntropyIdentity, LargeInverseTemperatureStaysFinite) {
  const RedefinedHamiltonian h = coarse_grain_hamiltonian(std::vector<double>{1000.0, 1001.0}, Eigen::MatrixXd::Identity(2, 2));
  const EntropyIdentity id = entropy_identity_check(500.0, h);
  EXPECT_TRUE(std::isfinite(id.thermodynamic));
  EXPECT_NEAR(*id.free_energy, 1000.0, 1e-9);
  EXPECT_LT(id.residual, 1e-10);
}

TEST(EntropyIdentity, EntropyFallsWithInverseTemperature) {
  const RedefinedHamiltonian h = coarse_grain_hamiltonian(kSpectrum, Eigen::MatrixXd::Identity(4, 4));
  double prev = std::numeric_limits<double>::infinity();
  for (double beta = 0.0; beta < 10.0; beta += 0.5) {
    const double s = entropy_identity_check(beta, h).entropy_nats;
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(EntropyIdentity, CoarseGrainingRaisesFreeEnergy) {
  // Jensen: the coarse spectrum is majorized by the fine one, so Z can only fall.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> e(6);
    for (double& x : e) x = u(rng);
    const RedefinedHamiltonian fine = coarse_grain_hamiltonian(e, Eigen::MatrixXd::Identity(6, 6));
    const RedefinedHamiltonian coarse = coarse_grain_hamiltonian(e, verify::random_overlap_matrix(6, rng));
    EXPECT_GE(*helmholtz(1.0, coarse), *helmholtz(1.0, fine) - 1e-12);
  }
}

TEST(Boost, ShiftsCellEnergies) {
  const RedefinedHamiltonian h = coarse_grain_hamiltonian(kSpectrum, Eigen::MatrixXd::Identity(4, 4));
  const std::vector<double> momenta{1.0, -1.0, 0.5, 0.0};
  const RedefinedHamiltonian b = boosted(h, momenta, 0.2, 0.02);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(b.coarse[k], kSpectrum[k] - 0.2 * momenta[k] + 0.02, 1e-15);
  EXPECT_LT(entropy_identity_check(1.1, b).residual, 1e-12);
  EXPECT_THROW(boosted(h, std::vector<double>{1.0}, 0.2, 0.0), DomainError);
}

TEST(Actions, GkpwExamples) {
  EXPECT_DOUBLE_EQ(gkpw_action(2.0, 3.0), 6.0);
  EXPECT_DOUBLE_EQ(gkpw_action(2.0, -3.0), -6.0);
  EXPECT_DOUBLE_EQ(gkpw_action(2.0, 3.0, 0.5), 3.0);
}

TEST(Actions, BulkTensorNetwork) {
  EXPECT_DOUBLE_EQ(bulk_tn_action(0.0, 0.0), 0.0);
  EXPECT_NEAR(bulk_tn_action(kPi, 0.0), -kLn2, 1e-15);
  EXPECT_NEAR(bulk_tn_action(0.0, 1.0), -kLn2, 1e-15);
  EXPECT_NEAR(bulk_tn_action(2.0 * kPi, 3.0, 2.0), -2.0 * kLn2 - 6.0 * kLn2, 1e-14);
}

TEST(Actions, MembraneTension) {
  EXPECT_NEAR(membrane_tension(1.0 / (8.0 * kPi), 1.0), kLn2, 1e-15);
  EXPECT_NEAR(membrane_tension(1.0 / (8.0 * kPi), 2.0), kLn2 / 4.0, 1e-15);
  EXPECT_NEAR(membrane_tension(0.5 / (8.0 * kPi), 1.0), 2.0 * kLn2, 1e-15);
  EXPECT_THROW(membrane_tension(0.0, 1.0), DomainError);
}
