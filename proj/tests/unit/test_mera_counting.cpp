#include <cmath>

#include <gtest/gtest.h>

#include "holoshannon/ads_geometry.hpp"
#include "holoshannon/mera_counting.hpp"
#include "holoshannon/verify/oracles.hpp"

using namespace holoshannon;
using namespace holoshannon::mera;

TEST(BuildNetwork, EightSitesHalve) {
  const MeraNetwork net = build_network(8);
  EXPECT_EQ(net.layers, (std::vector<std::uint64_t>{8, 4, 2, 1}));
  EXPECT_EQ(net.depth(), 3u);
  EXPECT_FALSE(net.thermal());
}

TEST(BuildNetwork, SingleSite) {
  const MeraNetwork net = build_network(1);
  EXPECT_EQ(net.layers, (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(net.depth(), 0u);
}

TEST(BuildNetwork, PastedThermalTowers) {
  const MeraNetwork net = build_network(8, 2, 2);
  EXPECT_TRUE(net.thermal());
  EXPECT_EQ(net.layers, (std::vector<std::uint64_t>{8, 4, 2}));
  EXPECT_EQ(net.mirror, (std::vector<std::uint64_t>{2, 4, 8}));
  EXPECT_EQ(shannon_from_counting(net), 2 * (4 + 2));
}

TEST(BuildNetwork, OddLayersCoarseGrainByCeiling) {
  EXPECT_EQ(build_network(7).layers, (std::vector<std::uint64_t>{7, 4, 2, 1}));
  EXPECT_EQ(build_network(10, 3).layers, (std::vector<std::uint64_t>{10, 4, 2, 1}));
}

TEST(BuildNetwork, Errors) {
  EXPECT_THROW(build_network(0), DomainError);
  EXPECT_THROW(build_network(8, 1), DomainError);
  EXPECT_THROW(build_network(8, 2, 4), DomainError);
}

TEST(ShannonFromCounting, Values) {
  EXPECT_EQ(shannon_from_counting(build_network(8)), 7);
  EXPECT_EQ(shannon_from_counting(build_network(1)), 0);
  for (unsigned k = 1; k <= 10; ++k)
    EXPECT_EQ(shannon_from_counting(build_network(1ULL << k)), (1ULL << k) - 1) << "k = " << k;
}

TEST(ShannonFromCounting, LedgerMatchesExplicitMicrostateProduct) {
  for (std::uint64_t l0 = 1; l0 <= 300; ++l0) {
    const MeraNetwork net = build_network(l0);
    EXPECT_EQ(net.layers, verify::halving_layers(l0));
    const CountLedger ledger = count_ledger(net);
    EXPECT_EQ(ledger.step_exponents.size(), net.depth());
    for (unsigned N : {1u, 2u, 5u})
      EXPECT_EQ(BigInt(verify::exact_log2(verify::microstate_count(net.layers, N))), N * ledger.total);
  }
}

TEST(ShannonFromCounting, SurvivesLargeBoundaries) {
  const std::uint64_t l0 = 1ULL << 20;
  EXPECT_EQ(shannon_from_counting(build_network(l0)), l0 - 1);
  EXPECT_EQ(shannon_from_counting(build_network(l0 + 1)), l0 + 20);
}

TEST(ShannonFromCounting, PastedTowersSymmetric) {
  for (std::uint64_t l0 : {5ULL, 8ULL, 37ULL, 100ULL}) {
    const MeraNetwork base = build_network(l0);
    for (std::size_t mh = 0; mh <= base.depth(); ++mh) {
      const MeraNetwork net = build_network(l0, 2, mh);
      const CountLedger ledger = count_ledger(net);
      // Both towers are listed boundary side first.
      EXPECT_EQ(ledger.mirror_step_exponents, ledger.step_exponents);
      if (net.thermal()) EXPECT_EQ(ledger.step_exponents.size(), mh);
      BigInt a = 0, b = 0;
      for (auto x : ledger.step_exponents) a += x;
      for (auto x : ledger.mirror_step_exponents) b += x;
      EXPECT_EQ(a + b, ledger.total);
    }
  }
}

TEST(MomentumReplicas, NoMomentum) {
  const ReplicaCount k = momentum_replicas(1.0, std::nullopt);
  EXPECT_EQ(k.replicas, 0u);
  const MeraNetwork net = build_network(8);
  EXPECT_EQ(boundary_microstates(net, k.replicas), shannon_from_counting(net));
}

TEST(MomentumReplicas, HalfUnitTime) {
  const ReplicaCount k = momentum_replicas(1.0, 0.5);
  EXPECT_EQ(k.replicas, 2u);
  EXPECT_EQ(boundary_microstates(build_network(8), k.replicas), 21);
}

TEST(MomentumReplicas, SubUnitRatioFloorsToZero) {
  const ReplicaCount k = momentum_replicas(1.0, 2.0);
  EXPECT_EQ(k.replicas, 0u);
  EXPECT_DOUBLE_EQ(k.fractional, 0.5);
}

TEST(MomentumReplicas, RoundModeAndSnap) {
  EXPECT_EQ(momentum_replicas(1.0, 1.0 / 2.6).replicas, 2u);
  EXPECT_EQ(momentum_replicas(1.0, 1.0 / 2.6, ReplicaRounding::Round).replicas, 3u);
  // 1/(1/3) is 3 - 4e-16 in floating point; the snap keeps it at 3.
  EXPECT_EQ(momentum_replicas(1.0, 1.0 / 3.0).replicas, 3u);
  EXPECT_THROW(momentum_replicas(1.0, 0.0), DomainError);
  EXPECT_THROW(momentum_replicas(0.0, 1.0), DomainError);
}

TEST(BoundaryMicrostates, AdditiveInReplicas) {
  for (std::uint64_t l0 : {1ULL, 9ULL, 64ULL, 1000ULL}) {
    const MeraNetwork net = build_network(l0);
    const BigInt h = shannon_from_counting(net);
    for (std::uint64_t k = 0; k < 6; ++k) EXPECT_EQ(boundary_microstates(net, k), (k + 1) * h);
  }
}

TEST(BulkTemperature, Values) {
  EXPECT_EQ(bulk_temperature(0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(bulk_temperature(3, 1.0), 3.0);
  for (std::size_t m = 0; m < 6; ++m) EXPECT_DOUBLE_EQ(bulk_temperature(m, 2.0), bulk_temperature(m, 1.0) / 2.0);
  EXPECT_DOUBLE_EQ(layer_radius(3, 4.0), 0.5);
  EXPECT_THROW(bulk_temperature(1, 0.0), DomainError);
  EXPECT_THROW(bulk_temperature(1, -1.0), DomainError);
}

TEST(ContinuumComparison, SixtyFourCells) {
  const ContinuumComparison c = continuum_comparison(build_network(64), ads::make_wedge(64.0, 1.0));
  EXPECT_EQ(c.discrete_area, 63);
  ASSERT_TRUE(c.deviation.has_value());
  EXPECT_NEAR(*c.deviation, 0.035, 0.001);
  EXPECT_TRUE(c.asymptotic);
}

TEST(ContinuumComparison, ThousandCells) {
  const ContinuumComparison c = continuum_comparison(build_network(1024), ads::make_wedge(1024.0, 1.0));
  EXPECT_LT(*c.deviation, 0.005);
}

TEST(ContinuumComparison, TinyIntervalFlagged) {
  const ContinuumComparison c = continuum_comparison(build_network(2), ads::make_wedge(2.0, 1.0));
  EXPECT_FALSE(c.asymptotic);
  EXPECT_FALSE(c.deviation.has_value());
  const ContinuumComparison d = continuum_comparison(build_network(3), ads::make_wedge(3.0, 1.0));
  EXPECT_FALSE(d.asymptotic);
  EXPECT_GT(*d.deviation, 0.5);
}

TEST(ContinuumComparison, DeviationShrinks) {
  double prev = std::numeric_limits<double>::infinity();
  for (std::uint64_t l0 : {16ULL, 64ULL, 256ULL, 1024ULL, 4096ULL}) {
    const double d = *continuum_comparison(build_network(l0), ads::make_wedge(static_cast<double>(l0), 1.0)).deviation;
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(ContinuumComparison, RequiresMatchingBoundary) {
  EXPECT_THROW(continuum_comparison(build_network(63), ads::make_wedge(64.0, 1.0)), DomainError);
}
