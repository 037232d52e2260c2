#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "holoshannon/verify/oracles.hpp"
#include "holoshannon/vonneumann_lattice.hpp"

using namespace holoshannon;
using namespace holoshannon::lattice;

namespace {

const double kSym = std::sqrt(2.0 * kPi);

Eigen::VectorXcd unit(std::size_t n, std::size_t k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

double orthonormality_error(const PacketBasis& b) {
  const auto n = static_cast<Eigen::Index>(b.size());
  return (b.overlaps(b.orthonormal) - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

ClassicalMixture mixture_of(std::vector<double> p) {
  ClassicalMixture m;
  m.probabilities = std::move(p);
  for (double x : m.probabilities) m.captured_norm += x;
  return m;
}

}  // namespace

TEST(ValidateErrors, UnitErrorsAreAdmissible) { EXPECT_TRUE(validate_errors(1.0, 1.0)); }

TEST(ValidateErrors, BoundIsStrict) {
  EXPECT_DOUBLE_EQ(error_product_bound(), 1800.0);
  EXPECT_FALSE(validate_errors(60.0, 30.0));
}

TEST(ValidateErrors, JustBelowBound) { EXPECT_TRUE(validate_errors(42.4, 42.4)); }

TEST(ValidateErrors, RejectsNonPositive) {
  EXPECT_THROW(validate_errors(0.0, 1.0), DomainError);
  EXPECT_THROW(validate_errors(1.0, -2.0), DomainError);
}

TEST(BuildLattice, UnitPositionWidth) { EXPECT_DOUBLE_EQ(build_lattice(1.0, 1, 1).eps_p, 2.0 * kPi); }

TEST(BuildLattice, SymmetricCell) { EXPECT_NEAR(build_lattice(kSym, 1, 1).eps_p, kSym, 1e-15); }

TEST(BuildLattice, UnitMomentumWidth) { EXPECT_NEAR(build_lattice(2.0 * kPi, 1, 1).eps_p, 1.0, 1e-15); }

TEST(BuildLattice, RejectsBadWidth) {
  EXPECT_THROW(build_lattice(0.0, 1, 1), DomainError);
  EXPECT_THROW(build_lattice(-1.0, 1, 1), DomainError);
}

TEST(BuildLattice, SpectraAndIndexing) {
  const PlanckLattice lat = build_lattice(2.0, 2, 1);
  EXPECT_EQ(lat.cell_count(), 15u);
  const std::vector<double> q = lat.position_spectrum();
  ASSERT_EQ(q.size(), 5u);
  EXPECT_DOUBLE_EQ(q.front(), -4.0);
  EXPECT_DOUBLE_EQ(q.back(), 4.0);
  EXPECT_EQ(lat.momentum_spectrum().size(), 3u);
  for (std::size_t k = 0; k < lat.cell_count(); ++k) EXPECT_EQ(lat.index_of(lat.cell(k)), k);
  EXPECT_NEAR(lat.eps_q * lat.eps_p, kPlanck, 1e-14);
}

TEST(GridSpec, RejectsCoarseOrNarrowGrid) {
  const PlanckLattice lat = build_lattice(1.0, 1, 1);
  EXPECT_THROW(make_grid(lat, {1.0 / 8.0, 6.0}), DomainError);
  EXPECT_THROW(make_grid(lat, {1.0 / 32.0, 3.0}), DomainError);
  const FineGrid g = make_grid(lat, default_grid_spec(lat));
  EXPECT_LE(g.origin, -(1.0 + 4.0));
  EXPECT_LE(g.spacing, 1.0 / 16.0);
}

TEST(PacketBasis, SingleCellIsNormalizedGaussian) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 0, 0));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(norm(b.grid, b.raw.col(0)), 1.0, 1e-12);
  EXPECT_LT((b.orthonormal.col(0) - b.raw.col(0) / norm(b.grid, b.raw.col(0))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PacketBasis, ThreeByOneGramMatchesAnalyticOverlaps) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 0));
  ASSERT_EQ(b.size(), 3u);
  const Eigen::MatrixXcd oracle = verify::analytic_gram(b.lattice);
  EXPECT_LT((b.gram - oracle).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_GT(std::abs(b.gram(0, 1)), 1e-3);
  EXPECT_LT(orthonormality_error(b), 1e-10);
}

TEST(PacketBasis, RawOverlapsAgreeWithSimpsonQuadrature) {
  const PlanckLattice lat = build_lattice(kSym, 1, 1);
  auto packet = [&](CellIndex c) {
    return [&lat, c](double x) {
      const double d = (x - lat.center_q(c)) / lat.eps_q;
      return std::pow(2.0 / (lat.eps_q * lat.eps_q), 0.25) * std::exp(-kPi * d * d) *
             std::polar(1.0, lat.center_p(c) * x);
    };
  };
  for (std::size_t i = 0; i < lat.cell_count(); ++i)
    for (std::size_t j = 0; j < lat.cell_count(); ++j) {
      const auto s = verify::simpson_overlap(packet(lat.cell(i)), packet(lat.cell(j)), -15.0, 15.0, 6000);
      EXPECT_LT(std::abs(s - verify::packet_overlap(lat, lat.cell(i), lat.cell(j))), 1e-10);
    }
}

TEST(PacketBasis, RawPacketsHaveUnitNorm) {
  const PacketBasis b = build_packet_basis(build_lattice(1.3, 2, 2));
  for (Eigen::Index k = 0; k < b.raw.cols(); ++k) EXPECT_NEAR(norm(b.grid, b.raw.col(k)), 1.0, kNormTolerance);
}

TEST(PacketBasis, OrthonormalForRandomLattices) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> width(0.8, 4.0);
  std::uniform_int_distribution<int> extent(0, 2);
  for (int i = 0; i < 12; ++i) {
    const PacketBasis b = build_packet_basis(build_lattice(width(rng), extent(rng), extent(rng)));
    EXPECT_LT(orthonormality_error(b), kOrthTolerance);
    EXPECT_TRUE(std::isfinite(b.gram_condition));
  }
}

TEST(PacketBasis, AliasedGridIsSingular) {
  // On a grid with spacing eps_q/16 the p = +-8 eps_p packets coincide sample by sample.
  EXPECT_THROW(build_packet_basis(build_lattice(1.0, 1, 8), GridSpec{1.0 / 16.0, 6.0}), SingularGramError);
  EXPECT_NO_THROW(build_packet_basis(build_lattice(1.0, 1, 8)));
}

TEST(Expand, BasisVectorGivesKronecker) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  for (std::size_t k = 0; k < b.size(); ++k) {
    const Expansion e = expand(state_from_cells(b, unit(b.size(), k)), b);
    EXPECT_LT((e.coefficients - unit(b.size(), k)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Expand, TwoPacketSuperposition) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  const Eigen::VectorXcd c = (unit(b.size(), 0) + unit(b.size(), 1)) / std::sqrt(2.0);
  const Expansion e = expand(state_from_cells(b, c), b);
  EXPECT_NEAR(std::abs(e.coefficients(0)), 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(std::abs(e.coefficients(1)), 1.0 / std::sqrt(2.0), 1e-10);
  for (Eigen::Index k = 2; k < e.coefficients.size(); ++k) EXPECT_LT(std::abs(e.coefficients(k)), 1e-10);
}

TEST(Expand, RandomStateInSpanCapturesFullNorm) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXcd c(static_cast<Eigen::Index>(b.size()));
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = {n(rng), n(rng)};
    const Expansion e = expand(normalized(b.grid, state_from_cells(b, c)), b);
    EXPECT_NEAR(e.captured_norm, 1.0, 1e-8);
  }
}

TEST(Expand, RefinementStability) {
  // A centered packet, sampled analytically on two grids; coefficients move by < 1e-6.
  const PlanckLattice lat = build_lattice(kSym, 2, 1);
  const GridSpec coarse = default_grid_spec(lat);
  const GridSpec fine{coarse.spacing / 2.0, coarse.padding};
  auto coefficients = [&](const GridSpec& spec) {
    const PacketBasis b = build_packet_basis(lat, spec);
    PureStateVector psi{Eigen::VectorXcd(static_cast<Eigen::Index>(b.grid.size))};
    for (std::size_t i = 0; i < b.grid.size; ++i) {
      const double x = b.grid.x(i);
      psi.amplitudes(static_cast<Eigen::Index>(i)) =
          std::exp(-0.5 * (x - 0.3) * (x - 0.3)) * std::polar(1.0, 0.4 * x);
    }
    return expand(normalized(b.grid, psi), b, 0.5).coefficients;
  };
  EXPECT_LT((coefficients(coarse) - coefficients(fine)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Expand, LeakyStateRaisesTruncation) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  PureStateVector psi{Eigen::VectorXcd(static_cast<Eigen::Index>(b.grid.size))};
  for (std::size_t i = 0; i < b.grid.size; ++i) {
    const double x = b.grid.x(i) - 12.0;
    psi.amplitudes(static_cast<Eigen::Index>(i)) = std::exp(-x * x);
  }
  EXPECT_THROW(expand(normalized(b.grid, psi), b), TruncationError);
}

TEST(Expand, RejectsUnnormalizedState) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  EXPECT_THROW(expand(state_from_cells(b, 2.0 * unit(b.size(), 0)), b), DomainError);
}

TEST(Classicalize, PureCell) {
  const std::vector<Complex> c{1.0, 0.0};
  const ClassicalMixture m = classicalize(c);
  EXPECT_DOUBLE_EQ(m.probabilities[0], 1.0);
  EXPECT_DOUBLE_EQ(m.probabilities[1], 0.0);
}

TEST(Classicalize, PhasesDiscarded) {
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> c{r, Complex(0.0, r)};
  const ClassicalMixture m = classicalize(c);
  EXPECT_NEAR(m.probabilities[0], 0.5, 1e-15);
  EXPECT_NEAR(m.probabilities[1], 0.5, 1e-15);
}

TEST(Classicalize, LeakyAmplitudesFlagged) {
  const std::vector<Complex> c{std::sqrt(0.5), std::sqrt(0.47)};
  EXPECT_NEAR(classicalize(c, 0.01).captured_norm, 0.97, 1e-12);
  EXPECT_TRUE(classicalize(c, 0.01).truncated);
  EXPECT_FALSE(classicalize(c, 0.05).truncated);
}

TEST(Entropy, PureCellHasNone) { EXPECT_DOUBLE_EQ(shannon_entropy_bits(mixture_of({1.0})), 0.0); }

TEST(Entropy, FairCoin) {
  const ClassicalMixture m = mixture_of({0.5, 0.5});
  EXPECT_DOUBLE_EQ(shannon_entropy_bits(m), 1.0);
  EXPECT_DOUBLE_EQ(von_neumann_entropy_nats(m), kLn2);
}

TEST(Entropy, ThreeOutcomes) { EXPECT_DOUBLE_EQ(shannon_entropy_bits(mixture_of({0.5, 0.25, 0.25})), 1.5); }

TEST(Entropy, RenormalizesByCapturedNorm) {
  EXPECT_NEAR(shannon_entropy_bits(mixture_of({0.485, 0.485})), 1.0, 1e-15);
}

TEST(Entropy, NatsAreLn2TimesBitsAndPhaseInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0), phase(0.0, 2.0 * kPi);
  for (int i = 0; i < 50; ++i) {
    std::vector<Complex> c(7);
    double total = 0.0;
    for (auto& x : c) {
      x = u(rng);
      total += std::norm(x);
    }
    for (auto& x : c) x /= std::sqrt(total);
    std::vector<Complex> rotated = c;
    for (auto& x : rotated) x *= std::polar(1.0, phase(rng));
    const ClassicalMixture m = classicalize(c), r = classicalize(rotated);
    EXPECT_EQ(von_neumann_entropy_nats(m), kLn2 * shannon_entropy_bits(m));
    EXPECT_NEAR(shannon_entropy_bits(m), shannon_entropy_bits(r), 1e-14);
  }
}

TEST(Entropy, EqualSuperpositionsGiveLog2K) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  for (std::size_t K = 1; K <= b.size(); ++K) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.size()));
    for (std::size_t k = 0; k < K; ++k) c(static_cast<Eigen::Index>(k)) = 1.0;
    const ClassicalMixture m = classicalize(expand(normalized(b.grid, state_from_cells(b, c)), b));
    EXPECT_NEAR(shannon_entropy_bits(m), std::log2(static_cast<double>(K)), 1e-9);
  }
}

TEST(Superselection, CellDiagonalObservablesHaveNoCoherence) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  const PlanckLattice& lat = b.lattice;
  EXPECT_LT(check_superselection(b, std::function<double(CellIndex)>([&](CellIndex c) { return lat.center_q(c); })),
            kOrthTolerance);
  EXPECT_LT(check_superselection(b, std::function<double(CellIndex)>([&](CellIndex c) {
              return std::sin(3.0 * c.q) + c.p * c.p;
            })),
            kOrthTolerance);
}

TEST(Superselection, IdentityIsDiagonal) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  const auto n = static_cast<Eigen::Index>(b.grid.size);
  EXPECT_LT(check_superselection(b, Eigen::MatrixXcd::Identity(n, n).eval()), kOrthTolerance);
}

TEST(Superselection, RawPositionOperatorIsCoherent) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  const std::vector<double> xs = position_samples(b.grid);
  EXPECT_GT(check_superselection(b, std::span<const double>(xs)), 1e-3);
}

TEST(Superselection, DimensionMismatchRejected) {
  const PacketBasis b = build_packet_basis(build_lattice(kSym, 1, 1));
  const std::vector<double> xs(b.grid.size - 1, 0.0);
  EXPECT_THROW(check_superselection(b, std::span<const double>(xs)), DomainError);
  EXPECT_THROW(check_superselection(b, Eigen::MatrixXcd::Identity(3, 3).eval()), DomainError);
}
