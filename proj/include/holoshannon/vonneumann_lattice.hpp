#pragma once

// Von Neumann's coarse-grained phase-space lattice: Planck cells of size
// eps_q x eps_p = h, a Gaussian packet per cell, Löwdin orthonormalization,
// and the classical mixture |c_n|^2 obtained by expanding a pure state.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "holoshannon/core.hpp"

namespace holoshannon::lattice {

using Complex = std::complex<double>;

inline constexpr double kOrthTolerance = 1e-8;
inline constexpr double kNormTolerance = 1e-8;
inline constexpr double kDefaultTruncationLoss = 1e-3;
inline constexpr double kMaxGramCondition = 1e10;

/// Largest product sigma_q * sigma_p for which the redefined Q' and P' commute.
inline double error_product_bound(double hbar = kHbar) { return 60.0 * 60.0 * hbar / 2.0; }

/// True iff the measurement errors admit commuting redefined canonical variables.
inline bool validate_errors(double sigma_q, double sigma_p, double hbar = kHbar) {
  detail::require(sigma_q > 0.0 && sigma_p > 0.0, "measurement errors must be positive");
  return sigma_q * sigma_p < error_product_bound(hbar);
}

/// Cell label: center at (q * eps_q, p * eps_p).
struct CellIndex {
  int q = 0;
  int p = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct PlanckLattice {
  double eps_q = 0.0;
  double eps_p = 0.0;
  int m_max_q = 0;  // cells q in [-m_max_q, m_max_q]
  int m_max_p = 0;

  std::size_t cell_count() const {
    return static_cast<std::size_t>(2 * m_max_q + 1) * static_cast<std::size_t>(2 * m_max_p + 1);
  }

  // Position-major ordering: consecutive indices share q.
  CellIndex cell(std::size_t k) const {
    const auto width = static_cast<std::size_t>(2 * m_max_p + 1);
    return {static_cast<int>(k / width) - m_max_q, static_cast<int>(k % width) - m_max_p};
  }

  std::size_t index_of(CellIndex c) const {
    detail::require(std::abs(c.q) <= m_max_q && std::abs(c.p) <= m_max_p, "cell outside truncation window");
    return static_cast<std::size_t>(c.q + m_max_q) * static_cast<std::size_t>(2 * m_max_p + 1) +
           static_cast<std::size_t>(c.p + m_max_p);
  }

  double center_q(CellIndex c) const { return c.q * eps_q; }
  double center_p(CellIndex c) const { return c.p * eps_p; }

  /// Truncated spectrum 0, ±eps_q, ±2 eps_q, ... of the redefined position.
  std::vector<double> position_spectrum() const { return spectrum(eps_q, m_max_q); }
  std::vector<double> momentum_spectrum() const { return spectrum(eps_p, m_max_p); }

 private:
  static std::vector<double> spectrum(double width, int extent) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(2 * extent + 1));
    for (int m = -extent; m <= extent; ++m) values.push_back(m * width);
    return values;
  }
};

/// Lattice with eps_p fixed by eps_q * eps_p = h.
inline PlanckLattice build_lattice(double eps_q, int m_max_q, int m_max_p) {
  detail::require(eps_q > 0.0 && std::isfinite(eps_q), "cell width eps_q must be positive");
  detail::require(m_max_q >= 0 && m_max_p >= 0, "truncation half-extents must be non-negative");
  return {eps_q, kPlanck / eps_q, m_max_q, m_max_p};
}

/// Uniform position grid x_i = origin + i * spacing, i = 0..size-1.
struct FineGrid {
  double origin = 0.0;
  double spacing = 0.0;
  std::size_t size = 0;

  double x(std::size_t i) const { return origin + static_cast<double>(i) * spacing; }
};

struct GridSpec {
  double spacing = 0.0;  // must be <= eps_q / 16
  double padding = 0.0;  // beyond the outermost cell center, >= 4 eps_q
};

/// Grid fine enough for the packet widths and the highest momentum cell.
inline GridSpec default_grid_spec(const PlanckLattice& lattice) {
  const double k_max = (lattice.m_max_p + 3.0) * lattice.eps_p;
  return {std::min(lattice.eps_q / 32.0, kPi / (2.0 * k_max)), 6.0 * lattice.eps_q};
}

inline FineGrid make_grid(const PlanckLattice& lattice, const GridSpec& spec) {
  detail::require(spec.spacing > 0.0 && spec.spacing <= lattice.eps_q / 16.0 * (1.0 + 1e-12),
                  "fine-grid spacing must satisfy 0 < spacing <= eps_q/16");
  detail::require(spec.padding >= 4.0 * lattice.eps_q * (1.0 - 1e-12),
                  "fine-grid padding must be at least 4 eps_q");
  const double half = lattice.m_max_q * lattice.eps_q + spec.padding;
  const auto intervals = static_cast<std::size_t>(std::ceil(2.0 * half / spec.spacing));
  return {-half, 2.0 * half / static_cast<double>(intervals), intervals + 1};
}

/// Trapezoidal <f|g> on the grid.
inline Complex inner_product(const FineGrid& grid, const Eigen::Ref<const Eigen::VectorXcd>& f,
                             const Eigen::Ref<const Eigen::VectorXcd>& g) {
  detail::require(static_cast<std::size_t>(f.size()) == grid.size && static_cast<std::size_t>(g.size()) == grid.size,
                  "vector length does not match the fine grid");
  Complex sum = f.dot(g);  // Eigen's dot conjugates the left operand
  sum -= 0.5 * (std::conj(f(0)) * g(0) + std::conj(f(f.size() - 1)) * g(g.size() - 1));
  return grid.spacing * sum;
}

inline double norm(const FineGrid& grid, const Eigen::Ref<const Eigen::VectorXcd>& f) {
  return std::sqrt(std::max(0.0, inner_product(grid, f, f).real()));
}

/// Normalized Gaussian exp(-pi (x-x0)^2/eps_q^2) e^{i k0 x}. Its Fourier
/// profile is exp(-pi k^2/eps_p^2) because eps_q * eps_p = 2 pi.
inline Eigen::VectorXcd raw_packet(const PlanckLattice& lattice, const FineGrid& grid, CellIndex cell) {
  const double x0 = lattice.center_q(cell);
  const double k0 = lattice.center_p(cell);
  const double amplitude = std::pow(2.0 / (lattice.eps_q * lattice.eps_q), 0.25);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(grid.size));
  for (std::size_t i = 0; i < grid.size; ++i) {
    const double x = grid.x(i);
    const double d = (x - x0) / lattice.eps_q;
    v(static_cast<Eigen::Index>(i)) = amplitude * std::exp(-kPi * d * d) * std::polar(1.0, k0 * x);
  }
  return v;
}

class SingularGramError : public Error {
 public:
  explicit SingularGramError(double condition)
      : Error("raw packet Gram matrix is numerically singular (condition number " + std::to_string(condition) +
              "); refine the fine-grid spacing so the highest momentum cell is resolved, or reduce m_max_p"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

struct PacketBasis {
  PlanckLattice lattice;
  FineGrid grid;
  Eigen::MatrixXcd raw;          // column k: raw packet of cell k sampled on the grid
  Eigen::MatrixXcd orthonormal;  // column k: Löwdin-orthonormalized packet k
  Eigen::MatrixXcd gram;         // <raw_i|raw_j>
  double gram_condition = 1.0;

  std::size_t size() const { return static_cast<std::size_t>(raw.cols()); }

  /// <v_i|v_j> over all column pairs of `vectors` (trapezoidal weights).
  Eigen::MatrixXcd overlaps(const Eigen::MatrixXcd& vectors) const { return overlaps(vectors, vectors); }

  Eigen::MatrixXcd overlaps(const Eigen::MatrixXcd& left, const Eigen::MatrixXcd& right) const {
    Eigen::MatrixXcd m = left.adjoint() * right;
    const Eigen::Index last = left.rows() - 1;
    m -= 0.5 * (left.row(0).adjoint() * right.row(0) + left.row(last).adjoint() * right.row(last));
    return grid.spacing * m;
  }
};

/// Packet per cell, orthonormalized symmetrically: B = R G^{-1/2}.
inline PacketBasis build_packet_basis(const PlanckLattice& lattice, const GridSpec& spec) {
  PacketBasis basis;
  basis.lattice = lattice;
  basis.grid = make_grid(lattice, spec);
  const auto count = static_cast<Eigen::Index>(lattice.cell_count());
  basis.raw.resize(static_cast<Eigen::Index>(basis.grid.size), count);
  for (Eigen::Index k = 0; k < count; ++k)
    basis.raw.col(k) = raw_packet(lattice, basis.grid, lattice.cell(static_cast<std::size_t>(k)));

  basis.gram = basis.overlaps(basis.raw);
  basis.gram = 0.5 * (basis.gram + basis.gram.adjoint()).eval();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eigen(basis.gram);
  if (eigen.info() != Eigen::Success) throw SingularGramError(std::numeric_limits<double>::infinity());
  const Eigen::VectorXd& values = eigen.eigenvalues();
  const double smallest = values.minCoeff();
  basis.gram_condition = smallest > 0.0 ? values.maxCoeff() / smallest : std::numeric_limits<double>::infinity();
  if (!(basis.gram_condition < kMaxGramCondition)) throw SingularGramError(basis.gram_condition);

  const Eigen::MatrixXcd inverse_sqrt =
      eigen.eigenvectors() * values.cwiseInverse().cwiseSqrt().asDiagonal() * eigen.eigenvectors().adjoint();
  basis.orthonormal = basis.raw * inverse_sqrt;
  return basis;
}

inline PacketBasis build_packet_basis(const PlanckLattice& lattice) {
  return build_packet_basis(lattice, default_grid_spec(lattice));
}

/// Complex amplitudes of a pure state sampled on a basis' fine grid.
struct PureStateVector {
  Eigen::VectorXcd amplitudes;
};

/// sum_k c_k b_k, the state with cell amplitudes c in the orthonormal basis.
inline PureStateVector state_from_cells(const PacketBasis& basis, const Eigen::Ref<const Eigen::VectorXcd>& c) {
  detail::require(static_cast<std::size_t>(c.size()) == basis.size(), "coefficient count must match basis size");
  return {basis.orthonormal * c};
}

inline PureStateVector normalized(const FineGrid& grid, PureStateVector state) {
  const double n = norm(grid, state.amplitudes);
  detail::require(n > 0.0, "cannot normalize the zero state");
  state.amplitudes /= n;
  return state;
}

class TruncationError : public Error {
 public:
  TruncationError(double captured, double tolerance)
      : Error("state leaks out of the cell window: captured norm " + std::to_string(captured) + " < 1 - " +
              std::to_string(tolerance)),
        captured_(captured) {}
  double captured_norm() const noexcept { return captured_; }

 private:
  double captured_;
};

struct Expansion {
  Eigen::VectorXcd coefficients;
  double captured_norm = 0.0;  // sum |c_n|^2
};

/// c_n = <b_n|psi>. Throws TruncationError if less than 1 - max_loss of the norm is captured.
inline Expansion expand(const PureStateVector& state, const PacketBasis& basis,
                        double max_loss = kDefaultTruncationLoss) {
  detail::require(static_cast<std::size_t>(state.amplitudes.size()) == basis.grid.size,
                  "state is not sampled on the basis grid");
  const double state_norm = norm(basis.grid, state.amplitudes);
  detail::require(std::abs(state_norm - 1.0) <= kNormTolerance, "state must be normalized");

  Expansion out;
  out.coefficients = basis.overlaps(basis.orthonormal, state.amplitudes);
  out.captured_norm = out.coefficients.squaredNorm();
  if (out.captured_norm < 1.0 - max_loss) throw TruncationError(out.captured_norm, max_loss);
  return out;
}

struct ClassicalMixture {
  std::vector<double> probabilities;  // |c_n|^2 per cell, phases discarded
  double captured_norm = 0.0;
  bool truncated = false;  // captured_norm < 1 - max_loss
};

inline ClassicalMixture classicalize(std::span<const Complex> amplitudes,
                                     double max_loss = kDefaultTruncationLoss) {
  ClassicalMixture mixture;
  mixture.probabilities.reserve(amplitudes.size());
  for (const Complex& c : amplitudes) mixture.probabilities.push_back(std::norm(c));
  for (double p : mixture.probabilities) mixture.captured_norm += p;
  mixture.truncated = mixture.captured_norm < 1.0 - max_loss;
  return mixture;
}

inline ClassicalMixture classicalize(const Expansion& expansion, double max_loss = kDefaultTruncationLoss) {
  return classicalize(std::span<const Complex>(expansion.coefficients.data(),
                                               static_cast<std::size_t>(expansion.coefficients.size())),
                      max_loss);
}

/// -sum p log2 p after renormalizing by the captured norm; 0 log 0 = 0.
inline double shannon_entropy_bits(const ClassicalMixture& mixture) {
  detail::require(mixture.captured_norm > 0.0, "mixture carries no probability");
  double h = 0.0;
  for (double raw : mixture.probabilities) {
    const double p = raw / mixture.captured_norm;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

inline double von_neumann_entropy_nats(const ClassicalMixture& mixture) {
  return kLn2 * shannon_entropy_bits(mixture);
}

/// Max |<b_i|O|b_j>| over i != j.
inline double max_off_diagonal(const Eigen::MatrixXcd& elements) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < elements.rows(); ++i)
    for (Eigen::Index j = 0; j < elements.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(elements(i, j)));
  return worst;
}

/// Matrix elements of an operator given as a dense matrix on the fine grid.
inline Eigen::MatrixXcd matrix_elements(const PacketBasis& basis, const Eigen::MatrixXcd& grid_operator) {
  const auto n = static_cast<Eigen::Index>(basis.grid.size);
  if (grid_operator.rows() != n || grid_operator.cols() != n)
    throw DomainError("observable matrix dimension does not match the fine grid");
  return basis.overlaps(basis.orthonormal, grid_operator * basis.orthonormal);
}

/// Matrix elements of a multiplication operator f(x) sampled on the grid (e.g. x for Q).
inline Eigen::MatrixXcd matrix_elements(const PacketBasis& basis, std::span<const double> multiplier) {
  if (multiplier.size() != basis.grid.size)
    throw DomainError("observable sample count does not match the fine grid");
  const Eigen::Map<const Eigen::VectorXd> f(multiplier.data(), static_cast<Eigen::Index>(multiplier.size()));
  return basis.overlaps(basis.orthonormal, f.asDiagonal() * basis.orthonormal);
}

/// Matrix elements of sum_k f(k) |b_k><b_k|, an operator diagonal in the redefined cell labels.
inline Eigen::MatrixXcd matrix_elements(const PacketBasis& basis, const std::function<double(CellIndex)>& f) {
  const Eigen::MatrixXcd s = basis.overlaps(basis.orthonormal);
  Eigen::VectorXd diag(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) diag(static_cast<Eigen::Index>(k)) = f(basis.lattice.cell(k));
  return s * diag.asDiagonal() * s;
}

template <class Observable>
double check_superselection(const PacketBasis& basis, const Observable& observable) {
  return max_off_diagonal(matrix_elements(basis, observable));
}

inline double check_superselection(const PacketBasis& basis, const std::function<double(CellIndex)>& f) {
  return max_off_diagonal(matrix_elements(basis, f));
}

/// Position operator Q as a multiplication operator on the grid.
inline std::vector<double> position_samples(const FineGrid& grid) {
  std::vector<double> xs(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) xs[i] = grid.x(i);
  return xs;
}

}  // namespace holoshannon::lattice
