#pragma once

// Bloch matrices of synthetic lattices, band structures, flat-band counting
// and the detangling transformation of the Lieb ladder.

#include "synlat/lattice.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace synlat {

/// M_k = [[0, C], [C^dagger, 0]] in the (one-excitation | pair) basis.
/// Quasimomenta are measured against the unit-length synthetic primitive vectors.
struct BlochMatrix {
    Vec2 k = Vec2::Zero();
    Eigen::MatrixXcd c_block; ///< n1 x n2

    Eigen::MatrixXcd full() const;
};

BlochMatrix bloch_matrix(const SyntheticLattice& syn, const Vec2& k);

/// Reciprocal vectors b_i with a_i . b_j = 2 pi delta_ij (synthetic units).
std::vector<Vec2> reciprocal_vectors(const SyntheticLattice& syn);

/// Uniform grid over the parallelepiped spanned by the reciprocal vectors:
/// n points in 1D (k in [-pi, pi), containing 0 and pi for even n), n x n in 2D.
std::vector<Vec2> zone_grid(const SyntheticLattice& syn, int n);

/// `count` quasimomenta drawn uniformly from the reciprocal cell.
std::vector<Vec2> random_kpoints(const SyntheticLattice& syn, int count, std::uint64_t seed);

inline constexpr double kDefaultFlatTolerance = 1e-8;

struct BandStructure {
    std::vector<Vec2> k_grid;
    Eigen::MatrixXd bands; ///< (k points) x (n1 + n2), each row ascending
    std::vector<bool> flat_flags;
    double flat_tol = kDefaultFlatTolerance;

    int band_count() const { return static_cast<int>(bands.cols()); }
};

BandStructure band_structure(const SyntheticLattice& syn, const std::vector<Vec2>& k_grid,
                             double flat_tol = kDefaultFlatTolerance, unsigned workers = 1);

int count_flat_bands(const BandStructure& bs, double flat_tol = kDefaultFlatTolerance);

/// Largest |eps_j(k) + eps_{n-1-j}(k)| over the structure (spectral parity defect).
double parity_defect(const BandStructure& bs);

/// Closed-form eigenvalues for triangular and honeycomb synthetic lattices, ascending.
std::vector<double> analytic_bands(LatticeKind kind, const Vec2& k);

/// Zone vertex (a2* - a1*)/3 of the honeycomb reciprocal lattice.
Vec2 honeycomb_zone_vertex();

/// True if k lies in the closed hexagonal first zone of the triangular Bravais lattice.
bool in_hexagonal_zone(const Vec2& k, double tol = 1e-12);

/// Momentum-axis display factors (chain-like, square, triangular/honeycomb cuts).
double momentum_scale(LatticeKind kind);

struct Detangled {
    Eigen::MatrixXd transform; ///< orthogonal U, columns = new basis vectors
    Eigen::MatrixXd matrix;    ///< U^T H U, ordered [X-, Y- | X+, Y+, E]
    int length = 0;

    Eigen::MatrixXd chain_block() const { return matrix.topLeftCorner(2 * length, 2 * length); }
    Eigen::MatrixXd stub_block() const { return matrix.bottomRightCorner(3 * length, 3 * length); }
    double cross_norm() const { return matrix.topRightCorner(2 * length, 3 * length).norm(); }
};

/// Rotation (A,B) -> (X+, X-), (C,D) -> (Y+, Y-) applied slot-wise in the
/// canonical ladder ordering; involutive.
Eigen::MatrixXd detangle_rotation(int length);

Detangled detangle(const Eigen::MatrixXd& h_ladder, int length);

} // namespace synlat
