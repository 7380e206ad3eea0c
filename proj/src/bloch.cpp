#include "synlat/bloch.hpp"

#include "synlat/errors.hpp"
#include "synlat/parallel.hpp"
#include "synlat/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace synlat {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec2 cell_vector(const SyntheticLattice& syn, const CellOffset& j) {
    Vec2 r = Vec2::Zero();
    for (int d = 0; d < syn.dim; ++d) r += j[static_cast<std::size_t>(d)] * syn.primitive_vectors[static_cast<std::size_t>(d)];
    return r;
}

} // namespace

Eigen::MatrixXcd BlochMatrix::full() const {
    const auto n1 = c_block.rows();
    const auto n2 = c_block.cols();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n1 + n2, n1 + n2);
    m.topRightCorner(n1, n2) = c_block;
    m.bottomLeftCorner(n2, n1) = c_block.adjoint();
    return m;
}

BlochMatrix bloch_matrix(const SyntheticLattice& syn, const Vec2& k) {
    // Row/column index of each species inside its block.
    std::vector<int> block_index(static_cast<std::size_t>(syn.size()), -1);
    for (int i = 0; i < syn.n1(); ++i) block_index[static_cast<std::size_t>(syn.one_exc_sites[static_cast<std::size_t>(i)])] = i;
    for (int i = 0; i < syn.n2(); ++i) block_index[static_cast<std::size_t>(syn.pair_sites[static_cast<std::size_t>(i)])] = i;

    BlochMatrix bm;
    bm.k = k;
    bm.c_block = Eigen::MatrixXcd::Zero(syn.n1(), syn.n2());
    for (const HopLink& link : syn.hop_links) {
        // Phase of the arrival cell.
        const double phase = k.dot(cell_vector(syn, link.offset));
        bm.c_block(block_index[static_cast<std::size_t>(link.one_exc_site)], block_index[static_cast<std::size_t>(link.pair_site)]) +=
            syn.hop_amplitude * std::polar(1.0, phase);
    }
    return bm;
}

std::vector<Vec2> reciprocal_vectors(const SyntheticLattice& syn) {
    if (syn.dim == 1) {
        const Vec2& a = syn.primitive_vectors[0];
        return {kTwoPi * a / a.squaredNorm()};
    }
    Eigen::Matrix2d a;
    a.col(0) = syn.primitive_vectors[0];
    a.col(1) = syn.primitive_vectors[1];
    const Eigen::Matrix2d b = kTwoPi * a.inverse().transpose();
    return {b.col(0), b.col(1)};
}

std::vector<Vec2> zone_grid(const SyntheticLattice& syn, int n) {
    if (n < 1) throw InvalidArgument("k-grid needs at least one point per dimension");
    const auto b = reciprocal_vectors(syn);
    std::vector<Vec2> grid;
    if (syn.dim == 1) {
        grid.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double f = static_cast<double>(i) / n;
            if (f >= 0.5) f -= 1.0;
            grid.push_back(f * b[0]);
        }
        std::sort(grid.begin(), grid.end(), [](const Vec2& x, const Vec2& y) { return x.x() < y.x(); });
        return grid;
    }
    grid.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            grid.push_back((static_cast<double>(i) / n) * b[0] + (static_cast<double>(j) / n) * b[1]);
    return grid;
}

std::vector<Vec2> random_kpoints(const SyntheticLattice& syn, int count, std::uint64_t seed) {
    const auto b = reciprocal_vectors(syn);
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        Vec2 k = u(rng) * b[0];
        if (syn.dim == 2) k += u(rng) * b[1];
        out.push_back(k);
    }
    return out;
}

BandStructure band_structure(const SyntheticLattice& syn, const std::vector<Vec2>& k_grid, double flat_tol,
                             unsigned workers) {
    if (k_grid.empty()) throw InvalidArgument("k-grid is empty");
    if (!(flat_tol > 0)) throw InvalidArgument("flatness tolerance must be positive");
    BandStructure bs;
    bs.k_grid = k_grid;
    bs.flat_tol = flat_tol;
    const int nb = syn.n1() + syn.n2();
    bs.bands.resize(static_cast<Eigen::Index>(k_grid.size()), nb);
    parallel_for(k_grid.size(), workers, [&](std::size_t i) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(bloch_matrix(syn, k_grid[i]).full(), Eigen::EigenvaluesOnly);
        bs.bands.row(static_cast<Eigen::Index>(i)) = es.eigenvalues().transpose();
    });
    bs.flat_flags.resize(static_cast<std::size_t>(nb));
    for (int j = 0; j < nb; ++j)
        bs.flat_flags[static_cast<std::size_t>(j)] = bs.bands.col(j).maxCoeff() - bs.bands.col(j).minCoeff() < flat_tol;
    return bs;
}

int count_flat_bands(const BandStructure& bs, double flat_tol) {
    if (!(flat_tol > 0)) throw InvalidArgument("flatness tolerance must be positive");
    int n = 0;
    for (int j = 0; j < bs.band_count(); ++j)
        if (bs.bands.col(j).maxCoeff() - bs.bands.col(j).minCoeff() < flat_tol) ++n;
    return n;
}

double parity_defect(const BandStructure& bs) {
    const int nb = bs.band_count();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < bs.bands.rows(); ++i)
        for (int j = 0; j < nb; ++j) worst = std::max(worst, std::abs(bs.bands(i, j) + bs.bands(i, nb - 1 - j)));
    return worst;
}

std::vector<double> analytic_bands(LatticeKind kind, const Vec2& k) {
    const Vec2 a1(1.0, 0.0);
    const Vec2 a2(0.5, std::numbers::sqrt3 / 2.0);
    std::vector<double> out;
    switch (kind) {
    case LatticeKind::triangular: {
        const double r = std::numbers::sqrt2 *
                         std::sqrt(3.0 + std::cos(k.dot(a1)) + std::cos(k.dot(a2)) + std::cos(k.dot(a1 - a2)));
        out = {-r, 0.0, 0.0, r};
        break;
    }
    case LatticeKind::honeycomb: {
        // Eigenvalues lambda of C C^dagger; bands are +-sqrt(lambda) plus one zero.
        const double g = std::abs(1.0 + std::polar(1.0, k.dot(a1 - a2)) + std::polar(1.0, -k.dot(a2)));
        const double lp = std::sqrt(3.0 + g);
        const double lm = std::sqrt(std::max(0.0, 3.0 - g));
        out = {-lp, -lm, 0.0, lm, lp};
        break;
    }
    default:
        throw InvalidArgument(fmt::format("no closed-form bands for lattice '{}'", to_string(kind)));
    }
    return out;
}

Vec2 honeycomb_zone_vertex() {
    const Vec2 b1(kTwoPi, -kTwoPi / std::numbers::sqrt3);
    const Vec2 b2(0.0, 2.0 * kTwoPi / std::numbers::sqrt3);
    return (b2 - b1) / 3.0;
}

bool in_hexagonal_zone(const Vec2& k, double tol) {
    const Vec2 b1(kTwoPi, -kTwoPi / std::numbers::sqrt3);
    const Vec2 b2(0.0, 2.0 * kTwoPi / std::numbers::sqrt3);
    for (const Vec2& g : {b1, b2, Vec2(b1 + b2)})
        if (std::abs(k.dot(g)) > 0.5 * g.squaredNorm() + tol) return false;
    return true;
}

double momentum_scale(LatticeKind kind) {
    switch (kind) {
    case LatticeKind::triangular:
    case LatticeKind::honeycomb:
        return 4.0 / 3.0;
    default:
        return 1.0;
    }
}

Eigen::MatrixXd detangle_rotation(int length) {
    if (length < 2) throw InvalidArgument("ladder length must be >= 2");
    const int n = length;
    const double r = 1.0 / std::numbers::sqrt2;
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(5 * n, 5 * n);
    for (int i = 0; i < n; ++i) {
        for (int base : {0, 2 * n}) { // (A,B) then (C,D)
            const int p = base + i;
            const int m = base + n + i;
            u(p, p) = r;
            u(m, p) = r;
            u(p, m) = r;
            u(m, m) = -r;
        }
        u(4 * n + i, 4 * n + i) = 1.0;
    }
    return u;
}

Detangled detangle(const Eigen::MatrixXd& h_ladder, int length) {
    if (length < 2 || h_ladder.rows() != 5 * length || h_ladder.cols() != 5 * length)
        throw InvalidArgument(fmt::format("expected a {0}x{0} ladder matrix", 5 * length));
    const int n = length;
    const Eigen::MatrixXd rot = detangle_rotation(n);
    // Rotated slots: A->X+, B->X-, C->Y+, D->Y-, E. Reorder to [X-, Y-, X+, Y+, E].
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(5 * n, 5 * n);
    const int order[5] = {1, 3, 0, 2, 4};
    for (int b = 0; b < 5; ++b)
        for (int i = 0; i < n; ++i) perm(order[b] * n + i, b * n + i) = 1.0;
    Detangled out;
    out.length = n;
    out.transform = rot * perm;
    out.matrix = out.transform.transpose() * h_ladder * out.transform;
    return out;
}

} // namespace synlat
