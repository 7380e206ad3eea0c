#include "synlat/bloch.hpp"
#include "synlat/lattice.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

using namespace synlat;

TEST_SUITE("bloch") {

TEST_CASE("square and chain bands follow |1 + e^{ik}| sums") {
    // Each pair site couples a one-excitation site to its copy one cell away,
    // so the dispersive bands are +-sqrt(sum_j |1 + e^{i k.a_j}|^2).
    const auto sq = synthesize(build_real_lattice(LatticeKind::square));
    const auto ch = synthesize(build_real_lattice(LatticeKind::chain));
    for (const auto& k : random_kpoints(sq, 50, 11)) {
        const auto bs = band_structure(sq, {k});
        const double e = std::sqrt(4.0 + 2.0 * std::cos(k.dot(sq.primitive_vectors[0])) +
                                   2.0 * std::cos(k.dot(sq.primitive_vectors[1])));
        CHECK(bs.bands(0, 0) == doctest::Approx(-e).epsilon(1e-12));
        CHECK(std::abs(bs.bands(0, 1)) < 1e-12);
        CHECK(bs.bands(0, 2) == doctest::Approx(e).epsilon(1e-12));
    }
    for (double k : {-3.0, -1.0, 0.0, 0.5, 2.5}) {
        const auto bs = band_structure(ch, {Vec2(k, 0.0)});
        CHECK(bs.bands(0, 1) == doctest::Approx(2.0 * std::abs(std::cos(k / 2))).epsilon(1e-12));
    }
}

TEST_CASE("Bloch matrix columns carry two unit-modulus terms") {
    for (auto kind : {LatticeKind::triangular, LatticeKind::honeycomb, LatticeKind::ladder}) {
        const auto syn = synthesize(build_real_lattice(kind));
        const auto m = bloch_matrix(syn, Vec2(0.0, 0.0));
        // at k = 0 every column sums to 2
        for (Eigen::Index c = 0; c < m.c_block.cols(); ++c) CHECK(m.c_block.col(c).sum().real() == doctest::Approx(2.0));
        const auto full = bloch_matrix(syn, Vec2(0.37, -1.1)).full();
        CHECK((full - full.adjoint()).norm() < 1e-14);
    }
}

TEST_CASE("flat band counts on uniform zone grids") {
    struct Case {
        LatticeKind kind;
        int n;
        int flat;
    };
    for (auto c : {Case{LatticeKind::square, 32, 1}, Case{LatticeKind::triangular, 32, 2},
                   Case{LatticeKind::honeycomb, 32, 1}, Case{LatticeKind::ladder, 1024, 1},
                   Case{LatticeKind::chain, 1024, 0}}) {
        const auto syn = synthesize(build_real_lattice(c.kind));
        const auto bs = band_structure(syn, zone_grid(syn, c.n));
        CAPTURE(to_string(c.kind));
        CHECK(bs.k_grid.size() == 1024);
        CHECK(count_flat_bands(bs) == c.flat);
        CHECK(count_flat_bands(bs) >= std::abs(syn.n1() - syn.n2()));
        CHECK(parity_defect(bs) < 1e-10);
    }
}

TEST_CASE("zone grid contains 0 and pi in 1D") {
    const auto syn = synthesize(build_real_lattice(LatticeKind::chain));
    const auto g = zone_grid(syn, 8);
    CHECK(g.size() == 8);
    CHECK(std::any_of(g.begin(), g.end(), [](const Vec2& k) { return k.norm() == 0.0; }));
    CHECK(std::any_of(g.begin(), g.end(), [](const Vec2& k) { return std::abs(std::abs(k.x()) - std::numbers::pi) < 1e-15; }));
}

TEST_CASE("reciprocal vectors are dual to the synthetic primitive vectors") {
    for (auto kind : {LatticeKind::square, LatticeKind::triangular, LatticeKind::honeycomb}) {
        const auto syn = synthesize(build_real_lattice(kind));
        const auto b = reciprocal_vectors(syn);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(syn.primitive_vectors[static_cast<std::size_t>(i)].dot(b[static_cast<std::size_t>(j)]) ==
                      doctest::Approx(i == j ? 2 * std::numbers::pi : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("honeycomb zone vertex geometry") {
    const Vec2 k = honeycomb_zone_vertex();
    CHECK(in_hexagonal_zone(k));
    CHECK_FALSE(in_hexagonal_zone(1.01 * k));
    CHECK(k.norm() == doctest::Approx(4 * std::numbers::pi / 3));
}

TEST_CASE("detangling") {
    const int L = 6;
    const auto r = detangle_rotation(L);
    CHECK((r * r - Eigen::MatrixXd::Identity(5 * L, 5 * L)).norm() < 1e-14);
    const auto clean = detangle(ladder_hamiltonian(L), L);
    CHECK(clean.cross_norm() < 1e-12);
    // the chain block is a uniform chain of 2L sites with unit hopping
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(clean.chain_block()).eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) CHECK(std::abs(ev(i)) <= 2.0 + 1e-12);
    // an A/B asymmetric shift couples the blocks
    auto s = LadderShifts::zeros(L);
    s.a[2] = 0.1;
    CHECK(detangle(ladder_hamiltonian(L, s), L).cross_norm() > 1e-3);
    // a symmetric one does not
    s.b[2] = 0.1;
    CHECK(detangle(ladder_hamiltonian(L, s), L).cross_norm() < 1e-12);
}

}
