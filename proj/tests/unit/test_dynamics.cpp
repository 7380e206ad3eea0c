#include "synlat/bloch.hpp"
#include "synlat/dynamics.hpp"
#include "synlat/errors.hpp"
#include "synlat/lattice.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

using namespace synlat;
using cd = std::complex<double>;

namespace {

Eigen::SparseMatrix<double> to_sparse(const Eigen::MatrixXd& m) { return m.sparseView(); }

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("localized state and its moments") {
    const auto psi = psi_loc(20, 10);
    CHECK(psi.amplitudes.norm() == doctest::Approx(1.0));
    int nonzero = 0;
    for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
        if (std::abs(psi.amplitudes(i)) > 0) {
            ++nonzero;
            CHECK(std::abs(psi.amplitudes(i)) == doctest::Approx(0.5));
        }
    CHECK(nonzero == 4);
    const auto obs = observables(psi);
    CHECK(obs.upper.mean == doctest::Approx(10.5));
    CHECK(obs.upper.width == doctest::Approx(0.5));
    CHECK(obs.lower.width == doctest::Approx(0.5));
    CHECK(obs.combined.width == doctest::Approx(0.5));
    // zero energy eigenstate of the clean ladder
    CHECK((ladder_hamiltonian(20) * psi.amplitudes).norm() < 1e-14);
    CHECK_THROWS_AS(psi_loc(20, 20), InvalidArgument);
}

TEST_CASE("leg profile of a uniform density") {
    for (int L : {4, 9, 20}) {
        const auto p = leg_profile(std::vector<double>(static_cast<std::size_t>(L), 0.3));
        CHECK(p.defined);
        CHECK(p.mean == doctest::Approx((L + 1) / 2.0));
        CHECK(p.width == doctest::Approx(std::sqrt((L * L - 1) / 12.0)));
    }
    CHECK_FALSE(leg_profile(std::vector<double>(5, 0.0)).defined);
}

TEST_CASE("unitary evolution") {
    Eigen::MatrixXd two(2, 2);
    two << 0, 1, 1, 0;
    CVector e0 = CVector::Zero(2);
    e0(0) = 1;
    const auto psi = evolve(two, e0, 0.7);
    CHECK(std::abs(psi(0) - cd(std::cos(0.7), 0)) < 1e-14);
    CHECK(std::abs(psi(1) - cd(0, -std::sin(0.7))) < 1e-14);

    const auto h = ladder_hamiltonian(12);
    const auto start = psi_loc(12, 3).amplitudes;
    CHECK((evolve(h, start, 0.0) - start).norm() < 1e-13);
    CVector kick = start;
    kick(ladder_slot(12, 2, 3)) = 0.3; // C_3
    kick.normalize();
    const double e_start = (kick.adjoint() * h * kick)(0).real();
    SpectralPropagator prop(h);
    for (double t : {1.0, 10.0, 100.0}) {
        const auto out = prop.apply(kick, t);
        CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((out.adjoint() * h * out)(0).real() == doctest::Approx(e_start).epsilon(1e-10));
        CHECK((evolve_krylov(to_sparse(h), kick, t) - out).norm() < 1e-9);
    }
    Eigen::MatrixXd bad = two;
    bad(0, 1) = 2;
    CHECK_THROWS_AS(evolve(bad, e0, 1.0), InvalidArgument);
}

TEST_CASE("full Hamiltonian diagonal for a two-rung ladder") {
    const double v0 = 50.0;
    const Displacements none(4, Eigen::Vector3d::Zero());
    const Eigen::MatrixXd h = Eigen::MatrixXd(build_full_hamiltonian(2, 0.0, v0, 3, none));
    REQUIRE(h.rows() == 16);
    // bits: 0 = u_1 at (0,0), 1 = u_2 at (1,0), 2 = l_1 at (0,1), 3 = l_2 at (1,1)
    const double pos[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (int cfg = 0; cfg < 16; ++cfg) {
        double e = -v0 * std::popcount(static_cast<unsigned>(cfg));
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if ((cfg >> a & 1) && (cfg >> b & 1)) {
                    const double d = std::hypot(pos[a][0] - pos[b][0], pos[a][1] - pos[b][1]);
                    e += v0 * std::pow(d, -3);
                }
        CAPTURE(cfg);
        CHECK(h(cfg, cfg) == doctest::Approx(e).epsilon(1e-13));
    }
    CHECK((h - Eigen::MatrixXd(h.diagonal().asDiagonal())).norm() == 0.0);

    const Eigen::MatrixXd driven = Eigen::MatrixXd(build_full_hamiltonian(2, 1.0, v0, 3, none));
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            if (i != j) CHECK(driven(i, j) == (std::popcount(static_cast<unsigned>(i ^ j)) == 1 ? 1.0 : 0.0));
}

TEST_CASE("embedding and projection") {
    const int L = 4;
    const auto psi = psi_loc(L, 2);
    const auto spin = embed_synthetic(psi);
    CHECK(spin.amplitudes.size() == 256);
    const auto back = project_to_synthetic(spin);
    CHECK((back.synthetic - psi.amplitudes).norm() < 1e-15);
    CHECK(back.leakage < 1e-15);
    for (int slot = 0; slot < 5 * L; ++slot) {
        const auto c = slot_configuration(L, slot);
        const bool removed = slot == L - 1 || slot == 2 * L - 1;
        CHECK((c == 0) == removed);
        if (!removed) CHECK((std::popcount(c) == 1 || std::popcount(c) == 2));
    }
}

TEST_CASE("full dynamics approaches the effective ladder at large V0") {
    const int L = 3;
    const auto psi = psi_loc(L, 1);
    CVector start = psi.amplitudes;
    start(ladder_slot(L, 2, 2)) = 0.4;
    start.normalize();
    const LadderState s0{Representation::synthetic, L, start};
    const Displacements none(2 * L, Eigen::Vector3d::Zero());
    const auto eff = evolve(ladder_hamiltonian(L), start, 2.0);
    double previous = 1.0;
    for (double v0 : {50.0, 500.0, 5000.0}) {
        const auto full = evolve_full(build_full_hamiltonian(L, 1.0, v0, 3, none), embed_synthetic(s0).amplitudes, 2.0);
        const auto proj = project_to_synthetic(LadderState{Representation::spin, L, full});
        const double miss = 1.0 - std::norm(eff.dot(proj.synthetic));
        CAPTURE(v0);
        CHECK(miss < previous);
        previous = miss;
    }
    CHECK(previous < 1e-4);
}

TEST_CASE("pulses and preparation") {
    const CVector down = plaquette_basis_state({});
    const auto one = apply_pulse(down, PulseSpec{1, std::numbers::pi, Regime::blockade});
    CHECK(std::abs(one.dot(plaquette_basis_state({1})) - cd(0, 1)) < 1e-14); // <1|out> = -i, dot conjugates lhs
    CHECK(std::abs(one(1) - cd(0, -1)) < 1e-14);

    const auto states = prepare_psi_loc(preparation_sequence());
    const auto targets = preparation_targets();
    REQUIRE(states.size() == 6);
    REQUIRE(targets.size() == 6);
    for (std::size_t k = 0; k < 6; ++k) CHECK(fidelity(states[k], targets[k]) == doctest::Approx(1.0).epsilon(1e-12));

    CVector expect = 0.5 * (plaquette_basis_state({1, 2}) - plaquette_basis_state({1, 3}) -
                            plaquette_basis_state({2, 4}) + plaquette_basis_state({3, 4}));
    CHECK(fidelity(states.back(), expect) == doctest::Approx(1.0).epsilon(1e-12));
    // the plaquette state is the localized ladder state
    const auto ladder = embed_plaquette(states.back(), 4, 2);
    CHECK(fidelity(ladder.amplitudes, embed_synthetic(psi_loc(4, 2)).amplitudes) == doctest::Approx(1.0).epsilon(1e-12));

    const auto full = prepare_psi_loc(preparation_sequence(PulseMode::full_hamiltonian, 1.0), Plaquette::ideal(200.0));
    CHECK(fidelity(full.back(), expect) > 0.99);
    CHECK_THROWS_AS(apply_pulse(down, PulseSpec{5, 1.0}), InvalidArgument);
}

TEST_CASE("disorder-averaged width scans") {
    DxScanConfig cfg;
    cfg.length = 8;
    cfg.rung = 4;
    cfg.s_grid = {0.0, 0.01};
    cfg.times = {0.0, 5.0, 50.0};
    cfg.realizations = 4;
    cfg.master_seed = 9;
    const auto serial = dx_scan(cfg);
    REQUIRE(serial.size() == 6);
    for (const auto& c : serial) {
        if (c.s == 0.0 || c.t == 0.0) {
            CHECK(std::abs(c.dx_upper - 0.5) < 1e-12);
            CHECK(std::abs(c.dx_lower - 0.5) < 1e-12);
        }
        CHECK(c.realizations == 4);
    }
    cfg.workers = 3;
    const auto threaded = dx_scan(cfg);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].dx_upper == threaded[i].dx_upper);
        CHECK(serial[i].err_lower == threaded[i].err_lower);
    }
    cfg.length = 3;
    CHECK_THROWS_AS(dx_scan(cfg), InvalidArgument);
}

TEST_CASE("full versus effective comparison cells") {
    CompareConfig cfg;
    cfg.length = 3;
    cfg.rung = 1;
    cfg.s_grid = {0.02};
    cfg.realizations = 3;
    cfg.master_seed = 4;
    const auto cells = compare_full_effective(cfg);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].v0 == 20.0);
    CHECK(cells[1].v0 == 200.0);
    for (const auto& c : cells) {
        CHECK(c.t == doctest::Approx(2 * std::numbers::pi * 4.3));
        CHECK(c.leakage >= 0.0);
        CHECK(c.leakage <= 1.0);
        CHECK(c.curve_gap <= c.discrepancy + 1e-12);
    }
    CHECK(cells[1].leakage < cells[0].leakage);
}

}
