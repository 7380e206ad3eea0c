#include "synlat/disorder.hpp"
#include "synlat/errors.hpp"
#include "synlat/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace synlat;

namespace {

template <class F>
double simpson(F f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

TEST_SUITE("disorder") {

TEST_CASE("distance density is normalized and matches its CDF") {
    for (double s : {0.02, 0.1, 0.3}) {
        CAPTURE(s);
        const double hi = 1.0 + 12.0 * s;
        CHECK(simpson([s](double d) { return pdf_distance(d, s); }, 0.0, hi) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(cdf_distance(hi, s) == doctest::Approx(1.0).epsilon(1e-12));
        for (double d : {0.9, 1.0, 1.05, 1.2}) {
            const double h = 1e-6;
            const double slope = (cdf_distance(d + h, s) - cdf_distance(d - h, s)) / (2 * h);
            CHECK(slope == doctest::Approx(pdf_distance(d, s)).epsilon(1e-6));
        }
    }
}

TEST_CASE("distance CDF matches Monte Carlo of two Gaussian atoms") {
    const double s = 0.2;
    Rng rng = make_rng(99);
    std::normal_distribution<double> g(0.0, s);
    const int n = 200000;
    std::vector<double> d(n);
    for (auto& x : d) {
        const double dx = 1.0 + g(rng) - g(rng), dy = g(rng) - g(rng), dz = g(rng) - g(rng);
        x = std::sqrt(dx * dx + dy * dy + dz * dz);
    }
    for (double q : {0.7, 0.95, 1.1, 1.4}) {
        const double p = cdf_distance(q, s);
        const double emp = static_cast<double>(std::count_if(d.begin(), d.end(), [q](double x) { return x <= q; })) / n;
        CAPTURE(q);
        CHECK(std::abs(emp - p) < 5.0 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("energy shift density is the derivative of its CDF") {
    for (int alpha : {3, 6}) {
        for (double dv : {-0.2, 0.0, 0.3, 1.5}) {
            const double h = 1e-6;
            const double slope = (cdf_energy_shift(dv + h, 0.1, alpha) - cdf_energy_shift(dv - h, 0.1, alpha)) / (2 * h);
            CHECK(slope == doctest::Approx(pdf_energy_shift(dv, 0.1, alpha)).epsilon(1e-5));
        }
    }
}

TEST_CASE("tail probability closed form") {
    const double s = 0.3;
    const auto t = tail_probability(s, 3);
    CHECK(t.threshold == doctest::Approx(std::pow(2 * s * s, -3)));
    CHECK(t.closed_form == doctest::Approx(4 * s * s * s / (3 * std::sqrt(std::numbers::pi)) * std::exp(-1 / (4 * s * s))));
    CHECK(t.closed_form == doctest::Approx(0.0013).epsilon(0.1));
    CHECK(t.quadrature == doctest::Approx(t.closed_form).epsilon(0.1));
    // direct check against the distance CDF: dv > t  <=>  d < (1 + t)^(-1/3)
    CHECK(t.quadrature == doctest::Approx(cdf_distance(std::pow(1 + t.threshold, -1.0 / 3.0), s)).epsilon(1e-4));
}

TEST_CASE("thermal trap width limits") {
    const double hbar = 1.054571817e-34, kb = 1.380649e-23;
    const double m = 1.44e-25, w = 2 * std::numbers::pi * 100e3;
    const auto hot = trap_sigma(1e-3, w, m);
    CHECK(hot.exact == doctest::Approx(hot.semiclassical).epsilon(1e-4));
    CHECK(hot.semiclassical == doctest::Approx(std::sqrt(kb * 1e-3 / (m * w * w))));
    const auto cold = trap_sigma(1e-9, w, m);
    CHECK(cold.exact == doctest::Approx(std::sqrt(hbar / (2 * m * w))).epsilon(1e-10));
    CHECK_THROWS_AS(trap_sigma(0.0, w, m), InvalidArgument);
}

TEST_CASE("bond shifts") {
    DisorderParams p;
    p.v0_over_omega = 1.0;
    CHECK(bond_shift(1.0, p) == 0.0);
    CHECK(bond_shift(0.5, p) == doctest::Approx(7.0));
    p.alpha = 6;
    CHECK(bond_shift(0.5, p) == doctest::Approx(63.0));
    p.alpha = 3;
    p.linearized = true;
    CHECK(bond_shift(1.1, p) == doctest::Approx(-0.3));
}

TEST_CASE("ladder realizations") {
    DisorderParams p;
    p.s = 0.0;
    const auto clean = sample_ladder_realization(8, p, 5);
    for (const auto* v : {&clean.shifts.a, &clean.shifts.b, &clean.shifts.e})
        for (double x : *v) CHECK(x == 0.0);

    p.s = 0.05;
    const auto r1 = sample_ladder_realization(8, p, 5);
    const auto r2 = sample_ladder_realization(8, p, 5);
    CHECK(r1.shifts.e == r2.shifts.e);
    CHECK(r1.shifts.a[7] == 0.0);
    // recompute one rung shift from the displacements
    const Eigen::Vector3d u = Eigen::Vector3d(2, 0, 0) + r1.displacements[2];
    const Eigen::Vector3d l = Eigen::Vector3d(2, 1, 0) + r1.displacements[10];
    CHECK(r1.shifts.e[2] == doctest::Approx(300.0 * (std::pow((u - l).norm(), -3) - 1.0)));

    p.mode = DisorderMode::flat_pair_only;
    p.w = 0.4;
    const auto f = sample_ladder_realization(64, p, 6);
    for (double x : f.shifts.e) CHECK(std::abs(x) <= 0.2);
    for (double x : f.shifts.c) CHECK(x == 0.0);
    p.mode = DisorderMode::flat_all_sites;
    const auto fa = sample_ladder_realization(64, p, 6);
    CHECK(std::any_of(fa.shifts.c.begin(), fa.shifts.c.end(), [](double x) { return x != 0.0; }));
}

TEST_CASE("mean distance variance follows 2 s^2 / L^2") {
    Rng rng = make_rng(3);
    // leading order in s; the transverse O(s^4 / L) term is negligible at s = 0.01
    const auto v = mean_distance_variance(8, 0.01, 40000, rng);
    CHECK(v.theory == doctest::Approx(2 * 0.01 * 0.01 / 64));
    CHECK(std::abs(v.monte_carlo - v.theory) < 4 * v.mc_stderr);
    CHECK(std::abs(v.independent_mc - v.independent_theory) < 4 * v.independent_stderr);
}

TEST_CASE("invalid parameters") {
    DisorderParams p;
    p.alpha = 4;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    CHECK_THROWS_AS(pdf_distance(1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(disorder_mode_from_string("gaussian"), InvalidArgument);
}

}
