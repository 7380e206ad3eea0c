#include "synlat/dynamics.hpp"

#include "synlat/errors.hpp"
#include "synlat/parallel.hpp"
#include "synlat/rng.hpp"
#include "synlat/stats.hpp"

#include <fmt/format.h>

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

namespace synlat {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr int kDenseFullLimit = 1024;

void check_length(int length) {
    if (length < 2) throw InvalidArgument("ladder length must be >= 2");
}

void check_symmetric(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) throw InvalidArgument("Hamiltonian must be square");
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-10) throw InvalidArgument("Hamiltonian is not Hermitian");
}

double pair_interaction(double v0, double d, int alpha) { return v0 * std::pow(d, -alpha); }

// 2x2 propagator exp(-i h t) for real symmetric h.
Eigen::Matrix2cd two_level_propagator(const Eigen::Matrix2d& h, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    const Eigen::Matrix2d& v = es.eigenvectors();
    Eigen::Matrix2cd phase = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i) phase(i, i) = std::exp(-kI * es.eigenvalues()(i) * t);
    return v.cast<cd>() * phase * v.transpose().cast<cd>();
}

std::vector<double> site_densities(const LadderState& state) {
    const int L = state.length;
    std::vector<double> n(2 * static_cast<std::size_t>(L), 0.0);
    if (state.rep == Representation::synthetic) {
        for (int slot = 0; slot < 5 * L; ++slot) {
            const double w = std::norm(state.amplitudes(slot));
            if (w == 0.0) continue;
            std::uint64_t cfg = slot_configuration(L, slot);
            while (cfg) {
                n[static_cast<std::size_t>(std::countr_zero(cfg))] += w;
                cfg &= cfg - 1;
            }
        }
        return n;
    }
    for (Eigen::Index c = 0; c < state.amplitudes.size(); ++c) {
        const double w = std::norm(state.amplitudes(c));
        if (w == 0.0) continue;
        auto cfg = static_cast<std::uint64_t>(c);
        while (cfg) {
            n[static_cast<std::size_t>(std::countr_zero(cfg))] += w;
            cfg &= cfg - 1;
        }
    }
    return n;
}

} // namespace

int ladder_slot(int length, int species, int rung) {
    if (species < 0 || species > 4 || rung < 1 || rung > length) throw InvalidArgument("ladder slot out of range");
    return species * length + rung - 1;
}

std::uint64_t slot_configuration(int length, int slot) {
    const int species = slot / length;
    const int n = slot % length;
    const std::uint64_t u = 1ULL << n;
    const std::uint64_t l = 1ULL << (length + n);
    switch (species) {
    case 0: return n + 1 < length ? u | (u << 1) : 0;
    case 1: return n + 1 < length ? l | (l << 1) : 0;
    case 2: return u;
    case 3: return l;
    case 4: return u | l;
    default: throw InvalidArgument("slot index out of range");
    }
}

LadderState psi_loc(int length, int rung) {
    check_length(length);
    if (rung < 1 || rung > length - 1)
        throw InvalidArgument(fmt::format("psi_loc rung must lie in [1, {}]", length - 1));
    LadderState st;
    st.rep = Representation::synthetic;
    st.length = length;
    st.amplitudes = CVector::Zero(5 * length);
    st.amplitudes(ladder_slot(length, 0, rung)) = 0.5;
    st.amplitudes(ladder_slot(length, 1, rung)) = 0.5;
    st.amplitudes(ladder_slot(length, 4, rung)) = -0.5;
    st.amplitudes(ladder_slot(length, 4, rung + 1)) = -0.5;
    return st;
}

SpectralPropagator::SpectralPropagator(const Eigen::MatrixXd& h) {
    check_symmetric(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw NumericalFailure("eigendecomposition failed");
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
}

CVector SpectralPropagator::apply(const CVector& psi0, double t) const {
    if (psi0.size() != values_.size()) throw InvalidArgument("state dimension does not match the Hamiltonian");
    if (t == 0.0) return psi0;
    CVector c = vectors_.transpose().cast<cd>() * psi0;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(-kI * values_(i) * t);
    return vectors_.cast<cd>() * c;
}

CVector evolve(const Eigen::MatrixXd& h, const CVector& psi0, double t) {
    if (t == 0.0) {
        check_symmetric(h);
        if (psi0.size() != h.rows()) throw InvalidArgument("state dimension does not match the Hamiltonian");
        return psi0;
    }
    return SpectralPropagator(h).apply(psi0, t);
}

CVector evolve_krylov(const Eigen::SparseMatrix<double>& h, const CVector& psi0, double t, int krylov_dim) {
    if (h.rows() != h.cols() || psi0.size() != h.rows()) throw InvalidArgument("dimension mismatch");
    if (krylov_dim < 2) throw InvalidArgument("Krylov dimension must be >= 2");
    if (t == 0.0) return psi0;
    // Gershgorin bound on the spectral radius fixes the substep length.
    double radius = 0.0;
    for (int k = 0; k < h.outerSize(); ++k) {
        double row = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(h, k); it; ++it) row += std::abs(it.value());
        radius = std::max(radius, row);
    }
    const int m = static_cast<int>(std::min<Eigen::Index>(krylov_dim, h.rows()));
    const int steps = std::max(1, static_cast<int>(std::ceil(radius * std::abs(t) / (0.25 * m))));
    const double dt = t / steps;

    CVector psi = psi0;
    Eigen::MatrixXcd v(h.rows(), m);
    for (int step = 0; step < steps; ++step) {
        const double beta0 = psi.norm();
        if (beta0 == 0.0) return psi;
        v.col(0) = psi / beta0;
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        int used = m;
        for (int j = 0; j < m; ++j) {
            CVector w = h * v.col(j);
            // full reorthogonalization
            for (int i = 0; i <= j; ++i) {
                const cd proj = v.col(i).dot(w);
                w -= proj * v.col(i);
                if (i == j) tri(j, j) = proj.real();
            }
            for (int i = 0; i <= j; ++i) w -= v.col(i).dot(w) * v.col(i);
            const double beta = w.norm();
            if (j + 1 == m) break;
            if (beta < 1e-13 * std::max(1.0, radius)) {
                used = j + 1;
                break;
            }
            tri(j, j + 1) = tri(j + 1, j) = beta;
            v.col(j + 1) = w / beta;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri.topLeftCorner(used, used));
        CVector coef(used);
        for (int i = 0; i < used; ++i) coef(i) = std::exp(-kI * es.eigenvalues()(i) * dt) * es.eigenvectors()(0, i);
        const CVector small = es.eigenvectors().cast<cd>() * coef;
        psi = beta0 * (v.leftCols(used) * small);
    }
    return psi;
}

double expectation(const Eigen::SparseMatrix<double>& h, const CVector& psi) {
    return psi.dot(h * psi).real();
}

Eigen::SparseMatrix<double> build_full_hamiltonian(int length, double omega, double v0, int alpha,
                                                   const Displacements& displacements, DistanceModel distances) {
    check_length(length);
    if (length > kMaxFullLength)
        throw InvalidArgument(fmt::format("full Hamiltonian limited to L <= {}", kMaxFullLength));
    if (!(v0 > 0)) throw InvalidArgument("V0/Omega must be positive");
    if (alpha != 3 && alpha != 6) throw InvalidArgument("interaction exponent must be 3 or 6");
    const int atoms = 2 * length;
    if (!displacements.empty() && static_cast<int>(displacements.size()) != atoms)
        throw InvalidArgument("full Hamiltonian needs 2L displacements");

    const auto ideal = ladder_atom_positions(length);
    auto position = [&](int k) {
        Eigen::Vector3d p = ideal[static_cast<std::size_t>(k)];
        if (!displacements.empty()) p += displacements[static_cast<std::size_t>(k)];
        return p;
    };
    auto nearest = [&](int k, int m) {
        const int rk = k % length, rm = m % length;
        const bool same_leg = (k < length) == (m < length);
        return same_leg ? std::abs(rk - rm) == 1 : rk == rm;
    };
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(atoms, atoms);
    for (int k = 0; k < atoms; ++k)
        for (int m = k + 1; m < atoms; ++m) {
            const bool displaced = distances == DistanceModel::geometric || nearest(k, m);
            const double d = displaced ? (position(m) - position(k)).norm()
                                       : (ideal[static_cast<std::size_t>(m)] - ideal[static_cast<std::size_t>(k)]).norm();
            if (d < kMinBondLength) throw NumericalFailure("coincident atoms in displacement set");
            v(k, m) = v(m, k) = pair_interaction(v0, d, alpha);
        }

    const std::int64_t dim = std::int64_t{1} << atoms;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(dim * (atoms + 1)));
    const double delta = -v0;
    for (std::int64_t c = 0; c < dim; ++c) {
        double diag = 0.0;
        for (int k = 0; k < atoms; ++k) {
            if (!(c >> k & 1)) continue;
            diag += delta;
            for (int m = k + 1; m < atoms; ++m)
                if (c >> m & 1) diag += v(k, m);
        }
        if (diag != 0.0) trip.emplace_back(static_cast<int>(c), static_cast<int>(c), diag);
        if (omega != 0.0)
            for (int k = 0; k < atoms; ++k) trip.emplace_back(static_cast<int>(c ^ (std::int64_t{1} << k)), static_cast<int>(c), omega);
    }
    Eigen::SparseMatrix<double> h(dim, dim);
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
}

LadderState embed_synthetic(const LadderState& state) {
    if (state.rep != Representation::synthetic) throw InvalidArgument("expected a synthetic state");
    const int L = state.length;
    if (L > kMaxFullLength) throw InvalidArgument("spin embedding limited to small ladders");
    LadderState out;
    out.rep = Representation::spin;
    out.length = L;
    out.amplitudes = CVector::Zero(std::int64_t{1} << (2 * L));
    for (int slot = 0; slot < 5 * L; ++slot) {
        const std::uint64_t cfg = slot_configuration(L, slot);
        if (cfg) out.amplitudes(static_cast<Eigen::Index>(cfg)) = state.amplitudes(slot);
    }
    return out;
}

Projection project_to_synthetic(const LadderState& state) {
    if (state.rep != Representation::spin) throw InvalidArgument("expected a spin state");
    const int L = state.length;
    Projection p;
    p.synthetic = CVector::Zero(5 * L);
    double captured = 0.0;
    for (int slot = 0; slot < 5 * L; ++slot) {
        const std::uint64_t cfg = slot_configuration(L, slot);
        if (!cfg) continue;
        p.synthetic(slot) = state.amplitudes(static_cast<Eigen::Index>(cfg));
        captured += std::norm(p.synthetic(slot));
    }
    p.leakage = std::max(0.0, state.amplitudes.squaredNorm() - captured);
    return p;
}

CVector evolve_full(const Eigen::SparseMatrix<double>& h, const CVector& psi0, double t) {
    if (h.rows() <= kDenseFullLimit) return evolve(Eigen::MatrixXd(h), psi0, t);
    return evolve_krylov(h, psi0, t);
}

// ---- pulses ----------------------------------------------------------------

Plaquette Plaquette::ideal(double v0, int alpha) {
    Plaquette p;
    p.positions = {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(1, 1, 0)};
    p.v0 = v0;
    p.alpha = alpha;
    return p;
}

Eigen::Matrix2cd rotation(double theta) {
    Eigen::Matrix2cd u;
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    u << c, -kI * s, -kI * s, c;
    return u;
}

CVector apply_pulse(const CVector& state, const PulseSpec& pulse, const Plaquette& plaquette) {
    if (state.size() != 16) throw InvalidArgument("plaquette register holds 16 amplitudes");
    if (pulse.site < 1 || pulse.site > 4) throw InvalidArgument("plaquette site must be 1..4");
    if (!(pulse.theta >= 0.0 && pulse.theta <= 4.0 * std::numbers::pi + 1e-12))
        throw InvalidArgument("pulse area must lie in [0, 4 pi]");
    if (pulse.regime != Regime::blockade && pulse.regime != Regime::facilitation)
        throw InvalidArgument("unknown pulse regime");
    if (pulse.theta == 0.0) return state;

    const int j = pulse.site - 1;
    const auto bit = 1 << j;
    const Plaquette geom = Plaquette::ideal();
    CVector out = state;
    const Eigen::Matrix2cd resonant = rotation(pulse.theta);
    for (int c = 0; c < 16; ++c) {
        if (c & bit) continue;
        Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
        if (pulse.mode == PulseMode::ideal_gate) {
            int near = 0, nn = 0;
            for (int m = 0; m < 4; ++m) {
                if (m == j || !(c >> m & 1)) continue;
                const double d = (geom.positions[static_cast<std::size_t>(m)] - geom.positions[static_cast<std::size_t>(j)]).norm();
                if (d < 2.0 - 1e-9) ++near;
                if (std::abs(d - 1.0) < 1e-9) ++nn;
            }
            const bool on = pulse.regime == Regime::blockade ? near == 0 : (nn == 1 && near == 1);
            if (on) u = resonant;
        } else {
            if (!(pulse.omega_r > 0)) throw InvalidArgument("Rabi frequency must be positive");
            double e_up = pulse.regime == Regime::facilitation ? -plaquette.v0 : 0.0;
            for (int m = 0; m < 4; ++m) {
                if (m == j || !(c >> m & 1)) continue;
                const double d = (plaquette.positions[static_cast<std::size_t>(m)] - plaquette.positions[static_cast<std::size_t>(j)]).norm();
                e_up += pair_interaction(plaquette.v0, d, plaquette.alpha);
            }
            Eigen::Matrix2d h2;
            h2 << 0.0, 0.5 * pulse.omega_r, 0.5 * pulse.omega_r, e_up;
            u = two_level_propagator(h2, pulse.theta / pulse.omega_r);
        }
        const cd a0 = state(c), a1 = state(c | bit);
        out(c) = u(0, 0) * a0 + u(0, 1) * a1;
        out(c | bit) = u(1, 0) * a0 + u(1, 1) * a1;
    }
    return out;
}

std::vector<PulseSpec> preparation_sequence(PulseMode mode, double omega_r) {
    constexpr double pi = std::numbers::pi;
    const auto B = Regime::blockade;
    const auto F = Regime::facilitation;
    return {{1, pi / 2, B, mode, omega_r}, {4, pi, B, mode, omega_r},     {2, pi / 2, F, mode, omega_r},
            {3, pi, F, mode, omega_r},     {4, 2 * pi, F, mode, omega_r}, {2, 2 * pi, F, mode, omega_r}};
}

std::vector<CVector> prepare_psi_loc(const std::vector<PulseSpec>& sequence, const Plaquette& plaquette) {
    CVector psi = CVector::Zero(16);
    psi(0) = 1.0;
    std::vector<CVector> out;
    for (const auto& p : sequence) {
        psi = apply_pulse(psi, p, plaquette);
        out.push_back(psi);
    }
    return out;
}

CVector plaquette_basis_state(std::initializer_list<int> excited_sites) {
    int c = 0;
    for (int s : excited_sites) {
        if (s < 1 || s > 4) throw InvalidArgument("plaquette site must be 1..4");
        c |= 1 << (s - 1);
    }
    CVector v = CVector::Zero(16);
    v(c) = 1.0;
    return v;
}

std::vector<CVector> preparation_targets() {
    const auto k = plaquette_basis_state;
    const double r2 = 1.0 / std::numbers::sqrt2;
    return {
        r2 * (k({}) - kI * k({1})),
        r2 * (k({1}) + k({4})),
        0.5 * (-kI * k({1, 2}) + k({1}) - kI * k({2, 4}) + k({4})),
        0.5 * (k({1, 2}) + k({1, 3}) + k({2, 4}) + k({3, 4})),
        0.5 * (k({1, 2}) + k({1, 3}) - k({2, 4}) - k({3, 4})),
        0.5 * (k({1, 2}) - k({1, 3}) - k({2, 4}) + k({3, 4})),
    };
}

LadderState embed_plaquette(const CVector& state, int length, int rung) {
    check_length(length);
    if (length > kMaxFullLength) throw InvalidArgument("spin embedding limited to small ladders");
    if (rung < 1 || rung > length - 1) throw InvalidArgument("plaquette rung out of range");
    if (state.size() != 16) throw InvalidArgument("plaquette register holds 16 amplitudes");
    const int n = rung - 1;
    const std::array<int, 4> atom{n, n + 1, length + n, length + n + 1};
    LadderState out;
    out.rep = Representation::spin;
    out.length = length;
    out.amplitudes = CVector::Zero(std::int64_t{1} << (2 * length));
    for (int c = 0; c < 16; ++c) {
        std::int64_t cfg = 0;
        for (int m = 0; m < 4; ++m)
            if (c >> m & 1) cfg |= std::int64_t{1} << atom[static_cast<std::size_t>(m)];
        out.amplitudes(cfg) = state(c);
    }
    return out;
}

double fidelity(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw InvalidArgument("dimension mismatch");
    return std::norm(a.dot(b));
}

// ---- observables -------------------------------------------------------------

LegProfile leg_profile(const std::vector<double>& density) {
    LegProfile out;
    double total = 0.0;
    for (double n : density) total += n;
    out.p.assign(density.size(), 0.0);
    if (!(total > 0.0)) return out;
    out.defined = true;
    for (std::size_t i = 0; i < density.size(); ++i) {
        out.p[i] = density[i] / total;
        out.mean += out.p[i] * static_cast<double>(i + 1);
    }
    double var = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) {
        const double dx = static_cast<double>(i + 1) - out.mean;
        var += out.p[i] * dx * dx;
    }
    out.width = std::sqrt(std::max(0.0, var));
    return out;
}

Observables observables(const LadderState& state) {
    const auto n = site_densities(state);
    const auto L = static_cast<std::ptrdiff_t>(state.length);
    Observables o;
    o.upper = leg_profile(std::vector<double>(n.begin(), n.begin() + L));
    o.lower = leg_profile(std::vector<double>(n.begin() + L, n.end()));
    std::vector<double> pooled(n.begin(), n.begin() + L);
    for (std::ptrdiff_t i = 0; i < L; ++i) pooled[static_cast<std::size_t>(i)] += n[static_cast<std::size_t>(L + i)];
    o.combined = leg_profile(pooled);
    return o;
}

EvolutionRecord record_evolution(const Eigen::MatrixXd& h_eff, const LadderState& psi0,
                                 const std::vector<double>& times, std::uint64_t seed) {
    if (psi0.rep != Representation::synthetic) throw InvalidArgument("effective evolution needs a synthetic state");
    const SpectralPropagator prop(h_eff);
    EvolutionRecord rec;
    rec.times = times;
    rec.seed = seed;
    LadderState st = psi0;
    for (double t : times) {
        st.amplitudes = prop.apply(psi0.amplitudes, t);
        rec.frames.push_back(observables(st));
    }
    return rec;
}

std::vector<DxCell> dx_scan(const DxScanConfig& cfg) {
    if (cfg.length < 4) throw InvalidArgument("dx scan needs L >= 4");
    if (cfg.realizations < 1) throw InvalidArgument("need at least one realization");
    if (cfg.s_grid.empty() || cfg.v0_grid.empty() || cfg.times.empty()) throw InvalidArgument("empty scan grid");
    const LadderState psi0 = psi_loc(cfg.length, cfg.rung);
    const std::size_t ns = cfg.s_grid.size(), nv = cfg.v0_grid.size(), nt = cfg.times.size();
    const auto nr = static_cast<std::size_t>(cfg.realizations);
    // widths[(cell * nr + r) * nt + t] = {upper, lower}
    std::vector<std::array<double, 3>> widths(ns * nv * nr * nt);
    parallel_for(ns * nv * nr, cfg.workers, [&](std::size_t job) {
        const std::size_t cell = job / nr, r = job % nr;
        DisorderParams p;
        p.s = cfg.s_grid[cell / nv];
        p.v0_over_omega = cfg.v0_grid[cell % nv];
        p.alpha = cfg.alpha;
        const auto real = sample_ladder_realization(cfg.length, p, derive_seed(cfg.master_seed, "dynamics", r));
        const SpectralPropagator prop(ladder_hamiltonian(cfg.length, real.shifts));
        LadderState st = psi0;
        for (std::size_t t = 0; t < nt; ++t) {
            st.amplitudes = prop.apply(psi0.amplitudes, cfg.times[t]);
            const auto o = observables(st);
            widths[job * nt + t] = {o.upper.width, o.lower.width, o.combined.width};
        }
    });
    std::vector<DxCell> out;
    for (std::size_t cell = 0; cell < ns * nv; ++cell)
        for (std::size_t t = 0; t < nt; ++t) {
            RunningStats up, lo, diff, both;
            for (std::size_t r = 0; r < nr; ++r) {
                const auto& w = widths[(cell * nr + r) * nt + t];
                up.add(w[0]);
                lo.add(w[1]);
                diff.add(w[0] - w[1]);
                both.add(w[2]);
            }
            DxCell c;
            c.s = cfg.s_grid[cell / nv];
            c.v0 = cfg.v0_grid[cell % nv];
            c.t = cfg.times[t];
            c.dx_upper = up.mean();
            c.dx_lower = lo.mean();
            c.err_upper = nr > 1 ? up.stderr_of_mean() : 0.0;
            c.err_lower = nr > 1 ? lo.stderr_of_mean() : 0.0;
            c.diff_mean = diff.mean();
            c.diff_err = nr > 1 ? diff.stderr_of_mean() : 0.0;
            c.dx_combined = both.mean();
            c.err_combined = nr > 1 ? both.stderr_of_mean() : 0.0;
            c.realizations = cfg.realizations;
            out.push_back(c);
        }
    return out;
}

std::vector<CompareCell> compare_full_effective(const CompareConfig& cfg) {
    if (cfg.length < 2 || cfg.length > kMaxFullLength) throw InvalidArgument("comparison ladder length out of range");
    if (cfg.realizations < 1) throw InvalidArgument("need at least one realization");
    if (cfg.s_grid.empty() || cfg.v0_grid.empty()) throw InvalidArgument("empty comparison grid");
    const double t = 2.0 * std::numbers::pi * cfg.omega_t_over_2pi;
    const LadderState psi0 = psi_loc(cfg.length, cfg.rung);
    const LadderState spin0 = embed_synthetic(psi0);
    const std::size_t ns = cfg.s_grid.size(), nv = cfg.v0_grid.size();
    const auto nr = static_cast<std::size_t>(cfg.realizations);
    struct Sample {
        double fu, fl, eu, el, leak;
    };
    std::vector<Sample> samples(ns * nv * nr);
    parallel_for(samples.size(), cfg.workers, [&](std::size_t job) {
        const std::size_t cell = job / nr, r = job % nr;
        DisorderParams p;
        p.s = cfg.s_grid[cell / nv];
        p.v0_over_omega = cfg.v0_grid[cell % nv];
        p.alpha = cfg.alpha;
        const auto real = sample_ladder_realization(cfg.length, p, derive_seed(cfg.master_seed, "compare", r));

        LadderState eff = psi0;
        eff.amplitudes = evolve(ladder_hamiltonian(cfg.length, real.shifts), psi0.amplitudes, t);
        const auto oe = observables(eff);

        const auto h = build_full_hamiltonian(cfg.length, 1.0, p.v0_over_omega, cfg.alpha, real.displacements, cfg.distances);
        LadderState full = spin0;
        full.amplitudes = evolve_full(h, spin0.amplitudes, t);
        const auto of = observables(full);
        samples[job] = {of.upper.width, of.lower.width, oe.upper.width, oe.lower.width,
                        project_to_synthetic(full).leakage};
    });
    std::vector<CompareCell> out;
    for (std::size_t cell = 0; cell < ns * nv; ++cell) {
        RunningStats fu, fl, eu, el, disc, leak;
        for (std::size_t r = 0; r < nr; ++r) {
            const auto& x = samples[cell * nr + r];
            fu.add(x.fu);
            fl.add(x.fl);
            eu.add(x.eu);
            el.add(x.el);
            disc.add(0.5 * (std::abs(x.fu - x.eu) + std::abs(x.fl - x.el)));
            leak.add(x.leak);
        }
        CompareCell c;
        c.s = cfg.s_grid[cell / nv];
        c.v0 = cfg.v0_grid[cell % nv];
        c.t = t;
        c.dx_full_upper = fu.mean();
        c.dx_full_lower = fl.mean();
        c.dx_eff_upper = eu.mean();
        c.dx_eff_lower = el.mean();
        c.curve_gap = 0.5 * (std::abs(c.dx_full_upper - c.dx_eff_upper) + std::abs(c.dx_full_lower - c.dx_eff_lower));
        c.discrepancy = disc.mean();
        c.discrepancy_err = nr > 1 ? disc.stderr_of_mean() : 0.0;
        c.leakage = leak.mean();
        c.realizations = cfg.realizations;
        out.push_back(c);
    }
    return out;
}

} // namespace synlat
