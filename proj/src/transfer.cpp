#include "synlat/transfer.hpp"

#include "synlat/errors.hpp"
#include "synlat/parallel.hpp"
#include "synlat/stats.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace synlat {

std::optional<Eigen::Matrix4d> rung_transfer_matrix(double eps, const RungShifts& r, double floor) {
    const double xa = eps - r.a, xb = eps - r.b;
    const double xap = eps - r.a_prev, xbp = eps - r.b_prev, xe = eps - r.e;
    if (std::abs(xa) < floor || std::abs(xb) < floor || std::abs(xap) < floor || std::abs(xbp) < floor ||
        std::abs(xe) < floor)
        return std::nullopt;
    const double ga = 1.0 / xap, gb = 1.0 / xbp, ge = 1.0 / xe;
    Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
    t(0, 0) = xa * (eps - r.c - ga - ge) - 1.0;
    t(0, 1) = -xa * ge;
    t(0, 2) = -xa * ga;
    t(1, 0) = -xb * ge;
    t(1, 1) = xb * (eps - r.d - gb - ge) - 1.0;
    t(1, 3) = -xb * gb;
    t(2, 0) = 1.0;
    t(3, 1) = 1.0;
    return t;
}

std::array<double, 4> clean_exponents(double eps) {
    const auto t = rung_transfer_matrix(eps, RungShifts{});
    if (!t) throw InvalidArgument("clean transfer matrix is singular at eps = 0");
    Eigen::EigenSolver<Eigen::Matrix4d> es(*t, false);
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] = std::log(std::abs(es.eigenvalues()[i]));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

void TransferConfig::validate() const {
    params.validate();
    if (qr_period < 1) throw InvalidArgument("qr_period must be >= 1");
    if (n_steps < 10 * static_cast<std::int64_t>(qr_period)) throw InvalidArgument("n_steps must be >= 10 * qr_period");
    if (block_qrs < 1) throw InvalidArgument("block size must be >= 1");
    if (!(denominator_floor > 0)) throw InvalidArgument("denominator floor must be positive");
    if (!std::isfinite(energy)) throw InvalidArgument("energy must be finite");
}

namespace {

// Streams rung shifts along an infinite ladder. Positional disorder keeps the
// two atoms of the current rung; each step places the next rung.
class RungStream {
public:
    RungStream(const TransferConfig& cfg) : cfg_(cfg), p_(cfg.params), rng_(make_rng(cfg.seed)), g_(0.0, p_.s > 0 ? p_.s : 1.0) {
        place_rung(u_, l_);
        Eigen::Vector3d u1, l1;
        advance(u1, l1, a_prev_, b_prev_, e_);
        u_ = u1;
        l_ = l1;
    }

    // Shifts for the step across the current rung; advances the stream.
    RungShifts next() {
        RungShifts r;
        r.a_prev = a_prev_;
        r.b_prev = b_prev_;
        r.e = e_;
        if (p_.mode == DisorderMode::flat_all_sites) {
            r.c = flat();
            r.d = flat();
        }
        Eigen::Vector3d u1, l1;
        double e1;
        advance(u1, l1, r.a, r.b, e1);
        u_ = u1;
        l_ = l1;
        a_prev_ = r.a;
        b_prev_ = r.b;
        e_ = e1;
        return r;
    }

    std::int64_t resamples() const { return resamples_; }

private:
    double flat() { return p_.w * (unit_(rng_) - 0.5); }
    double gauss() { return p_.s > 0 ? g_(rng_) : 0.0; }

    void place_rung(Eigen::Vector3d& u, Eigen::Vector3d& l) {
        // coordinates relative to the rung's own ideal position
        const double ux = gauss(), uy = gauss(), uz = gauss();
        const double lx = gauss(), ly = gauss(), lz = gauss();
        u = {ux, uy, uz};
        l = {lx, 1.0 + ly, lz};
    }

    bool near_pole(double delta) const { return std::abs(cfg_.energy - delta) < cfg_.denominator_floor; }

    // Draws the next rung, returning A_n, B_n and E_{n+1}; rejects draws that
    // put any new denominator below the floor.
    void advance(Eigen::Vector3d& u1, Eigen::Vector3d& l1, double& a, double& b, double& e1) {
        const Eigen::Vector3d ex(1.0, 0.0, 0.0);
        for (int attempt = 0;; ++attempt) {
            if (p_.mode == DisorderMode::positional) {
                place_rung(u1, l1);
                const double da = (ex + u1 - u_).norm();
                const double db = (ex + l1 - l_).norm();
                const double de = (l1 - u1).norm();
                if (da >= kMinBondLength && db >= kMinBondLength && de >= kMinBondLength) {
                    a = bond_shift(da, p_);
                    b = bond_shift(db, p_);
                    e1 = bond_shift(de, p_);
                    if (!near_pole(a) && !near_pole(b) && !near_pole(e1)) return;
                }
            } else {
                a = flat();
                b = flat();
                e1 = flat();
                if (!near_pole(a) && !near_pole(b) && !near_pole(e1)) return;
            }
            ++resamples_;
            if (attempt >= cfg_.retry_budget)
                throw NumericalFailure(fmt::format("rung resample budget exhausted at eps = {}", cfg_.energy));
        }
    }

    const TransferConfig& cfg_;
    DisorderParams p_;
    Rng rng_;
    std::normal_distribution<double> g_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    Eigen::Vector3d u_, l_;
    double a_prev_ = 0.0, b_prev_ = 0.0, e_ = 0.0;
    std::int64_t resamples_ = 0;
};

} // namespace

LyapunovResult lyapunov_spectrum(const TransferConfig& cfg) {
    cfg.validate();
    RungStream stream(cfg);
    Eigen::Matrix4d q = Eigen::Matrix4d::Identity();
    std::array<double, 4> acc{};
    std::array<double, 4> block{};
    std::array<RunningStats, 4> block_stats;
    std::int64_t block_steps = 0;
    int block_count = 0;

    auto orthonormalize = [&] {
        Eigen::HouseholderQR<Eigen::Matrix4d> qr(q);
        const Eigen::Matrix4d r = qr.matrixQR().triangularView<Eigen::Upper>();
        q = qr.householderQ();
        for (int i = 0; i < 4; ++i) {
            const double g = std::log(std::abs(r(i, i)));
            if (!std::isfinite(g)) throw NumericalFailure("degenerate transfer product");
            acc[static_cast<std::size_t>(i)] += g;
            block[static_cast<std::size_t>(i)] += g;
        }
    };

    for (std::int64_t n = 1; n <= cfg.n_steps; ++n) {
        const RungShifts r = stream.next();
        const auto t = rung_transfer_matrix(cfg.energy, r, cfg.denominator_floor);
        if (!t) throw NumericalFailure("transfer denominator below floor after resampling");
        q = (*t) * q;
        ++block_steps;
        if (n % cfg.qr_period == 0 || n == cfg.n_steps) {
            orthonormalize();
            if (++block_count == cfg.block_qrs || n == cfg.n_steps) {
                for (std::size_t i = 0; i < 4; ++i) {
                    block_stats[i].add(block[i] / static_cast<double>(block_steps));
                    block[i] = 0.0;
                }
                block_count = 0;
                block_steps = 0;
            }
        }
    }

    LyapunovResult res;
    res.n_steps = cfg.n_steps;
    res.resamples = stream.resamples();
    res.seed = cfg.seed;
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int x, int y) { return acc[static_cast<std::size_t>(x)] > acc[static_cast<std::size_t>(y)]; });
    for (std::size_t i = 0; i < 4; ++i) {
        const auto j = static_cast<std::size_t>(order[i]);
        res.exponents[i] = acc[j] / static_cast<double>(cfg.n_steps);
        res.stderr_[i] = block_stats[j].count() > 1 ? block_stats[j].stderr_of_mean() : 0.0;
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double g1 = res.exponents[0], g2 = res.exponents[1];
    res.xi1 = g1 > 0 ? 1.0 / g1 : inf;
    res.xi2 = g2 > 0 ? 1.0 / g2 : inf;
    res.xi1_err = g1 > 0 ? res.stderr_[0] / (g1 * g1) : inf;
    res.xi2_err = g2 > 0 ? res.stderr_[1] / (g2 * g2) : inf;
    return res;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0) || !(hi > lo) || n < 2) throw InvalidArgument("log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

PowerLawFit fit_power_law(const std::vector<double>& s, const std::vector<double>& xi, const FitOptions& opt) {
    if (s.size() != xi.size()) throw InvalidArgument("grid and length series differ in size");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i] > 0) || !std::isfinite(xi[i]) || !(xi[i] > 0)) continue;
        x.push_back(std::log(s[i]));
        y.push_back(std::log(xi[i]));
    }
    const int n = static_cast<int>(x.size());
    if (n < opt.min_points) throw NumericalFailure(fmt::format("only {} usable points for the power-law fit", n));

    PowerLawFit out;
    if (opt.window) {
        out.first = opt.window->first;
        out.last = opt.window->second;
        if (out.first < 0 || out.last > n || out.last - out.first < 2)
            throw InvalidArgument("manual fit window out of range");
    } else {
        // Curvature cut: drop trailing points whose local slope leaves the band
        // around the slope of the leading half.
        const auto half = static_cast<std::size_t>(std::max(2, (n + 1) / 2));
        const double lead = fit_line(x, y, 0, half).slope;
        const double band = std::max(opt.relative_cut * std::abs(lead), opt.absolute_floor);
        int last = n;
        while (last > opt.min_points) {
            const auto i = static_cast<std::size_t>(last - 1);
            const double local = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
            if (std::abs(local - lead) <= band) break;
            --last;
        }
        out.first = 0;
        out.last = last;
    }
    const LineFit f = fit_line(x, y, static_cast<std::size_t>(out.first), static_cast<std::size_t>(out.last));
    out.nu = -f.slope;
    out.nu_err = f.slope_err;
    out.residual_rms = f.residual_rms;
    return out;
}

void validate_scaling_grid(const std::vector<double>& grid, DisorderMode mode, int min_points) {
    if (static_cast<int>(grid.size()) < min_points)
        throw InvalidArgument(fmt::format("scaling grid needs at least {} points", min_points));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0)) throw InvalidArgument("scaling grid values must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidArgument("scaling grid must be increasing");
    }
    const double decades = std::log10(grid.back() / grid.front());
    const double need = mode == DisorderMode::positional ? 1.5 : 1.0;
    if (decades < need - 1e-9)
        throw InvalidArgument(fmt::format("scaling grid spans {:.3g} decades, need {}", decades, need));
}

ScalingFit fit_scaling(double energy, DisorderMode mode, std::vector<double> grid, std::vector<LyapunovResult> runs,
                       const FitOptions& opt) {
    ScalingFit out;
    out.energy = energy;
    out.mode = mode;
    std::vector<double> xi1, xi2;
    for (const auto& r : runs) {
        xi1.push_back(r.xi1);
        xi2.push_back(r.xi2);
    }
    out.fit1 = fit_power_law(grid, xi1, opt);
    out.fit2 = fit_power_law(grid, xi2, opt);
    out.s_grid = std::move(grid);
    out.runs = std::move(runs);
    return out;
}

std::vector<LyapunovResult> lyapunov_sweep(double energy, const std::vector<double>& grid, const TransferConfig& base,
                                           std::uint64_t master_seed, unsigned workers, std::uint64_t energy_index) {
    base.validate();
    for (double g : grid)
        if (!(g >= 0)) throw InvalidArgument("disorder strengths must be >= 0");
    const std::uint64_t energy_seed = derive_seed(master_seed, "localization", energy_index);
    std::vector<LyapunovResult> runs(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t i) {
        TransferConfig cfg = base;
        cfg.energy = energy;
        if (cfg.params.mode == DisorderMode::positional)
            cfg.params.s = grid[i];
        else
            cfg.params.w = grid[i];
        cfg.seed = derive_seed(energy_seed, i);
        runs[i] = lyapunov_spectrum(cfg);
    });
    return runs;
}

ScalingFit scaling_exponent(double energy, const std::vector<double>& grid, const TransferConfig& base,
                            std::uint64_t master_seed, unsigned workers, const FitOptions& opt,
                            std::uint64_t energy_index) {
    validate_scaling_grid(grid, base.params.mode, opt.min_points);
    return fit_scaling(energy, base.params.mode, grid,
                       lyapunov_sweep(energy, grid, base, master_seed, workers, energy_index), opt);
}

std::vector<ScalingFit> flat_disorder_sweep(const std::vector<double>& energies, const std::vector<double>& w_grid,
                                            DisorderMode mode, const TransferConfig& base, std::uint64_t master_seed,
                                            unsigned workers, const FitOptions& opt) {
    if (mode == DisorderMode::positional) throw InvalidArgument("flat sweep needs a flat disorder mode");
    TransferConfig cfg = base;
    cfg.params.mode = mode;
    std::vector<ScalingFit> out;
    for (std::size_t e = 0; e < energies.size(); ++e)
        out.push_back(scaling_exponent(energies[e], w_grid, cfg, master_seed, workers, opt, e));
    return out;
}

} // namespace synlat
