// Subcommand bodies: resolved config in, tables and run records out.

#include "sweep_internal.hpp"
#include "synlat/bloch.hpp"
#include "synlat/disorder.hpp"
#include "synlat/dynamics.hpp"
#include "synlat/errors.hpp"
#include "synlat/parallel.hpp"
#include "synlat/rng.hpp"
#include "synlat/stats.hpp"
#include "synlat/transfer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace synlat::sweep::detail {

namespace {

RealLattice lattice_from(const json& spec) {
    RealLattice real;
    if (spec.is_string()) {
        const auto kind = lattice_kind_from_string(spec.get<std::string>());
        if (kind == LatticeKind::custom) throw InvalidArgument("a custom lattice must be given as an object");
        real = build_real_lattice(kind);
    } else {
        try {
            real = spec.get<RealLattice>();
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument(fmt::format("malformed lattice object: {}", e.what()));
        }
    }
    real.validate();
    return real;
}

int default_rung(const json& cfg, int length) {
    const auto r = get_optional(cfg, "rung");
    if (!r) return length / 2;
    if (std::floor(*r) != *r) throw InvalidArgument("rung must be an integer");
    return static_cast<int>(*r);
}

int positive_int(const json& cfg, const std::string& key, int min = 1) {
    const int v = get_int(cfg, key);
    if (v < min) throw InvalidArgument(fmt::format("{} must be >= {}", key, min));
    return v;
}

std::vector<DisorderMode> modes_from(const std::string& list) {
    std::vector<DisorderMode> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(',', start);
        if (end == std::string::npos) end = list.size();
        std::string tok = list.substr(start, end - start);
        tok.erase(0, tok.find_first_not_of(' '));
        tok.erase(tok.find_last_not_of(' ') + 1);
        if (!tok.empty()) out.push_back(disorder_mode_from_string(tok));
        start = end + 1;
    }
    if (out.empty()) throw InvalidArgument("no disorder mode given");
    return out;
}

const char* strength_unit(DisorderMode m) { return m == DisorderMode::positional ? "R0" : "Omega"; }

RunResult scaling_core(const json& cfg, const std::vector<double>& energies, const std::vector<DisorderMode>& modes,
                       bool require_fit) {
    TransferConfig base;
    base.n_steps = get_int64(cfg, "steps");
    base.qr_period = get_int(cfg, "qr_period");
    base.params.alpha = get_int(cfg, "alpha");
    base.params.v0_over_omega = get_number(cfg, "v0_over_omega");
    base.params.linearized = get_bool(cfg, "linearized");
    FitOptions opt;
    opt.relative_cut = get_number(cfg, "relative_cut");
    opt.absolute_floor = get_number(cfg, "absolute_floor");
    opt.min_points = get_int(cfg, "min_points");
    opt.window = get_window(cfg);
    const auto seed = get_seed(cfg);
    const auto workers = get_workers(cfg);

    RunResult r;
    Table xi{"xi",
             {"epsilon_Omega", "mode", "strength", "strength_unit", "xi1_cells", "xi2_cells", "stderr1_cells",
              "stderr2_cells", "gamma1_per_cell", "gamma2_per_cell", "gamma3_per_cell", "gamma4_per_cell", "seed",
              "n_steps", "resamples"}};
    Table nu{"nu_fit",
             {"epsilon_Omega", "mode", "nu1", "nu1_err", "nu2", "nu2_err", "window1_first", "window1_last",
              "window2_first", "window2_last", "residual1_rms", "residual2_rms"}};
    json fits = json::array();
    for (const auto mode : modes) {
        const std::string grid_key = mode == DisorderMode::positional       ? "s_grid"
                                     : mode == DisorderMode::flat_pair_only ? "w_grid_pair_only"
                                                                            : "w_grid_all_sites";
        const auto grid = get_grid(cfg, grid_key);
        base.params.mode = mode;
        bool fittable = true;
        try {
            validate_scaling_grid(grid, mode, opt.min_points);
        } catch (const InvalidArgument&) {
            if (require_fit) throw;
            fittable = false;
        }
        for (std::size_t e = 0; e < energies.size(); ++e) {
            auto runs = lyapunov_sweep(energies[e], grid, base, seed, workers, e);
            for (std::size_t i = 0; i < runs.size(); ++i) {
                const auto& lr = runs[i];
                xi.add_row({energies[e], std::string(to_string(mode)), grid[i], strength_unit(mode), lr.xi1, lr.xi2,
                            lr.xi1_err, lr.xi2_err, lr.exponents[0], lr.exponents[1], lr.exponents[2],
                            lr.exponents[3], lr.seed, lr.n_steps, lr.resamples});
                r.runs.push_back({fmt::format("{}/eps={}/{}", to_string(mode), format_number(energies[e]), i),
                                  lr.seed, "ok", lr.resamples});
            }
            if (!fittable) continue;
            const auto f = fit_scaling(energies[e], mode, grid, std::move(runs), opt);
            nu.add_row({energies[e], std::string(to_string(mode)), f.fit1.nu, f.fit1.nu_err, f.fit2.nu, f.fit2.nu_err,
                        f.fit1.first, f.fit1.last, f.fit2.first, f.fit2.last, f.fit1.residual_rms,
                        f.fit2.residual_rms});
            fits.push_back({{"energy", energies[e]},
                            {"mode", to_string(mode)},
                            {"nu1", f.fit1.nu},
                            {"nu2", f.fit2.nu},
                            {"nu1_err", f.fit1.nu_err},
                            {"nu2_err", f.fit2.nu_err}});
        }
    }
    r.tables.push_back(std::move(xi));
    if (!nu.rows.empty()) r.tables.push_back(std::move(nu));
    r.summary["fits"] = std::move(fits);
    return r;
}

} // namespace

// ---- bands -----------------------------------------------------------------

RunResult run_bands(const json& cfg) {
    const RealLattice real = lattice_from(cfg.at("lattice"));
    const SyntheticLattice syn = synthesize(real);
    const int n = positive_int(cfg, "kpoints");
    const std::string grid = get_string(cfg, "grid");
    const double tol = get_number(cfg, "flat_tol");
    if (!(tol > 0)) throw InvalidArgument("flat_tol must be positive");

    RunResult r;
    std::vector<Vec2> ks;
    auto random_grid = [&] {
        const auto seed = derive_seed(get_seed(cfg), "bands", 0);
        ks = random_kpoints(syn, n, seed);
        r.runs.push_back({"kpoints", seed, "ok", 0});
    };
    if (grid == "random") {
        random_grid();
    } else if (grid == "zone" || grid == "auto") {
        if (syn.dim == 1) {
            ks = zone_grid(syn, n);
        } else {
            const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
            if (side * side == n)
                ks = zone_grid(syn, side);
            else if (grid == "zone")
                throw InvalidArgument(fmt::format("a 2D zone grid needs a square k-point count, got {}", n));
            else
                random_grid();
        }
    } else {
        throw InvalidArgument(fmt::format("unknown k grid '{}' (zone, random or auto)", grid));
    }

    const BandStructure bs = band_structure(syn, ks, tol, get_workers(cfg));
    Table bands{"bands", {"kx_per_a", "ky_per_a"}};
    for (int b = 0; b < bs.band_count(); ++b) bands.columns.push_back(fmt::format("band{}_Omega", b));
    for (std::size_t i = 0; i < ks.size(); ++i) {
        std::vector<json> row{ks[i].x(), ks[i].y()};
        for (int b = 0; b < bs.band_count(); ++b) row.emplace_back(bs.bands(static_cast<Eigen::Index>(i), b));
        bands.add_row(std::move(row));
    }
    Table summary{"band_summary", {"band", "min_Omega", "max_Omega", "width_Omega", "flat"}};
    for (int b = 0; b < bs.band_count(); ++b) {
        const double lo = bs.bands.col(b).minCoeff(), hi = bs.bands.col(b).maxCoeff();
        summary.add_row({b, lo, hi, hi - lo, static_cast<bool>(bs.flat_flags[static_cast<std::size_t>(b)])});
    }
    r.tables.push_back(std::move(bands));
    r.tables.push_back(std::move(summary));
    r.summary = {{"lattice", to_string(real.kind)},
                 {"n1", syn.n1()},
                 {"n2", syn.n2()},
                 {"flat_bands", count_flat_bands(bs, tol)},
                 {"flat_lower_bound", std::abs(syn.n1() - syn.n2())},
                 {"parity_defect", parity_defect(bs)},
                 {"kpoints", ks.size()}};
    return r;
}

// ---- disorder --------------------------------------------------------------

RunResult run_disorder(const json& cfg) {
    const double s = get_number(cfg, "s");
    const int alpha = get_int(cfg, "alpha");
    if (!(s > 0)) throw InvalidArgument("s must be > 0");
    if (alpha != 3 && alpha != 6) throw InvalidArgument("alpha must be 3 or 6");
    const auto samples = static_cast<std::size_t>(positive_int(cfg, "samples", 2));
    const int bins = positive_int(cfg, "bins");
    const double chain_s = get_number(cfg, "chain_s");
    if (!(chain_s > 0)) throw InvalidArgument("chain_s must be > 0");
    const auto master = get_seed(cfg);
    RunResult r;

    // energy-shift samples from two displaced neighbours
    const auto seed0 = derive_seed(master, "disorder", 0);
    Rng rng = make_rng(seed0);
    std::vector<double> dv(samples);
    std::int64_t resamples = 0;
    const Eigen::Vector3d bond(1.0, 0.0, 0.0);
    for (auto& x : dv) {
        double d = 0.0;
        do {
            const auto p = sample_positions(2, s, rng);
            d = (bond + p[1] - p[0]).norm();
            if (d < kMinBondLength) ++resamples;
        } while (d < kMinBondLength);
        x = std::pow(d, -alpha) - 1.0;
    }
    r.runs.push_back({"energy_shift_samples", seed0, "ok", resamples});
    std::sort(dv.begin(), dv.end());
    std::vector<double> model(samples);
    for (std::size_t i = 0; i < samples; ++i) model[i] = cdf_energy_shift(dv[i], s, alpha);
    const double ks = ks_statistic(model);
    const double ks_crit = ks_critical_value(samples, 0.01);

    const double lo = dv[samples / 1000], hi = dv[samples - 1 - samples / 1000];
    Table hist{"dv_histogram", {"dv_lo", "dv_hi", "density_sampled", "density_model"}};
    const double width = (hi - lo) / bins;
    for (int b = 0; b < bins; ++b) {
        const double a = lo + b * width, c = b + 1 == bins ? hi : a + width;
        const auto first = std::lower_bound(dv.begin(), dv.end(), a);
        const auto last = b + 1 == bins ? std::upper_bound(dv.begin(), dv.end(), c) : std::lower_bound(dv.begin(), dv.end(), c);
        const double count = static_cast<double>(last - first);
        hist.add_row({a, c, count / (static_cast<double>(samples) * (c - a)),
                      (cdf_energy_shift(c, s, alpha) - cdf_energy_shift(a, s, alpha)) / (c - a)});
    }

    // chain covariance of distance deviations
    const auto seed1 = derive_seed(master, "disorder", 1);
    Rng rng1 = make_rng(seed1);
    const int atoms = positive_int(cfg, "covariance_atoms", 3);
    const auto cov = distance_covariance(atoms, chain_s, static_cast<std::size_t>(positive_int(cfg, "covariance_samples", 2)), rng1);
    r.runs.push_back({"distance_covariance", seed1, "ok", 0});
    Table covt{"distance_covariance", {"i", "j", "cov_R0sq", "stderr_R0sq", "model_R0sq", "z"}};
    double max_z = 0.0;
    const double var = chain_s * chain_s;
    for (Eigen::Index i = 0; i < cov.cov.rows(); ++i)
        for (Eigen::Index j = 0; j < cov.cov.cols(); ++j) {
            const double model_c = var * (i == j ? 2.0 : (std::abs(i - j) == 1 ? -1.0 : 0.0));
            const double z = (cov.cov(i, j) - model_c) / cov.stderr_(i, j);
            max_z = std::max(max_z, std::abs(z));
            covt.add_row({i, j, cov.cov(i, j), cov.stderr_(i, j), model_c, z});
        }

    const auto seed2 = derive_seed(master, "disorder", 2);
    Rng rng2 = make_rng(seed2);
    const auto mdv = mean_distance_variance(positive_int(cfg, "mean_length"), chain_s,
                                            static_cast<std::size_t>(positive_int(cfg, "mean_samples", 2)), rng2);
    r.runs.push_back({"mean_distance_variance", seed2, "ok", 0});

    const auto tail = tail_probability(get_number(cfg, "tail_s"), alpha);

    Table stats{"disorder_stats", {"quantity", "value", "reference", "stderr", "unit"}};
    stats.add_row({"ks_statistic_dv", ks, ks_crit, nullptr, "1 (reference: 1% critical value)"});
    stats.add_row({"var_mean_distance", mdv.monte_carlo, mdv.theory, mdv.mc_stderr, "R0^2"});
    stats.add_row({"var_mean_distance_iid_control", mdv.independent_mc, mdv.independent_theory, mdv.independent_stderr,
                   "R0^2"});
    stats.add_row({"tail_threshold_dv", tail.threshold, nullptr, nullptr, "1"});
    stats.add_row({"tail_probability_closed_form", tail.closed_form, nullptr, nullptr, "1"});
    stats.add_row({"tail_probability_quadrature", tail.quadrature, tail.closed_form, nullptr, "1"});

    const auto temp = get_optional(cfg, "temperature_K");
    const auto freq = get_optional(cfg, "trap_frequency_rad_s");
    const auto mass = get_optional(cfg, "mass_kg");
    const int given = (temp ? 1 : 0) + (freq ? 1 : 0) + (mass ? 1 : 0);
    if (given != 0 && given != 3) throw InvalidArgument("trap width needs temperature_K, trap_frequency_rad_s and mass_kg");
    if (given == 3) {
        const auto sig = trap_sigma(*temp, *freq, *mass);
        stats.add_row({"trap_sigma_exact", sig.exact, nullptr, nullptr, "m"});
        stats.add_row({"trap_sigma_semiclassical", sig.semiclassical, nullptr, nullptr, "m"});
    }

    r.checks.push_back({"ks_energy_shift", ks < ks_crit,
                        fmt::format("D = {:.3g} vs 1% critical {:.3g} (n = {})", ks, ks_crit, samples)});
    r.checks.push_back({"distance_covariance", max_z <= 3.0, fmt::format("max |z| = {:.2f} (<= 3)", max_z)});
    const double zv = std::abs(mdv.monte_carlo - mdv.theory) / mdv.mc_stderr;
    r.checks.push_back({"var_mean_distance", zv <= 3.0,
                        fmt::format("{:.4g} vs 2 s^2/L^2 = {:.4g}, |z| = {:.2f}", mdv.monte_carlo, mdv.theory, zv)});
    const double rel = std::abs(tail.quadrature - tail.closed_form) / tail.closed_form;
    r.checks.push_back({"tail_probability_consistency", rel < 0.1,
                        fmt::format("quadrature {:.4g} vs closed form {:.4g}", tail.quadrature, tail.closed_form)});

    r.tables.push_back(std::move(hist));
    r.tables.push_back(std::move(covt));
    r.tables.push_back(std::move(stats));
    r.summary = {{"ks_statistic", ks},
                 {"ks_critical_1pct", ks_crit},
                 {"covariance_max_z", max_z},
                 {"var_mean_distance", mdv.monte_carlo},
                 {"var_mean_distance_model", mdv.theory},
                 {"var_mean_distance_stderr", mdv.mc_stderr},
                 {"tail_closed_form", tail.closed_form},
                 {"tail_quadrature", tail.quadrature},
                 {"tail_valid", tail.valid}};
    return r;
}

// ---- localization / scaling --------------------------------------------------

RunResult run_localization(const json& cfg) {
    return scaling_core(cfg, get_grid(cfg, "energy"), {disorder_mode_from_string(get_string(cfg, "mode"))}, false);
}

RunResult run_scaling(const json& cfg) {
    return scaling_core(cfg, get_grid(cfg, "energies"), modes_from(get_string(cfg, "modes")), true);
}

// ---- dynamics --------------------------------------------------------------

RunResult run_dynamics(const json& cfg) {
    DxScanConfig dc;
    dc.length = get_int(cfg, "L");
    dc.rung = default_rung(cfg, dc.length);
    dc.s_grid = get_grid(cfg, "s_grid");
    dc.v0_grid = get_grid(cfg, "v0_over_omega");
    dc.times = get_grid(cfg, "omega_t");
    dc.realizations = positive_int(cfg, "realizations");
    dc.alpha = get_int(cfg, "alpha");
    dc.master_seed = get_seed(cfg);
    dc.workers = get_workers(cfg);
    for (double s : dc.s_grid)
        if (!(s >= 0)) throw InvalidArgument("s values must be >= 0");
    for (double v : dc.v0_grid)
        if (!(v > 0)) throw InvalidArgument("V0/Omega values must be > 0");
    for (double t : dc.times)
        if (!(t >= 0)) throw InvalidArgument("times must be >= 0");
    const bool combined = get_bool(cfg, "combined_legs");

    const auto cells = dx_scan(dc);
    RunResult r;
    Table summary{"dx_summary",
                  {"s_R0", "v0_over_omega", "omega_t", "omega_t_over_2pi", "dx_upper_rungs", "dx_lower_rungs",
                   "stderr_upper_rungs", "stderr_lower_rungs", "diff_upper_minus_lower_rungs", "diff_stderr_rungs",
                   "realizations"}};
    if (combined) {
        summary.columns.push_back("dx_combined_rungs");
        summary.columns.push_back("stderr_combined_rungs");
    }
    for (const auto& c : cells) {
        std::vector<json> row{c.s,         c.v0,         c.t,         c.t / (2.0 * std::numbers::pi),
                              c.dx_upper,  c.dx_lower,   c.err_upper, c.err_lower,
                              c.diff_mean, c.diff_err,   c.realizations};
        if (combined) {
            row.emplace_back(c.dx_combined);
            row.emplace_back(c.err_combined);
        }
        summary.add_row(std::move(row));
    }
    for (int k = 0; k < dc.realizations; ++k)
        r.runs.push_back({fmt::format("realization/{}", k), derive_seed(dc.master_seed, "dynamics", static_cast<std::uint64_t>(k)), "ok", 0});

    // disorder-averaged profiles at one cell, same realization seeds as the scan
    DisorderParams p;
    p.s = get_optional(cfg, "profile_s").value_or(dc.s_grid.front());
    p.v0_over_omega = get_optional(cfg, "profile_v0").value_or(dc.v0_grid.front());
    p.alpha = dc.alpha;
    p.validate();
    const std::size_t nt = dc.times.size(), L = static_cast<std::size_t>(dc.length);
    const LadderState psi0 = psi_loc(dc.length, dc.rung);
    std::vector<std::vector<double>> per(static_cast<std::size_t>(dc.realizations), std::vector<double>(nt * 2 * L));
    parallel_for(per.size(), dc.workers, [&](std::size_t k) {
        const auto real = sample_ladder_realization(dc.length, p, derive_seed(dc.master_seed, "dynamics", k));
        const SpectralPropagator prop(ladder_hamiltonian(dc.length, real.shifts));
        LadderState st = psi0;
        for (std::size_t t = 0; t < nt; ++t) {
            st.amplitudes = prop.apply(psi0.amplitudes, dc.times[t]);
            const auto o = observables(st);
            for (std::size_t i = 0; i < L; ++i) {
                per[k][(t * 2) * L + i] = o.upper.defined ? o.upper.p[i] : 0.0;
                per[k][(t * 2 + 1) * L + i] = o.lower.defined ? o.lower.p[i] : 0.0;
            }
        }
    });
    Table prof{"profiles", {"omega_t", "rung", "p_upper", "p_lower"}};
    const double inv = 1.0 / static_cast<double>(per.size());
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t i = 0; i < L; ++i) {
            double u = 0.0, l = 0.0;
            for (const auto& v : per) {
                u += v[(t * 2) * L + i];
                l += v[(t * 2 + 1) * L + i];
            }
            prof.add_row({dc.times[t], static_cast<int>(i) + 1, u * inv, l * inv});
        }
    r.tables.push_back(std::move(summary));
    r.tables.push_back(std::move(prof));
    std::vector<double> turns;
    for (double t : dc.times) turns.push_back(t / (2.0 * std::numbers::pi));
    r.summary = {{"L", dc.length},
                 {"rung", dc.rung},
                 {"realizations", dc.realizations},
                 {"omega_t_over_2pi", turns},
                 {"profile_s", p.s},
                 {"profile_v0", p.v0_over_omega}};
    return r;
}

// ---- prepare ---------------------------------------------------------------

RunResult run_prepare(const json& cfg) {
    const std::string mode_name = get_string(cfg, "mode");
    PulseMode mode;
    if (mode_name == "ideal_gate") mode = PulseMode::ideal_gate;
    else if (mode_name == "full_hamiltonian") mode = PulseMode::full_hamiltonian;
    else throw InvalidArgument(fmt::format("unknown pulse mode '{}'", mode_name));
    const double omega_r = get_number(cfg, "omega_r");
    if (!(omega_r > 0)) throw InvalidArgument("omega_r must be positive");
    const double v0 = get_number(cfg, "v0_over_omega");
    if (!(v0 > 0)) throw InvalidArgument("v0_over_omega must be positive");
    const int L = get_int(cfg, "L");
    const int rung = default_rung(cfg, L);

    const auto seq = preparation_sequence(mode, omega_r);
    const auto states = prepare_psi_loc(seq, Plaquette::ideal(v0, get_int(cfg, "alpha")));
    const auto targets = preparation_targets();

    RunResult r;
    Table steps{"preparation_steps",
                {"step", "pulse", "regime", "site", "theta_over_pi", "fidelity_to_target", "max_amplitude_error",
                 "norm"}};
    double min_fid = 1.0, max_err = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& p = seq[i];
        const double fid = fidelity(targets[i], states[i]);
        // align the global phase, then compare amplitude by amplitude
        const std::complex<double> ov = targets[i].dot(states[i]);
        const std::complex<double> phase = std::abs(ov) > 0 ? ov / std::abs(ov) : 1.0;
        const double err = (states[i] - phase * targets[i]).cwiseAbs().maxCoeff();
        min_fid = std::min(min_fid, fid);
        max_err = std::max(max_err, err);
        const bool blockade = p.regime == Regime::blockade;
        steps.add_row({static_cast<int>(i) + 1, fmt::format("{}{}", blockade ? 'B' : 'F', p.site),
                       blockade ? "blockade" : "facilitation", p.site, p.theta / std::numbers::pi, fid, err,
                       states[i].norm()});
    }
    Table fin{"final_state", {"configuration_u_i_u_i1_l_i_l_i1", "amplitude_re", "amplitude_im", "probability"}};
    const auto& last = states.back();
    for (int c = 0; c < 16; ++c) {
        std::string bits;
        for (int m = 0; m < 4; ++m) bits += (c >> m & 1) ? '1' : '0';
        fin.add_row({bits, last(c).real(), last(c).imag(), std::norm(last(c))});
    }
    const auto proj = project_to_synthetic(embed_plaquette(last, L, rung));
    const double fid_loc = fidelity(psi_loc(L, rung).amplitudes, proj.synthetic);
    r.tables.push_back(std::move(steps));
    r.tables.push_back(std::move(fin));
    r.summary = {{"mode", mode_name},
                 {"min_step_fidelity", min_fid},
                 {"max_amplitude_error", max_err},
                 {"final_fidelity", fidelity(targets.back(), last)},
                 {"psi_loc_fidelity_embedded", fid_loc},
                 {"leakage_embedded", proj.leakage}};
    return r;
}

// ---- compare ---------------------------------------------------------------

RunResult run_compare(const json& cfg) {
    CompareConfig cc;
    cc.length = get_int(cfg, "L");
    cc.rung = default_rung(cfg, cc.length);
    cc.s_grid = get_grid(cfg, "s_grid");
    cc.v0_grid = get_grid(cfg, "v0_over_omega");
    cc.omega_t_over_2pi = get_number(cfg, "omega_t_over_2pi");
    cc.realizations = positive_int(cfg, "realizations");
    cc.alpha = get_int(cfg, "alpha");
    const std::string dist = get_string(cfg, "distances");
    if (dist == "geometric") cc.distances = DistanceModel::geometric;
    else if (dist == "chain_indexed") cc.distances = DistanceModel::chain_indexed;
    else throw InvalidArgument(fmt::format("unknown distance model '{}'", dist));
    cc.master_seed = get_seed(cfg);
    cc.workers = get_workers(cfg);
    for (double s : cc.s_grid)
        if (!(s >= 0)) throw InvalidArgument("s values must be >= 0");
    for (double v : cc.v0_grid)
        if (!(v > 0)) throw InvalidArgument("V0/Omega values must be > 0");
    if (!(cc.omega_t_over_2pi >= 0)) throw InvalidArgument("omega_t_over_2pi must be >= 0");

    const auto cells = compare_full_effective(cc);
    RunResult r;
    Table t{"compare",
            {"s_R0", "v0_over_omega", "omega_t", "dx_full_upper_rungs", "dx_full_lower_rungs", "dx_eff_upper_rungs",
             "dx_eff_lower_rungs", "curve_gap_rungs", "discrepancy_rungs", "discrepancy_stderr_rungs", "leakage",
             "realizations"}};
    for (const auto& c : cells)
        t.add_row({c.s, c.v0, c.t, c.dx_full_upper, c.dx_full_lower, c.dx_eff_upper, c.dx_eff_lower, c.curve_gap,
                   c.discrepancy, c.discrepancy_err, c.leakage, c.realizations});
    Table per_v0{"compare_summary", {"v0_over_omega", "mean_curve_gap_rungs", "mean_discrepancy_rungs", "mean_leakage"}};
    json by_v0 = json::array();
    for (double v : cc.v0_grid) {
        double gap = 0.0, disc = 0.0, leak = 0.0;
        int n = 0;
        for (const auto& c : cells)
            if (c.v0 == v) {
                gap += c.curve_gap;
                disc += c.discrepancy;
                leak += c.leakage;
                ++n;
            }
        per_v0.add_row({v, gap / n, disc / n, leak / n});
        by_v0.push_back({{"v0", v}, {"curve_gap", gap / n}, {"discrepancy", disc / n}, {"leakage", leak / n}});
    }
    for (int k = 0; k < cc.realizations; ++k)
        r.runs.push_back({fmt::format("realization/{}", k), derive_seed(cc.master_seed, "compare", static_cast<std::uint64_t>(k)), "ok", 0});
    r.tables.push_back(std::move(t));
    r.tables.push_back(std::move(per_v0));
    r.summary = {{"L", cc.length},
                 {"rung", cc.rung},
                 {"omega_t_over_2pi", cc.omega_t_over_2pi},
                 {"realizations", cc.realizations},
                 {"by_v0", std::move(by_v0)}};
    return r;
}

} // namespace synlat::sweep::detail
