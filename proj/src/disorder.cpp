#include "synlat/disorder.hpp"

#include "synlat/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace synlat {

namespace {

constexpr double kHbar = 1.054571817e-34;
constexpr double kBoltzmann = 1.380649e-23;
constexpr int kMaxRealizationRetries = 1000;

double interaction_power(double d2, int alpha) {
    // d^-alpha from the squared distance
    return alpha == 3 ? 1.0 / (d2 * std::sqrt(d2)) : 1.0 / (d2 * d2 * d2);
}

Eigen::Vector3d gaussian3(Rng& rng, std::normal_distribution<double>& g) {
    const double x = g(rng);
    const double y = g(rng);
    const double z = g(rng);
    return {x, y, z};
}

} // namespace

std::string_view to_string(DisorderMode mode) {
    switch (mode) {
    case DisorderMode::positional: return "positional";
    case DisorderMode::flat_pair_only: return "flat_pair_only";
    case DisorderMode::flat_all_sites: return "flat_all_sites";
    }
    return "positional";
}

DisorderMode disorder_mode_from_string(std::string_view name) {
    for (auto m : {DisorderMode::positional, DisorderMode::flat_pair_only, DisorderMode::flat_all_sites})
        if (to_string(m) == name) return m;
    throw InvalidArgument(fmt::format("unknown disorder mode '{}'", name));
}

void DisorderParams::validate() const {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("disorder strength s must be >= 0");
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("flat disorder width W must be >= 0");
    if (alpha != 3 && alpha != 6) throw InvalidArgument("interaction exponent must be 3 or 6");
    if (!(v0_over_omega > 0.0)) throw InvalidArgument("V0/Omega must be positive");
}

TrapSigma trap_sigma(double temperature, double trap_frequency, double mass) {
    if (!(temperature > 0) || !(trap_frequency > 0) || !(mass > 0))
        throw InvalidArgument("temperature, trap frequency and mass must be positive");
    const double x = kHbar * trap_frequency / (kBoltzmann * temperature);
    // sinh(x) / (cosh(x) - 1) = coth(x / 2)
    const double exact2 = kHbar / (2.0 * mass * trap_frequency) / std::tanh(0.5 * x);
    const double semi2 = kBoltzmann * temperature / (mass * trap_frequency * trap_frequency);
    return {std::sqrt(exact2), std::sqrt(semi2)};
}

Displacements sample_positions(std::size_t n_sites, double s, Rng& rng) {
    if (!(s >= 0)) throw InvalidArgument("disorder strength s must be >= 0");
    Displacements out(n_sites, Eigen::Vector3d::Zero());
    if (s == 0) return out;
    std::normal_distribution<double> g(0.0, s);
    for (auto& v : out) v = gaussian3(rng, g);
    return out;
}

Displacements sample_positions(std::size_t n_sites, double s, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return sample_positions(n_sites, s, rng);
}

double bond_shift(double d, const DisorderParams& params) {
    if (params.linearized) return -params.alpha * params.v0_over_omega * (d - 1.0);
    return params.v0_over_omega * (interaction_power(d * d, params.alpha) - 1.0);
}

std::vector<double> energy_shifts(const Displacements& displacements, const RealLattice& lattice,
                                  const DisorderParams& params) {
    params.validate();
    if (!lattice.length) throw InvalidArgument("energy shifts need a finite lattice");
    const int length = *lattice.length;
    const int nb = static_cast<int>(lattice.basis.size());
    const int cells = cell_count(lattice.dim, length);
    if (static_cast<int>(displacements.size()) != cells * nb)
        throw InvalidArgument(fmt::format("expected {} displacements, got {}", cells * nb, displacements.size()));

    auto atom = [&](int b, CellOffset c) -> std::optional<Eigen::Vector3d> {
        for (int k = 0; k < lattice.dim; ++k)
            if (c[static_cast<std::size_t>(k)] < 0 || c[static_cast<std::size_t>(k)] >= length) return std::nullopt;
        const int cell = lattice.dim == 1 ? c[0] : c[0] + length * c[1];
        const Vec2 r = lattice.position(b, c);
        return Eigen::Vector3d(r.x(), r.y(), 0.0) + displacements[static_cast<std::size_t>(cell * nb + b)];
    };

    std::vector<double> out(lattice.nn_links.size() * static_cast<std::size_t>(cells), 0.0);
    for (std::size_t k = 0; k < lattice.nn_links.size(); ++k) {
        const Bond& bond = lattice.nn_links[k];
        for (int c = 0; c < cells; ++c) {
            const CellOffset home = lattice.dim == 1 ? CellOffset{c, 0} : CellOffset{c % length, c / length};
            const CellOffset far{home[0] + bond.offset[0], home[1] + bond.offset[1]};
            const auto p = atom(bond.from, home);
            const auto q = atom(bond.to, far);
            if (!p || !q) continue;
            const double d = (*q - *p).norm();
            if (d < kMinBondLength) throw NumericalFailure("coincident atoms in displacement set");
            out[k * static_cast<std::size_t>(cells) + static_cast<std::size_t>(c)] = bond_shift(d, params);
        }
    }
    return out;
}

std::vector<double> sample_flat_disorder(const DisorderParams& params, std::size_t n_sites, Rng& rng) {
    params.validate();
    if (params.mode == DisorderMode::positional) throw InvalidArgument("flat disorder needs a flat mode");
    std::vector<double> out(n_sites, 0.0);
    if (params.w == 0) return out;
    std::uniform_real_distribution<double> u(-0.5 * params.w, 0.5 * params.w);
    for (auto& x : out) x = u(rng);
    return out;
}

std::vector<Eigen::Vector3d> ladder_atom_positions(int length) {
    std::vector<Eigen::Vector3d> out(2 * static_cast<std::size_t>(length));
    for (int n = 0; n < length; ++n) {
        out[static_cast<std::size_t>(n)] = {static_cast<double>(n), 0.0, 0.0};
        out[static_cast<std::size_t>(length + n)] = {static_cast<double>(n), 1.0, 0.0};
    }
    return out;
}

LadderShifts ladder_shifts_from_displacements(int length, const Displacements& displacements,
                                              const DisorderParams& params) {
    if (static_cast<int>(displacements.size()) != 2 * length)
        throw InvalidArgument("ladder needs 2L displacements");
    const auto ideal = ladder_atom_positions(length);
    auto pos = [&](int i) { return ideal[static_cast<std::size_t>(i)] + displacements[static_cast<std::size_t>(i)]; };
    auto shift = [&](int i, int j) {
        const double d = (pos(j) - pos(i)).norm();
        if (d < kMinBondLength) throw NumericalFailure("coincident atoms in displacement set");
        return bond_shift(d, params);
    };
    LadderShifts out = LadderShifts::zeros(length);
    for (int n = 0; n < length; ++n) {
        const auto k = static_cast<std::size_t>(n);
        if (n + 1 < length) {
            out.a[k] = shift(n, n + 1);
            out.b[k] = shift(length + n, length + n + 1);
        }
        out.e[k] = shift(n, length + n);
    }
    return out;
}

LadderRealization sample_ladder_realization(int length, const DisorderParams& params, std::uint64_t seed) {
    params.validate();
    if (length < 2) throw InvalidArgument("ladder length must be >= 2");
    LadderRealization r;
    r.seed = seed;
    Rng rng = make_rng(seed);
    const auto n = static_cast<std::size_t>(length);
    if (params.mode == DisorderMode::positional) {
        for (;;) {
            r.displacements = sample_positions(2 * n, params.s, rng);
            try {
                r.shifts = ladder_shifts_from_displacements(length, r.displacements, params);
                break;
            } catch (const NumericalFailure&) {
                if (++r.resamples > kMaxRealizationRetries) throw;
            }
        }
        return r;
    }
    r.shifts = LadderShifts::zeros(length);
    r.shifts.a = sample_flat_disorder(params, n, rng);
    r.shifts.b = sample_flat_disorder(params, n, rng);
    r.shifts.e = sample_flat_disorder(params, n, rng);
    if (params.mode == DisorderMode::flat_all_sites) {
        r.shifts.c = sample_flat_disorder(params, n, rng);
        r.shifts.d = sample_flat_disorder(params, n, rng);
    }
    // no atoms beyond the last rung
    r.shifts.a[n - 1] = 0.0;
    r.shifts.b[n - 1] = 0.0;
    return r;
}

double pdf_distance(double d, double s) {
    if (!(s > 0)) throw InvalidArgument("s must be positive");
    if (d <= 0) return 0.0;
    const double four_s2 = 4.0 * s * s;
    // d/(2 sqrt(pi) s) [exp(-(d-1)^2/4s^2) - exp(-(d+1)^2/4s^2)]
    return d / (2.0 * std::sqrt(std::numbers::pi) * s) * std::exp(-(d - 1.0) * (d - 1.0) / four_s2) *
           -std::expm1(-d / (s * s));
}

double cdf_distance(double d, double s) {
    if (!(s > 0)) throw InvalidArgument("s must be positive");
    if (d <= 0) return 0.0;
    const double two_s = 2.0 * s;
    const double four_s2 = two_s * two_s;
    const double gauss = s / std::sqrt(std::numbers::pi) *
                         (std::exp(-(d + 1.0) * (d + 1.0) / four_s2) - std::exp(-(d - 1.0) * (d - 1.0) / four_s2));
    double erfs;
    if (d < 1.0)
        erfs = 0.5 * (std::erfc((1.0 - d) / two_s) - std::erfc((d + 1.0) / two_s));
    else
        erfs = 1.0 - 0.5 * (std::erfc((d - 1.0) / two_s) + std::erfc((d + 1.0) / two_s));
    return gauss + erfs;
}

double pdf_energy_shift(double dv, double s, int alpha) {
    if (!(dv > -1.0)) throw InvalidArgument("energy shift density is defined for dv > -1");
    const double x = 1.0 + dv;
    const double d = std::pow(x, -1.0 / alpha);
    return pdf_distance(d, s) * d / (alpha * x);
}

double cdf_energy_shift(double dv, double s, int alpha) {
    if (dv <= -1.0) return 0.0;
    // dv <= x  <=>  d >= (1 + x)^(-1/alpha)
    const double d = std::pow(1.0 + dv, -1.0 / alpha);
    return 1.0 - cdf_distance(d, s);
}

double pdf_energy_shift_tail(double dv, double s, int alpha) {
    return std::exp(-0.25 / (s * s)) * std::pow(dv, -1.0 - 3.0 / alpha) /
           (2.0 * alpha * std::sqrt(std::numbers::pi) * s * s * s);
}

TailProbability tail_probability(double s, int alpha) {
    if (!(s > 0)) throw InvalidArgument("s must be positive");
    if (alpha != 3 && alpha != 6) throw InvalidArgument("interaction exponent must be 3 or 6");
    TailProbability t;
    t.threshold = std::pow(2.0 * s * s, -static_cast<double>(alpha));
    t.closed_form = 4.0 * s * s * s / (3.0 * std::sqrt(std::numbers::pi)) * std::exp(-0.25 / (s * s));
    t.valid = t.threshold > 10.0;
    boost::math::quadrature::exp_sinh<double> integrator;
    const double th = t.threshold;
    t.quadrature = integrator.integrate([&](double u) { return pdf_energy_shift(th + u, s, alpha); });
    return t;
}

std::pair<double, double> variance_with_error(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    if (x.size() < 4) throw InvalidArgument("need at least 4 samples");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double c = (v - mean) * (v - mean);
        m2 += c;
        m4 += c * c;
    }
    m2 /= n;
    m4 /= n;
    const double var = m2 * n / (n - 1.0);
    return {var, std::sqrt(std::max(0.0, m4 - m2 * m2) / n)};
}

DistanceCovariance distance_covariance(int n_atoms, double s, std::size_t samples, Rng& rng) {
    if (n_atoms < 3) throw InvalidArgument("need at least 3 atoms");
    if (!(s > 0)) throw InvalidArgument("s must be positive");
    if (samples < 4) throw InvalidArgument("need at least 4 samples");
    const int nd = n_atoms - 1;
    Eigen::MatrixXd dev(static_cast<Eigen::Index>(samples), nd);
    std::normal_distribution<double> g(0.0, s);
    for (std::size_t t = 0; t < samples; ++t) {
        Eigen::Vector3d prev = gaussian3(rng, g);
        for (int k = 0; k < nd; ++k) {
            const Eigen::Vector3d next = Eigen::Vector3d(1.0, 0.0, 0.0) + gaussian3(rng, g);
            // distance between atom k (at x=k) and atom k+1, relative frame
            dev(static_cast<Eigen::Index>(t), k) = (next - prev).norm() - 1.0;
            prev = next - Eigen::Vector3d(1.0, 0.0, 0.0);
        }
    }
    const Eigen::RowVectorXd mean = dev.colwise().mean();
    dev.rowwise() -= mean;
    const double n = static_cast<double>(samples);
    DistanceCovariance out;
    out.cov = dev.transpose() * dev / (n - 1.0);
    out.stderr_.resize(nd, nd);
    for (int k = 0; k < nd; ++k)
        for (int q = 0; q < nd; ++q) {
            const Eigen::ArrayXd prod = dev.col(k).array() * dev.col(q).array();
            const double mu = prod.mean();
            out.stderr_(k, q) = std::sqrt((prod - mu).square().sum() / (n - 1.0) / n);
        }
    return out;
}

MeanDistanceVariance mean_distance_variance(int length, double s, std::size_t samples, Rng& rng) {
    if (length < 2) throw InvalidArgument("chain length must be >= 2");
    if (!(s > 0)) throw InvalidArgument("s must be positive");
    MeanDistanceVariance out;
    out.theory = 2.0 * s * s / (static_cast<double>(length) * length);
    out.independent_theory = 2.0 * s * s / length;
    std::normal_distribution<double> g(0.0, s);
    const Eigen::Vector3d ex(1.0, 0.0, 0.0);
    std::vector<double> chained(samples), independent(samples);
    for (std::size_t t = 0; t < samples; ++t) {
        double sum = 0.0;
        Eigen::Vector3d prev = gaussian3(rng, g);
        for (int k = 0; k < length; ++k) {
            const Eigen::Vector3d next = gaussian3(rng, g);
            sum += (ex + next - prev).norm();
            prev = next;
        }
        chained[t] = sum / length;
        double isum = 0.0;
        for (int k = 0; k < length; ++k) isum += (ex + gaussian3(rng, g) - gaussian3(rng, g)).norm();
        independent[t] = isum / length;
    }
    std::tie(out.monte_carlo, out.mc_stderr) = variance_with_error(chained);
    std::tie(out.independent_mc, out.independent_stderr) = variance_with_error(independent);
    return out;
}

} // namespace synlat
