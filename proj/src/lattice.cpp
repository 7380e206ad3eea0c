#include "synlat/lattice.hpp"

#include "synlat/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace synlat {

namespace {

constexpr double kLinkTolerance = 1e-12;

constexpr std::array<std::pair<LatticeKind, std::string_view>, 6> kKindNames{{
    {LatticeKind::chain, "chain"},
    {LatticeKind::ladder, "ladder"},
    {LatticeKind::square, "square"},
    {LatticeKind::triangular, "triangular"},
    {LatticeKind::honeycomb, "honeycomb"},
    {LatticeKind::custom, "custom"},
}};

bool same_bond(const Bond& x, const Bond& y) {
    if (x.from == y.from && x.to == y.to && x.offset == y.offset) return true;
    return x.from == y.to && x.to == y.from && x.offset[0] == -y.offset[0] && x.offset[1] == -y.offset[1];
}

// Cell index <-> integer coordinates inside an L^dim sample.
int cell_index(const CellOffset& c, int dim, int length) {
    return dim == 1 ? c[0] : c[0] + length * c[1];
}

CellOffset cell_coords(int index, int dim, int length) {
    if (dim == 1) return {index, 0};
    return {index % length, index / length};
}

bool wrap_cell(CellOffset& c, int dim, int length, Boundary boundary) {
    for (int k = 0; k < dim; ++k) {
        if (c[k] >= 0 && c[k] < length) continue;
        if (boundary == Boundary::open) return false;
        c[k] = ((c[k] % length) + length) % length;
    }
    return true;
}

} // namespace

std::string_view to_string(LatticeKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "custom";
}

LatticeKind lattice_kind_from_string(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    throw InvalidArgument(fmt::format("unknown lattice kind '{}'", name));
}

Vec2 RealLattice::position(int basis_index, CellOffset cell) const {
    Vec2 r = basis.at(static_cast<std::size_t>(basis_index));
    for (int k = 0; k < dim; ++k) r += cell[static_cast<std::size_t>(k)] * primitive_vectors[static_cast<std::size_t>(k)];
    return r;
}

double RealLattice::bond_length(const Bond& bond) const {
    return (position(bond.to, bond.offset) - position(bond.from, {0, 0})).norm();
}

std::vector<LatticeSite> RealLattice::sites() const {
    if (!length) throw InvalidArgument("lattice has no finite length");
    const int cells = cell_count(dim, *length);
    std::vector<LatticeSite> out;
    out.reserve(static_cast<std::size_t>(cells) * basis.size());
    for (int c = 0; c < cells; ++c) {
        const CellOffset cell = cell_coords(c, dim, *length);
        for (int b = 0; b < static_cast<int>(basis.size()); ++b) out.push_back({b, cell, position(b, cell)});
    }
    return out;
}

void RealLattice::validate() const {
    if (dim != 1 && dim != 2) throw InvalidArgument("lattice dimension must be 1 or 2");
    if (static_cast<int>(primitive_vectors.size()) != dim)
        throw InvalidArgument("number of primitive vectors must equal the dimension");
    if (basis.empty()) throw InvalidArgument("lattice basis is empty");
    if (dim == 1 && primitive_vectors[0].norm() < kLinkTolerance)
        throw InvalidArgument("primitive vector has zero length");
    if (dim == 2) {
        const double det = primitive_vectors[0].x() * primitive_vectors[1].y() -
                           primitive_vectors[0].y() * primitive_vectors[1].x();
        if (std::abs(det) < kLinkTolerance) throw InvalidArgument("primitive vectors are linearly dependent");
    }
    if (length && *length < 2) throw InvalidArgument("finite lattice length must be >= 2");
    const int nb = static_cast<int>(basis.size());
    for (std::size_t i = 0; i < nn_links.size(); ++i) {
        const Bond& b = nn_links[i];
        if (b.from < 0 || b.from >= nb || b.to < 0 || b.to >= nb)
            throw InvalidArgument("bond references a missing basis site");
        if (dim == 1 && b.offset[1] != 0) throw InvalidArgument("1D bond with a second offset component");
        if (std::abs(bond_length(b) - 1.0) > kLinkTolerance)
            throw InvalidArgument(fmt::format("bond {} has length {} != 1", i, bond_length(b)));
        for (std::size_t j = 0; j < i; ++j)
            if (same_bond(b, nn_links[j])) throw InvalidArgument(fmt::format("bond {} duplicates bond {}", i, j));
    }
}

RealLattice build_real_lattice(LatticeKind kind, std::optional<int> length) {
    RealLattice lat;
    lat.kind = kind;
    lat.length = length;
    const double h = std::numbers::sqrt3 / 2.0;
    switch (kind) {
    case LatticeKind::chain:
        lat.dim = 1;
        lat.primitive_vectors = {Vec2(1, 0)};
        lat.basis = {Vec2(0, 0)};
        lat.nn_links = {{0, 0, {1, 0}}};
        break;
    case LatticeKind::ladder:
        lat.dim = 1;
        lat.primitive_vectors = {Vec2(1, 0)};
        lat.basis = {Vec2(0, 0), Vec2(0, 1)}; // upper leg, lower leg
        lat.nn_links = {{0, 0, {1, 0}}, {1, 1, {1, 0}}, {0, 1, {0, 0}}};
        break;
    case LatticeKind::square:
        lat.dim = 2;
        lat.primitive_vectors = {Vec2(1, 0), Vec2(0, 1)};
        lat.basis = {Vec2(0, 0)};
        lat.nn_links = {{0, 0, {1, 0}}, {0, 0, {0, 1}}};
        break;
    case LatticeKind::triangular:
        lat.dim = 2;
        lat.primitive_vectors = {Vec2(1, 0), Vec2(0.5, h)};
        lat.basis = {Vec2(0, 0)};
        lat.nn_links = {{0, 0, {1, 0}}, {0, 0, {0, 1}}, {0, 0, {1, -1}}};
        break;
    case LatticeKind::honeycomb: {
        // Bravais spacing sqrt(3) R0 so that the hexagon edge is R0.
        const double a = std::numbers::sqrt3;
        lat.dim = 2;
        lat.primitive_vectors = {Vec2(a, 0), Vec2(a * 0.5, a * h)};
        lat.basis = {Vec2(0, 0), (2.0 * lat.primitive_vectors[1] - lat.primitive_vectors[0]) / 3.0};
        lat.nn_links = {{0, 1, {0, 0}}, {0, 1, {1, -1}}, {0, 1, {0, -1}}};
        break;
    }
    case LatticeKind::custom:
        throw InvalidArgument("custom lattices are built with make_custom_lattice");
    }
    lat.validate();
    return lat;
}

RealLattice make_custom_lattice(int dim, std::vector<Vec2> primitive_vectors, std::vector<Vec2> basis,
                                std::vector<Bond> nn_links, std::optional<int> length) {
    RealLattice lat;
    lat.kind = LatticeKind::custom;
    lat.dim = dim;
    lat.primitive_vectors = std::move(primitive_vectors);
    lat.basis = std::move(basis);
    lat.nn_links = std::move(nn_links);
    lat.length = length;
    lat.validate();
    return lat;
}

int SyntheticLattice::index_of(std::string_view label) const {
    for (int i = 0; i < size(); ++i)
        if (sites[static_cast<std::size_t>(i)].label == label) return i;
    throw InvalidArgument(fmt::format("no synthetic site labelled '{}'", label));
}

SyntheticLattice synthesize(const RealLattice& real) {
    real.validate();
    SyntheticLattice syn;
    syn.kind = real.kind;
    syn.dim = real.dim;
    const double scale = real.primitive_vectors[0].norm();
    for (const auto& a : real.primitive_vectors) syn.primitive_vectors.push_back(a / a.norm());

    const int nb = static_cast<int>(real.basis.size());
    const int nbonds = static_cast<int>(real.nn_links.size());

    // Species order: one-excitation sites then pair sites; the ladder uses the
    // {A, B, C, D, E} order (upper pair, lower pair, upper, lower, rung pair).
    std::vector<SyntheticSite> one, pair;
    for (int b = 0; b < nb; ++b)
        one.push_back({SiteType::one_excitation, fmt::format("mu{}", b + 1), real.basis[static_cast<std::size_t>(b)] / scale, b});
    for (int k = 0; k < nbonds; ++k) {
        const Bond& bond = real.nn_links[static_cast<std::size_t>(k)];
        const Vec2 mid = 0.5 * (real.position(bond.from, {0, 0}) + real.position(bond.to, bond.offset));
        pair.push_back({SiteType::pair, fmt::format("nu{}", k + 1), mid / scale, k});
    }
    if (real.kind == LatticeKind::ladder) {
        pair[0].label = "A";
        pair[1].label = "B";
        one[0].label = "C";
        one[1].label = "D";
        pair[2].label = "E";
        syn.sites = {pair[0], pair[1], one[0], one[1], pair[2]};
    } else {
        syn.sites = one;
        syn.sites.insert(syn.sites.end(), pair.begin(), pair.end());
    }

    std::vector<int> site_of_basis(static_cast<std::size_t>(nb)), site_of_bond(static_cast<std::size_t>(nbonds));
    for (int i = 0; i < syn.size(); ++i) {
        const auto& s = syn.sites[static_cast<std::size_t>(i)];
        if (s.type == SiteType::one_excitation) {
            syn.one_exc_sites.push_back(i);
            site_of_basis[static_cast<std::size_t>(s.source)] = i;
        } else {
            syn.pair_sites.push_back(i);
            site_of_bond[static_cast<std::size_t>(s.source)] = i;
        }
    }
    for (int k = 0; k < nbonds; ++k) {
        const Bond& bond = real.nn_links[static_cast<std::size_t>(k)];
        const int p = site_of_bond[static_cast<std::size_t>(k)];
        syn.hop_links.push_back({p, site_of_basis[static_cast<std::size_t>(bond.from)], {0, 0}});
        syn.hop_links.push_back({p, site_of_basis[static_cast<std::size_t>(bond.to)], bond.offset});
    }
    return syn;
}

int cell_count(int dim, int length) { return dim == 1 ? length : length * length; }

std::vector<bool> active_slots(const SyntheticLattice& syn, int length, Boundary boundary) {
    if (length < 2) throw InvalidArgument("finite lattice length must be >= 2");
    const int cells = cell_count(syn.dim, length);
    std::vector<bool> active(static_cast<std::size_t>(syn.size() * cells), true);
    if (boundary == Boundary::periodic) return active;
    for (const HopLink& link : syn.hop_links) {
        for (int c = 0; c < cells; ++c) {
            CellOffset target = cell_coords(c, syn.dim, length);
            target[0] += link.offset[0];
            target[1] += link.offset[1];
            if (!wrap_cell(target, syn.dim, length, boundary))
                active[static_cast<std::size_t>(link.pair_site * cells + c)] = false;
        }
    }
    return active;
}

Eigen::MatrixXd finite_hamiltonian(const SyntheticLattice& syn, int length, const std::vector<double>* pair_shifts,
                                   Boundary boundary) {
    const std::vector<bool> active = active_slots(syn, length, boundary);
    const int cells = cell_count(syn.dim, length);
    const int n = syn.size() * cells;
    if (pair_shifts && static_cast<int>(pair_shifts->size()) != syn.n2() * cells)
        throw InvalidArgument(fmt::format("expected {} pair shifts, got {}", syn.n2() * cells, pair_shifts->size()));

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (const HopLink& link : syn.hop_links) {
        for (int c = 0; c < cells; ++c) {
            const int p = link.pair_site * cells + c;
            if (!active[static_cast<std::size_t>(p)]) continue;
            CellOffset target = cell_coords(c, syn.dim, length);
            target[0] += link.offset[0];
            target[1] += link.offset[1];
            wrap_cell(target, syn.dim, length, boundary);
            const int m = link.one_exc_site * cells + cell_index(target, syn.dim, length);
            h(p, m) += syn.hop_amplitude;
            h(m, p) += syn.hop_amplitude;
        }
    }
    if (pair_shifts) {
        for (int k = 0; k < syn.n2(); ++k) {
            const int species = syn.pair_sites[static_cast<std::size_t>(k)];
            for (int c = 0; c < cells; ++c) {
                const int p = species * cells + c;
                if (active[static_cast<std::size_t>(p)]) h(p, p) += (*pair_shifts)[static_cast<std::size_t>(k * cells + c)];
            }
        }
    }
    return h;
}

LadderShifts LadderShifts::zeros(int length) {
    const auto n = static_cast<std::size_t>(length);
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
            std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
}

Eigen::MatrixXd ladder_hamiltonian(int length, const LadderShifts& shifts, Boundary boundary) {
    const auto n = static_cast<std::size_t>(length);
    if (shifts.a.size() != n || shifts.b.size() != n || shifts.c.size() != n || shifts.d.size() != n ||
        shifts.e.size() != n)
        throw InvalidArgument("ladder shift vectors must all have length L");
    static const SyntheticLattice syn = synthesize(build_real_lattice(LatticeKind::ladder));
    std::vector<double> pair(3 * n);
    std::copy(shifts.a.begin(), shifts.a.end(), pair.begin());
    std::copy(shifts.b.begin(), shifts.b.end(), pair.begin() + static_cast<std::ptrdiff_t>(n));
    std::copy(shifts.e.begin(), shifts.e.end(), pair.begin() + static_cast<std::ptrdiff_t>(2 * n));
    Eigen::MatrixXd h = finite_hamiltonian(syn, length, &pair, boundary);
    for (std::size_t i = 0; i < n; ++i) {
        h(static_cast<Eigen::Index>(2 * n + i), static_cast<Eigen::Index>(2 * n + i)) += shifts.c[i];
        h(static_cast<Eigen::Index>(3 * n + i), static_cast<Eigen::Index>(3 * n + i)) += shifts.d[i];
    }
    return h;
}

Eigen::MatrixXd ladder_hamiltonian(int length) { return ladder_hamiltonian(length, LadderShifts::zeros(length)); }

namespace {

nlohmann::json vec_json(const Vec2& v) { return nlohmann::json::array({v.x(), v.y()}); }

Vec2 json_vec(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw InvalidArgument("expected a 2-component vector");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

void to_json(nlohmann::json& j, const RealLattice& lattice) {
    j = nlohmann::json::object();
    j["kind"] = std::string(to_string(lattice.kind));
    j["dim"] = lattice.dim;
    for (const auto& a : lattice.primitive_vectors) j["primitive_vectors"].push_back(vec_json(a));
    for (const auto& b : lattice.basis) j["basis"].push_back(vec_json(b));
    j["links"] = nlohmann::json::array();
    for (const auto& l : lattice.nn_links)
        j["links"].push_back({{"from", l.from}, {"to", l.to}, {"offset", {l.offset[0], l.offset[1]}}});
    if (lattice.length) j["length"] = *lattice.length;
}

void from_json(const nlohmann::json& j, RealLattice& lattice) {
    try {
        lattice = RealLattice{};
        lattice.kind = lattice_kind_from_string(j.at("kind").get<std::string>());
        lattice.dim = j.at("dim").get<int>();
        for (const auto& a : j.at("primitive_vectors")) lattice.primitive_vectors.push_back(json_vec(a));
        for (const auto& b : j.at("basis")) lattice.basis.push_back(json_vec(b));
        for (const auto& l : j.at("links")) {
            const auto& off = l.at("offset");
            lattice.nn_links.push_back(
                {l.at("from").get<int>(), l.at("to").get<int>(), {off.at(0).get<int>(), off.size() > 1 ? off.at(1).get<int>() : 0}});
        }
        if (j.contains("length")) lattice.length = j.at("length").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(fmt::format("malformed lattice document: {}", e.what()));
    }
    lattice.validate();
}

void to_json(nlohmann::json& j, const SyntheticLattice& lattice) {
    j = nlohmann::json::object();
    j["kind"] = std::string(to_string(lattice.kind));
    j["dim"] = lattice.dim;
    j["n1"] = lattice.n1();
    j["n2"] = lattice.n2();
    for (const auto& a : lattice.primitive_vectors) j["primitive_vectors"].push_back(vec_json(a));
    for (const auto& s : lattice.sites)
        j["sites"].push_back({{"label", s.label},
                              {"type", s.type == SiteType::pair ? "pair" : "one_excitation"},
                              {"offset", vec_json(s.offset)}});
    for (const auto& h : lattice.hop_links)
        j["hop_links"].push_back({{"pair", h.pair_site}, {"one_excitation", h.one_exc_site}, {"offset", {h.offset[0], h.offset[1]}}});
    j["hop_amplitude"] = lattice.hop_amplitude;
}

} // namespace synlat
