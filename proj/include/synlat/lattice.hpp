#pragma once

// Real-space tweezer lattices and the synthetic Hilbert-space lattices they
// generate under facilitation. Lengths of a RealLattice are in units of the
// nearest-neighbour spacing R0; energies everywhere are in units of the Rabi
// frequency (hop amplitude 1).

#include <Eigen/Dense>
#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synlat {

using Vec2 = Eigen::Vector2d;
using CellOffset = std::array<int, 2>;

enum class LatticeKind { chain, ladder, square, triangular, honeycomb, custom };

std::string_view to_string(LatticeKind kind);
LatticeKind lattice_kind_from_string(std::string_view name);

/// Nearest-neighbour bond from basis site `from` in the home cell to basis site
/// `to` in the cell displaced by `offset` (integer multiples of the primitive
/// vectors). Each physical bond is stored once.
struct Bond {
    int from = 0;
    int to = 0;
    CellOffset offset{0, 0};
};

struct LatticeSite {
    int basis = 0;
    CellOffset cell{0, 0};
    Vec2 position = Vec2::Zero();
};

struct RealLattice {
    LatticeKind kind = LatticeKind::custom;
    int dim = 1;
    std::vector<Vec2> primitive_vectors;
    std::vector<Vec2> basis;
    std::vector<Bond> nn_links;
    /// Cells per dimension for finite instantiations (open boundaries).
    std::optional<int> length;

    Vec2 position(int basis_index, CellOffset cell) const;
    double bond_length(const Bond& bond) const;
    /// Explicit site list of the finite instantiation, cell-major then basis.
    std::vector<LatticeSite> sites() const;
    /// Throws InvalidArgument when an invariant is violated.
    void validate() const;
};

RealLattice build_real_lattice(LatticeKind kind, std::optional<int> length = std::nullopt);

/// Validated lattice from explicit data (kind = custom).
RealLattice make_custom_lattice(int dim, std::vector<Vec2> primitive_vectors, std::vector<Vec2> basis,
                                std::vector<Bond> nn_links, std::optional<int> length = std::nullopt);

enum class SiteType { one_excitation, pair };

struct SyntheticSite {
    SiteType type = SiteType::one_excitation;
    std::string label;
    Vec2 offset = Vec2::Zero(); ///< position inside the cell, synthetic units
    int source = 0;             ///< basis index (one-excitation) or bond index (pair)
};

/// Hop from pair site `pair_site` in the home cell to one-excitation site
/// `one_exc_site` in the cell displaced by `offset`.
struct HopLink {
    int pair_site = 0;
    int one_exc_site = 0;
    CellOffset offset{0, 0};
};

struct SyntheticLattice {
    LatticeKind kind = LatticeKind::custom;
    int dim = 1;
    /// Primitive vectors rescaled to unit length; synthetic distances carry no meaning.
    std::vector<Vec2> primitive_vectors;
    /// Canonical ordering used by finite Hamiltonians.
    std::vector<SyntheticSite> sites;
    std::vector<int> one_exc_sites; ///< indices into `sites`
    std::vector<int> pair_sites;    ///< indices into `sites`
    std::vector<HopLink> hop_links; ///< indexed by site indices
    double hop_amplitude = 1.0;

    int n1() const { return static_cast<int>(one_exc_sites.size()); }
    int n2() const { return static_cast<int>(pair_sites.size()); }
    int size() const { return static_cast<int>(sites.size()); }
    int index_of(std::string_view label) const;
};

SyntheticLattice synthesize(const RealLattice& real);

enum class Boundary { open, periodic };

/// Number of cells in a finite instantiation with `length` cells per dimension.
int cell_count(int dim, int length);

/// Slots of the finite Hamiltonian that carry a state. Under open boundaries
/// pair sites with a bond endpoint outside the sample are dropped; their slot
/// stays in the matrix as an all-zero row and column.
std::vector<bool> active_slots(const SyntheticLattice& syn, int length, Boundary boundary = Boundary::open);

/// Finite Hamiltonian in site-type-major ordering: slot(site s, cell c) = s * cells + c.
/// `pair_shifts` holds one energy per pair slot (pair species major, then cell);
/// shifts on dropped slots are ignored.
Eigen::MatrixXd finite_hamiltonian(const SyntheticLattice& syn, int length,
                                   const std::vector<double>* pair_shifts = nullptr,
                                   Boundary boundary = Boundary::open);

/// Rung-resolved on-site energies of the Lieb ladder, each of length L.
struct LadderShifts {
    std::vector<double> a, b, c, d, e;

    static LadderShifts zeros(int length);
    int length() const { return static_cast<int>(a.size()); }
};

/// 5L x 5L ladder Hamiltonian in the basis {A_1..A_L, B_1..B_L, C.., D.., E_1..E_L}
/// with open boundaries (A_L and B_L removed).
Eigen::MatrixXd ladder_hamiltonian(int length, const LadderShifts& shifts,
                                   Boundary boundary = Boundary::open);
Eigen::MatrixXd ladder_hamiltonian(int length);

void to_json(nlohmann::json& j, const RealLattice& lattice);
void from_json(const nlohmann::json& j, RealLattice& lattice);
void to_json(nlohmann::json& j, const SyntheticLattice& lattice);

} // namespace synlat
