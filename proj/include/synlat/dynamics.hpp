#pragma once

// Quench dynamics on the Lieb ladder: the localized flat-band state, its
// preparation by addressed pulses, evolution under the effective ladder
// Hamiltonian and under the full spin Hamiltonian, and spreading observables.
// Time in units of 1/Omega.

#include "synlat/disorder.hpp"
#include "synlat/lattice.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <vector>

namespace synlat {

using CVector = Eigen::VectorXcd;

enum class Representation { synthetic, spin };

struct LadderState {
    Representation rep = Representation::synthetic;
    int length = 0;
    CVector amplitudes; ///< 5L (canonical ordering) or 2^(2L) (bit n = u_n, bit L+n = l_n)
};

/// Canonical synthetic slot of species (0..4 = A..E) at rung i (1-based).
int ladder_slot(int length, int species, int rung);

/// Spin configuration (bit mask) of a synthetic slot; 0 for OBC-removed slots.
std::uint64_t slot_configuration(int length, int slot);

/// (A_i + B_i - E_i - E_{i+1}) / 2, 1 <= i <= L-1.
LadderState psi_loc(int length, int rung);

/// psi(t) = exp(-i H t) psi0 by Hermitian eigendecomposition.
CVector evolve(const Eigen::MatrixXd& h, const CVector& psi0, double t);

/// Cached eigendecomposition for repeated evolutions under one Hamiltonian.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const Eigen::MatrixXd& h);
    CVector apply(const CVector& psi0, double t) const;
    const Eigen::VectorXd& eigenvalues() const { return values_; }

private:
    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;
};

/// exp(-i H t) psi0 by restarted Lanczos steps, for Hamiltonians too large to diagonalize.
CVector evolve_krylov(const Eigen::SparseMatrix<double>& h, const CVector& psi0, double t, int krylov_dim = 40);

double expectation(const Eigen::SparseMatrix<double>& h, const CVector& psi);

// ---- full spin Hamiltonian -------------------------------------------------

inline constexpr int kMaxFullLength = 7;

/// geometric: all pair distances from displaced 3D positions.
/// chain_indexed: displaced distances on nearest-neighbour bonds only, ideal
/// ladder distances for every longer-range pair.
enum class DistanceModel { geometric, chain_indexed };

/// H = Omega sum sigma_x + Delta sum n + sum_{k<m} V(d_km) n_k n_m with Delta = -V0 and
/// V(d) = V0 d^-alpha, in units of Omega (omega given relative to the unit).
Eigen::SparseMatrix<double> build_full_hamiltonian(int length, double omega, double v0, int alpha,
                                                   const Displacements& displacements,
                                                   DistanceModel distances = DistanceModel::geometric);

LadderState embed_synthetic(const LadderState& state);

struct Projection {
    CVector synthetic; ///< 5L amplitudes, zero on OBC-removed slots
    double leakage = 0.0; ///< norm squared outside the single-excitation / pair subspace
};

Projection project_to_synthetic(const LadderState& state);

/// Evolution of a spin state under a full Hamiltonian (dense below 2^10 states).
CVector evolve_full(const Eigen::SparseMatrix<double>& h, const CVector& psi0, double t);

// ---- pulses on a 2x2 plaquette -------------------------------------------
// Register of four atoms: 1 = u_i, 2 = u_{i+1}, 3 = l_i, 4 = l_{i+1}; bit k-1 is atom k.

enum class Regime { blockade, facilitation };
enum class PulseMode { ideal_gate, full_hamiltonian };

struct PulseSpec {
    int site = 1;
    double theta = 0.0;
    Regime regime = Regime::blockade;
    PulseMode mode = PulseMode::ideal_gate;
    double omega_r = 1.0; ///< Rabi frequency of the addressing laser (full mode)
};

struct Plaquette {
    std::array<Eigen::Vector3d, 4> positions;
    double v0 = 200.0; ///< V(R0) in units of Omega
    int alpha = 3;

    static Plaquette ideal(double v0 = 200.0, int alpha = 3);
};

/// Single-atom rotation exp(-i theta sigma_x / 2).
Eigen::Matrix2cd rotation(double theta);

CVector apply_pulse(const CVector& state, const PulseSpec& pulse, const Plaquette& plaquette = Plaquette::ideal());

/// B1(pi/2), B4(pi), F2(pi/2), F3(pi), F4(2pi), F2(2pi).
std::vector<PulseSpec> preparation_sequence(PulseMode mode = PulseMode::ideal_gate, double omega_r = 1.0);

/// States after each pulse, starting from all atoms down.
std::vector<CVector> prepare_psi_loc(const std::vector<PulseSpec>& sequence,
                                     const Plaquette& plaquette = Plaquette::ideal());

/// Reference superpositions after each preparation pulse (up to global phase).
std::vector<CVector> preparation_targets();

CVector plaquette_basis_state(std::initializer_list<int> excited_sites);

/// Spin state of a length-L ladder with the plaquette at rungs (i, i+1) and all other atoms down.
LadderState embed_plaquette(const CVector& state, int length, int rung);

/// |<a|b>|^2 for normalized vectors.
double fidelity(const CVector& a, const CVector& b);

// ---- observables -----------------------------------------------------------

struct LegProfile {
    std::vector<double> p; ///< normalized excitation profile, rung 1..L
    double mean = 0.0;     ///< in rung units, 1-based
    double width = 0.0;    ///< standard deviation
    bool defined = false;  ///< false when the leg carries no excitation
};

struct Observables {
    LegProfile upper, lower;
    LegProfile combined; ///< both legs pooled into one rung profile
};

/// Per-leg moments from raw excitation densities n_i.
LegProfile leg_profile(const std::vector<double>& density);

Observables observables(const LadderState& state);

struct EvolutionRecord {
    std::vector<double> times;
    std::vector<Observables> frames;
    std::uint64_t seed = 0;
};

EvolutionRecord record_evolution(const Eigen::MatrixXd& h_eff, const LadderState& psi0,
                                 const std::vector<double>& times, std::uint64_t seed = 0);

// ---- disorder-averaged scans ---------------------------------------------

struct DxScanConfig {
    int length = 20;
    int rung = 10;
    std::vector<double> s_grid;
    std::vector<double> v0_grid{200.0};
    std::vector<double> times;
    int realizations = 100;
    int alpha = 3;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
};

struct DxCell {
    double s = 0.0, v0 = 0.0, t = 0.0;
    double dx_upper = 0.0, dx_lower = 0.0;
    double err_upper = 0.0, err_lower = 0.0;
    double diff_mean = 0.0, diff_err = 0.0; ///< paired upper - lower
    double dx_combined = 0.0, err_combined = 0.0;
    int realizations = 0;
};

/// Realization r uses seed derive_seed(master, "dynamics", r) at every (s, V0)
/// cell, so curves along s share their displacement directions.
std::vector<DxCell> dx_scan(const DxScanConfig& cfg);

struct CompareConfig {
    int length = 4;
    int rung = 2;
    std::vector<double> s_grid;
    std::vector<double> v0_grid{20.0, 200.0};
    double omega_t_over_2pi = 4.3;
    int realizations = 100;
    int alpha = 3;
    DistanceModel distances = DistanceModel::geometric;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
};

struct CompareCell {
    double s = 0.0, v0 = 0.0, t = 0.0;
    double dx_full_upper = 0.0, dx_full_lower = 0.0;
    double dx_eff_upper = 0.0, dx_eff_lower = 0.0;
    /// |<dx_full> - <dx_eff>| of the disorder-averaged widths, legs pooled
    double curve_gap = 0.0;
    /// realization-wise mean |dx_full - dx_eff|, legs pooled
    double discrepancy = 0.0, discrepancy_err = 0.0;
    double leakage = 0.0;
    int realizations = 0;
};

std::vector<CompareCell> compare_full_effective(const CompareConfig& cfg);

} // namespace synlat
