#pragma once

#include "gie/csv.hpp"
#include "gie/parallel.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace gie::gauge_pt {

inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;
inline constexpr double kHbarSI = 1.054571817e-34;
inline constexpr double kGravitySI = 6.67430e-11;
inline constexpr double kPerturbativeLimit = 0.3;
/// Minimum d / sqrt(hbar / 2 m omega) for the dipole expansion.
inline constexpr double kDipoleRatio = 10.0;
inline constexpr double kResonanceTolerance = 1e-9;

enum class Orientation { axial, transverse };
Orientation parse_orientation(const std::string& s);
std::string to_string(Orientation o);

/// Two identical charged oscillators at separation d along z. Each charge
/// oscillates along z (axial) or x (transverse). The interaction strength
/// is carried as kappa = q^2 / (4 pi eps0); the gravitational analog uses
/// kappa = -G m^2.
struct OscillatorPair {
    double m = 1.0;
    double omega = 1.0;
    double kappa = 0.0;
    double d = 1.0;
    Orientation orientation = Orientation::axial;
    int fock_cutoff = 4;
    double hbar = kHbarSI;
    double c = kSpeedOfLight;
    double G = kGravitySI;
    /// Gaussian charge radius used as the UV form factor of the mediator
    /// sum. Zero selects d / 20.
    double charge_radius = 0.0;

    static double kappa_from_charge(double q, double eps0 = kVacuumPermittivity);

    void validate() const;
    /// Ground-state width sqrt(hbar / 2 m omega).
    double x0() const;
    double effective_charge_radius() const;
    /// Oscillation direction of both charges.
    Eigen::Vector3d axis() const;
};

/// Leading nonlocal coupling g in H = g x_A x_B from the dipole expansion
/// of kappa / |d + x_A - x_B|.
double dipole_coupling(const OscillatorPair& pair);

/// Same expansion with kappa replaced by -G m^2.
double analog_gravity_coupling(const OscillatorPair& pair);

/// pair with kappa = -G m^2.
OscillatorPair gravity_analog(const OscillatorPair& pair);

enum class Polarization : int { scalar = 0, longitudinal = 1, transverse1 = 2, transverse2 = 3 };
inline constexpr int kPolarizations = 4;

/// Discrete mediator modes. weights integrate d^3k / (2 pi)^3.
struct ModeGrid {
    std::vector<Eigen::Vector3d> wavevectors;
    std::vector<double> weights;
    /// Per mode, per polarization; scalar entries -1, the rest +1.
    std::vector<std::array<int, kPolarizations>> norm_signs;
    std::string label;

    std::size_t size() const { return wavevectors.size(); }
    void validate() const;
};

struct ModeGridSpec {
    int n_radial = 96;
    int n_theta = 48;
    int n_phi = 8;
    /// Upper radial cutoff in units of 1 / charge_radius.
    double kmax_radius = 5.0;
    /// Lower radial cutoff in units of omega / c.
    double kmin_omega = 0.01;
    std::string label;
};

/// Named refinement levels: coarse, medium, fine.
ModeGridSpec grid_spec(const std::string& level);

/// Product grid: Gauss-Legendre in |k| on [kmin, kmax], Gauss-Legendre in
/// cos(theta), uniform azimuth with an even count so the grid is symmetric
/// under k -> -k. Modes are sorted by |k|, then lexicographically.
ModeGrid make_mode_grid(const OscillatorPair& pair, const ModeGridSpec& spec);

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

struct EpsilonResult {
    std::complex<double> value;
    std::string method; // coulomb | lorentz | analog-gravity
    std::map<std::string, double> diagnostics;
};

/// First-order amplitude of |1_A 1_B> for H_I = g x_A x_B.
EpsilonResult epsilon_coulomb(const OscillatorPair& pair);
EpsilonResult epsilon_from_coupling(const OscillatorPair& pair, double g, const std::string& method);
/// epsilon from analog_gravity_coupling(pair).
EpsilonResult epsilon_analog_gravity(const OscillatorPair& pair);

struct LorentzOptions {
    bool drop_scalar = false;
    bool include_transverse = false;
};

/// Second-order amplitude of |1_A 1_B> through one-mediator intermediate
/// states, with the indefinite-metric sign applied per mode.
EpsilonResult epsilon_lorentz(const OscillatorPair& pair, const ModeGrid& grid, const LorentzOptions& opts = {},
                              const Parallelism& policy = {});

/// Interaction Hamiltonian on oscillators x {vacuum, one quantum in
/// (mode, pol)}, built as V + V^dagger from the emission vertex V.
/// Uses sqrt(|kappa|) as the formal charge.
Eigen::MatrixXcd interaction_block(const OscillatorPair& pair, const ModeGrid& grid, std::size_t mode,
                                   Polarization pol);

struct EquivalenceRow {
    std::string grid;
    std::size_t modes;
    std::complex<double> eps_lorentz;
    double rel_error;
};

struct EquivalenceReport {
    EpsilonResult coulomb;
    std::vector<EquivalenceRow> rows;
    bool monotone = true;
    double final_error = 0.0;
    std::vector<std::string> diagnostics;

    /// Columns grid_index, modes, eps_re, eps_im, rel_error. Row 0 is the
    /// Coulomb reference (grid_index 0); grid rows count from 1.
    Table table() const;
    bool passed(double tol = 0.05) const { return monotone && final_error <= tol; }
};

/// Runs epsilon_lorentz on each grid and compares to epsilon_coulomb.
/// Non-monotone convergence is recorded, not thrown.
EquivalenceReport gauge_equivalence_report(const OscillatorPair& pair, const std::vector<ModeGrid>& grids,
                                           const LorentzOptions& opts = {}, const Parallelism& policy = {});

} // namespace gie::gauge_pt
