#pragma once

#include "gie/csv.hpp"
#include "gie/parallel.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gie::fielddecomp {

/// Periodic cube of n^3 points, side L. Point (i, j, k) sits at
/// (i, j, k) * L / n; storage index (i * n + j) * n + k.
struct Grid3D {
    int n = 16;
    double L = 1.0;

    void validate() const;
    double spacing() const { return L / n; }
    double cell_volume() const;
    std::size_t points() const { return static_cast<std::size_t>(n) * n * n; }
    std::size_t index(int i, int j, int k) const
    {
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }
    Eigen::Vector3d position(std::size_t idx) const;
    bool operator==(const Grid3D& o) const { return n == o.n && L == o.L; }
    bool operator!=(const Grid3D& o) const { return !(*this == o); }
};

/// Scalar (1 component) or vector (3 components) field. Component c of
/// point p is data[c * points + p].
struct GridField3D {
    Grid3D grid;
    int components = 1;
    std::vector<double> data;

    GridField3D() = default;
    GridField3D(const Grid3D& g, int comps);

    double* component(int c) { return data.data() + static_cast<std::size_t>(c) * grid.points(); }
    const double* component(int c) const { return data.data() + static_cast<std::size_t>(c) * grid.points(); }
    double max_abs() const;
    double mean(int c = 0) const;
    void require_finite(const char* what) const;
};

/// Symmetric 3x3 tensor per point, stored as xx, xy, xz, yy, yz, zz.
struct SymTensorField3D {
    Grid3D grid;
    std::array<std::vector<double>, 6> comp;

    SymTensorField3D() = default;
    explicit SymTensorField3D(const Grid3D& g);

    static constexpr int slot(int i, int j)
    {
        constexpr int table[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        return table[i][j];
    }
    double at(int i, int j, std::size_t p) const { return comp[static_cast<std::size_t>(slot(i, j))][p]; }
    double max_abs() const;
    double max_abs_trace() const;
    GridField3D trace() const;
    /// Traceless part T_ij - delta_ij T^k_k / 3.
    SymTensorField3D traceless() const;
    void require_finite(const char* what) const;
};

// Linear combinations, used by tests and the assembly code.
GridField3D axpby(double a, const GridField3D& x, double b, const GridField3D& y);
SymTensorField3D axpby(double a, const SymTensorField3D& x, double b, const SymTensorField3D& y);
double max_abs_diff(const GridField3D& a, const GridField3D& b);
double max_abs_diff(const SymTensorField3D& a, const SymTensorField3D& b);

// Spectral derivatives. Wavevector components at the Nyquist index are
// treated as zero in odd-order operators so real fields stay real.
GridField3D gradient(const GridField3D& scalar, const Parallelism& policy = {});
GridField3D divergence(const GridField3D& vec, const Parallelism& policy = {});
GridField3D curl(const GridField3D& vec, const Parallelism& policy = {});
GridField3D laplacian(const GridField3D& f, const Parallelism& policy = {});
/// Vector d^i T_ij.
GridField3D tensor_divergence(const SymTensorField3D& t, const Parallelism& policy = {});

struct VectorParts {
    GridField3D parallel;
    GridField3D perp;
};

/// f = f_par + f_perp with f_par curl-free and f_perp divergence-free. The
/// k = 0 (uniform) part is assigned to f_perp.
VectorParts helmholtz_vector(const GridField3D& f, const Parallelism& policy = {});

struct TensorParts {
    SymTensorField3D parallel;
    SymTensorField3D rotational;
    SymTensorField3D tt;
    /// Scalar longitudinal potential: (3/2) inverse-Laplacian of d^i d^j Pi_ij.
    GridField3D longitudinal_potential;
};

inline constexpr double kTracelessTolerance = 1e-10;

/// Longitudinal / rotational / transverse-traceless split of a traceless
/// symmetric tensor field. Uniform content goes to the TT part.
TensorParts decompose_tensor(const SymTensorField3D& pi, const Parallelism& policy = {});

/// (3/2) k_i k_j Pi_ij / k^2 in Fourier space.
GridField3D longitudinal_potential(const SymTensorField3D& pi, const Parallelism& policy = {});

/// Zero-mean tolerance relative to the field maximum.
inline constexpr double kZeroMeanTolerance = 1e-12;

/// Solves laplacian(psi) = 4 pi G T00 on the torus. T00 must have zero mean.
GridField3D solve_psi(const GridField3D& t00, double G, const Parallelism& policy = {});

/// Solves laplacian(w) = 16 pi G f_perp, i.e. w = -4G * integral f_perp / |r - r'|.
/// f_perp must be divergence-free within 1e-8 relative.
GridField3D solve_w(const GridField3D& f_perp, double G, const Parallelism& policy = {});

/// phi = psi + 8 pi G * inverse-Laplacian(-Pi_par_scalar), i.e.
/// laplacian(psi - phi) = 8 pi G Pi_par_scalar.
GridField3D solve_phi(const GridField3D& psi, const SymTensorField3D& pi, double G, const Parallelism& policy = {});

/// Spectral evaluation of integral a(r') b(r) / |r - r'| over the torus,
/// zero mode dropped.
double coulomb_double_integral(const GridField3D& a, const GridField3D& b, const Parallelism& policy = {});

/// Direct evaluation of the same bilinear form through the real-space
/// product with the spectrally solved potential of `a`; used as a
/// consistency check of the spectral reduction.
double coulomb_double_integral_realspace(const GridField3D& a, const GridField3D& b,
                                         const Parallelism& policy = {});

struct StressEnergy {
    GridField3D t00;                 // scalar
    GridField3D t0i;                 // vector; empty data means zero
    SymTensorField3D tij;            // empty components mean zero
    SymTensorField3D s_tt;           // external TT strain; empty means none
};

struct InteractionTerms {
    double radiation = 0.0;
    double frame_dragging = 0.0;
    double newtonian = 0.0;
    double total = 0.0;
    /// Mean of T00 removed before the spectral solves, and the matching mass.
    double subtracted_mean = 0.0;
    double subtracted_mass = 0.0;
};

struct AssembleOptions {
    double G = 6.67430e-11;
    /// Static mode requires T0i = 0; otherwise div T0i must vanish.
    bool static_mode = true;
    double conservation_tolerance = 1e-8;
};

InteractionTerms assemble_interaction(const StressEnergy& t, const AssembleOptions& opts = {},
                                      const Parallelism& policy = {});

/// Discretely normalized Gaussian density of total mass m, periodic
/// minimum-image distance to `center`.
GridField3D gaussian_density(const Grid3D& g, const Eigen::Vector3d& center, double sigma, double m);

/// Periodic pair potential (per unit G m1 m2, attractive sign not applied)
/// of two Gaussians of width sigma at displacement r, zero mode removed:
/// (4 pi / V) sum_{k != 0} exp(-k^2 sigma^2) cos(k.r) / k^2, by Ewald summation.
double ewald_pair_potential(const Eigen::Vector3d& r, double sigma, double L);

/// Isolated Gaussian pair potential erf(r / 2 sigma) / r.
double gaussian_pair_potential(double r, double sigma);

/// Smallest sigma accepted, in grid spacings.
inline constexpr double kMinSigmaSpacings = 1.5;

struct NewtonCase {
    int n = 0;
    double sigma = 0.0;
    double cross_term = 0.0;      // H(both) - H(1) - H(2)
    double torus_reference = 0.0; // -G m1 m2 * Ewald pair potential
    double corrected = 0.0;       // cross_term with periodic images removed
    double target = 0.0;          // -G m1 m2 / d
    double rel_error = 0.0;       // |corrected / target - 1|
};

NewtonCase newton_cross_term(double m1, double m2, double d, const Grid3D& grid, double sigma, double G,
                             const Parallelism& policy = {});

struct NewtonReport {
    std::vector<NewtonCase> cases;
    bool monotone = true;
    Table table() const;
};

/// Runs newton_cross_term for each n in `ns` on a box of side L.
NewtonReport newtonian_reduction_check(double m1, double m2, double d, double L, const std::vector<int>& ns,
                                       double sigma, double G, const Parallelism& policy = {});

// Test-field generators: sums of a few random Fourier modes with integer
// wavenumbers |m_i| <= max_mode, deterministic in the seed.
GridField3D random_bandlimited_scalar(const Grid3D& g, std::uint64_t seed, int max_mode = 4, int terms = 6);
GridField3D random_bandlimited_vector(const Grid3D& g, std::uint64_t seed, int max_mode = 4, int terms = 6);
SymTensorField3D random_bandlimited_traceless(const Grid3D& g, std::uint64_t seed, int max_mode = 4,
                                               int terms = 6);

// Raw little-endian float64 arrays, component-major, with a JSON sidecar
// {"n":..., "L":..., "components":...} at <path>.json.
void write_field(const std::filesystem::path& raw, const GridField3D& f);
void write_field(const std::filesystem::path& raw, const SymTensorField3D& t);
GridField3D read_field(const std::filesystem::path& raw);
SymTensorField3D read_tensor_field(const std::filesystem::path& raw);
/// Components declared by the sidecar of `raw`.
int sidecar_components(const std::filesystem::path& raw);

} // namespace gie::fielddecomp
