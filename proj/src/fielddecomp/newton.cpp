#include "gie/error.hpp"
#include "spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gie::fielddecomp {

double gaussian_pair_potential(double r, double sigma)
{
    if (r < 1e-12 * sigma)
        return 1.0 / (sigma * std::sqrt(std::numbers::pi));
    return std::erf(r / (2.0 * sigma)) / r;
}

double ewald_pair_potential(const Eigen::Vector3d& r, double sigma, double L)
{
    if (!(sigma > 0.0) || !(L > 0.0))
        throw ValidationError("Ewald sum needs positive sigma and L");
    const double alpha = 4.0 / L;
    const double volume = L * L * L;
    constexpr int kMaxShell = 64;
    constexpr double kShellTolerance = 1e-16;

    // short-range part: erf(x / 2 sigma) / x - erf(alpha x) / x over images
    auto short_range = [&](double x) {
        if (x < 1e-12 * L)
            return 1.0 / (sigma * std::sqrt(std::numbers::pi)) - 2.0 * alpha / std::sqrt(std::numbers::pi);
        return (std::erf(x / (2.0 * sigma)) - std::erf(alpha * x)) / x;
    };
    double real_sum = 0.0;
    for (int s = 0;; ++s) {
        if (s > kMaxShell)
            throw ConvergenceError("Ewald real-space sum did not converge");
        double shell = 0.0;
        for (int a = -s; a <= s; ++a)
            for (int b = -s; b <= s; ++b)
                for (int c = -s; c <= s; ++c) {
                    if (std::max({std::abs(a), std::abs(b), std::abs(c)}) != s)
                        continue;
                    shell += short_range((r + L * Eigen::Vector3d(a, b, c)).norm());
                }
        real_sum += shell;
        if (s >= 2 && std::abs(shell) <= kShellTolerance * std::abs(real_sum))
            break;
    }

    const double dk = 2.0 * std::numbers::pi / L;
    double k_sum = 0.0;
    for (int s = 1;; ++s) {
        if (s > kMaxShell)
            throw ConvergenceError("Ewald reciprocal sum did not converge");
        double shell = 0.0;
        for (int a = -s; a <= s; ++a)
            for (int b = -s; b <= s; ++b)
                for (int c = -s; c <= s; ++c) {
                    if (std::max({std::abs(a), std::abs(b), std::abs(c)}) != s)
                        continue;
                    const Eigen::Vector3d k = dk * Eigen::Vector3d(a, b, c);
                    const double k2 = k.squaredNorm();
                    shell += std::exp(-k2 / (4.0 * alpha * alpha)) * std::cos(k.dot(r)) / k2;
                }
        k_sum += shell;
        if (s >= 2 && std::abs(shell) <= kShellTolerance * std::abs(k_sum))
            break;
    }
    return real_sum + 4.0 * std::numbers::pi / volume * k_sum -
           std::numbers::pi / volume * (1.0 / (alpha * alpha) - 4.0 * sigma * sigma);
}

GridField3D gaussian_density(const Grid3D& g, const Eigen::Vector3d& center, double sigma, double m)
{
    g.validate();
    if (!(sigma > 0.0))
        throw ValidationError("Gaussian width must be positive");
    GridField3D f(g, 1);
    double total = 0.0;
    for (std::size_t p = 0; p < g.points(); ++p) {
        Eigen::Vector3d d = g.position(p) - center;
        for (int c = 0; c < 3; ++c)
            d[c] -= g.L * std::round(d[c] / g.L);
        f.data[p] = std::exp(-d.squaredNorm() / (2.0 * sigma * sigma));
        total += f.data[p];
    }
    const double scale = m / (total * g.cell_volume());
    for (double& v : f.data)
        v *= scale;
    return f;
}

NewtonCase newton_cross_term(double m1, double m2, double d, const Grid3D& grid, double sigma, double G,
                             const Parallelism& policy)
{
    grid.validate();
    if (!(m1 > 0.0) || !(m2 >= 0.0) || !std::isfinite(m1) || !std::isfinite(m2))
        throw ValidationError("newton check needs m1 > 0 and m2 >= 0");
    if (!(G > 0.0))
        throw ValidationError("G must be positive");
    if (!(d > 0.0) || !(sigma > 0.0))
        throw ValidationError("d and sigma must be positive");
    if (d < 4.0 * sigma)
        throw ValidationError("newton check requires d >= 4 sigma");
    if (d > grid.L / 4.0 * (1.0 + 1e-12))
        throw ValidationError("newton check requires d <= L/4");
    if (sigma < kMinSigmaSpacings * grid.spacing() * (1.0 - 1e-12))
        throw ValidationError("Gaussian width must be at least " + std::to_string(kMinSigmaSpacings) +
                              " grid spacings");

    const Eigen::Vector3d mid(grid.L / 2, grid.L / 2, grid.L / 2);
    const Eigen::Vector3d half(d / 2, 0.0, 0.0);
    const GridField3D rho1 = gaussian_density(grid, mid - half, sigma, m1);
    const GridField3D rho2 = gaussian_density(grid, mid + half, sigma, m2);

    AssembleOptions opts;
    opts.G = G;
    auto energy = [&](const GridField3D& rho) {
        StressEnergy t;
        t.t00 = rho;
        return assemble_interaction(t, opts, policy).newtonian;
    };
    NewtonCase c;
    c.n = grid.n;
    c.sigma = sigma;
    c.cross_term = energy(axpby(1.0, rho1, 1.0, rho2)) - energy(rho1) - energy(rho2);
    const double phi_torus = ewald_pair_potential(2.0 * half, sigma, grid.L);
    c.torus_reference = -G * m1 * m2 * phi_torus;
    // swap the torus pair potential for the isolated one, then compare to point masses
    c.corrected = c.cross_term - c.torus_reference - G * m1 * m2 * gaussian_pair_potential(d, sigma);
    c.target = -G * m1 * m2 / d;
    c.rel_error = c.target != 0.0 ? std::abs(c.corrected / c.target - 1.0) : std::abs(c.corrected);
    return c;
}

NewtonReport newtonian_reduction_check(double m1, double m2, double d, double L, const std::vector<int>& ns,
                                       double sigma, double G, const Parallelism& policy)
{
    if (ns.empty())
        throw ValidationError("newton check needs at least one resolution");
    NewtonReport rep;
    for (int n : ns)
        rep.cases.push_back(newton_cross_term(m1, m2, d, Grid3D{n, L}, sigma, G, policy));
    for (std::size_t i = 1; i < rep.cases.size(); ++i)
        if (!(rep.cases[i].rel_error < rep.cases[i - 1].rel_error))
            rep.monotone = false;
    return rep;
}

Table NewtonReport::table() const
{
    Table t;
    t.header = {"n", "sigma", "cross_term", "torus_reference", "corrected", "target", "rel_error"};
    for (const auto& c : cases)
        t.rows.push_back({static_cast<double>(c.n), c.sigma, c.cross_term, c.torus_reference, c.corrected, c.target,
                          c.rel_error});
    return t;
}

} // namespace gie::fielddecomp
