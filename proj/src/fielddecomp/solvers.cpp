#include "gie/error.hpp"
#include "spectral.hpp"

#include <cmath>
#include <numbers>

namespace gie::fielddecomp {

using detail::cplx;
using detail::Spectrum;

namespace {

void require_zero_mean(const GridField3D& f, const char* what)
{
    const double scale = f.max_abs();
    for (int c = 0; c < f.components; ++c)
        if (std::abs(f.mean(c)) > kZeroMeanTolerance * (scale > 0.0 ? scale : 1.0))
            throw ValidationError(std::string(what) + " must have zero spatial mean on the periodic box (mean " +
                                  std::to_string(f.mean(c)) + ")");
}

/// out = factor * inverse-Laplacian(in), zero mode dropped.
void inverse_laplacian(const Grid3D& g, const double* in, double* out, double factor, const Parallelism& policy)
{
    auto s = detail::forward(g, in);
    detail::for_each_mode(g, policy, [&](std::size_t p, const detail::Wave& w) {
        s[p] = w.k2 == 0.0 ? cplx(0.0) : -factor * s[p] / w.k2;
    });
    detail::inverse(g, s, out);
}

} // namespace

GridField3D solve_psi(const GridField3D& t00, double G, const Parallelism& policy)
{
    if (t00.components != 1)
        throw ValidationError("solve_psi needs a scalar source");
    t00.require_finite("T00");
    require_zero_mean(t00, "T00");
    GridField3D psi(t00.grid, 1);
    inverse_laplacian(t00.grid, t00.component(0), psi.component(0), 4.0 * std::numbers::pi * G, policy);
    return psi;
}

GridField3D solve_w(const GridField3D& f_perp, double G, const Parallelism& policy)
{
    if (f_perp.components != 3)
        throw ValidationError("solve_w needs a vector source");
    f_perp.require_finite("f_perp");
    // transversality: |k.f| relative to |k||f| over the whole spectrum
    const Grid3D& g = f_perp.grid;
    std::vector<Spectrum> s;
    for (int c = 0; c < 3; ++c)
        s.push_back(detail::forward(g, f_perp.component(c)));
    double num = 0.0, den = 0.0;
    {
        std::vector<double> nrow(static_cast<std::size_t>(g.n), 0.0), drow(static_cast<std::size_t>(g.n), 0.0);
        detail::for_each_mode(g, policy, [&](std::size_t p, const detail::Wave& w) {
            const cplx kf = w.k[0] * s[0][p] + w.k[1] * s[1][p] + w.k[2] * s[2][p];
            const double fk = std::sqrt(std::norm(s[0][p]) + std::norm(s[1][p]) + std::norm(s[2][p]));
            const std::size_t row = p / (static_cast<std::size_t>(g.n) * g.n);
            nrow[row] = std::max(nrow[row], std::abs(kf));
            drow[row] = std::max(drow[row], w.k.norm() * fk);
        });
        for (std::size_t i = 0; i < nrow.size(); ++i) {
            num = std::max(num, nrow[i]);
            den = std::max(den, drow[i]);
        }
    }
    if (den > 0.0 && num > 1e-8 * den)
        throw ValidationError("solve_w input is not divergence-free (relative " + std::to_string(num / den) + ")");
    GridField3D w(g, 3);
    const double factor = 16.0 * std::numbers::pi * G;
    for (int c = 0; c < 3; ++c) {
        Spectrum& sc = s[static_cast<std::size_t>(c)];
        detail::for_each_mode(g, policy, [&](std::size_t p, const detail::Wave& wv) {
            sc[p] = wv.k2 == 0.0 ? cplx(0.0) : -factor * sc[p] / wv.k2;
        });
        detail::inverse(g, sc, w.component(c));
    }
    return w;
}

GridField3D solve_phi(const GridField3D& psi, const SymTensorField3D& pi, double G, const Parallelism& policy)
{
    if (psi.components != 1)
        throw ValidationError("solve_phi needs a scalar psi");
    if (psi.grid != pi.grid)
        throw ValidationError("solve_phi: psi and Pi live on different grids");
    const GridField3D a = longitudinal_potential(pi, policy);
    // laplacian(psi - phi) = 8 pi G A  =>  phi = psi - 8 pi G inverse-Laplacian(A)
    GridField3D corr(psi.grid, 1);
    inverse_laplacian(psi.grid, a.component(0), corr.component(0), 8.0 * std::numbers::pi * G, policy);
    GridField3D phi(psi.grid, 1);
    for (std::size_t p = 0; p < psi.grid.points(); ++p)
        phi.data[p] = psi.data[p] - corr.data[p];
    return phi;
}

double coulomb_double_integral(const GridField3D& a, const GridField3D& b, const Parallelism& policy)
{
    if (a.grid != b.grid || a.components != b.components)
        throw ValidationError("double integral needs fields of the same shape");
    const Grid3D& g = a.grid;
    const double dv = g.cell_volume();
    const double volume = g.L * g.L * g.L;
    double total = 0.0;
    for (int c = 0; c < a.components; ++c) {
        auto sa = detail::forward(g, a.component(c));
        auto sb = detail::forward(g, b.component(c));
        std::vector<double> terms(g.points());
        detail::for_each_mode(g, policy, [&](std::size_t p, const detail::Wave& w) {
            terms[p] = w.k2 == 0.0 ? 0.0 : 4.0 * std::numbers::pi / w.k2 * (std::conj(sa[p]) * sb[p]).real();
        });
        total += deterministic_sum(terms.size(), policy, [&](std::size_t i) { return terms[i]; });
    }
    return total * dv * dv / volume;
}

double coulomb_double_integral_realspace(const GridField3D& a, const GridField3D& b, const Parallelism& policy)
{
    if (a.grid != b.grid || a.components != b.components)
        throw ValidationError("double integral needs fields of the same shape");
    const Grid3D& g = a.grid;
    double total = 0.0;
    for (int c = 0; c < a.components; ++c) {
        // potential of a: -4 pi inverse-Laplacian(a) = integral a(r') / |r - r'|
        std::vector<double> pot(g.points());
        inverse_laplacian(g, a.component(c), pot.data(), -4.0 * std::numbers::pi, policy);
        const double* bc = b.component(c);
        total += deterministic_sum(g.points(), policy, [&](std::size_t i) { return pot[i] * bc[i]; });
    }
    return total * g.cell_volume();
}

} // namespace gie::fielddecomp
