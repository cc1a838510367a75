#include "gie/error.hpp"
#include "spectral.hpp"

#include <cmath>

namespace gie::fielddecomp {

using detail::cplx;
using detail::Spectrum;

VectorParts helmholtz_vector(const GridField3D& f, const Parallelism& policy)
{
    if (f.components != 3)
        throw ValidationError("helmholtz_vector needs a 3-component field");
    f.require_finite("vector field");
    const Grid3D& g = f.grid;
    std::vector<Spectrum> s;
    for (int c = 0; c < 3; ++c)
        s.push_back(detail::forward(g, f.component(c)));
    std::vector<Spectrum> par;
    for (int c = 0; c < 3; ++c)
        par.emplace_back(g.points());
    detail::for_each_mode(g, policy, [&](std::size_t p, const detail::Wave& w) {
        const double kk = w.k.squaredNorm();
        if (kk == 0.0) {
            for (auto& v : par)
                v[p] = 0.0;
            return;
        }
        const cplx proj = (w.k[0] * s[0][p] + w.k[1] * s[1][p] + w.k[2] * s[2][p]) / kk;
        for (int c = 0; c < 3; ++c)
            par[static_cast<std::size_t>(c)][p] = w.k[c] * proj;
    });
    VectorParts out{GridField3D(g, 3), GridField3D(g, 3)};
    for (int c = 0; c < 3; ++c)
        detail::inverse(g, par[static_cast<std::size_t>(c)], out.parallel.component(c));
    // perp as the remainder keeps f_par + f_perp = f to rounding
    for (std::size_t i = 0; i < f.data.size(); ++i)
        out.perp.data[i] = f.data[i] - out.parallel.data[i];
    return out;
}

namespace {

void require_traceless(const SymTensorField3D& pi)
{
    pi.require_finite("tensor field");
    const double scale = pi.max_abs();
    if (pi.max_abs_trace() > kTracelessTolerance * (scale > 0.0 ? scale : 1.0))
        throw ValidationError("tensor field is not traceless (max |trace| = " + std::to_string(pi.max_abs_trace()) +
                              ")");
}

std::array<Spectrum, 6> forward_tensor(const SymTensorField3D& t)
{
    return {detail::forward(t.grid, t.comp[0].data()), detail::forward(t.grid, t.comp[1].data()),
            detail::forward(t.grid, t.comp[2].data()), detail::forward(t.grid, t.comp[3].data()),
            detail::forward(t.grid, t.comp[4].data()), detail::forward(t.grid, t.comp[5].data())};
}

// A = (3/2) khat_i khat_j Pi_ij at spectral index p
cplx longitudinal_amplitude(const std::array<Spectrum, 6>& s, std::size_t p, const Eigen::Vector3d& k)
{
    const double kk = k.squaredNorm();
    if (kk == 0.0)
        return 0.0;
    cplx acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            acc += k[i] * k[j] * s[static_cast<std::size_t>(SymTensorField3D::slot(i, j))][p];
    return 1.5 * acc / kk;
}

} // namespace

GridField3D longitudinal_potential(const SymTensorField3D& pi, const Parallelism& policy)
{
    require_traceless(pi);
    auto s = forward_tensor(pi);
    Spectrum a(pi.grid.points());
    detail::for_each_mode(pi.grid, policy,
                          [&](std::size_t p, const detail::Wave& w) { a[p] = longitudinal_amplitude(s, p, w.k); });
    GridField3D out(pi.grid, 1);
    detail::inverse(pi.grid, a, out.component(0));
    return out;
}

TensorParts decompose_tensor(const SymTensorField3D& pi, const Parallelism& policy)
{
    require_traceless(pi);
    const Grid3D& g = pi.grid;
    auto s = forward_tensor(pi);
    std::array<Spectrum, 6> par{Spectrum(g.points()), Spectrum(g.points()), Spectrum(g.points()),
                                Spectrum(g.points()), Spectrum(g.points()), Spectrum(g.points())};
    std::array<Spectrum, 6> rot{Spectrum(g.points()), Spectrum(g.points()), Spectrum(g.points()),
                                Spectrum(g.points()), Spectrum(g.points()), Spectrum(g.points())};
    Spectrum a(g.points());

    detail::for_each_mode(g, policy, [&](std::size_t p, const detail::Wave& w) {
        const double kk = w.k.squaredNorm();
        if (kk == 0.0) {
            for (std::size_t c = 0; c < 6; ++c)
                par[c][p] = rot[c][p] = 0.0;
            a[p] = 0.0;
            return;
        }
        const Eigen::Vector3d kh = w.k / std::sqrt(kk);
        const cplx amp = longitudinal_amplitude(s, p, w.k);
        a[p] = amp;
        // u_j = khat_i Pi_ij, then its part transverse to khat
        cplx u[3];
        for (int j = 0; j < 3; ++j) {
            u[j] = 0.0;
            for (int i = 0; i < 3; ++i)
                u[j] += kh[i] * s[static_cast<std::size_t>(SymTensorField3D::slot(i, j))][p];
        }
        const cplx ku = kh[0] * u[0] + kh[1] * u[1] + kh[2] * u[2];
        cplx up[3];
        for (int j = 0; j < 3; ++j)
            up[j] = u[j] - kh[j] * ku;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                const auto slot = static_cast<std::size_t>(SymTensorField3D::slot(i, j));
                par[slot][p] = (kh[i] * kh[j] - (i == j ? 1.0 / 3.0 : 0.0)) * amp;
                rot[slot][p] = kh[i] * up[j] + kh[j] * up[i];
            }
    });

    TensorParts out{SymTensorField3D(g), SymTensorField3D(g), SymTensorField3D(g), GridField3D(g, 1)};
    for (std::size_t c = 0; c < 6; ++c) {
        detail::inverse(g, par[c], out.parallel.comp[c].data());
        detail::inverse(g, rot[c], out.rotational.comp[c].data());
        for (std::size_t p = 0; p < g.points(); ++p)
            out.tt.comp[c][p] = pi.comp[c][p] - out.parallel.comp[c][p] - out.rotational.comp[c][p];
    }
    detail::inverse(g, a, out.longitudinal_potential.component(0));
    return out;
}

} // namespace gie::fielddecomp
