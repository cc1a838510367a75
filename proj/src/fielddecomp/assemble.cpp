#include "gie/error.hpp"
#include "spectral.hpp"

#include <cmath>

namespace gie::fielddecomp {

InteractionTerms assemble_interaction(const StressEnergy& t, const AssembleOptions& opts, const Parallelism& policy)
{
    if (t.t00.components != 1)
        throw ValidationError("T00 must be a scalar field");
    const Grid3D& g = t.t00.grid;
    g.validate();
    t.t00.require_finite("T00");
    const bool has_t0i = !t.t0i.data.empty();
    const bool has_tij = !t.tij.comp[0].empty();
    const bool has_stt = !t.s_tt.comp[0].empty();
    if (has_t0i && (t.t0i.grid != g || t.t0i.components != 3))
        throw ValidationError("T0i must be a vector field on the T00 grid");
    if (has_tij && t.tij.grid != g)
        throw ValidationError("Tij must live on the T00 grid");
    if (has_stt && t.s_tt.grid != g)
        throw ValidationError("s_TT must live on the T00 grid");
    if (has_t0i)
        t.t0i.require_finite("T0i");
    if (has_tij)
        t.tij.require_finite("Tij");
    if (has_stt)
        t.s_tt.require_finite("s_TT");

    // Conservation: with a static density, d_i T^{0i} = 0.
    if (has_t0i) {
        const double scale = t.t0i.max_abs();
        if (opts.static_mode) {
            if (scale > 0.0)
                throw ValidationError("static configuration requires T0i = 0 (max |T0i| = " + std::to_string(scale) +
                                      ")");
        } else if (scale > 0.0) {
            const GridField3D div = divergence(t.t0i, policy);
            const double rel = div.max_abs() * g.spacing() / scale;
            if (rel > opts.conservation_tolerance)
                throw ValidationError("momentum density is not conserved: max |div T0i| h / max |T0i| = " +
                                      std::to_string(rel));
        }
    }

    InteractionTerms out;
    const double dv = g.cell_volume();
    const double volume = g.L * g.L * g.L;

    // Mean-subtracted density; the torus cannot hold a monopole.
    GridField3D rho = t.t00;
    out.subtracted_mean = rho.mean();
    out.subtracted_mass = out.subtracted_mean * volume;
    for (double& v : rho.data)
        v -= out.subtracted_mean;

    // Newtonian sector: -(G/2) int int T00(r') (T00 + T^k_k - 2 Pi_par)(r) / |r - r'|
    GridField3D weight = rho;
    if (has_tij) {
        const GridField3D tr = t.tij.trace();
        const GridField3D a = longitudinal_potential(t.tij.traceless(), policy);
        const double tr_mean = tr.mean();
        for (std::size_t p = 0; p < g.points(); ++p)
            weight.data[p] += (tr.data[p] - tr_mean) - 2.0 * a.data[p];
    }
    out.newtonian = -0.5 * opts.G * coulomb_double_integral(rho, weight, policy);

    // Frame dragging: 2G int int f_perp(r') . T^{0i}(r) / |r - r'|
    if (has_t0i) {
        const VectorParts parts = helmholtz_vector(t.t0i, policy);
        GridField3D fp = parts.perp;
        for (int c = 0; c < 3; ++c) {
            const double m = fp.mean(c);
            for (std::size_t p = 0; p < g.points(); ++p)
                fp.component(c)[p] -= m;
        }
        out.frame_dragging = 2.0 * opts.G * coulomb_double_integral(fp, t.t0i, policy);
    }

    // Radiation: -int s^TT_ij T^ij
    if (has_stt && has_tij) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const auto& s = t.s_tt.comp[static_cast<std::size_t>(SymTensorField3D::slot(i, j))];
                const auto& tt = t.tij.comp[static_cast<std::size_t>(SymTensorField3D::slot(i, j))];
                acc += deterministic_sum(g.points(), policy, [&](std::size_t p) { return s[p] * tt[p]; });
            }
        out.radiation = -acc * dv;
    }

    out.total = out.radiation + out.frame_dragging + out.newtonian;
    return out;
}

} // namespace gie::fielddecomp
