#include "gie/cosmo.hpp"

#include "gie/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gie::cosmo {

std::vector<SpectrumRow> power_spectrum(const std::vector<double>& ks_in, const Background& bg,
                                        const SpectrumOptions& opts, const Parallelism& policy)
{
    bg.validate();
    if (!(opts.eval_ktau > 0.0) || !(opts.eval_ktau < 1.0))
        throw ValidationError("evaluation time must be after horizon exit: need 0 < |k tau_eval| < 1");
    std::vector<double> ks = ks_in;
    std::sort(ks.begin(), ks.end());
    for (double k : ks) {
        if (!(k > 0.0) || !std::isfinite(k))
            throw ValidationError("wavenumbers must be positive");
        const double te = -opts.eval_ktau / k;
        if (te > bg.tau_f || te < bg.tau_i)
            throw ValidationError("evaluation time for k = " + std::to_string(k) + " lies outside the conformal-time grid");
        if (std::abs(k * bg.tau_i) < kMinStartKTau * (1.0 - 1e-12))
            throw ValidationError("Bunch-Davies start needs |k tau_i| >= 100 for every k");
    }

    std::vector<SpectrumRow> rows(ks.size());
    parallel_for(ks.size(), policy, [&](std::size_t i) {
        const double k = ks[i];
        const double te = -opts.eval_ktau / k;
        ModeOptions mo = opts.mode;
        mo.samples = std::max(mo.samples, 2);
        const ModeFunction mf = evolve_mode(k, bg, mo, {te});
        const auto it = std::find(mf.tau.begin(), mf.tau.end(), te);
        if (it == mf.tau.end())
            throw std::logic_error("evaluation sample missing from mode output");
        const std::size_t j = static_cast<std::size_t>(it - mf.tau.begin());
        const cplx v = mf.v[j], dv = mf.dv[j];
        const double norm = k * k * k / (2.0 * std::numbers::pi * std::numbers::pi);
        const double z = bg.z(te);
        const double hz = bg.conformal_hubble(te); // z'/z, z is proportional to a
        // (v/z)' = (v' - (z'/z) v) / z
        const cplx dvz = (dv - hz * v) / z;
        const cplx phi = -(bg.phi_eps() * bg.conformal_hubble(te) / (k * k)) * dvz;
        rows[i] = {k, norm * std::norm(v), norm * std::norm(v) / (z * z), norm * std::norm(phi),
                   mf.max_wronskian_dev};
    });
    return rows;
}

Table spectrum_table(const std::vector<SpectrumRow>& rows)
{
    Table t;
    t.header = {"k", "P_v", "P_vz", "P_phi", "wronskian_dev"};
    for (const auto& r : rows)
        t.rows.push_back({r.k, r.p_v, r.p_vz, r.p_phi, r.wronskian_dev});
    return t;
}

double spectral_tilt(const std::vector<double>& ks, const std::vector<double>& ps)
{
    if (ks.size() != ps.size())
        throw ValidationError("k and P lists differ in length");
    if (ks.size() < 5)
        throw ValidationError("insufficient dynamic range: need at least 5 k-points");
    double kmin = ks.front(), kmax = ks.front();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (!(ks[i] > 0.0) || !(ps[i] > 0.0))
            throw ValidationError("tilt fit needs positive k and P");
        kmin = std::min(kmin, ks[i]);
        kmax = std::max(kmax, ks[i]);
    }
    if (std::log10(kmax / kmin) < 1.0 - 1e-12)
        throw ValidationError("insufficient dynamic range: k-points must span a decade");
    const double n = static_cast<double>(ks.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        mx += std::log(ks[i]);
        my += std::log(ps[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double dx = std::log(ks[i]) - mx;
        sxy += dx * (std::log(ps[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<double> log_ks(double kmin, double kmax, int nk)
{
    if (nk < 0)
        throw ValidationError("number of modes must be non-negative");
    if (nk > 0 && (!(kmin > 0.0) || !(kmax >= kmin)))
        throw ValidationError("need 0 < kmin <= kmax");
    std::vector<double> ks;
    for (int i = 0; i < nk; ++i) {
        const double f = nk == 1 ? 0.0 : static_cast<double>(i) / (nk - 1);
        ks.push_back(kmin * std::pow(kmax / kmin, f));
    }
    if (nk > 1)
        ks.back() = kmax;
    return ks;
}

} // namespace gie::cosmo
