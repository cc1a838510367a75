// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// Every criterion also returns a digest of all numbers it computed; the
// determinism criterion recomputes everything and compares digests.

#include "gie/cosmo.hpp"
#include "gie/csv.hpp"
#include "gie/fielddecomp.hpp"
#include "gie/gauge_pt.hpp"
#include "gie/interferometer.hpp"
#include "gie/parallel.hpp"
#include "gie/pathint.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gie;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string measured;
    std::string digest;
};

// Collects measurements for the summary line and every computed value
// for the determinism digest.
class Recorder {
public:
    void value(double v) { digest_ << format_double(v) << '\n'; }
    void values(const std::vector<double>& v)
    {
        for (double x : v)
            value(x);
    }
    void table(const Table& t) { digest_ << t.to_csv(); }
    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass_ = false;
            failures_ += (failures_.empty() ? "" : "; ") + what;
        }
    }
    void measure(const std::string& name, double v)
    {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s%s=%.3g", measured_.empty() ? "" : " ", name.c_str(), v);
        measured_ += buf;
        value(v);
    }
    Outcome finish() const
    {
        Outcome o;
        o.pass = pass_;
        o.measured = measured_ + (failures_.empty() ? "" : " [failed: " + failures_ + "]");
        o.digest = digest_.str();
        return o;
    }

private:
    bool pass_ = true;
    std::string measured_, failures_;
    std::ostringstream digest_;
};

// ---------------------------------------------------------------- 1
Outcome phase_formula(const Parallelism&)
{
    using Big = boost::multiprecision::cpp_bin_float_50;
    Recorder r;
    std::mt19937_64 rng(20240101);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        interferometer::InterferometerConfig c;
        c.m1 = std::pow(10.0, -16.0 + 4.0 * u(rng));
        c.m2 = std::pow(10.0, -16.0 + 4.0 * u(rng));
        c.d = std::pow(10.0, -5.0 + 2.0 * u(rng));
        c.delta_x = c.d * (1e-3 + 0.998 * u(rng));
        c.t = 0.1 + 10.0 * u(rng);
        const auto ph = interferometer::branch_phases(c);
        const Big p = Big(c.G) * Big(c.m1) * Big(c.m2) * Big(c.t) / Big(c.hbar);
        const Big d(c.d), dx(c.delta_x);
        const double op = Big(p * (1 / (d + dx) - 1 / d)).convert_to<double>();
        const double om = Big(p * (1 / (d - dx) - 1 / d)).convert_to<double>();
        worst = std::max({worst, std::abs(ph.phi_plus / op - 1.0), std::abs(ph.phi_minus / om - 1.0)});
        r.values({ph.phi_plus, ph.phi_minus});
    }
    r.measure("max_rel_err", worst);
    r.require(worst <= 1e-12, "relative error above 1e-12");
    return r.finish();
}

// ---------------------------------------------------------------- 2
Outcome entanglement_condition(const Parallelism&)
{
    Recorder r;
    interferometer::InterferometerConfig c;
    c.m1 = c.m2 = c.G = c.hbar = 1.0;
    c.d = 2.0;
    c.delta_x = 1.0;
    const double rate = 1.0 / 3.0; // phi+ + phi- per unit time
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        c.t = (4.0 * kPi * (i + 1) / 100.0) / rate;
        const auto ph = interferometer::branch_phases(c);
        const double sum = ph.phi_plus + ph.phi_minus;
        const double n = interferometer::branch_negativity(interferometer::evolve_branches(c));
        worst = std::max(worst, std::abs(n - std::abs(std::sin(0.5 * sum)) / 2.0));
        r.value(n);
    }
    c.t = kPi / rate;
    const double at_pi = interferometer::branch_negativity(interferometer::evolve_branches(c));
    double at_2pin = 0.0;
    for (int n = 1; n <= 3; ++n) {
        c.t = 2.0 * kPi * n / rate;
        at_2pin = std::max(at_2pin, interferometer::branch_negativity(interferometer::evolve_branches(c)));
    }
    r.measure("max_dev", worst);
    r.measure("N(pi)", at_pi);
    r.measure("N(2pi n)", at_2pin);
    r.require(worst <= 1e-10, "sweep deviation above 1e-10");
    r.require(std::abs(at_pi - 0.5) <= 1e-10, "negativity at pi is not 0.5");
    r.require(at_2pin <= 1e-10, "negativity at 2 pi n is not 0");
    return r.finish();
}

gauge_pt::OscillatorPair toy_pair()
{
    gauge_pt::OscillatorPair p;
    p.m = p.omega = p.hbar = p.G = 1.0;
    p.kappa = 1.0;
    p.d = 10.0;
    p.c = 500.0;
    return p;
}

// ---------------------------------------------------------------- 3
Outcome gauge_equivalence(const Parallelism& policy)
{
    Recorder r;
    const auto pair = toy_pair();
    std::vector<gauge_pt::ModeGrid> grids;
    for (const char* l : {"coarse", "medium", "fine"})
        grids.push_back(gauge_pt::make_mode_grid(pair, gauge_pt::grid_spec(l)));
    const auto rep = gauge_pt::gauge_equivalence_report(pair, grids, {}, policy);
    gauge_pt::LorentzOptions ablate;
    ablate.drop_scalar = true;
    const auto abl = gauge_pt::gauge_equivalence_report(pair, grids, ablate, policy);
    r.table(rep.table());
    r.table(abl.table());
    r.measure("final_rel_err", rep.final_error);
    r.measure("ablation_dev", abl.final_error);
    r.require(rep.final_error <= 0.05, "finest grid error above 0.05");
    r.require(rep.monotone, "convergence table not monotone");
    r.require(abl.final_error > 0.5, "scalar-photon ablation within 50%");
    return r.finish();
}

// ---------------------------------------------------------------- 4
Outcome coupling_analogy(const Parallelism&)
{
    Recorder r;
    double worst = 0.0;
    for (auto o : {gauge_pt::Orientation::axial, gauge_pt::Orientation::transverse}) {
        for (double m : {0.5, 1.0, 2.0}) {
            auto p = toy_pair();
            p.orientation = o;
            p.m = m;
            p.G = 0.3;
            const auto grav = gauge_pt::epsilon_analog_gravity(p);
            auto sub = p;
            sub.kappa = -p.G * p.m * p.m;
            const auto coul = gauge_pt::epsilon_coulomb(sub);
            worst = std::max(worst, std::abs(grav.value / coul.value - 1.0));
            r.values({grav.value.real(), coul.value.real()});
        }
    }
    r.measure("max_rel_err", worst);
    r.require(worst <= 1e-12, "substitution mismatch above 1e-12");
    return r.finish();
}

// ---------------------------------------------------------------- 5
Outcome decomposition_suite(const Parallelism& policy)
{
    namespace fd = fielddecomp;
    Recorder r;
    const fd::Grid3D g{64, 1.0};
    const int max_mode = 4;
    const double kscale = 2.0 * kPi * max_mode * std::sqrt(3.0) / g.L;
    double proj = 0.0, tt = 0.0, solve = 0.0;
    auto track = [](double& worst, double v) { worst = std::max(worst, v); };

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto f = fd::random_bandlimited_vector(g, seed, max_mode);
        const double fm = f.max_abs();
        const auto vp = fd::helmholtz_vector(f, policy);
        track(proj, fd::max_abs_diff(fd::axpby(1.0, vp.parallel, 1.0, vp.perp), f) / fm);
        const auto again = fd::helmholtz_vector(vp.parallel, policy);
        track(proj, fd::max_abs_diff(again.parallel, vp.parallel) / fm);
        track(proj, again.perp.max_abs() / fm);

        const auto pi = fd::random_bandlimited_traceless(g, 1000 + seed, max_mode);
        const double m = pi.max_abs();
        const auto parts = fd::decompose_tensor(pi, policy);
        const auto sum = fd::axpby(1.0, fd::axpby(1.0, parts.parallel, 1.0, parts.rotational), 1.0, parts.tt);
        track(proj, fd::max_abs_diff(sum, pi) / m);
        const auto tt2 = fd::decompose_tensor(parts.tt, policy);
        track(proj, fd::max_abs_diff(tt2.tt, parts.tt) / m);
        track(proj, tt2.parallel.max_abs() / m);
        track(proj, tt2.rotational.max_abs() / m);
        const auto par2 = fd::decompose_tensor(parts.parallel, policy);
        track(proj, fd::max_abs_diff(par2.parallel, parts.parallel) / m);
        track(proj, par2.rotational.max_abs() / m);
        track(proj, par2.tt.max_abs() / m);
        const auto rot2 = fd::decompose_tensor(parts.rotational, policy);
        track(proj, fd::max_abs_diff(rot2.rotational, parts.rotational) / m);
        track(proj, rot2.parallel.max_abs() / m);
        track(proj, rot2.tt.max_abs() / m);

        track(tt, parts.tt.max_abs_trace() / m);
        track(tt, fd::tensor_divergence(parts.tt, policy).max_abs() / (m * kscale));
        r.values({vp.parallel.data[seed], vp.perp.data[seed], parts.tt.comp[0][seed], parts.parallel.comp[1][seed]});
    }

    // single-mode inversions
    const double G = 0.8, A = 1.7;
    const Eigen::Vector3d k = 2 * kPi / g.L * Eigen::Vector3d(1.0, 2.0, 3.0);
    fd::GridField3D src(g, 1), psi_exact(g, 1), phi_diff(g, 1);
    fd::GridField3D fperp(g, 3), w_exact(g, 3);
    fd::SymTensorField3D lon(g);
    const Eigen::Vector3d e = k.cross(Eigen::Vector3d::UnitX()).normalized(); // transverse polarization
    const Eigen::Matrix3d lon_pol = -(k * k.transpose() - Eigen::Matrix3d::Identity() * k.squaredNorm() / 3.0);
    for (std::size_t p = 0; p < g.points(); ++p) {
        const double cs = std::cos(k.dot(g.position(p)));
        src.data[p] = A * cs;
        psi_exact.data[p] = -4 * kPi * G * A * cs / k.squaredNorm();
        phi_diff.data[p] = -8 * kPi * G * A * cs;
        for (int c = 0; c < 3; ++c) {
            fperp.component(c)[p] = A * e[c] * cs;
            w_exact.component(c)[p] = -16 * kPi * G * A * e[c] * cs / k.squaredNorm();
        }
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                lon.comp[static_cast<std::size_t>(fd::SymTensorField3D::slot(i, j))][p] = A * lon_pol(i, j) * cs;
    }
    const auto psi = fd::solve_psi(src, G, policy);
    track(solve, fd::max_abs_diff(psi, psi_exact) / psi_exact.max_abs());
    const auto w = fd::solve_w(fperp, G, policy);
    track(solve, fd::max_abs_diff(w, w_exact) / w_exact.max_abs());
    const auto phi = fd::solve_phi(psi, lon, G, policy);
    track(solve, fd::max_abs_diff(fd::axpby(1.0, phi, -1.0, psi), phi_diff) / phi_diff.max_abs());
    r.values({psi.data[7], w.data[7], phi.data[7]});

    r.measure("projector_err", proj);
    r.measure("tt_err", tt);
    r.measure("solver_err", solve);
    r.require(proj <= 1e-10, "projector algebra above 1e-10");
    r.require(tt <= 1e-10, "TT part not transverse/traceless within 1e-10");
    r.require(solve <= 1e-10, "single-mode inversion above 1e-10");
    return r.finish();
}

// ---------------------------------------------------------------- 6
Outcome newtonian_reduction(const Parallelism& policy)
{
    Recorder r;
    const double d = 0.25;
    const auto rep = fielddecomp::newtonian_reduction_check(1.0, 1.0, d, 4.0 * d, {64, 128}, d / 10.0, 1.0, policy);
    r.table(rep.table());
    r.measure("rel_err_64", rep.cases[0].rel_error);
    r.measure("rel_err_128", rep.cases[1].rel_error);
    r.require(rep.cases[0].rel_error <= 0.02, "n = 64 error above 2%");
    r.require(rep.cases[1].rel_error < rep.cases[0].rel_error, "no improvement at n = 128");
    return r.finish();
}

// ---------------------------------------------------------------- 7
Outcome kernel_causality(const Parallelism& policy)
{
    Recorder r;
    bool bit_equal = true;
    for (double dx : {0.1, 0.5}) {
        const auto p = pathint::static_gie_protocol(1.0, dx, 3.0, -1.0, 1.0, 1.0);
        const auto a = pathint::branch_phases(p, pathint::Kernel::instantaneous, policy);
        const auto b = pathint::branch_phases(p, pathint::Kernel::retarded, policy);
        bit_equal = bit_equal && a == b;
        r.values({a[0], a[1], a[2], a[3]});
    }
    const auto ks = pathint::kernel_scaling(1.0, 0.5, {1e-4, 1e-3, 1e-2, 3e-2, 1e-1}, 1.0, 1, policy);
    r.table(ks.table());

    const auto sl = pathint::spacelike_family(1.0, 0.1, 0.9, -1.0, 1.0, 1.0);
    const auto ps = pathint::split_hold_merge(sl);
    const auto pa = pathint::split_hold_merge(pathint::adiabatic_family(1.0, 0.1, 1e-3, 1.0, -1.0, 1.0, 1.0));
    const double ret = pathint::entangling_phase(ps, pathint::Kernel::retarded, policy);
    const double inst = pathint::entangling_phase(ps, pathint::Kernel::instantaneous, policy);
    const double ref = pathint::entangling_phase(pa, pathint::Kernel::retarded, policy);
    r.values({ret, inst, ref});

    r.measure("exponent", ks.exponent);
    r.measure("spacelike_ratio", std::abs(ret) / std::abs(ref));
    r.measure("instantaneous_ratio", std::abs(inst) / std::abs(ref));
    r.require(bit_equal, "static kernels not bit-equal");
    r.require(std::abs(ks.exponent - 2.0) <= 0.2, "exponent outside 2.0 +- 0.2");
    r.require(pathint::is_spacelike(sl), "protocol not spacelike");
    r.require(std::abs(ret) <= 1e-6 * std::abs(ref), "retarded spacelike phase above 1e-6 of reference");
    r.require(inst != 0.0 && std::abs(inst) > 1e-6 * std::abs(ref), "instantaneous spacelike phase vanishes");
    return r.finish();
}

// ---------------------------------------------------------------- 8
Outcome cross_module(const Parallelism& policy)
{
    Recorder r;
    interferometer::InterferometerConfig c;
    c.m1 = c.m2 = 1e-14;
    c.d = 450e-6;
    c.delta_x = 250e-6;
    c.t = 2.5;
    const auto ph = interferometer::branch_phases(c);
    const auto p = pathint::static_gie_protocol(c.d, c.delta_x, c.t, -c.G * c.m1 * c.m2, c.hbar, 299792458.0);
    const double ent = pathint::entangling_phase(p, pathint::Kernel::retarded, policy);
    const double rel = std::abs(ent / -(ph.phi_plus + ph.phi_minus) - 1.0);
    r.values({ent, ph.phi_plus, ph.phi_minus});
    r.measure("rel_err", rel);
    r.require(rel <= 1e-9, "pathint vs interferometer above 1e-9");
    return r.finish();
}

// ---------------------------------------------------------------- 9
Outcome cosmology(const Parallelism& policy)
{
    Recorder r;
    const auto ks = cosmo::log_ks(1.0, 10.0, 32);

    const auto ds = cosmo::background_for(cosmo::Model::desitter, 1.0, 0.01, 1.0, 10.0);
    double analytic = 0.0, wronskian = 0.0;
    for (double k : {1.0, 10.0}) {
        const auto m = cosmo::evolve_mode(k, ds);
        for (std::size_t i = 0; i < m.tau.size(); ++i) {
            const double exact = (1.0 / (2.0 * k)) * (1.0 + 1.0 / (k * k * m.tau[i] * m.tau[i]));
            analytic = std::max(analytic, std::abs(std::norm(m.v[i]) / exact - 1.0));
        }
        wronskian = std::max(wronskian, m.max_wronskian_dev);
    }
    const auto rows = cosmo::power_spectrum(ks, ds, {}, policy);
    std::vector<double> pvz;
    for (const auto& row : rows) {
        pvz.push_back(row.p_vz);
        wronskian = std::max(wronskian, row.wronskian_dev);
    }
    // flatness per decade: fitted slope times one decade of ln k
    const double flat = std::abs(cosmo::spectral_tilt(ks, pvz)) * std::log(10.0);
    r.table(cosmo::spectrum_table(rows));

    const auto pl = cosmo::background_for(cosmo::Model::powerlaw, 1.0, 0.02, 1.0, 10.0);
    const auto prow = cosmo::power_spectrum(ks, pl, {}, policy);
    std::vector<double> ppl;
    for (const auto& row : prow) {
        ppl.push_back(row.p_vz);
        wronskian = std::max(wronskian, row.wronskian_dev);
    }
    const double tilt = cosmo::spectral_tilt(ks, ppl);
    const double tilt_err = std::abs(tilt / pl.analytic_tilt() - 1.0);
    r.table(cosmo::spectrum_table(prow));

    r.measure("analytic_err", analytic);
    r.measure("wronskian", wronskian);
    r.measure("flatness", flat);
    r.measure("tilt", tilt);
    r.measure("tilt_rel_err", tilt_err);
    r.require(analytic <= 1e-6, "de Sitter mode off the closed form by more than 1e-6");
    r.require(wronskian <= 1e-8, "Wronskian drift above 1e-8");
    r.require(flat <= 1e-3, "de Sitter spectrum not flat within 1e-3 per decade");
    r.require(tilt < 0.0, "tilt is not red");
    r.require(tilt_err <= 0.1, "tilt off the analytic value by more than 10%");
    return r.finish();
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome(const Parallelism&)> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "phase-formula", 1.0, phase_formula},
        {2, "entanglement-condition", 1.0, entanglement_condition},
        {3, "gauge-equivalence", 120.0, gauge_equivalence},
        {4, "coupling-analogy", 1.0, coupling_analogy},
        {5, "decomposition-suite", 60.0, decomposition_suite},
        {6, "newtonian-reduction", 120.0, newtonian_reduction},
        {7, "kernel-equivalence-causality", 60.0, kernel_causality},
        {8, "cross-module-oracle", 10.0, cross_module},
        {9, "cosmology", 30.0, cosmology},
    };
    const Parallelism policy = Parallelism::from_env(1);
    bool all = true;
    std::vector<std::string> digests;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run(policy);
        } catch (const std::exception& e) {
            o.pass = false;
            o.measured = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = o.pass && secs < c.limit_s;
        all = all && ok;
        digests.push_back(o.digest);
        std::printf("%s criterion %d %s: %s time=%.2fs limit=%.0fs\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    o.measured.c_str(), secs, c.limit_s);
        std::fflush(stdout);
    }

    // 10: every run above repeated with 1 and 8 workers, twice each
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<int> mismatched;
    try {
        for (std::size_t i = 0; i < criteria.size(); ++i) {
            const std::string a1 = criteria[i].run(Parallelism{1}).digest;
            const std::string a2 = criteria[i].run(Parallelism{1}).digest;
            const std::string b1 = criteria[i].run(Parallelism{8}).digest;
            const std::string b2 = criteria[i].run(Parallelism{8}).digest;
            if (a1.empty() || a1 != a2 || a1 != b1 || b1 != b2 || a1 != digests[i])
                mismatched.push_back(criteria[i].id);
        }
    } catch (const std::exception& e) {
        mismatched.push_back(-1);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string which;
    for (int id : mismatched)
        which += (which.empty() ? "" : ",") + std::to_string(id);
    const bool ok = mismatched.empty();
    all = all && ok;
    std::printf("%s criterion 10 determinism: runs=%zu mismatched=[%s] threads=1,8 time=%.2fs\n", ok ? "PASS" : "FAIL",
                4 * criteria.size(), which.c_str(), secs);
    return all ? 0 : 1;
}
