#include "gie/cosmo.hpp"

#include "gie/error.hpp"

#include <boost/math/special_functions/hankel.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace gie::cosmo {

namespace odeint = boost::numeric::odeint;
// Re v, Im v, Re v', Im v'. Extended precision: late-time |v||v'| reaches ~1e9 and
// the Wronskian is a difference of two such products, so doubles cannot resolve 1e-8.
using Real = long double;
using State = std::array<Real, 4>;

void bunch_davies(double k, const Background& bg, double tau, cplx& v, cplx& dv)
{
    const double nu = bg.nu();
    const double x = -k * tau;
    const double s = std::sqrt(-tau);
    const cplx pre = 0.5 * std::sqrt(std::numbers::pi) * std::polar(1.0, (nu + 0.5) * std::numbers::pi / 2.0);
    const cplx h = boost::math::cyl_hankel_1(nu, x);
    const cplx hm = boost::math::cyl_hankel_1(nu - 1.0, x);
    const cplx hprime = hm - (nu / x) * h;
    v = pre * s * h;
    dv = pre * (-0.5 / s * h - k * s * hprime);
}

namespace {

struct MsRhs {
    double k2;
    const Background* bg;
    void operator()(const State& y, State& dy, Real tau) const
    {
        const Real m = k2 - static_cast<Real>(bg->zpp_over_z(static_cast<double>(tau)));
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = -m * y[0];
        dy[3] = -m * y[1];
    }
};

double wronskian_dev(const State& y)
{
    // v dv* - v* dv = 2i Im(v dv*), normalised to i
    const Real im = 2.0L * (y[1] * y[2] - y[0] * y[3]);
    return static_cast<double>(std::abs(im - 1.0L));
}

State pack(cplx v, cplx dv)
{
    return {v.real(), v.imag(), dv.real(), dv.imag()};
}

auto make_stepper(double k, const ModeOptions& opts)
{
    if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0))
        throw ValidationError("integrator tolerances must be positive");
    return odeint::make_controlled<odeint::runge_kutta_fehlberg78<State, Real, State, Real>>(
        static_cast<Real>(opts.abs_tol / std::sqrt(2.0 * k)), static_cast<Real>(opts.rel_tol));
}

} // namespace

void propagate(double k, const Background& bg, double tau0, cplx v0, cplx dv0, double tau1, cplx& v1, cplx& dv1,
               const ModeOptions& opts, long* steps)
{
    bg.validate();
    if (!(k > 0.0))
        throw ValidationError("wavenumber must be positive");
    if (!(tau0 < 0.0) || !(tau1 < 0.0))
        throw ValidationError("conformal times must be negative");
    State y = pack(v0, dv0);
    long n = 0;
    if (tau1 != tau0) {
        auto stepper = make_stepper(k, opts);
        const Real dt0 = (static_cast<Real>(tau1) - tau0) * 1e-4L;
        try {
            n = static_cast<long>(odeint::integrate_adaptive(stepper, MsRhs{k * k, &bg}, y, static_cast<Real>(tau0),
                                                             static_cast<Real>(tau1), dt0));
        } catch (const std::exception& e) {
            throw ConvergenceError(std::string("mode integration failed (step-size underflow): ") + e.what());
        }
    }
    v1 = {static_cast<double>(y[0]), static_cast<double>(y[1])};
    dv1 = {static_cast<double>(y[2]), static_cast<double>(y[3])};
    if (steps)
        *steps = n;
}

ModeFunction evolve_mode(double k, const Background& bg, const ModeOptions& opts,
                         const std::vector<double>& extra_times)
{
    bg.validate();
    if (!(k > 0.0) || !std::isfinite(k))
        throw ValidationError("wavenumber must be positive");
    if (std::abs(k * bg.tau_i) < kMinStartKTau * (1.0 - 1e-12))
        throw ValidationError("Bunch-Davies start needs |k tau_i| >= 100, got " + std::to_string(std::abs(k * bg.tau_i)));
    if (opts.samples < 2)
        throw ValidationError("need at least 2 samples");

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(opts.samples) + extra_times.size());
    const double li = std::log(-bg.tau_i), lf = std::log(-bg.tau_f);
    for (int i = 0; i < opts.samples; ++i) {
        const double f = static_cast<double>(i) / (opts.samples - 1);
        times.push_back(-std::exp(li + f * (lf - li)));
    }
    times.front() = bg.tau_i;
    times.back() = bg.tau_f;
    for (double t : extra_times) {
        if (!(t >= bg.tau_i) || !(t <= bg.tau_f))
            throw ValidationError("sample time outside the conformal-time grid");
        times.push_back(t);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    ModeFunction mf;
    mf.k = k;
    cplx v, dv;
    bunch_davies(k, bg, bg.tau_i, v, dv);
    State y = pack(v, dv);

    auto stepper = make_stepper(k, opts);
    const Real dt0 = (static_cast<Real>(bg.tau_f) - bg.tau_i) * 1e-6L;
    const std::vector<Real> ltimes(times.begin(), times.end()); // exact, so samples map back to the same doubles
    auto observer = [&](const State& s, Real t) {
        mf.tau.push_back(static_cast<double>(t));
        mf.v.emplace_back(static_cast<double>(s[0]), static_cast<double>(s[1]));
        mf.dv.emplace_back(static_cast<double>(s[2]), static_cast<double>(s[3]));
        mf.max_wronskian_dev = std::max(mf.max_wronskian_dev, wronskian_dev(s));
    };
    try {
        mf.steps = static_cast<long>(
            odeint::integrate_times(stepper, MsRhs{k * k, &bg}, y, ltimes.begin(), ltimes.end(), dt0, observer));
    } catch (const std::exception& e) {
        throw ConvergenceError(std::string("mode integration failed (step-size underflow): ") + e.what());
    }
    for (const auto& c : mf.v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw ConvergenceError("mode function became non-finite");
    return mf;
}

} // namespace gie::cosmo
