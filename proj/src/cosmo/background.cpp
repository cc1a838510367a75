#include "gie/cosmo.hpp"

#include "gie/error.hpp"

#include <cmath>

namespace gie::cosmo {

Model parse_model(const std::string& s)
{
    if (s == "desitter")
        return Model::desitter;
    if (s == "powerlaw")
        return Model::powerlaw;
    throw ValidationError("model must be 'desitter' or 'powerlaw', got '" + s + "'");
}

std::string to_string(Model m)
{
    return m == Model::desitter ? "desitter" : "powerlaw";
}

void Background::validate() const
{
    if (!(H0 > 0.0) || !std::isfinite(H0))
        throw ValidationError("H0 must be positive");
    if (!(eps >= 0.0) || !(eps < 1.0))
        throw ValidationError("slow-roll parameter must satisfy 0 <= eps < 1");
    if (model == Model::powerlaw && !(eps > 0.0))
        throw ValidationError("power-law background needs eps > 0");
    if (!(tau_i < tau_f) || !(tau_f < 0.0))
        throw ValidationError("conformal-time grid needs tau_i < tau_f < 0");
}

double Background::p() const
{
    return model == Model::desitter ? -1.0 : 1.0 / (eps - 1.0);
}

double Background::nu() const
{
    return 0.5 - p();
}

double Background::a(double tau) const
{
    return std::pow(-H0 * tau, p());
}

double Background::conformal_hubble(double tau) const
{
    return p() / tau;
}

double Background::z(double tau) const
{
    return eps > 0.0 ? a(tau) * std::sqrt(2.0 * eps) : a(tau);
}

double Background::zpp_over_z(double tau) const
{
    const double pp = p();
    return pp * (pp - 1.0) / (tau * tau);
}

double Background::analytic_tilt() const
{
    // P_{v/z} ~ k^{3 - 2 nu}
    return 3.0 - 2.0 * nu();
}

Background background_for(Model m, double H0, double eps, double kmin, double kmax, double eval_ktau,
                          double start_ktau)
{
    if (!(kmin > 0.0) || !(kmax >= kmin))
        throw ValidationError("need 0 < kmin <= kmax");
    if (!(eval_ktau > 0.0) || !(eval_ktau < 1.0))
        throw ValidationError("evaluation |k tau| must lie in (0, 1), i.e. after horizon exit");
    Background bg;
    bg.model = m;
    bg.H0 = H0;
    bg.eps = eps;
    bg.tau_i = -start_ktau / kmin;
    bg.tau_f = -0.5 * eval_ktau / kmax;
    bg.validate();
    return bg;
}

} // namespace gie::cosmo
