#include "gie/pathint.hpp"

#include "gie/csv.hpp"
#include "gie/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace gie::pathint {
namespace {

void check_window(double hbar, double t0, double t1)
{
    if (!(hbar > 0.0))
        throw ValidationError("hbar must be positive");
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1))
        throw ValidationError("integration window needs t0 < t1");
}

std::vector<double> window_points(double t0, double t1, std::vector<double> cuts)
{
    std::vector<double> pts{t0};
    std::sort(cuts.begin(), cuts.end());
    for (double c : cuts)
        if (c > t0 && c < t1 && c > pts.back())
            pts.push_back(c);
    pts.push_back(t1);
    return pts;
}

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

// One fixed 31-point rule on [a, b]. Boost reports the error of the rule on
// the reference interval, so it is rescaled here.
double gk_rule(const std::function<double(double)>& f, double a, double b, double& err, double& l1)
{
    const double r = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
    err *= 0.5 * (b - a);
    return r;
}

double adapt(const std::function<double(double)>& f, double a, double b, double r, double err, double l1,
             unsigned depth, double abs_tol, const QuadratureOptions& q, double& err_acc, double& l1_acc)
{
    if (depth >= q.max_depth || err <= std::max(abs_tol, q.rel_tol * std::abs(r))) {
        err_acc += err;
        l1_acc += l1;
        return r;
    }
    const double m = 0.5 * (a + b);
    double el, ll, er, lr;
    const double rl = gk_rule(f, a, m, el, ll);
    const double rr = gk_rule(f, m, b, er, lr);
    return adapt(f, a, m, rl, el, ll, depth + 1, 0.5 * abs_tol, q, err_acc, l1_acc) +
           adapt(f, m, b, rr, er, lr, depth + 1, 0.5 * abs_tol, q, err_acc, l1_acc);
}

/// Piecewise adaptive Gauss-Kronrod over the breakpoints. The absolute
/// tolerance is shared out by piece length from a first coarse pass.
double integrate(const std::function<double(double)>& f, const std::vector<double>& pts, const QuadratureOptions& q,
                 const std::string& what)
{
    const std::size_t np = pts.size() - 1;
    std::vector<double> r(np), e(np), l(np);
    double l1_coarse = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        r[i] = gk_rule(f, pts[i], pts[i + 1], e[i], l[i]);
        l1_coarse += l[i];
    }
    const double span = pts.back() - pts.front();
    double total = 0.0, err_total = 0.0, l1_total = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        const double share = q.rel_tol * l1_coarse * (pts[i + 1] - pts[i]) / span;
        total += adapt(f, pts[i], pts[i + 1], r[i], e[i], l[i], 0, share, q, err_total, l1_total);
    }
    if (!std::isfinite(total) || err_total > q.accept_tol * l1_total)
        throw ConvergenceError("quadrature for " + what + " did not reach the requested accuracy (error estimate " +
                               format_double(err_total) + ", L1 " + format_double(l1_total) + ")");
    return total;
}

double separation(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double t)
{
    const double r = (a - b).norm();
    if (!(r > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "worldlines intersect at t = " << t;
        throw ValidationError(os.str());
    }
    return r;
}

/// Field time at which the light cone from the source kink (tk, xk) reaches
/// the field worldline; fixed-point iteration contracts because v < c.
double cone_arrival(const Worldline& field, double tk, const Eigen::Vector3d& xk, int direction)
{
    const double c = field.c();
    double t = tk - direction * (field.position(tk) - xk).norm() / c;
    for (int it = 0; it < 200; ++it) {
        const double next = tk - direction * (field.position(t) - xk).norm() / c;
        if (std::abs(next - t) <= 1e-15 * std::max(1.0, std::abs(t)))
            return next;
        t = next;
    }
    throw ConvergenceError("light-cone arrival time did not converge for worldline '" + field.label() + "'");
}

/// integral over [t0, t1] of 1 / (R (1 - sign n.v / c)) with the field point
/// on `field` at time t and the source on `source` at its light-cone time.
double cone_integral(const Worldline& field, const Worldline& source, double t0, double t1, int direction,
                     const QuadratureOptions& q)
{
    std::vector<double> cuts = field.kinks();
    for (double tk : source.kinks())
        cuts.push_back(cone_arrival(field, tk, source.position(tk), direction));
    const double c = source.c();
    const double sgn = -direction; // +1 retarded, -1 advanced
    auto f = [&](double t) {
        const Eigen::Vector3d x = field.position(t);
        const auto e = source.light_cone(t, x, direction);
        const Eigen::Vector3d dvec = x - e.x;
        const double r = separation(x, e.x, t);
        const double nv = dvec.dot(e.v) / r;
        return 1.0 / (r * (1.0 - sgn * nv / c));
    };
    return integrate(f, window_points(t0, t1, cuts), q, "light-cone kernel on '" + field.label() + "'");
}

} // namespace

double instantaneous_phase(const WorldlinePair& pair, double coupling, double hbar, double t0, double t1,
                           const QuadratureOptions& q)
{
    check_window(hbar, t0, t1);
    std::vector<double> cuts = pair.first.kinks();
    for (double t : pair.second.kinks())
        cuts.push_back(t);
    auto f = [&](double t) {
        const Eigen::Vector3d a = pair.first.position(t);
        const Eigen::Vector3d b = pair.second.position(t);
        return 1.0 / separation(a, b, t);
    };
    const double integral = integrate(f, window_points(t0, t1, cuts), q, "instantaneous kernel");
    return -(coupling * integral) / hbar;
}

double lightcone_phase(const WorldlinePair& pair, double coupling, double hbar, double t0, double t1, int direction,
                       const QuadratureOptions& q)
{
    check_window(hbar, t0, t1);
    // average over which particle sits at the field point
    const double ab = cone_integral(pair.first, pair.second, t0, t1, direction, q);
    const double ba = cone_integral(pair.second, pair.first, t0, t1, direction, q);
    const double integral = 0.5 * (ab + ba);
    return -(coupling * integral) / hbar;
}

double retarded_phase(const WorldlinePair& pair, double coupling, double hbar, double t0, double t1,
                      const QuadratureOptions& q)
{
    return lightcone_phase(pair, coupling, hbar, t0, t1, -1, q);
}

double branch_phase(const WorldlinePair& pair, Kernel k, double coupling, double hbar, double t0, double t1,
                    const QuadratureOptions& q)
{
    switch (k) {
    case Kernel::instantaneous:
        return instantaneous_phase(pair, coupling, hbar, t0, t1, q);
    case Kernel::retarded:
        return retarded_phase(pair, coupling, hbar, t0, t1, q);
    case Kernel::symmetric: {
        const double r = lightcone_phase(pair, coupling, hbar, t0, t1, -1, q);
        const double a = lightcone_phase(pair, coupling, hbar, t0, t1, +1, q);
        return 0.5 * (r + a);
    }
    }
    throw ValidationError("unknown kernel");
}

} // namespace gie::pathint
