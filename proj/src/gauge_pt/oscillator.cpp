#include "gie/gauge_pt.hpp"

#include "fock.hpp"
#include "gie/error.hpp"

#include <cmath>
#include <numbers>

namespace gie::gauge_pt {

Orientation parse_orientation(const std::string& s)
{
    if (s == "axial")
        return Orientation::axial;
    if (s == "transverse")
        return Orientation::transverse;
    throw ValidationError("orientation must be 'axial' or 'transverse', got '" + s + "'");
}

std::string to_string(Orientation o)
{
    return o == Orientation::axial ? "axial" : "transverse";
}

double OscillatorPair::kappa_from_charge(double q, double eps0)
{
    return q * q / (4.0 * std::numbers::pi * eps0);
}

double OscillatorPair::x0() const
{
    return std::sqrt(hbar / (2.0 * m * omega));
}

double OscillatorPair::effective_charge_radius() const
{
    return charge_radius > 0.0 ? charge_radius : d / 20.0;
}

Eigen::Vector3d OscillatorPair::axis() const
{
    return orientation == Orientation::axial ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
}

void OscillatorPair::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || !(v > 0.0))
            throw ValidationError(std::string(name) + " must be positive and finite");
    };
    positive(m, "m");
    positive(omega, "omega");
    positive(d, "d");
    positive(hbar, "hbar");
    positive(c, "c");
    if (!std::isfinite(kappa))
        throw ValidationError("coupling constant must be finite");
    if (!(charge_radius >= 0.0) || !std::isfinite(charge_radius))
        throw ValidationError("charge_radius must be non-negative");
    if (fock_cutoff < 4)
        throw ValidationError("fock_cutoff must be at least 4");
    if (fock_cutoff > 64)
        throw ValidationError("fock_cutoff above 64 is not supported");
}

namespace {

void require_dipole_regime(const OscillatorPair& pair)
{
    pair.validate();
    const double ratio = pair.d / pair.x0();
    if (ratio < kDipoleRatio)
        throw RegimeError("dipole regime violated: d / x0 = " + std::to_string(ratio) + " < " +
                          std::to_string(kDipoleRatio));
}

// Second-order term of kappa / |d e_z + (x_A - x_B) n|: axial -2 kappa/d^3,
// transverse +kappa/d^3 (coefficient of x_A x_B).
double geometric_coupling(double kappa, double d, Orientation o)
{
    const double d3 = d * d * d;
    return o == Orientation::axial ? -2.0 * kappa / d3 : kappa / d3;
}

} // namespace

double dipole_coupling(const OscillatorPair& pair)
{
    require_dipole_regime(pair);
    return geometric_coupling(pair.kappa, pair.d, pair.orientation);
}

double analog_gravity_coupling(const OscillatorPair& pair)
{
    require_dipole_regime(pair);
    return geometric_coupling(-pair.G * pair.m * pair.m, pair.d, pair.orientation);
}

OscillatorPair gravity_analog(const OscillatorPair& pair)
{
    OscillatorPair out = pair;
    out.kappa = -pair.G * pair.m * pair.m;
    return out;
}

namespace detail {

TwoOscillatorFock::TwoOscillatorFock(const OscillatorPair& pair)
    : cutoff(pair.fock_cutoff)
    , hbar_omega(pair.hbar * pair.omega)
{
    const Eigen::Index n = cutoff;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k)
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const double x0 = pair.x0();
    const std::complex<double> i(0.0, 1.0);
    x1 = x0 * (a + a.adjoint());
    p1 = i * (pair.m * pair.omega * x0) * (a.adjoint() - a);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    auto kron = [n](const Eigen::MatrixXcd& l, const Eigen::MatrixXcd& r) {
        Eigen::MatrixXcd out(n * n, n * n);
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = 0; q < n; ++q)
                out.block(p * n, q * n, n, n) = l(p, q) * r;
        return out;
    };
    xA = kron(x1, id);
    xB = kron(id, x1);
    pA = kron(p1, id);
    pB = kron(id, p1);
}

double TwoOscillatorFock::energy(Eigen::Index i) const
{
    const auto nA = i / cutoff, nB = i % cutoff;
    return hbar_omega * (static_cast<double>(nA + nB) + 1.0);
}

Eigen::VectorXcd TwoOscillatorFock::basis(int nA, int nB) const
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
    v(index(nA, nB)) = 1.0;
    return v;
}

} // namespace detail

EpsilonResult epsilon_from_coupling(const OscillatorPair& pair, double g, const std::string& method)
{
    require_dipole_regime(pair);
    const detail::TwoOscillatorFock fock(pair);
    const Eigen::VectorXcd psi0 = fock.basis(0, 0);
    const Eigen::VectorXcd psi1 = fock.basis(1, 1);
    const std::complex<double> element = g * psi1.dot(fock.xA * (fock.xB * psi0));
    const double denom = fock.energy(fock.index(0, 0)) - fock.energy(fock.index(1, 1));
    EpsilonResult r{element / denom, method, {}};
    if (std::abs(r.value) >= kPerturbativeLimit)
        throw RegimeError("perturbative regime violated: |epsilon| = " + std::to_string(std::abs(r.value)));
    r.diagnostics["coupling_g"] = g;
    r.diagnostics["x0"] = pair.x0();
    r.diagnostics["fock_cutoff"] = pair.fock_cutoff;
    return r;
}

EpsilonResult epsilon_coulomb(const OscillatorPair& pair)
{
    return epsilon_from_coupling(pair, dipole_coupling(pair), "coulomb");
}

EpsilonResult epsilon_analog_gravity(const OscillatorPair& pair)
{
    return epsilon_from_coupling(pair, analog_gravity_coupling(pair), "analog-gravity");
}

} // namespace gie::gauge_pt
