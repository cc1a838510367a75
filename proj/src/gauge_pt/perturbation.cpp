#include "gie/gauge_pt.hpp"

#include "fock.hpp"
#include "gie/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace gie::gauge_pt {
namespace {

using cplx = std::complex<double>;

/// Transverse basis orthogonal to khat, chosen deterministically.
std::array<Eigen::Vector3d, 2> transverse_basis(const Eigen::Vector3d& khat)
{
    Eigen::Vector3d ref = Eigen::Vector3d::UnitZ();
    if (std::abs(khat.dot(ref)) > 0.9)
        ref = Eigen::Vector3d::UnitX();
    const Eigen::Vector3d e1 = ref.cross(khat).normalized();
    return {e1, khat.cross(e1)};
}

struct Vertex {
    cplx g;       // emission coefficient per unit (q N_k), without the site phase
    bool momentum; // couples through p (true) or x (false)
};

/// Dipole vertex of oscillator charge with polarization `pol` of mode k.
/// Scalar: q x n.grad(phi); others: -q (p/m) n.A.
Vertex vertex(const OscillatorPair& pair, const Eigen::Vector3d& k, Polarization pol)
{
    const Eigen::Vector3d n = pair.axis();
    const Eigen::Vector3d khat = k.normalized();
    switch (pol) {
    case Polarization::scalar:
        return {cplx(0.0, -pair.c * k.dot(n)), false};
    case Polarization::longitudinal:
        return {-khat.dot(n) / pair.m, true};
    case Polarization::transverse1:
        return {-transverse_basis(khat)[0].dot(n) / pair.m, true};
    case Polarization::transverse2:
        return {-transverse_basis(khat)[1].dot(n) / pair.m, true};
    }
    return {0.0, false};
}

std::string describe_mode(std::size_t i, const Eigen::Vector3d& k)
{
    std::ostringstream os;
    os.precision(17);
    os << "mode " << i << " k=(" << k.x() << ", " << k.y() << ", " << k.z() << ")";
    return os.str();
}

} // namespace

EpsilonResult epsilon_lorentz(const OscillatorPair& pair, const ModeGrid& grid, const LorentzOptions& opts,
                              const Parallelism& policy)
{
    // reuse the regime checks of the Coulomb path
    const EpsilonResult ref = epsilon_coulomb(pair);
    grid.validate();

    const detail::TwoOscillatorFock fock(pair);
    const Eigen::VectorXcd psi0 = fock.basis(0, 0);
    const Eigen::VectorXcd psi2 = fock.basis(1, 1);
    const double e0 = fock.energy(fock.index(0, 0));
    const double e2 = fock.energy(fock.index(1, 1));

    // First vertex acting on |0,0>, and the final projection <1,1| second vertex,
    // for both emitter orderings and both operator kinds.
    struct Leg {
        Eigen::VectorXcd first_x, first_p;   // op_emitter |0,0>
        Eigen::RowVectorXcd last_x, last_p;  // <1,1| op_absorber
        double sign;                         // +1: emitter A at origin, absorber B at d
    };
    const Leg legs[2] = {
        {fock.xA * psi0, fock.pA * psi0, psi2.adjoint() * fock.xB, psi2.adjoint() * fock.pB, +1.0},
        {fock.xB * psi0, fock.pB * psi0, psi2.adjoint() * fock.xA, psi2.adjoint() * fock.pA, -1.0},
    };

    const Eigen::Vector3d sep = pair.d * Eigen::Vector3d::UnitZ();
    const double a = pair.effective_charge_radius();
    const double hbar = pair.hbar;
    const std::size_t n = grid.size();
    std::vector<cplx> contrib(n);

    parallel_for(n, policy, [&](std::size_t i) {
        const Eigen::Vector3d& k = grid.wavevectors[i];
        const double kabs = k.norm();
        const double omega_k = pair.c * kabs;
        // Resolvent on intermediate states |l_osc> x |k>.
        Eigen::VectorXd resolvent(fock.dim());
        for (Eigen::Index l = 0; l < fock.dim(); ++l) {
            const double denom = e0 - fock.energy(l) - hbar * omega_k;
            if (std::abs(denom) < kResonanceTolerance * fock.hbar_omega)
                throw RegimeError("resonant energy denominator at " + describe_mode(i, k));
            resolvent(l) = 1.0 / denom;
        }
        // q^2 N_k^2 V = hbar q^2 / (2 eps0 omega_k) = 2 pi kappa hbar / omega_k
        const double qn2 = 2.0 * std::numbers::pi * pair.kappa * hbar / omega_k;
        const double form = std::exp(-kabs * kabs * a * a);

        cplx sum = 0.0;
        for (int p = 0; p < kPolarizations; ++p) {
            const auto pol = static_cast<Polarization>(p);
            if (pol == Polarization::scalar && opts.drop_scalar)
                continue;
            if ((pol == Polarization::transverse1 || pol == Polarization::transverse2) && !opts.include_transverse)
                continue;
            const Vertex v = vertex(pair, k, pol);
            for (const Leg& leg : legs) {
                const Eigen::VectorXcd& first = v.momentum ? leg.first_p : leg.first_x;
                const Eigen::RowVectorXcd& last = v.momentum ? leg.last_p : leg.last_x;
                const cplx osc = (last * resolvent.cast<cplx>().asDiagonal() * first)(0, 0);
                // emission at the emitter, absorption (adjoint vertex) at the partner
                const cplx phase = std::polar(1.0, leg.sign * k.dot(sep));
                sum += static_cast<double>(grid.norm_signs[i][static_cast<std::size_t>(p)]) * v.g * std::conj(v.g) *
                       phase * osc;
            }
        }
        contrib[i] = grid.weights[i] * form * qn2 * sum / (e0 - e2);
    });

    // modes are stored sorted, so this order is fixed
    cplx total = 0.0;
    for (const cplx& c : contrib)
        total += c;

    EpsilonResult r{total, "lorentz", {}};
    if (std::abs(total) >= kPerturbativeLimit)
        throw RegimeError("perturbative regime violated: |epsilon_L| = " + std::to_string(std::abs(total)));
    r.diagnostics["modes"] = static_cast<double>(n);
    r.diagnostics["kmin"] = grid.wavevectors.front().norm();
    r.diagnostics["kmax"] = grid.wavevectors.back().norm();
    r.diagnostics["charge_radius"] = a;
    r.diagnostics["epsilon_coulomb"] = ref.value.real();
    r.diagnostics["drop_scalar"] = opts.drop_scalar ? 1.0 : 0.0;
    r.diagnostics["include_transverse"] = opts.include_transverse ? 1.0 : 0.0;
    r.diagnostics["imag_over_real"] = total.real() != 0.0 ? std::abs(total.imag() / total.real()) : 0.0;
    return r;
}

Eigen::MatrixXcd interaction_block(const OscillatorPair& pair, const ModeGrid& grid, std::size_t mode,
                                   Polarization pol)
{
    pair.validate();
    grid.validate();
    if (mode >= grid.size())
        throw ValidationError("mode index out of range");
    const detail::TwoOscillatorFock fock(pair);
    const Eigen::Vector3d& k = grid.wavevectors[mode];
    const double omega_k = pair.c * k.norm();
    const double qn = std::sqrt(2.0 * std::numbers::pi * std::abs(pair.kappa) * pair.hbar / omega_k);
    const Vertex v = vertex(pair, k, pol);
    const Eigen::Vector3d sep = pair.d * Eigen::Vector3d::UnitZ();
    const Eigen::MatrixXcd& opA = v.momentum ? fock.pA : fock.xA;
    const Eigen::MatrixXcd& opB = v.momentum ? fock.pB : fock.xB;
    // emission: photon number 0 -> 1, site phase e^{-i k.r}
    const Eigen::MatrixXcd emit = qn * v.g * (opA + std::polar(1.0, -k.dot(sep)) * opB);
    const Eigen::Index d = fock.dim();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    h.block(d, 0, d, d) = emit;
    h.block(0, d, d, d) = emit.adjoint();
    return h;
}

} // namespace gie::gauge_pt
