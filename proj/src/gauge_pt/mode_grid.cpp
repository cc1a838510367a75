#include "gie/gauge_pt.hpp"

#include "gie/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

namespace gie::gauge_pt {

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights)
{
    if (n < 1)
        throw ValidationError("Gauss-Legendre order must be positive");
    // Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix.
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        j(k, k - 1) = beta;
        j(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int k = 0; k < n; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        nodes[static_cast<std::size_t>(k)] = mid + half * es.eigenvalues()(k);
        weights[static_cast<std::size_t>(k)] = 2.0 * v0 * v0 * half;
    }
    // Symmetrize so the rule is exactly mirror-symmetric about the midpoint.
    for (int k = 0; k < n / 2; ++k) {
        const auto lo = static_cast<std::size_t>(k), hi = static_cast<std::size_t>(n - 1 - k);
        const double off = 0.5 * ((mid - nodes[lo]) + (nodes[hi] - mid));
        nodes[lo] = mid - off;
        nodes[hi] = mid + off;
        const double w = 0.5 * (weights[lo] + weights[hi]);
        weights[lo] = weights[hi] = w;
    }
    if (n % 2 == 1)
        nodes[static_cast<std::size_t>(n / 2)] = mid;
}

ModeGridSpec grid_spec(const std::string& level)
{
    ModeGridSpec s;
    s.label = level;
    if (level == "coarse") {
        s.n_radial = 48;
        s.n_theta = 24;
        s.kmax_radius = 3.0;
    } else if (level == "medium") {
        s.n_radial = 96;
        s.n_theta = 48;
        s.kmax_radius = 5.0;
    } else if (level == "fine") {
        s.n_radial = 192;
        s.n_theta = 96;
        s.kmax_radius = 8.0;
    } else {
        throw ValidationError("unknown grid level '" + level + "' (expected coarse, medium or fine)");
    }
    return s;
}

ModeGrid make_mode_grid(const OscillatorPair& pair, const ModeGridSpec& spec)
{
    pair.validate();
    if (spec.n_radial < 2 || spec.n_theta < 2 || spec.n_phi < 2 || spec.n_phi % 2 != 0)
        throw ValidationError("mode grid needs n_radial, n_theta >= 2 and an even n_phi >= 2");
    const double kmin = spec.kmin_omega * pair.omega / pair.c;
    const double kmax = spec.kmax_radius / pair.effective_charge_radius();
    if (!(kmin > 0.0) || !(kmax > kmin))
        throw ValidationError("mode grid needs 0 < kmin < kmax");

    std::vector<double> kr, wr, ct, wt;
    gauss_legendre(spec.n_radial, kmin, kmax, kr, wr);
    gauss_legendre(spec.n_theta, -1.0, 1.0, ct, wt);
    const double dphi = 2.0 * std::numbers::pi / spec.n_phi;
    const double norm = 1.0 / std::pow(2.0 * std::numbers::pi, 3);

    struct Mode {
        Eigen::Vector3d k;
        double kabs, w;
    };
    std::vector<Mode> modes;
    modes.reserve(kr.size() * ct.size() * static_cast<std::size_t>(spec.n_phi));
    for (std::size_t i = 0; i < kr.size(); ++i)
        for (std::size_t j = 0; j < ct.size(); ++j) {
            const double st = std::sqrt(std::max(0.0, 1.0 - ct[j] * ct[j]));
            for (int p = 0; p < spec.n_phi; ++p) {
                const double ph = (p + 0.5) * dphi;
                const Eigen::Vector3d k = kr[i] * Eigen::Vector3d(st * std::cos(ph), st * std::sin(ph), ct[j]);
                modes.push_back({k, kr[i], norm * wr[i] * kr[i] * kr[i] * wt[j] * dphi});
            }
        }
    std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
        return std::tie(a.kabs, a.k.x(), a.k.y(), a.k.z()) < std::tie(b.kabs, b.k.x(), b.k.y(), b.k.z());
    });

    ModeGrid g;
    g.label = spec.label;
    g.wavevectors.reserve(modes.size());
    g.weights.reserve(modes.size());
    for (const auto& m : modes) {
        g.wavevectors.push_back(m.k);
        g.weights.push_back(m.w);
        g.norm_signs.push_back({-1, +1, +1, +1});
    }
    g.validate();
    return g;
}

void ModeGrid::validate() const
{
    if (wavevectors.empty())
        throw ValidationError("mode grid is empty");
    if (weights.size() != wavevectors.size() || norm_signs.size() != wavevectors.size())
        throw ValidationError("mode grid arrays have inconsistent lengths");
    for (std::size_t i = 0; i < wavevectors.size(); ++i) {
        if (!wavevectors[i].allFinite() || !(wavevectors[i].norm() > 0.0))
            throw ValidationError("mode grid contains a zero or non-finite wavevector at index " + std::to_string(i));
        if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
            throw ValidationError("mode grid weight must be positive at index " + std::to_string(i));
        const auto& s = norm_signs[i];
        if (s[0] != -1 || s[1] != 1 || s[2] != 1 || s[3] != 1)
            throw ValidationError("mode grid norm signs must be (-1, +1, +1, +1) at index " + std::to_string(i));
    }
}

} // namespace gie::gauge_pt
