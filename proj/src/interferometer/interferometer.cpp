#include "gie/interferometer.hpp"

#include "gie/error.hpp"

#include <cmath>
#include <numbers>

namespace gie::interferometer {

void InterferometerConfig::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || !(v > 0.0))
            throw ValidationError(std::string(name) + " must be positive and finite");
    };
    positive(m1, "m1");
    positive(m2, "m2");
    positive(t, "t");
    positive(G, "G");
    positive(hbar, "hbar");
    positive(delta_x, "delta_x");
    positive(d, "d");
    if (!(d > delta_x))
        throw ValidationError("interferometer requires d > delta_x > 0 (branches must not overlap)");
}

double InterferometerConfig::prefactor() const
{
    // grouped so intermediate magnitudes stay near unity
    return (G * m1) * (m2 / hbar) * t;
}

namespace {

// 1/r - 1/d for r = d + s, without cancellation
double inv_shift(double d, double s) { return -s / (d * (d + s)); }

std::array<double, 4> quantum_phases(const InterferometerConfig& cfg)
{
    const double p = cfg.prefactor();
    return {0.0, p * inv_shift(cfg.d, cfg.delta_x), p * inv_shift(cfg.d, -cfg.delta_x), 0.0};
}

std::array<double, 4> mean_field_phases(const InterferometerConfig& cfg)
{
    // Branch separations r(a,b) - d for a,b in {L,R}: LL 0, LR +Δx, RL -Δx, RR 0.
    const double p = cfg.prefactor();
    const double dd = cfg.d, dx = cfg.delta_x;
    const double v[2][2] = {{0.0, inv_shift(dd, dx)}, {inv_shift(dd, -dx), 0.0}};
    std::array<double, 4> out{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            // A in branch a sees B averaged over b', and vice versa; half of
            // each so the static energy is not double counted.
            const double field_on_a = 0.5 * (v[a][0] + v[a][1]);
            const double field_on_b = 0.5 * (v[0][b] + v[1][b]);
            out[static_cast<std::size_t>(2 * a + b)] = p * 0.5 * (field_on_a + field_on_b);
        }
    return out;
}

} // namespace

PhasePair branch_phases(const InterferometerConfig& cfg)
{
    cfg.validate();
    const auto ph = quantum_phases(cfg);
    return {ph[1], ph[2]};
}

BranchState evolve_branches(const InterferometerConfig& cfg)
{
    cfg.validate();
    const auto ph = cfg.mean_field ? mean_field_phases(cfg) : quantum_phases(cfg);
    Eigen::VectorXcd amps(4);
    for (int i = 0; i < 4; ++i)
        amps(i) = 0.5 * std::polar(1.0, ph[static_cast<std::size_t>(i)]);
    return {ph, hilbert::StateVector({2, 2}, std::move(amps))};
}

double branch_negativity(const BranchState& s)
{
    return hilbert::negativity(s.state.density(), {1});
}

std::vector<ScanRow> entanglement_scan(const InterferometerConfig& cfg, const std::vector<double>& times,
                                       const Parallelism& policy)
{
    if (times.empty())
        throw ValidationError("entanglement scan needs at least one time");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !(times[i] > 0.0))
            throw ValidationError("scan times must be positive");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw ValidationError("scan times must be strictly ascending");
    }
    cfg.validate();
    std::vector<ScanRow> rows(times.size());
    parallel_for(times.size(), policy, [&](std::size_t i) {
        InterferometerConfig c = cfg;
        c.t = times[i];
        const BranchState s = evolve_branches(c);
        const double pp = s.phases[1] - s.phases[0];
        const double pm = s.phases[2] - s.phases[0];
        const auto rho = s.state.density();
        const auto w = hilbert::adapted_branch_witness(pp, pm);
        rows[i] = {times[i], pp, pm, hilbert::negativity(rho, {1}), hilbert::witness_expectation(rho, w)};
    });
    return rows;
}

Table scan_table(const std::vector<ScanRow>& rows)
{
    Table t;
    t.header = {"t", "phi_plus", "phi_minus", "negativity", "witness"};
    for (const auto& r : rows)
        t.rows.push_back({r.t, r.phi_plus, r.phi_minus, r.negativity, r.witness});
    return t;
}

std::vector<double> linspace_times(double t_min, double t_max, int steps)
{
    if (steps < 1)
        throw ValidationError("steps must be at least 1");
    if (!(t_min > 0.0) || !(t_max >= t_min))
        throw ValidationError("need 0 < t-min <= t-max");
    if (steps == 1)
        return {t_min};
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        out[static_cast<std::size_t>(i)] = t_min + (t_max - t_min) * i / (steps - 1);
    return out;
}

double max_entanglement_time(const InterferometerConfig& cfg)
{
    InterferometerConfig c = cfg;
    c.t = 1.0;
    c.validate();
    const double d = c.d, dx = c.delta_x;
    // 1/(d+Δx) + 1/(d-Δx) - 2/d = 2Δx² / (d (d² - Δx²))
    const double s = 2.0 * dx * dx / (d * (d - dx) * (d + dx));
    return std::numbers::pi / (c.prefactor() * s);
}

} // namespace gie::interferometer
