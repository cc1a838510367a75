#include "gie/error.hpp"
#include "gie/interferometer.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace gie;
using namespace gie::interferometer;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

InterferometerConfig unit_cfg(double d, double dx, double t = 1.0)
{
    InterferometerConfig c;
    c.m1 = c.m2 = 1.0;
    c.G = c.hbar = 1.0;
    c.d = d;
    c.delta_x = dx;
    c.t = t;
    return c;
}

// 50-digit evaluation of the formula exactly as written.
std::pair<double, double> oracle(const InterferometerConfig& c)
{
    const Big p = Big(c.G) * Big(c.m1) * Big(c.m2) * Big(c.t) / Big(c.hbar);
    const Big d(c.d), dx(c.delta_x);
    const Big plus = p * (1 / (d + dx) - 1 / d);
    const Big minus = p * (1 / (d - dx) - 1 / d);
    return {plus.convert_to<double>(), minus.convert_to<double>()};
}

InterferometerConfig random_cfg(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    InterferometerConfig c;
    c.m1 = std::pow(10.0, -16.0 + 4.0 * u(rng));
    c.m2 = std::pow(10.0, -16.0 + 4.0 * u(rng));
    c.d = std::pow(10.0, -5.0 + 2.0 * u(rng));
    c.delta_x = c.d * (1e-3 + 0.998 * u(rng));
    c.t = 0.1 + 10.0 * u(rng);
    return c;
}

} // namespace

TEST_CASE("phase formula against 50-digit oracle")
{
    std::mt19937_64 rng(101);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_cfg(rng);
        const auto ph = branch_phases(c);
        const auto [op, om] = oracle(c);
        CHECK(std::abs(ph.phi_plus / op - 1.0) <= 1e-12);
        CHECK(std::abs(ph.phi_minus / om - 1.0) <= 1e-12);
        CHECK(ph.phi_plus < 0.0);
        CHECK(ph.phi_minus > 0.0);
    }
}

TEST_CASE("phase examples")
{
    const auto ph = branch_phases(unit_cfg(2.0, 1.0));
    CHECK(std::abs(ph.phi_plus + 1.0 / 6.0) < 1e-15);
    CHECK(std::abs(ph.phi_minus - 0.5) < 1e-15);

    const auto tiny = branch_phases(unit_cfg(2.0, 1e-300));
    CHECK(std::abs(tiny.phi_plus) < 1e-299);
    CHECK(std::abs(tiny.phi_minus) < 1e-299);
}

TEST_CASE("mass swap symmetry and bilinearity")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        auto c = random_cfg(rng);
        const auto a = branch_phases(c);
        std::swap(c.m1, c.m2);
        const auto b = branch_phases(c);
        CHECK(std::abs(a.phi_plus / b.phi_plus - 1.0) < 1e-15);
        CHECK(std::abs(a.phi_minus / b.phi_minus - 1.0) < 1e-15);
    }
}

TEST_CASE("precondition violations")
{
    CHECK_THROWS_AS(branch_phases(unit_cfg(1.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(branch_phases(unit_cfg(1.0, 2.0)), ValidationError);
    CHECK_THROWS_AS(branch_phases(unit_cfg(1.0, 0.0)), ValidationError);
    auto c = unit_cfg(2.0, 1.0);
    c.m1 = -1;
    CHECK_THROWS_AS(evolve_branches(c), ValidationError);
}

TEST_CASE("evolved state amplitudes and norm")
{
    const auto c = unit_cfg(2.0, 1.0, 3.0);
    const auto s = evolve_branches(c);
    const auto ph = branch_phases(c);
    CHECK(std::abs(s.state.norm() - 1.0) < 1e-14);
    // global phase removed by comparing to |LL>
    const auto& a = s.state.amplitudes();
    CHECK(std::abs(std::arg(a[1] / a[0]) - ph.phi_plus) < 1e-14);
    CHECK(std::abs(std::arg(a[2] / a[0]) - ph.phi_minus) < 1e-14);
    CHECK(std::abs(a[3] / a[0] - 1.0) < 1e-14);
}

TEST_CASE("negativity follows the phase sum")
{
    const double rate = 1.0 / 3.0; // d = 2, dx = 1, unit prefactor
    // phi+ + phi- = pi/3
    CHECK(std::abs(branch_negativity(evolve_branches(unit_cfg(2.0, 1.0, std::numbers::pi))) - 0.25) < 1e-12);
    for (int n = 0; n < 4; ++n) {
        const double t_max = (2 * n + 1) * std::numbers::pi / rate;
        CHECK(std::abs(branch_negativity(evolve_branches(unit_cfg(2.0, 1.0, t_max))) - 0.5) < 1e-10);
        const double t_zero = 2 * (n + 1) * std::numbers::pi / rate;
        CHECK(branch_negativity(evolve_branches(unit_cfg(2.0, 1.0, t_zero))) < 1e-10);
    }
}

TEST_CASE("negativity depends only on the phase sum")
{
    // same phi+ + phi- from different geometries and times
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) {
        auto a = random_cfg(rng);
        auto b = random_cfg(rng);
        const auto pa = branch_phases(a), pb = branch_phases(b);
        b.t *= (pa.phi_plus + pa.phi_minus) / (pb.phi_plus + pb.phi_minus);
        const double na = branch_negativity(evolve_branches(a));
        const double nb = branch_negativity(evolve_branches(b));
        // phases are large here, so roundoff in sin grows with |phi|
        const double scale = std::max(1.0, std::abs(pa.phi_plus) + std::abs(pa.phi_minus));
        CHECK(std::abs(na - nb) <= 1e-14 * scale);
    }
}

TEST_CASE("mean-field model gives a product state")
{
    auto c = unit_cfg(2.0, 1.0, 3.0 * std::numbers::pi);
    c.mean_field = true;
    CHECK(branch_negativity(evolve_branches(c)) < 1e-12);
}

TEST_CASE("scan contracts")
{
    const auto c = unit_cfg(2.0, 1.0, 2.0);
    const auto rows = entanglement_scan(c, {2.0});
    const auto s = evolve_branches(c);
    CHECK(rows[0].negativity == doctest::Approx(branch_negativity(s)).epsilon(1e-14));

    const auto r2 = entanglement_scan(c, {1.0, 2.0});
    CHECK(std::abs(r2[1].phi_plus - 2.0 * r2[0].phi_plus) < 1e-15);
    CHECK(std::abs(r2[1].phi_minus - 2.0 * r2[0].phi_minus) < 1e-15);

    CHECK_THROWS_AS(entanglement_scan(c, {}), ValidationError);
    CHECK_THROWS_AS(entanglement_scan(c, {2.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(entanglement_scan(c, {-1.0}), ValidationError);

    // first time at negativity 0.5 from the scan matches the closed form
    const double tstar = max_entanglement_time(c);
    const auto times = linspace_times(tstar / 2, 3 * tstar / 2, 1001);
    const auto sweep = entanglement_scan(c, times);
    std::size_t best = 0;
    for (std::size_t i = 0; i < sweep.size(); ++i)
        if (sweep[i].negativity > sweep[best].negativity)
            best = i;
    CHECK(std::abs(times[best] - tstar) <= (times[1] - times[0]));
}

TEST_CASE("max entanglement time")
{
    const auto c = unit_cfg(2.0, 1.0);
    CHECK(std::abs(max_entanglement_time(c) / (3.0 * std::numbers::pi) - 1.0) < 1e-12);

    auto heavy = c;
    heavy.m1 *= 2;
    heavy.m2 *= 2;
    CHECK(std::abs(max_entanglement_time(heavy) / (max_entanglement_time(c) / 4.0) - 1.0) < 1e-14);

    std::mt19937_64 rng(43);
    for (int i = 0; i < 20; ++i) {
        auto r = random_cfg(rng);
        r.t = max_entanglement_time(r);
        CHECK(std::abs(branch_negativity(evolve_branches(r)) - 0.5) < 1e-10);
        // closed form quoted for the first maximum
        const double expect =
            std::numbers::pi * r.hbar /
            (r.G * r.m1 * r.m2 * std::abs(1 / (r.d + r.delta_x) + 1 / (r.d - r.delta_x) - 2 / r.d));
        CHECK(std::abs(r.t / expect - 1.0) < 1e-6); // direct form loses digits to cancellation
    }
}

TEST_CASE("config from key-value text")
{
    const auto kv = KvConfig::parse("m1 = 1e-14\nm2 = 1e-14\nd = 450e-6\ndelta_x = 250e-6\nt = 2.5\n");
    const auto c = config_from_kv(kv);
    CHECK(c.G == 6.67430e-11);
    CHECK(c.hbar == 1.054571817e-34);
    CHECK(kv.echo().count("G") == 1);
    CHECK_THROWS_AS(config_from_kv(KvConfig::parse("m1 = 1\n")), ValidationError);
    CHECK_THROWS_AS(config_from_kv(KvConfig::parse("m1 = 1\nm2 = 1\nd = 1\ndelta_x = 2\nt = 1\n")),
                    ValidationError);
}
