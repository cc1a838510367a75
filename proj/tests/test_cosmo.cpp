#include "gie/cosmo.hpp"
#include "gie/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gie;
using namespace gie::cosmo;

namespace {

constexpr double kPi = std::numbers::pi;

Background desitter(double tau_i = -200.0, double tau_f = -1e-4)
{
    Background bg;
    bg.model = Model::desitter;
    bg.H0 = 1.0;
    bg.eps = 0.01;
    bg.tau_i = tau_i;
    bg.tau_f = tau_f;
    return bg;
}

// closed-form de Sitter mode, Bunch-Davies normalised
double desitter_v2(double k, double tau) { return (1.0 / (2.0 * k)) * (1.0 + 1.0 / (k * k * tau * tau)); }

} // namespace

TEST_CASE("background basics")
{
    const auto bg = desitter();
    CHECK(bg.p() == -1.0);
    CHECK(bg.nu() == 1.5);
    CHECK(bg.a(-2.0) == doctest::Approx(0.5));
    CHECK(bg.a(-1.0) > bg.a(-2.0));
    CHECK(bg.zpp_over_z(-2.0) == doctest::Approx(0.5));
    CHECK(bg.analytic_tilt() == 0.0);

    Background pl = bg;
    pl.model = Model::powerlaw;
    pl.eps = 0.02;
    CHECK(pl.analytic_tilt() == doctest::Approx(-2.0 * 0.02 / 0.98).epsilon(1e-14));
    CHECK(pl.z(-3.0) > 0.0);

    Background bad = bg;
    bad.tau_f = 1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = bg;
    bad.eps = 1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = pl;
    bad.eps = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    CHECK_THROWS_AS(parse_model("bouncing"), ValidationError);
    CHECK(parse_model(to_string(Model::powerlaw)) == Model::powerlaw);
}

TEST_CASE("de Sitter mode against the closed form")
{
    const auto bg = desitter();
    for (double k : {1.0, 3.0, 10.0}) {
        const auto m = evolve_mode(k, bg);
        REQUIRE(m.tau.size() >= 2);
        double worst = 0.0;
        for (std::size_t i = 0; i < m.tau.size(); ++i)
            worst = std::max(worst, std::abs(std::norm(m.v[i]) / desitter_v2(k, m.tau[i]) - 1.0));
        CHECK(worst <= 1e-6);
        CHECK(m.max_wronskian_dev <= 1e-8);
        // deep inside the horizon the mode is the flat-space vacuum
        CHECK(std::abs(2.0 * k * std::norm(m.v.front()) - 1.0) <= 1e-4);
    }
}

TEST_CASE("super-horizon k^-3 scaling")
{
    const auto bg = desitter();
    const double tau = -1e-3;
    const auto a = evolve_mode(1.0, bg, {}, {tau});
    const auto b = evolve_mode(2.0, bg, {}, {tau});
    auto at = [&](const ModeFunction& m) {
        for (std::size_t i = 0; i < m.tau.size(); ++i)
            if (m.tau[i] == tau)
                return std::norm(m.v[i]);
        FAIL("sample missing");
        return 0.0;
    };
    CHECK(std::abs(at(b) / at(a) - 1.0 / 8.0) / (1.0 / 8.0) <= 1e-4);
}

TEST_CASE("mode preconditions")
{
    auto bg = desitter(-50.0);
    CHECK_THROWS_AS(evolve_mode(1.0, bg), ValidationError);
    CHECK_THROWS_AS(evolve_mode(-1.0, desitter()), ValidationError);
    CHECK_THROWS_AS(evolve_mode(1.0, desitter(), {}, {-1000.0}), ValidationError);
    ModeOptions bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(evolve_mode(1.0, desitter(), bad), ValidationError);
}

TEST_CASE("linearity and tolerance refinement")
{
    Background bg;
    bg.model = Model::powerlaw;
    bg.eps = 0.05;
    bg.tau_i = -150.0;
    bg.tau_f = -1e-2;
    const double k = 1.0;
    const cplx v0(0.3, -0.2), d0(0.1, 0.4), w0(-0.5, 0.25), e0(0.2, 0.0);
    const cplx al(0.7, 0.1), be(-1.2, 0.3);
    cplx v1, dv1, w1, dw1, s1, ds1;
    propagate(k, bg, bg.tau_i, v0, d0, bg.tau_f, v1, dv1);
    propagate(k, bg, bg.tau_i, w0, e0, bg.tau_f, w1, dw1);
    propagate(k, bg, bg.tau_i, al * v0 + be * w0, al * d0 + be * e0, bg.tau_f, s1, ds1);
    const cplx lin = al * v1 + be * w1;
    CHECK(std::abs(s1 - lin) <= 1e-9 * std::abs(lin));

    const auto coarse = evolve_mode(k, bg);
    ModeOptions fine;
    fine.rel_tol = 1e-13;
    fine.abs_tol = 1e-14;
    const auto refined = evolve_mode(k, bg, fine);
    REQUIRE(coarse.v.size() == refined.v.size());
    CHECK(std::abs(std::norm(coarse.v.back()) / std::norm(refined.v.back()) - 1.0) <= 1e-6);
    CHECK(coarse.max_wronskian_dev <= 1e-8);
    CHECK(refined.max_wronskian_dev <= 1e-8);
}

TEST_CASE("de Sitter spectrum is flat")
{
    const auto ks = log_ks(1.0, 10.0, 8);
    const auto bg = background_for(Model::desitter, 1.0, 0.01, 1.0, 10.0);
    const auto rows = power_spectrum(ks, bg);
    REQUIRE(rows.size() == ks.size());
    const double ref = 1.0 / (8.0 * kPi * kPi * 0.01); // H^2 / (8 pi^2 eps) with H = 1
    for (const auto& r : rows) {
        CHECK(std::abs(r.p_vz / ref - 1.0) <= 1e-3);
        CHECK(std::abs(r.p_phi / (0.01 / (8.0 * kPi * kPi)) - 1.0) <= 1e-6);
        CHECK(r.wronskian_dev <= 1e-8);
    }
    std::vector<double> p;
    for (const auto& r : rows)
        p.push_back(r.p_vz);
    CHECK(std::abs(spectral_tilt(ks, p)) <= 1e-3);
}

TEST_CASE("power-law spectrum has the analytic red tilt")
{
    const double eps = 0.02;
    const auto ks = log_ks(1.0, 10.0, 12);
    const auto bg = background_for(Model::powerlaw, 1.0, eps, 1.0, 10.0);
    const auto rows = power_spectrum(ks, bg);
    std::vector<double> p;
    for (const auto& r : rows)
        p.push_back(r.p_vz);
    const double tilt = spectral_tilt(ks, p);
    CHECK(tilt < 0.0);
    CHECK(std::abs(tilt / bg.analytic_tilt() - 1.0) <= 0.1);
}

TEST_CASE("spectrum contracts")
{
    const auto bg = background_for(Model::desitter, 1.0, 0.01, 1.0, 10.0);
    CHECK(power_spectrum({}, bg).empty());
    const auto rows = power_spectrum({5.0, 1.0, 2.0}, bg);
    CHECK(rows[0].k == 1.0);
    CHECK(rows[1].k == 2.0);
    CHECK(rows[2].k == 5.0);
    CHECK(spectrum_table(rows).header.size() == 5);

    SpectrumOptions late;
    late.eval_ktau = 2.0;
    CHECK_THROWS_AS(power_spectrum({1.0}, bg, late), ValidationError);
    CHECK_THROWS_AS(power_spectrum({0.5}, bg), ValidationError);

    const auto ks = log_ks(1.0, 10.0, 6);
    CHECK(power_spectrum(ks, bg, {}, Parallelism{1}).back().p_v == power_spectrum(ks, bg, {}, Parallelism{4}).back().p_v);
}

TEST_CASE("spectral tilt on synthetic data")
{
    const auto ks = log_ks(0.1, 100.0, 10);
    std::vector<double> flat(ks.size(), 2.5), tilted;
    for (double k : ks)
        tilted.push_back(3.0 * std::pow(k, -0.04));
    CHECK(std::abs(spectral_tilt(ks, flat)) <= 1e-12);
    CHECK(std::abs(spectral_tilt(ks, tilted) + 0.04) <= 1e-10);

    CHECK_THROWS_AS(spectral_tilt({1, 2, 3, 4}, {1, 1, 1, 1}), ValidationError);
    CHECK_THROWS_AS(spectral_tilt({1, 2, 3, 4, 5}, {1, 1, 1, 1, 1}), ValidationError);
    CHECK_THROWS_AS(spectral_tilt({1, 2, 3, 4, 10}, {1, 1, 1, 1}), ValidationError);
}
