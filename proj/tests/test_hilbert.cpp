#include "gie/error.hpp"
#include "gie/hilbert.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gie;
using namespace gie::hilbert;

namespace {

Eigen::VectorXcd random_amplitudes(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = g(rng);
        const double im = g(rng);
        v[i] = {re, im};
    }
    return v.normalized();
}

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = g(rng);
            const double im = g(rng);
            m(i, j) = {re, im};
        }
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(m).householderQ();
}

// Independent oracle: concurrence of a pure two-qubit state is 2|ad - bc|.
double concurrence(const Eigen::VectorXcd& a)
{
    return 2.0 * std::abs(a[0] * a[3] - a[1] * a[2]);
}

// Independent oracle: partial transpose on the second qubit by explicit
// index swapping, then eigenvalues.
double brute_negativity_2x2(const Eigen::MatrixXcd& rho)
{
    Eigen::MatrixXcd pt(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                    pt(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt);
    double n = 0.0;
    for (int i = 0; i < 4; ++i)
        if (es.eigenvalues()[i] < 0)
            n -= es.eigenvalues()[i];
    return n;
}

StateVector bell()
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
    return StateVector({2, 2}, v);
}

} // namespace

TEST_CASE("tensor product examples")
{
    const auto z = StateVector::basis({2}, 0);
    const auto zz = tensor_product(z, z);
    CHECK(zz.dims() == Dims{2, 2});
    CHECK(zz.amplitudes()[0] == Complex(1.0));

    Eigen::VectorXcd plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto p1 = tensor_product(StateVector({2}, plus), StateVector::basis({2}, 1));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(p1.amplitudes()[0]) == doctest::Approx(0.0));
    CHECK(std::abs(p1.amplitudes()[1] - s) < 1e-15);
    CHECK(std::abs(p1.amplitudes()[2]) == doctest::Approx(0.0));
    CHECK(std::abs(p1.amplitudes()[3] - s) < 1e-15);

    std::mt19937_64 rng(3);
    const auto a = StateVector({3}, random_amplitudes(3, rng));
    const auto b = StateVector({2}, random_amplitudes(2, rng));
    const auto ab = tensor_product(a, b);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < ab.amplitudes().size(); ++i)
        sum += std::norm(ab.amplitudes()[i]);
    CHECK(std::abs(std::sqrt(sum) - 1.0) < 1e-12);
}

TEST_CASE("tensor product size guard")
{
    const auto big = StateVector::basis({1024}, 0);
    CHECK_THROWS_AS(tensor_product(big, StateVector::basis({2048}, 0)), ValidationError);
    CHECK_THROWS_AS(StateVector({2, 2}, Eigen::VectorXcd::Zero(3)), ValidationError);
}

TEST_CASE("density matrix validation")
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix({2}, m), ValidationError); // trace 2
    m(0, 1) = 0.3;
    m = 0.5 * m;
    CHECK_THROWS_AS(DensityMatrix({2}, m), ValidationError); // not Hermitian
    Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix({2}, neg), ValidationError);
}

TEST_CASE("partial trace examples")
{
    const auto red = partial_trace(bell().density(), {0});
    CHECK((red.entries() - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-15);

    std::mt19937_64 rng(5);
    const auto a = StateVector({3}, random_amplitudes(3, rng)).density();
    const auto b = StateVector({2}, random_amplitudes(2, rng)).density();
    const auto ab = tensor_product(a, b);
    CHECK((partial_trace(ab, {0}).entries() - a.entries()).norm() < 1e-14);
    CHECK((partial_trace(ab, {1}).entries() - b.entries()).norm() < 1e-14);

    const auto four = four_branch_state(std::numbers::pi / 2, std::numbers::pi / 2).density();
    const auto ev = partial_trace(four, {0}).eigenvalues();
    CHECK(ev[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(partial_trace(four, {2}), ValidationError);
    CHECK_THROWS_AS(partial_trace(four, {}), ValidationError);
}

TEST_CASE("partial trace preserves trace over complementary subsystems")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto rho = StateVector({2, 3, 2}, random_amplitudes(12, rng)).density();
        for (const std::vector<std::size_t>& keep : {std::vector<std::size_t>{0}, {1}, {2}, {0, 2}, {1, 2}}) {
            const auto r = partial_trace(rho, keep);
            CHECK(std::abs(r.trace() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("negativity examples")
{
    CHECK(negativity(tensor_product(StateVector::basis({2}, 0), StateVector::basis({2}, 1)).density(), {1}) ==
          doctest::Approx(0.0));
    CHECK(negativity(bell().density(), {1}) == doctest::Approx(0.5).epsilon(1e-12));
    // phi+ + phi- = pi/2
    const double n = negativity(four_branch_state(std::numbers::pi / 4, std::numbers::pi / 4).density(), {1});
    CHECK(std::abs(n - std::sin(std::numbers::pi / 4) / 2.0) < 1e-12);
    CHECK(std::abs(n - brute_negativity_2x2(four_branch_state(std::numbers::pi / 4, std::numbers::pi / 4)
                                                .density()
                                                .entries())) < 1e-12);
    CHECK_THROWS_AS(negativity(bell().density(), {0, 1}), ValidationError);
    CHECK_THROWS_AS(negativity(bell().density(), {}), ValidationError);
}

TEST_CASE("negativity is half the concurrence for pure two-qubit states")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXcd a = random_amplitudes(4, rng);
        const double n = negativity(StateVector({2, 2}, a).density(), {1});
        CHECK(std::abs(n - 0.5 * concurrence(a)) < 1e-10);
    }
}

TEST_CASE("negativity invariant under local unitaries")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rho = StateVector({2, 3}, random_amplitudes(6, rng)).density();
        Eigen::MatrixXcd u(6, 6);
        const Eigen::MatrixXcd ua = random_unitary(2, rng), ub = random_unitary(3, rng);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                u.block(3 * i, 3 * j, 3, 3) = ua(i, j) * ub;
        const DensityMatrix rotated({2, 3}, u * rho.entries() * u.adjoint());
        CHECK(std::abs(negativity(rho, {1}) - negativity(rotated, {1})) <= 1e-10);
    }
}

TEST_CASE("witness examples")
{
    std::mt19937_64 rng(29);
    const auto rho = StateVector({2, 2}, random_amplitudes(4, rng)).density();
    CHECK(witness_expectation(rho, WitnessOperator({2, 2}, Eigen::MatrixXcd::Identity(4, 4))) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // swap-based witness (I - SWAP)/2 ... nonnegative on product states
    Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    const WitnessOperator ws({2, 2}, 0.5 * (Eigen::MatrixXcd::Identity(4, 4) - swap));
    for (int t = 0; t < 20; ++t) {
        const auto prod = tensor_product(StateVector({2}, random_amplitudes(2, rng)),
                                         StateVector({2}, random_amplitudes(2, rng)));
        CHECK(witness_expectation(prod.density(), ws) >= -1e-14);
    }

    const auto maxent = four_branch_state(std::numbers::pi / 2, std::numbers::pi / 2).density();
    CHECK(witness_expectation(maxent, default_witness()) < 0.0);
    CHECK_THROWS_AS(witness_expectation(StateVector::basis({3}, 0).density(), default_witness()), ValidationError);
}

TEST_CASE("adapted witness tracks the phase sum")
{
    for (double a : {0.1, 0.7, 1.3, 2.9}) {
        for (double b : {0.2, 1.1, 2.5}) {
            const auto rho = four_branch_state(a, b).density();
            CHECK(std::abs(witness_expectation(rho, adapted_branch_witness(a, b)) +
                           std::abs(std::sin(0.5 * (a + b))) / 2.0) < 1e-12);
        }
    }
}

TEST_CASE("JSON round trip")
{
    std::mt19937_64 rng(31);
    const StateVector s({2, 3}, random_amplitudes(6, rng));
    const auto s2 = state_from_json(to_json(s));
    CHECK(s2.dims() == s.dims());
    CHECK(s2.amplitudes() == s.amplitudes());
    const auto rho = s.density();
    const auto rho2 = density_from_json(to_json(rho));
    CHECK(rho2.entries() == rho.entries());
    const auto w = default_witness();
    CHECK(witness_from_json(to_json(w)).entries() == w.entries());
    CHECK_THROWS_AS(state_from_json("{\"dims\": [2], \"re\": [1]}"), ValidationError);
}
