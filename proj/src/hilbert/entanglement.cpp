#include "gie/hilbert.hpp"

#include "gie/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gie::hilbert {
namespace {

std::vector<std::size_t> strides_of(const Dims& dims)
{
    std::vector<std::size_t> s(dims.size());
    std::size_t acc = 1;
    for (std::size_t i = dims.size(); i-- > 0;) {
        s[i] = acc;
        acc *= dims[i];
    }
    return s;
}

/// Full-space offsets contributed by every digit combination of `subset`,
/// enumerated with the last listed subsystem varying fastest.
std::vector<std::size_t> subset_offsets(const Dims& dims, const std::vector<std::size_t>& subset)
{
    const auto strides = strides_of(dims);
    std::vector<std::size_t> offsets{0};
    for (std::size_t sys : subset) {
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * dims[sys]);
        for (std::size_t base : offsets)
            for (std::size_t d = 0; d < dims[sys]; ++d)
                next.push_back(base + d * strides[sys]);
        offsets = std::move(next);
    }
    return offsets;
}

std::vector<std::size_t> checked_subset(const Dims& dims, std::vector<std::size_t> subset, const char* what)
{
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
        throw ValidationError(std::string(what) + ": duplicate subsystem index");
    for (std::size_t s : subset)
        if (s >= dims.size())
            throw ValidationError(std::string(what) + ": invalid subsystem index " + std::to_string(s));
    return subset;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& subset)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (!std::binary_search(subset.begin(), subset.end(), i))
            out.push_back(i);
    return out;
}

} // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep_in)
{
    const auto keep = checked_subset(rho.dims(), keep_in, "partial_trace");
    if (keep.empty())
        throw ValidationError("partial_trace: keep set must be nonempty");
    const auto traced = complement(rho.dims().size(), keep);
    const auto kept_off = subset_offsets(rho.dims(), keep);
    const auto traced_off = subset_offsets(rho.dims(), traced);

    Dims kept_dims;
    for (std::size_t s : keep)
        kept_dims.push_back(rho.dims()[s]);

    const auto n = static_cast<Eigen::Index>(kept_off.size());
    Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(n, n);
    const auto& m = rho.entries();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (std::size_t t : traced_off)
                acc += m(static_cast<Eigen::Index>(kept_off[i] + t), static_cast<Eigen::Index>(kept_off[j] + t));
            red(i, j) = acc;
        }
    // Summation order can leave rounding-level anti-Hermitian residue.
    red = 0.5 * (red + red.adjoint()).eval();
    return {std::move(kept_dims), std::move(red)};
}

Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, const std::vector<std::size_t>& subsystems)
{
    const auto b = checked_subset(rho.dims(), subsystems, "partial_transpose");
    const auto a = complement(rho.dims().size(), b);
    const auto a_off = subset_offsets(rho.dims(), a);
    const auto b_off = subset_offsets(rho.dims(), b);
    const auto& m = rho.entries();
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (std::size_t ai : a_off)
        for (std::size_t bi : b_off)
            for (std::size_t aj : a_off)
                for (std::size_t bj : b_off)
                    out(static_cast<Eigen::Index>(ai + bi), static_cast<Eigen::Index>(aj + bj)) =
                        m(static_cast<Eigen::Index>(ai + bj), static_cast<Eigen::Index>(aj + bi));
    return out;
}

double negativity(const DensityMatrix& rho, const std::vector<std::size_t>& bipartition)
{
    const auto b = checked_subset(rho.dims(), bipartition, "negativity");
    if (b.empty() || b.size() == rho.dims().size())
        throw ValidationError("negativity: bipartition must be a proper nonempty subset of subsystems");
    const Eigen::MatrixXcd pt = partial_transpose(rho, b);
    const Eigen::MatrixXcd h = 0.5 * (pt + pt.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    double neg = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const double ev = solver.eigenvalues()(i);
        if (ev < -kEigenClip)
            neg -= ev;
    }
    // (||X||_1 - 1)/2 equals the magnitude sum of negative eigenvalues for unit trace.
    return neg;
}

double witness_expectation(const DensityMatrix& rho, const WitnessOperator& w)
{
    if (rho.dims() != w.dims())
        throw ValidationError("witness_expectation: dimension mismatch between state and witness");
    return (w.entries() * rho.entries()).trace().real();
}

WitnessOperator projector_witness(const StateVector& target)
{
    const StateVector t = target.normalized();
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXcd w = 0.5 * Eigen::MatrixXcd::Identity(n, n) - t.amplitudes() * t.amplitudes().adjoint();
    w = 0.5 * (w + w.adjoint()).eval();
    return {t.dims(), std::move(w)};
}

StateVector four_branch_state(double phi_plus, double phi_minus)
{
    Eigen::VectorXcd amps(4);
    amps << 0.5, 0.5 * std::polar(1.0, phi_plus), 0.5 * std::polar(1.0, phi_minus), 0.5;
    return {Dims{2, 2}, std::move(amps)};
}

WitnessOperator default_witness()
{
    return projector_witness(four_branch_state(std::numbers::pi / 2, std::numbers::pi / 2));
}

WitnessOperator adapted_branch_witness(double phi_plus, double phi_minus)
{
    // Shift both phases by the same local rotation so their sum becomes an odd
    // multiple of pi; pick the branch that overlaps the actual state best.
    double shift = 0.5 * (std::numbers::pi - (phi_plus + phi_minus));
    if (std::cos(shift) < 0.0)
        shift += std::numbers::pi;
    return projector_witness(four_branch_state(phi_plus + shift, phi_minus + shift));
}

} // namespace gie::hilbert
