#include "gie/hilbert.hpp"

#include "gie/error.hpp"

#include <cmath>
#include <limits>

namespace gie::hilbert {

std::size_t total_dimension(const Dims& dims, std::size_t max_size)
{
    if (dims.empty())
        throw ValidationError("Hilbert space needs at least one subsystem");
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0)
            throw ValidationError("subsystem dimension must be positive");
        if (total > max_size / d)
            throw ValidationError("Hilbert space size exceeds configured maximum of " +
                                  std::to_string(max_size) + " amplitudes");
        total *= d;
    }
    return total;
}

StateVector::StateVector(Dims dims, Eigen::VectorXcd amplitudes)
    : dims_(std::move(dims))
    , amplitudes_(std::move(amplitudes))
{
    const std::size_t n = total_dimension(dims_, std::numeric_limits<std::size_t>::max());
    if (static_cast<std::size_t>(amplitudes_.size()) != n)
        throw ValidationError("amplitude count " + std::to_string(amplitudes_.size()) +
                              " does not match product of dims " + std::to_string(n));
    if (!amplitudes_.allFinite())
        throw ValidationError("state amplitudes must be finite");
}

StateVector StateVector::basis(Dims dims, std::size_t index)
{
    const std::size_t n = total_dimension(dims);
    if (index >= n)
        throw ValidationError("basis index out of range");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
    amps(static_cast<Eigen::Index>(index)) = 1.0;
    return {std::move(dims), std::move(amps)};
}

StateVector StateVector::normalized() const
{
    const double n = norm();
    if (!(n > 0.0))
        throw ValidationError("cannot normalize the zero vector");
    return {dims_, amplitudes_ / n};
}

DensityMatrix StateVector::density() const
{
    return {dims_, amplitudes_ * amplitudes_.adjoint()};
}

DensityMatrix::DensityMatrix(Dims dims, Eigen::MatrixXcd entries)
    : dims_(std::move(dims))
    , entries_(std::move(entries))
{
    const std::size_t n = total_dimension(dims_, std::numeric_limits<std::size_t>::max());
    if (static_cast<std::size_t>(entries_.rows()) != n || entries_.rows() != entries_.cols())
        throw ValidationError("density matrix must be square with side equal to product of dims");
    if (!entries_.allFinite())
        throw ValidationError("density matrix entries must be finite");
    const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTolerance)
        throw ValidationError("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
    const Complex tr = entries_.trace();
    if (std::abs(tr - 1.0) > kTraceTolerance)
        throw ValidationError("density matrix trace deviates from 1 by " + std::to_string(std::abs(tr - 1.0)));
    const double min_eig = eigenvalues().minCoeff();
    if (min_eig < -kEigenClip)
        throw ValidationError("density matrix has negative eigenvalue " + std::to_string(min_eig));
}

Eigen::VectorXd DensityMatrix::eigenvalues() const
{
    const Eigen::MatrixXcd h = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

WitnessOperator::WitnessOperator(Dims dims, Eigen::MatrixXcd entries)
    : dims_(std::move(dims))
    , entries_(std::move(entries))
{
    const std::size_t n = total_dimension(dims_, std::numeric_limits<std::size_t>::max());
    if (static_cast<std::size_t>(entries_.rows()) != n || entries_.rows() != entries_.cols())
        throw ValidationError("witness must be square with side equal to product of dims");
    const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTolerance)
        throw ValidationError("witness operator is not Hermitian");
}

namespace {

Dims concat(const Dims& a, const Dims& b)
{
    Dims out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

} // namespace

StateVector tensor_product(const StateVector& a, const StateVector& b, std::size_t max_size)
{
    Dims dims = concat(a.dims(), b.dims());
    const std::size_t n = total_dimension(dims, max_size);
    Eigen::VectorXcd amps(static_cast<Eigen::Index>(n));
    const auto nb = static_cast<Eigen::Index>(b.size());
    for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
        amps.segment(i * nb, nb) = a.amplitudes()(i) * b.amplitudes();
    return {std::move(dims), std::move(amps)};
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b, std::size_t max_size)
{
    Dims dims = concat(a.dims(), b.dims());
    const std::size_t n = total_dimension(dims, max_size);
    const auto nb = static_cast<Eigen::Index>(b.size());
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.entries().rows(); ++i)
        for (Eigen::Index j = 0; j < a.entries().cols(); ++j)
            m.block(i * nb, j * nb, nb, nb) = a.entries()(i, j) * b.entries();
    return {std::move(dims), std::move(m)};
}

} // namespace gie::hilbert
