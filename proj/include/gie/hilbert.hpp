#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace gie::hilbert {

using Complex = std::complex<double>;
using Dims = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultMaxHilbertSize = std::size_t{1} << 20;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
/// Eigenvalues in [-kEigenClip, 0) count as zero in positivity checks.
inline constexpr double kEigenClip = 1e-10;

/// Product of subsystem dimensions; throws ValidationError on zero
/// dimensions or when the product exceeds `max_size`.
std::size_t total_dimension(const Dims& dims, std::size_t max_size = kDefaultMaxHilbertSize);

class DensityMatrix;

/// Pure state on a tensor product of subsystems, little-endian in the sense
/// that the last subsystem index varies fastest.
class StateVector {
public:
    StateVector(Dims dims, Eigen::VectorXcd amplitudes);

    static StateVector basis(Dims dims, std::size_t index);

    const Dims& dims() const { return dims_; }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }

    double norm() const { return amplitudes_.norm(); }
    StateVector normalized() const;
    DensityMatrix density() const;

private:
    Dims dims_;
    Eigen::VectorXcd amplitudes_;
};

/// Validated density operator: Hermitian, unit trace, positive semidefinite
/// up to the clip tolerance.
class DensityMatrix {
public:
    DensityMatrix(Dims dims, Eigen::MatrixXcd entries);

    const Dims& dims() const { return dims_; }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }

    Complex trace() const { return entries_.trace(); }
    /// Ascending eigenvalues of the Hermitian part.
    Eigen::VectorXd eigenvalues() const;

private:
    Dims dims_;
    Eigen::MatrixXcd entries_;
};

class WitnessOperator {
public:
    WitnessOperator(Dims dims, Eigen::MatrixXcd entries);

    const Dims& dims() const { return dims_; }
    const Eigen::MatrixXcd& entries() const { return entries_; }

private:
    Dims dims_;
    Eigen::MatrixXcd entries_;
};

StateVector tensor_product(const StateVector& a, const StateVector& b,
                           std::size_t max_size = kDefaultMaxHilbertSize);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                             std::size_t max_size = kDefaultMaxHilbertSize);

/// Reduced state on the subsystems listed in `keep` (any order, no
/// duplicates); the result orders them ascending.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);

/// Transpose on the listed subsystems. The result is Hermitian but not
/// necessarily positive, so it is returned as a plain matrix.
Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, const std::vector<std::size_t>& subsystems);

/// (||rho^{T_B}||_1 - 1) / 2 with B the subsystems in `bipartition`.
double negativity(const DensityMatrix& rho, const std::vector<std::size_t>& bipartition);

/// Re Tr(W rho).
double witness_expectation(const DensityMatrix& rho, const WitnessOperator& w);

/// W = (1/2) I - |target><target| on two qubits. Negative expectation
/// certifies entanglement because separable states overlap any maximally
/// entangled two-qubit state by at most 1/2.
WitnessOperator projector_witness(const StateVector& target);

/// Four-branch state (|00> + e^{i phi_plus}|01> + e^{i phi_minus}|10> + |11>)/2.
StateVector four_branch_state(double phi_plus, double phi_minus);

/// Projector witness targeting the phi_plus = phi_minus = pi/2 branch state.
/// Stand-in for the witness family used in the literature; override via
/// a JSON witness file when a different operator is wanted.
WitnessOperator default_witness();

/// Projector witness for the maximally entangled branch state that shares
/// the local phase frame of (phi_plus, phi_minus). Its expectation on the
/// four-branch state is -|sin((phi_plus + phi_minus)/2)|/2.
WitnessOperator adapted_branch_witness(double phi_plus, double phi_minus);

// JSON documents {"dims": [...], "re": [...], "im": [...]}, row-major.
std::string to_json(const StateVector& s);
std::string to_json(const DensityMatrix& rho);
std::string to_json(const WitnessOperator& w);
StateVector state_from_json(const std::string& text);
DensityMatrix density_from_json(const std::string& text);
WitnessOperator witness_from_json(const std::string& text);

} // namespace gie::hilbert
