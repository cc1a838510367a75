#pragma once

#include "gie/gauge_pt.hpp"

namespace gie::gauge_pt::detail {

/// Ladder-operator algebra for two oscillators truncated at `cutoff` levels
/// each. Basis index nA * cutoff + nB.
struct TwoOscillatorFock {
    explicit TwoOscillatorFock(const OscillatorPair& pair);

    int cutoff;
    double hbar_omega;
    Eigen::MatrixXcd x1; // single-oscillator position
    Eigen::MatrixXcd p1; // single-oscillator momentum
    Eigen::MatrixXcd xA, xB, pA, pB;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(cutoff) * cutoff; }
    Eigen::Index index(int nA, int nB) const { return static_cast<Eigen::Index>(nA) * cutoff + nB; }
    double energy(Eigen::Index i) const;
    Eigen::VectorXcd basis(int nA, int nB) const;
};

} // namespace gie::gauge_pt::detail
