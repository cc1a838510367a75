#pragma once

#include "gie/csv.hpp"
#include "gie/parallel.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace gie::pathint {

struct Node {
    double t;
    Eigen::Vector3d x;
};

/// Piecewise-linear trajectory. Before its first node and after its last
/// node the particle is taken to be at rest there.
class Worldline {
public:
    Worldline() = default;
    /// Validates strictly increasing times and subluminal segments.
    Worldline(std::vector<Node> nodes, double c, std::string label = "");

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::string& label() const { return label_; }
    double c() const { return c_; }

    Eigen::Vector3d position(double t) const;
    /// Velocity of the segment containing t (zero outside the node range).
    Eigen::Vector3d velocity(double t) const;
    /// Node times at which the velocity jumps.
    std::vector<double> kinks() const;

    struct Emission {
        double t;              // emission time
        Eigen::Vector3d x;     // source position at emission
        Eigen::Vector3d v;     // source velocity at emission
    };
    /// Point on this worldline on the past (direction -1) or future
    /// (direction +1) light cone of event (t, x).
    Emission light_cone(double t, const Eigen::Vector3d& x, int direction) const;

    Worldline shifted(double dt) const;

private:
    std::size_t segment_of(double t) const;

    std::vector<Node> nodes_;
    double c_ = 1.0;
    std::string label_;
};

struct WorldlinePair {
    Worldline first;
    Worldline second;
};

enum class Kernel { instantaneous, retarded, symmetric };
Kernel parse_kernel(const std::string& s);
std::string to_string(Kernel k);

inline constexpr const char* kBranchLabels[4] = {"LL", "LR", "RL", "RR"};

/// Interaction energy V = coupling / r, so coupling = -G m1 m2 for gravity
/// and q1 q2 / (4 pi eps0) for charges. Phases follow exp(-i S / hbar):
/// phase = -(1/hbar) * integral of V dt.
struct BranchProtocol {
    std::array<WorldlinePair, 4> branches; // LL, LR, RL, RR
    double t0 = 0.0;
    double t1 = 0.0;
    double coupling = -1.0;
    double hbar = 1.0;
    double c = 1.0;
    /// Interferometric closure: every branch starts and ends at the same
    /// positions. Static reference geometries are not closed.
    bool closed = true;

    void validate() const;
    BranchProtocol shifted(double dt) const;
};

struct QuadratureOptions {
    double rel_tol = 1e-13;
    /// Failure threshold on the reported error estimate.
    double accept_tol = 1e-10;
    unsigned max_depth = 24;
};

double instantaneous_phase(const WorldlinePair& pair, double coupling, double hbar, double t0, double t1,
                           const QuadratureOptions& q = {});

/// Lienard-Wiechert style kernel coupling / (R (1 - n.v/c)) evaluated on
/// the light cone of each particle, averaged over which particle is the
/// source. `direction` -1 is retarded, +1 advanced.
double lightcone_phase(const WorldlinePair& pair, double coupling, double hbar, double t0, double t1, int direction,
                       const QuadratureOptions& q = {});

double retarded_phase(const WorldlinePair& pair, double coupling, double hbar, double t0, double t1,
                      const QuadratureOptions& q = {});

double branch_phase(const WorldlinePair& pair, Kernel k, double coupling, double hbar, double t0, double t1,
                    const QuadratureOptions& q = {});

/// Phases in label order LL, LR, RL, RR.
std::array<double, 4> branch_phases(const BranchProtocol& p, Kernel k, const Parallelism& policy = {},
                                    const QuadratureOptions& q = {});

/// phi_LL + phi_RR - phi_LR - phi_RL.
double entangling_phase(const std::array<double, 4>& phases);
double entangling_phase(const BranchProtocol& p, Kernel k, const Parallelism& policy = {},
                        const QuadratureOptions& q = {});

// Protocol families. Particle 1 is centred at the origin, particle 2 at
// (d, 0, 0); branch L displaces a particle by -dx/2 along x, R by +dx/2.

/// Fixed branch positions for duration T (not closed).
BranchProtocol static_gie_protocol(double d, double dx, double T, double coupling, double hbar, double c);

/// Trapezoidal split-hold-merge: rest for `pad`, split at speed v over
/// dx / (2 v), hold, merge at speed v, rest for `pad`. Both particles move
/// in the same time window.
struct SplitHoldMerge {
    double d = 1.0;
    double dx = 0.5;
    double v = 1e-2;
    double hold = 0.0;
    double pad = 0.0;
    double coupling = -1.0;
    double hbar = 1.0;
    double c = 1.0;
    /// Split direction: 0 along the separation (x), 1 transverse (y).
    int axis = 0;

    double split_time() const { return 0.5 * dx / v; }
    double motion_time() const { return 2.0 * split_time() + hold; }
    double duration() const { return 2.0 * pad + motion_time(); }
};

BranchProtocol split_hold_merge(const SplitHoldMerge& s);

/// Geometry held fixed, timeline scaled with 1/v: hold = hold_factor * tau
/// and pad = max(tau, 2 (d + dx) / c) with tau the split time.
SplitHoldMerge adiabatic_family(double d, double dx, double v, double hold_factor, double coupling, double hbar,
                                double c, int axis = 0);

/// Split, hold and merge completed within `fraction` of (d - dx)/c, padded
/// at rest long enough for every light-cone signal to arrive.
SplitHoldMerge spacelike_family(double d, double dx, double fraction, double coupling, double hbar, double c,
                                int axis = 0);

/// True when the whole motion fits inside the light-crossing time of the
/// closest branch separation.
bool is_spacelike(const SplitHoldMerge& s);

// JSON: {"t0","t1","coupling","hbar","c","closed",
//        "branches":{"LL":{"first":[[t,x,y,z],...],"second":[...]}, ...}}
std::string to_json(const BranchProtocol& p);
BranchProtocol protocol_from_json(const std::string& text);

struct KernelScalingRow {
    double v_over_c, phi_inst, phi_ret, rel_dev;
};

/// Relative instantaneous/retarded disagreement of the entangling phase
/// along the adiabatic family, plus the least-squares exponent of
/// rel_dev against v/c in log-log.
struct KernelScaling {
    std::vector<KernelScalingRow> rows;
    double exponent = 0.0;
    Table table() const;
};

/// `axis` as in SplitHoldMerge. A split along the separation axis cancels
/// the (v/c)^2 term exactly, leaving (v/c)^3; the transverse split shows the
/// generic (v/c)^2 behaviour.
KernelScaling kernel_scaling(double d, double dx, const std::vector<double>& v_over_c, double hold_factor,
                             int axis = 1, const Parallelism& policy = {});

} // namespace gie::pathint
