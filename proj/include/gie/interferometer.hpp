#pragma once

#include "gie/csv.hpp"
#include "gie/hilbert.hpp"
#include "gie/kvconfig.hpp"
#include "gie/parallel.hpp"

#include <array>
#include <string>
#include <vector>

namespace gie::interferometer {

inline constexpr double kDefaultG = 6.67430e-11;        // m^3 kg^-1 s^-2
inline constexpr double kDefaultHbar = 1.054571817e-34; // J s

/// Two masses, each split into left/right branches Δx apart, centres d apart.
/// SI units throughout.
struct InterferometerConfig {
    double m1 = 0.0;
    double m2 = 0.0;
    double d = 0.0;
    double delta_x = 0.0;
    double t = 0.0;
    double G = kDefaultG;
    double hbar = kDefaultHbar;
    /// Alternative model: each particle only feels the branch-averaged mass
    /// of its partner. Produces a product state.
    bool mean_field = false;

    /// Throws ValidationError naming the violated condition.
    void validate() const;
    /// G m1 m2 t / hbar.
    double prefactor() const;
};

struct PhasePair {
    double phi_plus = 0.0;
    double phi_minus = 0.0;
};

/// phi_± = (G m1 m2 t/hbar)(1/(d ± Δx) - 1/d), evaluated in the
/// cancellation-free form ∓Δx / (d (d ± Δx)).
PhasePair branch_phases(const InterferometerConfig& cfg);

struct BranchState {
    /// Branch phases in the order LL, LR, RL, RR.
    std::array<double, 4> phases{};
    hilbert::StateVector state;
};

/// Four-branch state after duration cfg.t, basis order |LL>,|LR>,|RL>,|RR>.
BranchState evolve_branches(const InterferometerConfig& cfg);

/// Negativity across the A|B cut.
double branch_negativity(const BranchState& s);

struct ScanRow {
    double t, phi_plus, phi_minus, negativity, witness;
};

/// One row per time, in input order. The witness column uses the projector
/// witness adapted to the local phase frame of each row.
std::vector<ScanRow> entanglement_scan(const InterferometerConfig& cfg, const std::vector<double>& times,
                                       const Parallelism& policy = {});
Table scan_table(const std::vector<ScanRow>& rows);

/// Evenly spaced times, inclusive of both ends.
std::vector<double> linspace_times(double t_min, double t_max, int steps);

/// Smallest t > 0 with phi_+ + phi_- = pi.
double max_entanglement_time(const InterferometerConfig& cfg);

/// Reads m1, m2, d, delta_x, t, G, hbar, mean_field (keys prefixed by
/// `prefix`). G and hbar default to CODATA values; t may default to 1 s
/// when `t_optional` is set.
InterferometerConfig config_from_kv(const KvConfig& kv, const std::string& prefix = "", bool t_optional = false);
std::vector<std::string> config_keys(const std::string& prefix = "");

} // namespace gie::interferometer
