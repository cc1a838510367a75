#pragma once

#include "gie/csv.hpp"
#include "gie/parallel.hpp"

#include <complex>
#include <string>
#include <vector>

namespace gie::cosmo {

// Natural units: c = hbar = 1, reduced Planck mass 1. H0 sets the scale.

enum class Model { desitter, powerlaw };
Model parse_model(const std::string& s);
std::string to_string(Model m);

/// Inflationary background in conformal time tau < 0 with
/// a(tau) = (-H0 tau)^p, p = 1 / (eps - 1). de Sitter is eps = 0 for the
/// dynamics; its eps value is used only to normalise z and Phi.
struct Background {
    Model model = Model::desitter;
    double H0 = 1.0;
    double eps = 0.0;
    double tau_i = -100.0;
    double tau_f = -1e-3;

    void validate() const;
    /// Exponent p of the scale factor.
    double p() const;
    /// Bessel index of the mode equation.
    double nu() const;
    double a(double tau) const;
    /// Conformal Hubble rate a'/a = p / tau.
    double conformal_hubble(double tau) const;
    /// z = a sqrt(2 eps); de Sitter with eps = 0 uses z = a.
    double z(double tau) const;
    /// z''/z = p (p - 1) / tau^2, analytic.
    double zpp_over_z(double tau) const;
    /// Slow-roll factor eps used in the Phi conversion.
    double phi_eps() const { return eps; }
    /// n_s - 1 of P_{v/z} for this background.
    double analytic_tilt() const;
};

using cplx = std::complex<double>;

inline constexpr double kMinStartKTau = 100.0;

struct ModeOptions {
    double rel_tol = 1e-12;
    /// Absolute tolerance in units of 1 / sqrt(2k).
    double abs_tol = 1e-13;
    /// Extra samples, log-spaced in |tau| between tau_i and tau_f.
    int samples = 64;
};

/// v_k and dv_k/dtau on a grid, plus the largest Wronskian deviation
/// |v v*' - v* v' - i| seen across the samples.
struct ModeFunction {
    double k = 0.0;
    std::vector<double> tau;
    std::vector<cplx> v;
    std::vector<cplx> dv;
    double max_wronskian_dev = 0.0;
    long steps = 0;
};

/// Bunch-Davies mode (sqrt(pi)/2) e^{i(nu + 1/2) pi/2} sqrt(-tau) H^(1)_nu(-k tau)
/// and its tau derivative.
void bunch_davies(double k, const Background& bg, double tau, cplx& v, cplx& dv);

/// Integrates v'' + (k^2 - z''/z) v = 0 from tau0 to tau1 with RKF78.
void propagate(double k, const Background& bg, double tau0, cplx v0, cplx dv0, double tau1, cplx& v1, cplx& dv1,
               const ModeOptions& opts = {}, long* steps = nullptr);

/// Bunch-Davies start at bg.tau_i (requires |k tau_i| >= 100), samples on the
/// log grid plus any `extra_times` inside [tau_i, tau_f].
ModeFunction evolve_mode(double k, const Background& bg, const ModeOptions& opts = {},
                         const std::vector<double>& extra_times = {});

struct SpectrumRow {
    double k, p_v, p_vz, p_phi, wronskian_dev;
};

struct SpectrumOptions {
    /// Evaluation at |k tau| = eval_ktau, per mode.
    double eval_ktau = 1e-2;
    ModeOptions mode;
};

/// P_v = k^3 |v|^2 / (2 pi^2), P_{v/z} = P_v / z^2 and
/// P_Phi = k^3 |Phi|^2 / (2 pi^2) with Phi = -(eps a'/a / k^2) (v/z)'.
/// Rows come back sorted by k. An empty k list gives an empty result.
std::vector<SpectrumRow> power_spectrum(const std::vector<double>& ks, const Background& bg,
                                        const SpectrumOptions& opts = {}, const Parallelism& policy = {});
Table spectrum_table(const std::vector<SpectrumRow>& rows);

/// Least-squares slope of ln P against ln k. Needs >= 5 points spanning
/// at least a decade.
double spectral_tilt(const std::vector<double>& ks, const std::vector<double>& ps);

/// Log-spaced wavenumbers.
std::vector<double> log_ks(double kmin, double kmax, int nk);

/// Background whose tau_i puts the smallest k at |k tau_i| = start_ktau and
/// whose tau_f lies past the evaluation time of the largest k.
Background background_for(Model m, double H0, double eps, double kmin, double kmax, double eval_ktau = 1e-2,
                          double start_ktau = kMinStartKTau);

} // namespace gie::cosmo
