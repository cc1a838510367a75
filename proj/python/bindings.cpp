#include "gie/cosmo.hpp"
#include "gie/error.hpp"
#include "gie/fielddecomp.hpp"
#include "gie/gauge_pt.hpp"
#include "gie/interferometer.hpp"
#include "gie/pathint.hpp"
#include "gie/runner.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstring>

namespace py = pybind11;
using namespace gie;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Parallelism policy_for(unsigned threads)
{
    return threads == 0 ? Parallelism::from_env(1) : Parallelism{threads};
}

Array table_array(const Table& t)
{
    Array out({t.rows.size(), t.header.size()});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (std::size_t j = 0; j < t.header.size(); ++j)
            m(i, j) = t.rows[i][j];
    return out;
}

py::dict table_dict(const Table& t)
{
    py::dict d;
    d["columns"] = t.header;
    d["data"] = table_array(t);
    return d;
}

// (components, n, n, n) <-> component-major storage; same memory order
fielddecomp::GridField3D field_from(const Array& a, double L)
{
    if (a.ndim() != 4 || a.shape(1) != a.shape(2) || a.shape(2) != a.shape(3))
        throw ValidationError("expected an array of shape (components, n, n, n)");
    if (a.shape(0) != 1 && a.shape(0) != 3)
        throw ValidationError("fields have 1 or 3 components");
    const fielddecomp::Grid3D g{static_cast<int>(a.shape(1)), L};
    g.validate();
    fielddecomp::GridField3D f(g, static_cast<int>(a.shape(0)));
    std::memcpy(f.data.data(), a.data(), f.data.size() * sizeof(double));
    return f;
}

Array field_to(const fielddecomp::GridField3D& f)
{
    const auto n = static_cast<py::ssize_t>(f.grid.n);
    Array out({static_cast<py::ssize_t>(f.components), n, n, n});
    std::memcpy(out.mutable_data(), f.data.data(), f.data.size() * sizeof(double));
    return out;
}

KvConfig kv_from(const std::map<std::string, std::string>& m)
{
    KvConfig kv;
    for (const auto& [k, v] : m)
        kv.set(k, v);
    return kv;
}

} // namespace

PYBIND11_MODULE(_gie_core, m)
{
    m.doc() = "Numerical core: interferometer phases, gauge comparison, field decomposition, "
              "worldline phases and inflationary spectra";
    m.attr("__version__") = runner::kVersion;

    static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
    static py::exception<RegimeError> regime(m, "RegimeError", PyExc_ArithmeticError);
    static py::exception<ConvergenceError> convergence(m, "ConvergenceError", PyExc_RuntimeError);
    static py::exception<IoError> io(m, "IoError", PyExc_OSError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            validation(e.what());
        } catch (const RegimeError& e) {
            regime(e.what());
        } catch (const ConvergenceError& e) {
            convergence(e.what());
        } catch (const IoError& e) {
            io(e.what());
        }
    });

    // interferometer
    using interferometer::InterferometerConfig;
    py::class_<InterferometerConfig>(m, "InterferometerConfig")
        .def(py::init([](double m1, double m2, double d, double delta_x, double t, double G, double hbar,
                         bool mean_field) {
                 InterferometerConfig c;
                 c.m1 = m1;
                 c.m2 = m2;
                 c.d = d;
                 c.delta_x = delta_x;
                 c.t = t;
                 c.G = G;
                 c.hbar = hbar;
                 c.mean_field = mean_field;
                 return c;
             }),
             py::arg("m1"), py::arg("m2"), py::arg("d"), py::arg("delta_x"), py::arg("t"),
             py::arg("G") = interferometer::kDefaultG, py::arg("hbar") = interferometer::kDefaultHbar,
             py::arg("mean_field") = false)
        .def_readwrite("m1", &InterferometerConfig::m1)
        .def_readwrite("m2", &InterferometerConfig::m2)
        .def_readwrite("d", &InterferometerConfig::d)
        .def_readwrite("delta_x", &InterferometerConfig::delta_x)
        .def_readwrite("t", &InterferometerConfig::t)
        .def_readwrite("G", &InterferometerConfig::G)
        .def_readwrite("hbar", &InterferometerConfig::hbar)
        .def_readwrite("mean_field", &InterferometerConfig::mean_field)
        .def("validate", &InterferometerConfig::validate);

    m.def(
        "branch_phases",
        [](const InterferometerConfig& c) {
            const auto p = interferometer::branch_phases(c);
            return py::make_tuple(p.phi_plus, p.phi_minus);
        },
        py::arg("config"), "(phi_plus, phi_minus) in radians");
    m.def(
        "negativity", [](const InterferometerConfig& c) {
            return interferometer::branch_negativity(interferometer::evolve_branches(c));
        },
        py::arg("config"));
    m.def(
        "entanglement_scan",
        [](const InterferometerConfig& c, const std::vector<double>& times, unsigned threads) {
            return table_dict(interferometer::scan_table(interferometer::entanglement_scan(c, times, policy_for(threads))));
        },
        py::arg("config"), py::arg("times"), py::arg("threads") = 0);
    m.def("max_entanglement_time", &interferometer::max_entanglement_time, py::arg("config"));

    // gauge comparison
    using gauge_pt::OscillatorPair;
    py::class_<OscillatorPair>(m, "OscillatorPair")
        .def(py::init([](double mass, double omega, double kappa, double d, const std::string& orientation,
                         double hbar, double c, double G) {
                 OscillatorPair p;
                 p.m = mass;
                 p.omega = omega;
                 p.kappa = kappa;
                 p.d = d;
                 p.orientation = gauge_pt::parse_orientation(orientation);
                 p.hbar = hbar;
                 p.c = c;
                 p.G = G;
                 return p;
             }),
             py::arg("m") = 1.0, py::arg("omega") = 1.0, py::arg("kappa") = 1.0, py::arg("d") = 10.0,
             py::arg("orientation") = "axial", py::arg("hbar") = 1.0, py::arg("c") = 500.0, py::arg("G") = 1.0)
        .def_readwrite("m", &OscillatorPair::m)
        .def_readwrite("omega", &OscillatorPair::omega)
        .def_readwrite("kappa", &OscillatorPair::kappa)
        .def_readwrite("d", &OscillatorPair::d)
        .def_readwrite("hbar", &OscillatorPair::hbar)
        .def_readwrite("c", &OscillatorPair::c)
        .def_readwrite("G", &OscillatorPair::G)
        .def_property(
            "orientation", [](const OscillatorPair& p) { return gauge_pt::to_string(p.orientation); },
            [](OscillatorPair& p, const std::string& s) { p.orientation = gauge_pt::parse_orientation(s); });

    m.def("dipole_coupling", &gauge_pt::dipole_coupling, py::arg("pair"));
    m.def("analog_gravity_coupling", &gauge_pt::analog_gravity_coupling, py::arg("pair"));
    m.def(
        "epsilon_coulomb", [](const OscillatorPair& p) { return gauge_pt::epsilon_coulomb(p).value; },
        py::arg("pair"));
    m.def(
        "epsilon_analog_gravity", [](const OscillatorPair& p) { return gauge_pt::epsilon_analog_gravity(p).value; },
        py::arg("pair"));
    m.def(
        "gauge_equivalence",
        [](const OscillatorPair& p, const std::vector<std::string>& grids, bool drop_scalar, unsigned threads) {
            std::vector<gauge_pt::ModeGrid> gs;
            for (const auto& g : grids)
                gs.push_back(gauge_pt::make_mode_grid(p, gauge_pt::grid_spec(g)));
            gauge_pt::LorentzOptions opts;
            opts.drop_scalar = drop_scalar;
            const auto rep = gauge_pt::gauge_equivalence_report(p, gs, opts, policy_for(threads));
            py::dict d;
            d["epsilon_coulomb"] = rep.coulomb.value;
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict row;
                row["grid"] = r.grid;
                row["modes"] = r.modes;
                row["epsilon_lorentz"] = r.eps_lorentz;
                row["rel_error"] = r.rel_error;
                rows.append(row);
            }
            d["rows"] = rows;
            d["monotone"] = rep.monotone;
            d["final_error"] = rep.final_error;
            return d;
        },
        py::arg("pair"), py::arg("grids") = std::vector<std::string>{"coarse", "medium", "fine"},
        py::arg("drop_scalar_photons") = false, py::arg("threads") = 0);

    // field decomposition
    m.def(
        "helmholtz",
        [](const Array& f, double L, unsigned threads) {
            const auto parts = fielddecomp::helmholtz_vector(field_from(f, L), policy_for(threads));
            return py::make_tuple(field_to(parts.parallel), field_to(parts.perp));
        },
        py::arg("field"), py::arg("L") = 1.0, py::arg("threads") = 0,
        "Split a (3, n, n, n) periodic vector field into curl-free and divergence-free parts");
    m.def(
        "solve_psi",
        [](const Array& t00, double L, double G, unsigned threads) {
            return field_to(fielddecomp::solve_psi(field_from(t00, L), G, policy_for(threads)));
        },
        py::arg("t00"), py::arg("L") = 1.0, py::arg("G") = 1.0, py::arg("threads") = 0);
    m.def(
        "newton_check",
        [](double m1, double m2, double d, std::vector<int> ns, double sigma, double L, double G, unsigned threads) {
            if (L <= 0.0)
                L = 4.0 * d;
            if (sigma <= 0.0)
                sigma = d / 10.0;
            const auto rep = fielddecomp::newtonian_reduction_check(m1, m2, d, L, ns, sigma, G, policy_for(threads));
            auto out = table_dict(rep.table());
            out["monotone"] = rep.monotone;
            return out;
        },
        py::arg("m1") = 1.0, py::arg("m2") = 1.0, py::arg("d") = 0.25, py::arg("ns") = std::vector<int>{64, 128},
        py::arg("sigma") = 0.0, py::arg("L") = 0.0, py::arg("G") = 1.0, py::arg("threads") = 0,
        "sigma <= 0 selects d/10, L <= 0 selects 4 d");

    // worldline phases
    m.def(
        "static_entangling_phase",
        [](double d, double dx, double T, double coupling, double hbar, double c, const std::string& kernel) {
            const auto p = pathint::static_gie_protocol(d, dx, T, coupling, hbar, c);
            return pathint::entangling_phase(p, pathint::parse_kernel(kernel));
        },
        py::arg("d"), py::arg("delta_x"), py::arg("T"), py::arg("coupling"), py::arg("hbar"), py::arg("c"),
        py::arg("kernel") = "retarded");
    m.def(
        "branch_phases_from_json",
        [](const std::string& text, const std::string& kernel, unsigned threads) {
            const auto ph =
                pathint::branch_phases(pathint::protocol_from_json(text), pathint::parse_kernel(kernel), policy_for(threads));
            return std::vector<double>(ph.begin(), ph.end());
        },
        py::arg("protocol_json"), py::arg("kernel") = "retarded", py::arg("threads") = 0,
        "Branch phases in the order LL, LR, RL, RR");
    m.def(
        "kernel_scaling",
        [](double d, double dx, const std::vector<double>& v, double hold, int axis, unsigned threads) {
            const auto ks = pathint::kernel_scaling(d, dx, v, hold, axis, policy_for(threads));
            auto out = table_dict(ks.table());
            out["exponent"] = ks.exponent;
            return out;
        },
        py::arg("d") = 1.0, py::arg("delta_x") = 0.5,
        py::arg("v_over_c") = std::vector<double>{1e-4, 1e-3, 1e-2, 3e-2, 1e-1}, py::arg("hold_factor") = 1.0,
        py::arg("axis") = 1, py::arg("threads") = 0);

    // inflationary spectra
    m.def(
        "power_spectrum",
        [](const std::string& model, double eps, double kmin, double kmax, int nk, double H0, unsigned threads) {
            const auto bg = cosmo::background_for(cosmo::parse_model(model), H0, eps, kmin, kmax);
            const auto rows = cosmo::power_spectrum(cosmo::log_ks(kmin, kmax, nk), bg, {}, policy_for(threads));
            std::vector<double> ks, p;
            for (const auto& r : rows) {
                ks.push_back(r.k);
                p.push_back(r.p_vz);
            }
            auto out = table_dict(cosmo::spectrum_table(rows));
            out["tilt"] = cosmo::spectral_tilt(ks, p);
            out["analytic_tilt"] = bg.analytic_tilt();
            return out;
        },
        py::arg("model") = "desitter", py::arg("eps") = 0.01, py::arg("kmin") = 1.0, py::arg("kmax") = 10.0,
        py::arg("nk") = 32, py::arg("H0") = 1.0, py::arg("threads") = 0);

    // experiments
    m.def(
        "list_experiments",
        [] {
            std::vector<std::string> names;
            for (const auto& e : runner::list_experiments())
                names.push_back(e.name);
            return names;
        });
    m.def(
        "run_experiment",
        [](const std::string& name, const std::map<std::string, std::string>& params,
           const std::map<std::string, std::string>& tolerances, std::uint64_t seed, unsigned threads) {
            runner::Context ctx;
            ctx.params = kv_from(params);
            ctx.tolerances = kv_from(tolerances);
            ctx.seed = seed;
            ctx.policy = policy_for(threads);
            return runner::run_experiment(runner::find_experiment(name), ctx).to_json();
        },
        py::arg("name"), py::arg("params") = std::map<std::string, std::string>{},
        py::arg("tolerances") = std::map<std::string, std::string>{}, py::arg("seed") = 1, py::arg("threads") = 0,
        "Result record as JSON text");
    m.def(
        "run_config",
        [](const std::string& path) {
            const auto out = runner::run(path);
            return py::make_tuple(out.exit_code, out.record.to_json());
        },
        py::arg("path"), "(exit_code, record_json) for a run configuration file");
}
