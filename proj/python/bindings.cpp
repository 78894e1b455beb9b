// Python bindings for the eigsim core: parameter types, the harmonic
// solver, Doppler averaging, phase matching / coupled-mode propagation,
// and the sweep engine.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eigsim/config.hpp"
#include "eigsim/errors.hpp"

namespace py = pybind11;
using namespace eigsim;

namespace {

// Allows SystemParams(gamma_a=..., rabi_c1=...) style construction.
template <typename T>
void apply_kwargs(T& obj, const py::kwargs& kwargs,
                  const std::map<std::string, std::function<void(T&, py::handle)>>& setters) {
    for (const auto& item : kwargs) {
        const auto key = item.first.cast<std::string>();
        const auto it = setters.find(key);
        if (it == setters.end())
            throw py::key_error("unknown parameter '" + key + "'");
        it->second(obj, item.second);
    }
}

#define EIGSIM_FIELD(type, name)                                    \
    {                               #name,                          \
        [](type& o, py::handle v) { o.name = v.cast<decltype(o.name)>(); }}

const std::map<std::string, std::function<void(SystemParams&, py::handle)>>
    kParamFields = {
        EIGSIM_FIELD(SystemParams, gamma_a),
        EIGSIM_FIELD(SystemParams, gamma_ab),
        EIGSIM_FIELD(SystemParams, gamma_cb),
        EIGSIM_FIELD(SystemParams, rabi_p),
        EIGSIM_FIELD(SystemParams, rabi_c1),
        EIGSIM_FIELD(SystemParams, rabi_c2),
        EIGSIM_FIELD(SystemParams, delta_p),
        EIGSIM_FIELD(SystemParams, delta_c),
        EIGSIM_FIELD(SystemParams, hyperfine_split),
        EIGSIM_FIELD(SystemParams, density),
        EIGSIM_FIELD(SystemParams, length),
        EIGSIM_FIELD(SystemParams, theta),
        EIGSIM_FIELD(SystemParams, temperature),
        EIGSIM_FIELD(SystemParams, window_loss),
};

const std::map<std::string, std::function<void(SolveOptions&, py::handle)>>
    kOptionFields = {
        EIGSIM_FIELD(SolveOptions, doppler),
        EIGSIM_FIELD(SolveOptions, n_max),
        EIGSIM_FIELD(SolveOptions, truncation_tol),
        EIGSIM_FIELD(SolveOptions, n_cap),
        EIGSIM_FIELD(SolveOptions, velocity_nodes),
        EIGSIM_FIELD(SolveOptions, scheme),
        EIGSIM_FIELD(SolveOptions, window_loss),
        EIGSIM_FIELD(SolveOptions, threads),
};

} // namespace

PYBIND11_MODULE(_eigsim, m) {
    m.doc() = "Steady-state reflection spectra of a standing-wave-coupled "
              "three-level vapor";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError",
                                           PyExc_ArithmeticError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError",
                                             PyExc_RuntimeError);

    py::class_<PhysicalConstants>(m, "PhysicalConstants")
        .def(py::init<>())
        .def_readwrite("speed_of_light", &PhysicalConstants::speed_of_light)
        .def_readwrite("reduced_planck", &PhysicalConstants::reduced_planck)
        .def_readwrite("vacuum_permittivity",
                       &PhysicalConstants::vacuum_permittivity)
        .def_readwrite("boltzmann", &PhysicalConstants::boltzmann)
        .def_readwrite("atom_mass", &PhysicalConstants::atom_mass)
        .def_readwrite("dipole_moment", &PhysicalConstants::dipole_moment)
        .def_readwrite("wavelength", &PhysicalConstants::wavelength)
        .def("validate", &PhysicalConstants::validate);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](const py::kwargs& kwargs) {
            SystemParams p;
            apply_kwargs(p, kwargs, kParamFields);
            return p;
        }))
        .def_readwrite("gamma_a", &SystemParams::gamma_a)
        .def_readwrite("gamma_ab", &SystemParams::gamma_ab)
        .def_readwrite("gamma_cb", &SystemParams::gamma_cb)
        .def_readwrite("rabi_p", &SystemParams::rabi_p)
        .def_readwrite("rabi_c1", &SystemParams::rabi_c1)
        .def_readwrite("rabi_c2", &SystemParams::rabi_c2)
        .def_readwrite("delta_p", &SystemParams::delta_p)
        .def_readwrite("delta_c", &SystemParams::delta_c)
        .def_readwrite("hyperfine_split", &SystemParams::hyperfine_split)
        .def_readwrite("density", &SystemParams::density)
        .def_readwrite("length", &SystemParams::length)
        .def_readwrite("theta", &SystemParams::theta)
        .def_readwrite("temperature", &SystemParams::temperature)
        .def_readwrite("window_loss", &SystemParams::window_loss)
        .def("validate", [](const SystemParams& p) { validate(p); })
        .def("to_json", &params_to_json);
    m.def("params_from_json", &params_from_json);

    py::class_<DerivedFrequencies>(m, "DerivedFrequencies")
        .def_readonly("omega_p", &DerivedFrequencies::omega_p)
        .def_readonly("omega_c", &DerivedFrequencies::omega_c)
        .def_readonly("k_p", &DerivedFrequencies::k_p)
        .def_readonly("k_c", &DerivedFrequencies::k_c)
        .def_readonly("two_photon", &DerivedFrequencies::two_photon);
    m.def("derive_frequencies", &derive_frequencies, py::arg("params"),
          py::arg("constants") = PhysicalConstants{});

    py::class_<HarmonicSolution>(m, "HarmonicSolution")
        .def_readonly("n_max", &HarmonicSolution::n_max)
        .def_readonly("a_coeffs", &HarmonicSolution::a_coeffs)
        .def_readonly("b_coeffs", &HarmonicSolution::b_coeffs)
        .def_readonly("velocity", &HarmonicSolution::velocity)
        .def_readonly("residual_norm", &HarmonicSolution::residual_norm)
        .def_readonly("grating_wavevector",
                      &HarmonicSolution::grating_wavevector)
        .def("a", [](const HarmonicSolution& s, int n) { return s.a(n); })
        .def("b", [](const HarmonicSolution& s, int n) { return s.b(n); });

    py::class_<SusceptibilityHarmonics>(m, "SusceptibilityHarmonics")
        .def_readonly("n_max", &SusceptibilityHarmonics::n_max)
        .def_readonly("chi", &SusceptibilityHarmonics::chi)
        .def("__call__", [](const SusceptibilityHarmonics& c, int n) {
            if (n < -c.n_max || n > c.n_max)
                throw py::index_error("harmonic order out of range");
            return c(n);
        });

    m.def("solve_harmonics", &solve_harmonics, py::arg("params"),
          py::arg("freqs"), py::arg("velocity"), py::arg("n_max"));
    m.def("analytic_harmonics_v0", &analytic_harmonics_v0, py::arg("params"),
          py::arg("freqs"), py::arg("n_max") = 0);
    m.def("susceptibility_from_harmonics", &susceptibility_from_harmonics,
          py::arg("solution"), py::arg("params"),
          py::arg("constants") = PhysicalConstants{});
    m.def(
        "spatial_coherence",
        [](const HarmonicSolution& sol, const std::vector<double>& z) {
            return spatial_coherence(sol, z);
        },
        py::arg("solution"), py::arg("z_grid"));
    m.def("auto_truncate", &auto_truncate, py::arg("params"), py::arg("freqs"),
          py::arg("velocity"), py::arg("tol"), py::arg("n_cap") = 512);

    py::enum_<VelocityScheme>(m, "VelocityScheme")
        .value("gauss_hermite", VelocityScheme::gauss_hermite)
        .value("uniform_trapezoid", VelocityScheme::uniform_trapezoid);

    py::class_<VelocityGrid>(m, "VelocityGrid")
        .def_readonly("nodes", &VelocityGrid::nodes)
        .def_readonly("weights", &VelocityGrid::weights)
        .def_readonly("scheme", &VelocityGrid::scheme)
        .def_readonly("most_probable_speed",
                      &VelocityGrid::most_probable_speed);
    m.def("make_velocity_grid", &make_velocity_grid, py::arg("temperature"),
          py::arg("mass"), py::arg("order"),
          py::arg("scheme") = VelocityScheme::gauss_hermite,
          py::arg("boltzmann") = 1.380649e-23);
    m.def("doppler_average", &doppler_average, py::arg("params"),
          py::arg("freqs"), py::arg("constants"), py::arg("grid"),
          py::arg("n_max"));
    m.def("doppler_average_auto", &doppler_average_auto, py::arg("params"),
          py::arg("freqs"), py::arg("constants"), py::arg("grid"),
          py::arg("tol"), py::arg("n_cap") = 512);

    py::class_<FieldProfiles>(m, "FieldProfiles")
        .def_readonly("z", &FieldProfiles::z)
        .def_readonly("forward", &FieldProfiles::forward)
        .def_readonly("backward", &FieldProfiles::backward);

    py::class_<PropagationResult>(m, "PropagationResult")
        .def_readonly("delta_k", &PropagationResult::delta_k)
        .def_readonly("eta", &PropagationResult::eta)
        .def_readonly("transmission", &PropagationResult::transmission)
        .def_readonly("transfer_matrix", &PropagationResult::transfer_matrix)
        .def_readonly("field_profiles", &PropagationResult::field_profiles);

    m.def("refractive_index", &refractive_index, py::arg("chi0"));
    m.def("phase_mismatch", &phase_mismatch, py::arg("freqs"),
          py::arg("theta"), py::arg("chi0"),
          py::arg("speed_of_light") = 299792458.0);
    m.def("probe_phase_shift", &probe_phase_shift, py::arg("chi0"),
          py::arg("k_p"), py::arg("length"));
    m.def("coupled_mode_transfer", &coupled_mode_transfer, py::arg("chi0"),
          py::arg("chi_plus1"), py::arg("chi_minus1"), py::arg("delta_k"),
          py::arg("k_p"), py::arg("length"), py::arg("window_loss") = 0.0,
          py::arg("profile_points") = 0);
    m.def("reflection_point", &reflection_point, py::arg("params"),
          py::arg("freqs"), py::arg("chi"), py::arg("constants"),
          py::arg("apply_window_loss") = true, py::arg("profile_points") = 0);

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init([](const py::kwargs& kwargs) {
            SolveOptions o;
            apply_kwargs(o, kwargs, kOptionFields);
            return o;
        }))
        .def_readwrite("doppler", &SolveOptions::doppler)
        .def_readwrite("n_max", &SolveOptions::n_max)
        .def_readwrite("truncation_tol", &SolveOptions::truncation_tol)
        .def_readwrite("n_cap", &SolveOptions::n_cap)
        .def_readwrite("velocity_nodes", &SolveOptions::velocity_nodes)
        .def_readwrite("scheme", &SolveOptions::scheme)
        .def_readwrite("window_loss", &SolveOptions::window_loss)
        .def_readwrite("threads", &SolveOptions::threads);

    m.def(
        "chi_point",
        [](const SystemParams& p, const PhysicalConstants& c,
           const SolveOptions& o) { return chi_point(p, c, o); },
        py::arg("params"), py::arg("constants"), py::arg("options"));

    py::class_<PointRecord>(m, "PointRecord")
        .def_readonly("chi0", &PointRecord::chi0)
        .def_readonly("chi_p1", &PointRecord::chi_p1)
        .def_readonly("chi_m1", &PointRecord::chi_m1)
        .def_readonly("n_p", &PointRecord::n_p)
        .def_readonly("delta_k", &PointRecord::delta_k)
        .def_readonly("eta", &PointRecord::eta)
        .def_readonly("transmission", &PointRecord::transmission)
        .def_readonly("phase_shift", &PointRecord::phase_shift)
        .def_readonly("ok", &PointRecord::ok)
        .def_readonly("error", &PointRecord::error);

    py::class_<SweepTable>(m, "SweepTable")
        .def_readonly("delta_p", &SweepTable::delta_p)
        .def_readonly("delta_c", &SweepTable::delta_c)
        .def_readonly("density", &SweepTable::density)
        .def_readonly("records", &SweepTable::records)
        .def("at", &SweepTable::at, py::arg("i_density"), py::arg("i_delta_c"),
             py::arg("i_delta_p"), py::return_value_policy::reference_internal);

    m.def(
        "spectrum_sweep",
        [](const SystemParams& p, const PhysicalConstants& c,
           const std::vector<double>& dp, const std::vector<double>& dc,
           const SolveOptions& o) { return spectrum_sweep(p, c, dp, dc, o); },
        py::arg("params"), py::arg("constants"), py::arg("delta_p_grid"),
        py::arg("delta_c_list"), py::arg("options"));

    py::class_<PeakMetrics>(m, "PeakMetrics")
        .def_readonly("eta_max", &PeakMetrics::eta_max)
        .def_readonly("delta_p_at_peak", &PeakMetrics::delta_p_at_peak)
        .def_readonly("left_crossing", &PeakMetrics::left_crossing)
        .def_readonly("right_crossing", &PeakMetrics::right_crossing)
        .def_readonly("fwhm", &PeakMetrics::fwhm)
        .def_readonly("left_bounded", &PeakMetrics::left_bounded)
        .def_readonly("right_bounded", &PeakMetrics::right_bounded);

    m.def(
        "peak_metrics",
        [](const std::vector<double>& dp, const std::vector<double>& eta) {
            return peak_metrics(dp, eta);
        },
        py::arg("delta_p"), py::arg("eta"));

    py::class_<ScanRow>(m, "ScanRow")
        .def_readonly("density", &ScanRow::density)
        .def_readonly("delta_c", &ScanRow::delta_c)
        .def_readonly("peak", &ScanRow::peak);

    py::class_<ScanResult>(m, "ScanResult")
        .def_readonly("rows", &ScanResult::rows)
        .def_readonly("best_delta_c", &ScanResult::best_delta_c);

    m.def(
        "coupling_detuning_scan",
        [](const SystemParams& p, const PhysicalConstants& c,
           const std::vector<double>& dc, const std::vector<double>& dp,
           const std::vector<double>& densities, const SolveOptions& o) {
            return coupling_detuning_scan(p, c, dc, dp, densities, o);
        },
        py::arg("params"), py::arg("constants"), py::arg("delta_c_grid"),
        py::arg("delta_p_grid"), py::arg("densities"), py::arg("options"));

    py::class_<SweepSpec>(m, "SweepSpec")
        .def_readonly("delta_p_min", &SweepSpec::delta_p_min)
        .def_readonly("delta_p_max", &SweepSpec::delta_p_max)
        .def_readonly("delta_p_step", &SweepSpec::delta_p_step)
        .def_readonly("delta_c_list", &SweepSpec::delta_c_list)
        .def_readonly("density_list", &SweepSpec::density_list)
        .def("delta_p_grid", &SweepSpec::delta_p_grid)
        .def("delta_c_grid", &SweepSpec::delta_c_grid);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("params", &Scenario::params)
        .def_readonly("constants", &Scenario::constants)
        .def_readonly("options", &Scenario::options)
        .def_readonly("sweep", &Scenario::sweep)
        .def_readonly("warnings", &Scenario::warnings);
    m.def("load_scenario", &load_scenario, py::arg("path"));
}
