#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jacobi/cli.hpp"
#include "jacobi/convolution.hpp"
#include "jacobi/errors.hpp"
#include "jacobi/multiplier.hpp"

namespace py = pybind11;
using namespace jacobi;

namespace {

struct PyRadialGrid {
    RadialGridPtr ptr;
};

struct PySpectralGrid {
    SpectralGridPtr ptr;
};

SampledRadialFunction radial(const PyRadialGrid& g, const std::vector<cplx>& v) {
    if (v.size() != g.ptr->size()) throw DomainError("values do not match the radial grid");
    return {g.ptr, v};
}

SampledSpectralFunction spectral(const PySpectralGrid& g, const std::vector<cplx>& v) {
    if (v.size() != g.ptr->size()) throw DomainError("values do not match the spectral grid");
    return {g.ptr, v};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Jacobi analysis on the half-line";

    auto base = py::register_exception<Error>(m, "JacobiError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<DecayError>(m, "DecayError", base.ptr());
    py::register_exception<BudgetError>(m, "BudgetError", base.ptr());

    py::class_<JacobiParameters>(m, "JacobiParameters")
        .def(py::init(&JacobiParameters::make), py::arg("alpha"), py::arg("beta"), py::arg("allow_relaxed") = false)
        .def_static("preset", &JacobiParameters::preset)
        .def_static("preset_names", &JacobiParameters::preset_names)
        .def_readonly("alpha", &JacobiParameters::alpha)
        .def_readonly("beta", &JacobiParameters::beta)
        .def_readonly("rho", &JacobiParameters::rho)
        .def_readonly("relaxed", &JacobiParameters::relaxed)
        .def("__repr__", [](const JacobiParameters& p) {
            std::ostringstream o;
            o << "JacobiParameters(alpha=" << p.alpha << ", beta=" << p.beta << ")";
            return o.str();
        });

    m.def("gamma", &specfun::gamma_complex);
    m.def("hyp2f1", [](cplx a, cplx b, cplx c, double z) { return specfun::hyp2f1(a, b, c, z); });
    m.def("bessel_script_J", [](double a, double x) { return specfun::bessel_script_J(a, x); });

    m.def("phi", [](const JacobiParameters& p, cplx l, double t) { return jacobi_phi(p, l, t); }, py::arg("params"),
          py::arg("lam"), py::arg("t"));
    m.def("c_function", &c_function);
    m.def("plancherel_density", &plancherel_density);
    m.def("weight_density", &weight_density);
    m.def("omega", &omega);
    m.def("kernel_K", [](const JacobiParameters& p, double s, double t, double u) { return kernel_K(p, s, t, u).value; });

    py::class_<PyRadialGrid>(m, "RadialGrid")
        .def_property_readonly("nodes", [](const PyRadialGrid& g) { return g.ptr->nodes; })
        .def_property_readonly("mu_weights", [](const PyRadialGrid& g) { return g.ptr->mu_weights; })
        .def("__len__", [](const PyRadialGrid& g) { return g.ptr->size(); });
    py::class_<PySpectralGrid>(m, "SpectralGrid")
        .def_property_readonly("nodes", [](const PySpectralGrid& g) { return g.ptr->nodes; })
        .def_property_readonly("nu_weights", [](const PySpectralGrid& g) { return g.ptr->nu_weights; })
        .def("__len__", [](const PySpectralGrid& g) { return g.ptr->size(); });

    m.def(
        "radial_grid",
        [](const JacobiParameters& p, double T, int panels, int order) {
            return PyRadialGrid{make_radial_grid(p, T, panels, order)};
        },
        py::arg("params"), py::arg("T_max") = 20.0, py::arg("panels") = 200, py::arg("order") = 8);
    m.def(
        "spectral_grid",
        [](const JacobiParameters& p, double L, int panels, int order) {
            return PySpectralGrid{make_spectral_grid(p, L, panels, order)};
        },
        py::arg("params"), py::arg("Lambda_max") = 50.0, py::arg("panels") = 150, py::arg("order") = 8);

    m.def("sample", [](const PyRadialGrid& g, const std::function<cplx(double)>& f) { return sample(g.ptr, f).values; });
    m.def("transform", [](const JacobiParameters& p, const PyRadialGrid& r, const std::vector<cplx>& v,
                          const PySpectralGrid& s) { return jacobi_transform(p, radial(r, v), s.ptr).values; });
    m.def("inverse", [](const JacobiParameters& p, const PySpectralGrid& s, const std::vector<cplx>& v,
                        const PyRadialGrid& r) { return inverse_transform(p, spectral(s, v), r.ptr).values; });
    m.def("plancherel_defect", [](const JacobiParameters& p, const PyRadialGrid& r, const std::vector<cplx>& v,
                                  const PySpectralGrid& s) { return plancherel_defect(p, radial(r, v), s.ptr); });
    m.def("heat_kernel", [](const JacobiParameters& p, double s, const PyRadialGrid& r, const PySpectralGrid& sg) {
        return heat_kernel(p, s, r.ptr, sg.ptr).values;
    });
    m.def("convolve", [](const JacobiParameters& p, const PyRadialGrid& r, const std::vector<cplx>& f,
                         const std::vector<cplx>& g) { return convolve(p, radial(r, f), radial(r, g)).values; });
    m.def("l2_norm", [](const PyRadialGrid& r, const std::vector<cplx>& v) { return l2_norm(radial(r, v)); });

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        "Run a jacobi-lab command in process; returns (exit code, stdout, stderr).");

    m.attr("__version__") = std::string(cli::kVersion);
}
