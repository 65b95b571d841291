#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mcalc/calculus.hpp"
#include "mcalc/errors.hpp"
#include "mcalc/functionals.hpp"
#include "mcalc/suites.hpp"

namespace py = pybind11;
using namespace mcalc;

namespace {

Point as_point(const Manifold& m, const std::vector<double>& coords) {
    Point x{coords};
    m.check_point(x);
    return x;
}

ParticleMeasure measure_from_pairs(
    const Manifold& m, const std::vector<std::pair<double, std::vector<double>>>& pairs) {
    std::vector<Atom> atoms;
    atoms.reserve(pairs.size());
    for (const auto& [w, coords] : pairs) atoms.push_back(Atom{w, Point{coords}});
    return ParticleMeasure(m, std::move(atoms));
}

std::vector<TangentVector> vectors_on_atoms(const ParticleMeasure& eta,
                                            const std::vector<std::vector<double>>& comps) {
    if (comps.size() != eta.size())
        throw input_error("expected one vector per atom of the measure");
    std::vector<TangentVector> out;
    out.reserve(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const Point& base = eta.atoms()[i].location;
        out.push_back(eta.manifold().project_tangent(base, comps[i]));
    }
    return out;
}

VectorField field_from_callable(const Manifold& m,
                                const std::function<std::vector<double>(std::vector<double>)>& fn,
                                bool compact_support) {
    VectorField v;
    v.compact_support = compact_support;
    v.at = [m, fn](const Point& p) { return m.project_tangent(p, fn(p.coords)); };
    return v;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "calculus for finite particle measures (C++ core)";

    py::register_exception<input_error>(mod, "InputError", PyExc_ValueError);
    py::register_exception<domain_error>(mod, "DomainError", PyExc_ValueError);
    py::register_exception<numeric_error>(mod, "NumericError", PyExc_ArithmeticError);

    py::class_<Manifold>(mod, "Manifold")
        .def_static("euclidean", [](int d) { return Manifold::euclidean(d); }, py::arg("dim"))
        .def_static("sphere", [](int d) { return Manifold::sphere(d); }, py::arg("ambient_dim"))
        .def_property_readonly("ambient_dim", &Manifold::ambient_dim)
        .def("describe", &Manifold::describe)
        .def("distance",
             [](const Manifold& m, const std::vector<double>& x, const std::vector<double>& y) {
                 return m.distance(as_point(m, x), as_point(m, y));
             })
        .def("exp",
             [](const Manifold& m, const std::vector<double>& x, const std::vector<double>& v) {
                 Point p = as_point(m, x);
                 TangentVector t = m.project_tangent(p, v);
                 return m.exp_map(p, t).coords;
             })
        .def("log",
             [](const Manifold& m, const std::vector<double>& x, const std::vector<double>& y) {
                 return m.log_map(as_point(m, x), as_point(m, y)).components;
             })
        .def("__repr__", [](const Manifold& m) { return "Manifold(" + m.describe() + ")"; });

    py::class_<ParticleMeasure>(mod, "ParticleMeasure")
        .def(py::init(&measure_from_pairs), py::arg("manifold"), py::arg("atoms"))
        .def_property_readonly("manifold", &ParticleMeasure::manifold)
        .def_property_readonly("total_mass", &ParticleMeasure::total_mass)
        .def("__len__", &ParticleMeasure::size)
        .def("atoms",
             [](const ParticleMeasure& mu) {
                 std::vector<std::pair<double, std::vector<double>>> out;
                 for (const auto& a : mu.atoms()) out.emplace_back(a.weight, a.location.coords);
                 return out;
             })
        .def("__repr__", [](const ParticleMeasure& mu) {
            return "ParticleMeasure(" + mu.manifold().describe() + ", atoms=" +
                   std::to_string(mu.size()) + ", mass=" + std::to_string(mu.total_mass()) + ")";
        });

    py::class_<Functional>(mod, "Functional")
        .def_readonly("name", &Functional::name)
        .def("__call__", [](const Functional& f, const ParticleMeasure& mu) { return f.eval(mu); });

    mod.def("builtin_functional", &builtin_functional, py::arg("manifold"), py::arg("name"));

    py::class_<FDConfig>(mod, "FDConfig")
        .def(py::init<>())
        .def_readwrite("step0", &FDConfig::step0)
        .def_readwrite("levels", &FDConfig::levels)
        .def_readwrite("richardson_order", &FDConfig::richardson_order)
        .def_readwrite("tol", &FDConfig::tol)
        .def_readwrite("spread_threshold", &FDConfig::spread_threshold)
        .def_readwrite("grad_step", &FDConfig::grad_step)
        .def_readwrite("grad_richardson", &FDConfig::grad_richardson);

    py::class_<FlowConfig>(mod, "FlowConfig")
        .def(py::init<>())
        .def_readwrite("substeps_per_unit", &FlowConfig::substeps_per_unit);

    py::class_<DerivativeEstimate>(mod, "DerivativeEstimate")
        .def_readonly("value", &DerivativeEstimate::value)
        .def_readonly("ladder", &DerivativeEstimate::ladder)
        .def_readonly("converged", &DerivativeEstimate::converged)
        .def_readonly("spread", &DerivativeEstimate::spread)
        .def_readonly("oscillating", &DerivativeEstimate::oscillating)
        .def("__repr__", [](const DerivativeEstimate& e) {
            return "DerivativeEstimate(value=" + std::to_string(e.value) +
                   ", converged=" + (e.converged ? std::string("True") : "False") + ")";
        });

    py::class_<VerificationReport>(mod, "VerificationReport")
        .def_readonly("identity", &VerificationReport::identity)
        .def_readonly("instance", &VerificationReport::instance)
        .def_readonly("lhs", &VerificationReport::lhs)
        .def_readonly("rhs", &VerificationReport::rhs)
        .def_readonly("residual", &VerificationReport::residual)
        .def_readonly("tolerance", &VerificationReport::tolerance)
        .def_readonly("passed", &VerificationReport::pass)
        .def_readonly("diagnostic", &VerificationReport::diagnostic)
        .def_readonly("ladder", &VerificationReport::ladder)
        .def("instance_hash", &VerificationReport::instance_hash)
        .def("__repr__", [](const VerificationReport& r) {
            return "VerificationReport(" + r.identity + ", " +
                   (r.pass ? std::string("pass") : "FAIL") + ")";
        });

    mod.def(
        "extrinsic",
        [](const Functional& f, const ParticleMeasure& eta, const std::vector<double>& x,
           const FDConfig& cfg) { return extrinsic_fd(f, eta, as_point(eta.manifold(), x), cfg); },
        py::arg("functional"), py::arg("measure"), py::arg("at"), py::arg("cfg") = FDConfig{});

    mod.def(
        "centered",
        [](const Functional& f, const ParticleMeasure& mu, const std::vector<double>& x,
           const FDConfig& cfg) {
            return centered_extrinsic_fd(f, mu, as_point(mu.manifold(), x), cfg);
        },
        py::arg("functional"), py::arg("measure"), py::arg("at"), py::arg("cfg") = FDConfig{});

    mod.def(
        "grad_extrinsic",
        [](const Functional& f, const ParticleMeasure& eta, const std::vector<double>& x,
           const FDConfig& cfg) {
            return grad_extrinsic(f, eta, as_point(eta.manifold(), x), cfg).components;
        },
        py::arg("functional"), py::arg("measure"), py::arg("at"), py::arg("cfg") = FDConfig{});

    mod.def(
        "l_field",
        [](const Functional& f, const ParticleMeasure& eta, const std::vector<double>& x,
           const FDConfig& cfg) {
            return l_field_via_dirac(f, eta, as_point(eta.manifold(), x), cfg).components;
        },
        py::arg("functional"), py::arg("measure"), py::arg("at"), py::arg("cfg") = FDConfig{});

    mod.def(
        "l_directional",
        [](const Functional& f, const ParticleMeasure& eta,
           const std::vector<std::vector<double>>& vectors, const FDConfig& cfg) {
            return l_directional(f, eta, vectors_on_atoms(eta, vectors), cfg);
        },
        py::arg("functional"), py::arg("measure"), py::arg("vectors"),
        py::arg("cfg") = FDConfig{});

    mod.def(
        "intrinsic",
        [](const Functional& f, const ParticleMeasure& eta,
           const std::function<std::vector<double>(std::vector<double>)>& field,
           const FDConfig& cfg, const FlowConfig& flow, bool compact_support) {
            return intrinsic_directional(
                f, eta, field_from_callable(eta.manifold(), field, compact_support), cfg, flow);
        },
        py::arg("functional"), py::arg("measure"), py::arg("field"), py::arg("cfg") = FDConfig{},
        py::arg("flow") = FlowConfig{}, py::arg("compact_support") = true);

    mod.def("wasserstein", &wasserstein_p, py::arg("gamma"), py::arg("eta"), py::arg("p") = 2.0);

    mod.def("bump_h", &bump_h, py::arg("r"));
    mod.def("bump_h_prime", &bump_h_prime, py::arg("r"));

    mod.def("suite_names", [] { return suite_names(); });

    mod.def(
        "run_suites",
        [](const std::vector<std::string>& names, std::uint64_t seed,
           const std::vector<std::string>& manifolds, double tol) {
            SuiteOptions opts;
            opts.seed = seed;
            opts.tol_override = tol;
            for (const auto& d : manifolds) {
                if (d.rfind("euclidean:", 0) == 0)
                    opts.manifolds.push_back(Manifold::euclidean(std::stoi(d.substr(10))));
                else if (d.rfind("sphere:", 0) == 0)
                    opts.manifolds.push_back(Manifold::sphere(std::stoi(d.substr(7))));
                else
                    throw input_error("manifold '" + d + "': expected euclidean:N or sphere:N");
            }
            return run_suites(names, opts);
        },
        py::arg("suites"), py::arg("seed") = 42, py::arg("manifolds") = std::vector<std::string>{},
        py::arg("tol") = 0.0);
}
