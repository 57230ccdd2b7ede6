#include <memory>
#include <utility>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rlwfem/errors.hpp"
#include "rlwfem/experiments.hpp"
#include "rlwfem/projection.hpp"
#include "rlwfem/rlw.hpp"
#include "rlwfem/time_integration.hpp"

namespace py = pybind11;
using namespace rlwfem;

namespace {

std::shared_ptr<const FeSpace> space_from_args(double a, double b, int n_cells, int degree) {
    return make_space(PeriodicMesh(a, b, n_cells), degree);
}

py::dict records_as_arrays(const std::vector<StepRecord>& records) {
    const py::ssize_t n = static_cast<py::ssize_t>(records.size());
    Eigen::VectorXd t(n), gamma(n), mass(n), impulse(n), energy(n);
    Eigen::VectorXi iters(n);
    for (py::ssize_t i = 0; i < n; ++i) {
        const StepRecord& r = records[static_cast<size_t>(i)];
        t[i] = r.t;
        gamma[i] = r.gamma;
        mass[i] = r.invariants.mass;
        impulse[i] = r.invariants.impulse;
        energy[i] = r.invariants.energy;
        iters[i] = r.newton_iters;
    }
    py::dict d;
    d["t"] = t;
    d["gamma"] = gamma;
    d["mass"] = mass;
    d["impulse"] = impulse;
    d["energy"] = energy;
    d["newton_iters"] = iters;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Periodic Lagrange FE spaces, L2 projections, and a conservative RLW solver";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<FeSpace, std::shared_ptr<FeSpace>>(m, "FeSpace")
        .def_property_readonly("degree", &FeSpace::degree)
        .def_property_readonly("n_dof", &FeSpace::n_dof)
        .def_property_readonly("n_cells", [](const FeSpace& s) { return s.mesh().n_cells(); })
        .def_property_readonly("h", [](const FeSpace& s) { return s.mesh().h(); })
        .def_property_readonly("domain",
                               [](const FeSpace& s) {
                                   return py::make_tuple(s.mesh().a(), s.mesh().b());
                               })
        .def_property_readonly("node_coords", [](const FeSpace& s) {
            Eigen::VectorXd x(s.n_dof());
            for (int g = 0; g < s.n_dof(); ++g) x[g] = s.node_coord(g);
            return x;
        });

    m.def(
        "make_space",
        [](double a, double b, int n_cells, int degree) {
            return std::const_pointer_cast<FeSpace>(space_from_args(a, b, n_cells, degree));
        },
        py::arg("a"), py::arg("b"), py::arg("n_cells"), py::arg("degree"));

    py::class_<FeFunction>(m, "FeFunction")
        .def_property_readonly("coeff",
                               [](const FeFunction& f) -> const Eigen::VectorXd& {
                                   return f.coeff();
                               })
        .def("value", &FeFunction::value, py::arg("x"))
        .def("deriv", &FeFunction::deriv, py::arg("x"))
        .def("l2_norm", &FeFunction::l2_norm);

    m.def(
        "interpolate",
        [](std::shared_ptr<FeSpace> space, const ScalarFn& f) {
            return interpolate(std::const_pointer_cast<const FeSpace>(std::move(space)), f);
        },
        py::arg("space"), py::arg("f"));
    m.def("l2_norm_error", &l2_norm_error, py::arg("g"), py::arg("f"));
    m.def("h1_semi_error", &h1_semi_error, py::arg("g"), py::arg("f_deriv"));

    m.def("eval_basis",
          [](int degree, double t) {
              BasisValues bv = eval_basis(degree, t);
              return py::make_tuple(bv.values, bv.derivs);
          },
          py::arg("degree"), py::arg("t"));
    m.def("psi", &psi, py::arg("k"), py::arg("x"));
    m.def("psi_prime", &psi_prime, py::arg("k"), py::arg("x"));
    m.def("bubble_basis", &bubble_basis, py::arg("k"), py::arg("j"), py::arg("x"));
    m.def("gauss_rule",
          [](int n) {
              QuadratureRule r = gauss_rule(n);
              return py::make_tuple(r.points, r.weights);
          },
          py::arg("n_points"));

    py::class_<GramOperator>(m, "GramOperator")
        .def(py::init([](std::shared_ptr<FeSpace> space) {
                 return GramOperator(std::const_pointer_cast<const FeSpace>(std::move(space)));
             }),
             py::arg("space"))
        .def("apply", &GramOperator::apply, py::arg("x"))
        .def("solve", &GramOperator::solve, py::arg("b"));

    m.def("l2_project", &l2_project, py::arg("gram"), py::arg("f"));
    m.def("project_fe_derivative", &project_fe_derivative, py::arg("gram"), py::arg("g"));
    m.def("dichotomy_norm", &dichotomy_norm, py::arg("gram"), py::arg("u"));
    m.def(
        "gram_eigenvalues_s1",
        [](int k, double a, double b, int n_cells) {
            return gram_eigenvalues_s1(k, PeriodicMesh(a, b, n_cells));
        },
        py::arg("k"), py::arg("a"), py::arg("b"), py::arg("n_cells"));

    m.def("circulant_solve", &circulant_solve, py::arg("first_row"), py::arg("z"));
    m.def("block_circulant_solve", &block_circulant_solve, py::arg("a_row"), py::arg("b_row"),
          py::arg("z"));

    py::class_<Invariants>(m, "Invariants")
        .def_readonly("mass", &Invariants::mass)
        .def_readonly("impulse", &Invariants::impulse)
        .def_readonly("energy", &Invariants::energy);

    py::class_<RlwState>(m, "RlwState")
        .def_readwrite("u", &RlwState::u)
        .def_readwrite("w", &RlwState::w)
        .def_readwrite("t", &RlwState::t);

    py::class_<RlwSystem>(m, "RlwSystem")
        .def_property_readonly("n_dof", &RlwSystem::n_dof)
        .def_property_readonly("has_forcing", &RlwSystem::has_forcing)
        .def("nonlinear_projection", &RlwSystem::nonlinear_projection, py::arg("u"))
        .def("functionals",
             [](const RlwSystem& sys, const Eigen::VectorXd& u) { return sys.functionals(u); },
             py::arg("u"))
        .def("ode_rhs", [](const RlwSystem& sys, const RlwState& y) {
            auto [du, dw] = ode_rhs(sys, y);
            return py::make_tuple(du, dw);
        });

    m.def(
        "assemble_rlw",
        [](std::shared_ptr<FeSpace> space, py::object forcing) {
            SpaceTimeFn f;
            if (!forcing.is_none()) f = forcing.cast<SpaceTimeFn>();
            return assemble_rlw(std::const_pointer_cast<const FeSpace>(std::move(space)),
                                std::move(f));
        },
        py::arg("space"), py::arg("forcing") = py::none());
    m.def("initial_state", &initial_state, py::arg("system"), py::arg("u0"),
          py::arg("u0_prime"));
    m.def(
        "evolve",
        [](const RlwSystem& sys, const RlwState& y0, double dt, double t_end, bool relaxation,
           int record_every) {
            EvolveResult res = evolve(sys, ButcherTableau::classical_rk4(), y0, dt, t_end,
                                      relaxation, record_every);
            return py::make_tuple(res.state, records_as_arrays(res.records));
        },
        py::arg("system"), py::arg("y0"), py::arg("dt"), py::arg("t_end"),
        py::arg("relaxation") = true, py::arg("record_every") = 1);

    m.def("manufactured_solution", &manufactured_solution, py::arg("x"), py::arg("t"));
    m.def("manufactured_solution_dx", &manufactured_solution_dx, py::arg("x"), py::arg("t"));
    m.def("manufactured_forcing", &manufactured_forcing, py::arg("x"), py::arg("t"));
}
