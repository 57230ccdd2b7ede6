#include "rlwfem/rlw.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rlwfem {

RlwSystem::RlwSystem(std::shared_ptr<const FeSpace> space, SpaceTimeFn forcing, GramPath path)
    : space_(std::move(space)),
      forcing_(std::move(forcing)),
      gram_(space_, path),
      convection_(assemble_convection(*space_, path)),
      block_(gram_.matrix(), structured_negated(convection_)) {}

RlwSystem assemble_rlw(std::shared_ptr<const FeSpace> space, SpaceTimeFn forcing, GramPath path) {
    return RlwSystem(std::move(space), std::move(forcing), path);
}

Eigen::VectorXd RlwSystem::nonlinear_projection(const Eigen::VectorXd& u) const {
    const FeSpace& sp = *space_;
    const int k = sp.degree();
    const double h = sp.mesh().h();
    const auto& tb = sp.functional_table();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(sp.n_dof());
    for (int cell = 0; cell < sp.mesh().n_cells(); ++cell)
        for (int q = 0; q < tb.rule.size(); ++q) {
            double uq = 0.0;
            for (int j = 0; j <= k; ++j) uq += u[sp.cell_dof(cell, j)] * tb.values(q, j);
            double wz = h * tb.rule.weights[q] * (uq + 0.5 * uq * uq);
            for (int i = 0; i <= k; ++i) b[sp.cell_dof(cell, i)] += wz * tb.values(q, i);
        }
    return gram_.solve(b);
}

void RlwSystem::ode_rhs(double t, const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                        Eigen::VectorXd& du, Eigen::VectorXd& dw) const {
    const FeSpace& sp = *space_;
    const int n = sp.n_dof();
    if (u.size() != n || w.size() != n) throw std::invalid_argument("ode_rhs: size mismatch");
    const int k = sp.degree();
    const double h = sp.mesh().h();

    Eigen::VectorXd z = nonlinear_projection(u);

    // F_i = (z, phi_i') + (f, phi_i): the first term equals (B^T z)_i = (-B z)_i.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    const auto& ta = sp.assembly_table();
    for (int cell = 0; cell < sp.mesh().n_cells(); ++cell)
        for (int q = 0; q < ta.rule.size(); ++q) {
            double zq = 0.0;
            for (int j = 0; j <= k; ++j) zq += z[sp.cell_dof(cell, j)] * ta.values(q, j);
            double wz = ta.rule.weights[q] * zq;  // h cancels against the derivative scale
            for (int i = 0; i <= k; ++i) rhs[sp.cell_dof(cell, i)] += wz * ta.derivs(q, i);
        }
    if (forcing_) {
        const auto& te = sp.error_table();
        for (int cell = 0; cell < sp.mesh().n_cells(); ++cell) {
            double x0 = sp.mesh().cell_left(cell);
            for (int q = 0; q < te.rule.size(); ++q) {
                double wf = h * te.rule.weights[q] * forcing_(x0 + te.rule.points[q] * h, t);
                for (int i = 0; i <= k; ++i) rhs[sp.cell_dof(cell, i)] += wf * te.values(q, i);
            }
        }
    }

    auto [x, y] = block_.solve(rhs, Eigen::VectorXd::Zero(n));
    du = std::move(x);
    dw = std::move(y);
}

void RlwSystem::stacked_rhs(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
    const int n = n_dof();
    if (y.size() != 2 * n) throw std::invalid_argument("stacked_rhs: size mismatch");
    Eigen::VectorXd du, dw;
    ode_rhs(t, y.head(n), y.tail(n), du, dw);
    dy.resize(2 * n);
    dy.head(n) = du;
    dy.tail(n) = dw;
}

Invariants RlwSystem::functionals(const Eigen::VectorXd& u) const {
    const FeSpace& sp = *space_;
    if (u.size() != sp.n_dof()) throw std::invalid_argument("functionals: size mismatch");
    const int k = sp.degree();
    const double h = sp.mesh().h();
    const auto& tb = sp.functional_table();
    double mass = 0.0, quad = 0.0, grad = 0.0, cubic = 0.0;
    for (int cell = 0; cell < sp.mesh().n_cells(); ++cell)
        for (int q = 0; q < tb.rule.size(); ++q) {
            double uq = 0.0, upq = 0.0;
            for (int j = 0; j <= k; ++j) {
                double c = u[sp.cell_dof(cell, j)];
                uq += c * tb.values(q, j);
                upq += c * tb.derivs(q, j);
            }
            upq /= h;
            double w = h * tb.rule.weights[q];
            mass += w * uq;
            quad += w * uq * uq;
            grad += w * upq * upq;
            cubic += w * uq * uq * uq;
        }
    Invariants inv;
    inv.mass = mass;
    inv.impulse = 0.5 * (quad + grad);
    inv.energy = 0.5 * quad + cubic / 6.0;
    return inv;
}

void RlwSystem::energy_expansion(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double& a1,
                                 double& a2, double& a3) const {
    const FeSpace& sp = *space_;
    if (u.size() != sp.n_dof() || v.size() != sp.n_dof())
        throw std::invalid_argument("energy_expansion: size mismatch");
    const int k = sp.degree();
    const double h = sp.mesh().h();
    const auto& tb = sp.functional_table();
    a1 = a2 = a3 = 0.0;
    for (int cell = 0; cell < sp.mesh().n_cells(); ++cell)
        for (int q = 0; q < tb.rule.size(); ++q) {
            double uq = 0.0, vq = 0.0;
            for (int j = 0; j <= k; ++j) {
                int g = sp.cell_dof(cell, j);
                uq += u[g] * tb.values(q, j);
                vq += v[g] * tb.values(q, j);
            }
            double w = h * tb.rule.weights[q];
            a1 += w * (uq + 0.5 * uq * uq) * vq;
            a2 += w * 0.5 * (1.0 + uq) * vq * vq;
            a3 += w * vq * vq * vq / 6.0;
        }
}

RlwState initial_state(const RlwSystem& sys, const ScalarFn& u0, const ScalarFn& u0_prime) {
    RlwState y;
    y.u = l2_project(sys.gram(), u0).coeff();
    y.w = l2_project(sys.gram(), u0_prime).coeff();
    y.t = 0.0;
    return y;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ode_rhs(const RlwSystem& sys, const RlwState& y) {
    Eigen::VectorXd du, dw;
    sys.ode_rhs(y.t, y.u, y.w, du, dw);
    return {std::move(du), std::move(dw)};
}

Invariants functionals(const RlwSystem& sys, const RlwState& y) { return sys.functionals(y.u); }

double manufactured_solution(double x, double t) {
    return std::exp(t) * std::sin(2.0 * M_PI * (x - 2.0 * t));
}

double manufactured_solution_dx(double x, double t) {
    return 2.0 * M_PI * std::exp(t) * std::cos(2.0 * M_PI * (x - 2.0 * t));
}

double manufactured_forcing(double x, double t) {
    const double arg = 2.0 * M_PI * (x - 2.0 * t);
    const double s = std::sin(arg), c = std::cos(arg);
    const double et = std::exp(t);
    const double pi2 = 2.0 * M_PI;
    double ut = et * (s - 2.0 * pi2 * c);
    double ux = pi2 * et * c;
    double uux = pi2 * et * et * s * c;
    double uxxt = -pi2 * pi2 * et * (s - 2.0 * pi2 * c);
    return ut + ux + uux - uxxt;
}

}  // namespace rlwfem
