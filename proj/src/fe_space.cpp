#include "rlwfem/fe_space.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rlwfem {

FeSpace::FeSpace(const PeriodicMesh& mesh, int degree) : mesh_(mesh), degree_(degree) {
    if (degree < 1 || degree > 12) throw std::invalid_argument("FeSpace: degree must be in [1,12]");
    n_dof_ = degree_ * mesh_.n_cells();
    assembly_ = make_table(degree_ + 2);
    functional_ = make_table(2 * degree_ + 2);
    error_ = make_table(2 * degree_ + 4);
}

FeSpace::BasisTable FeSpace::make_table(int n_points) const {
    BasisTable table;
    table.rule = gauss_rule(n_points);
    table.values.resize(n_points, degree_ + 1);
    table.derivs.resize(n_points, degree_ + 1);
    for (int q = 0; q < n_points; ++q) {
        BasisValues bv = eval_basis(degree_, table.rule.points[q]);
        table.values.row(q) = bv.values.transpose();
        table.derivs.row(q) = bv.derivs.transpose();
    }
    return table;
}

std::shared_ptr<const FeSpace> make_space(const PeriodicMesh& mesh, int degree) {
    return std::make_shared<const FeSpace>(mesh, degree);
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space, Eigen::VectorXd coeff)
    : space_(std::move(space)), coeff_(std::move(coeff)) {
    if (!space_) throw std::invalid_argument("FeFunction: null space");
    if (coeff_.size() != space_->n_dof())
        throw std::invalid_argument("FeFunction: coefficient size does not match space");
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)) {
    if (!space_) throw std::invalid_argument("FeFunction: null space");
    coeff_ = Eigen::VectorXd::Zero(space_->n_dof());
}

double FeFunction::value(double x) const {
    auto [cell, t] = space_->mesh().locate(x);
    BasisValues bv = eval_basis(space_->degree(), t);
    double acc = 0.0;
    for (int j = 0; j <= space_->degree(); ++j) acc += coeff_[space_->cell_dof(cell, j)] * bv.values[j];
    return acc;
}

double FeFunction::deriv(double x) const {
    auto [cell, t] = space_->mesh().locate(x);
    BasisValues bv = eval_basis(space_->degree(), t);
    double acc = 0.0;
    for (int j = 0; j <= space_->degree(); ++j) acc += coeff_[space_->cell_dof(cell, j)] * bv.derivs[j];
    return acc / space_->mesh().h();
}

double FeFunction::l2_norm() const {
    const FeSpace& sp = *space_;
    const auto& table = sp.assembly_table();  // integrand degree 2k: exact
    const int nq = table.rule.size();
    const int k = sp.degree();
    double acc = 0.0;
    for (int cell = 0; cell < sp.mesh().n_cells(); ++cell) {
        for (int q = 0; q < nq; ++q) {
            double v = 0.0;
            for (int j = 0; j <= k; ++j) v += coeff_[sp.cell_dof(cell, j)] * table.values(q, j);
            acc += table.rule.weights[q] * v * v;
        }
    }
    return std::sqrt(acc * sp.mesh().h());
}

FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarFn& f) {
    Eigen::VectorXd c(space->n_dof());
    for (int g = 0; g < space->n_dof(); ++g) c[g] = f(space->node_coord(g));
    return FeFunction(std::move(space), std::move(c));
}

double l2_norm_error(const FeFunction& g, const ScalarFn& f) {
    const FeSpace& sp = g.space();
    const auto& table = sp.error_table();
    const int nq = table.rule.size();
    const int k = sp.degree();
    const double h = sp.mesh().h();
    double acc = 0.0;
    for (int cell = 0; cell < sp.mesh().n_cells(); ++cell) {
        double x0 = sp.mesh().cell_left(cell);
        for (int q = 0; q < nq; ++q) {
            double v = 0.0;
            for (int j = 0; j <= k; ++j) v += g.coeff()[sp.cell_dof(cell, j)] * table.values(q, j);
            double d = v - f(x0 + table.rule.points[q] * h);
            acc += table.rule.weights[q] * d * d;
        }
    }
    return std::sqrt(acc * h);
}

double h1_semi_error(const FeFunction& g, const ScalarFn& fp) {
    const FeSpace& sp = g.space();
    const auto& table = sp.error_table();
    const int nq = table.rule.size();
    const int k = sp.degree();
    const double h = sp.mesh().h();
    double acc = 0.0;
    for (int cell = 0; cell < sp.mesh().n_cells(); ++cell) {
        double x0 = sp.mesh().cell_left(cell);
        for (int q = 0; q < nq; ++q) {
            double v = 0.0;
            for (int j = 0; j <= k; ++j) v += g.coeff()[sp.cell_dof(cell, j)] * table.derivs(q, j);
            double d = v / h - fp(x0 + table.rule.points[q] * h);
            acc += table.rule.weights[q] * d * d;
        }
    }
    return std::sqrt(acc * h);
}

}  // namespace rlwfem
