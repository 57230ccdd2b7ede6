#pragma once

#include <functional>
#include <memory>

#include <Eigen/Core>

#include "rlwfem/basis.hpp"
#include "rlwfem/mesh.hpp"
#include "rlwfem/quadrature.hpp"

namespace rlwfem {

using ScalarFn = std::function<double(double)>;

/**
 * Continuous periodic piecewise degree-k Lagrange space on a uniform mesh.
 *
 * Global dof g = i*k + j (mod k*N) is the value at the uniform node x_i + j*h/k; cell i
 * touches dofs cell_dof(i, 0..k), with cell_dof(i, k) == cell_dof(i+1, 0) closing the
 * circle.  Shape values/derivatives are tabulated once per quadrature rule.
 */
class FeSpace {
public:
    /// Shape functions tabulated at the points of one quadrature rule.  derivs holds
    /// reference-scale derivatives; divide by h for physical ones.
    struct BasisTable {
        QuadratureRule rule;
        Eigen::MatrixXd values;  // rule.size() x (degree+1)
        Eigen::MatrixXd derivs;
    };

    FeSpace(const PeriodicMesh& mesh, int degree);

    const PeriodicMesh& mesh() const { return mesh_; }
    int degree() const { return degree_; }
    int n_dof() const { return n_dof_; }

    int cell_dof(int cell, int j) const { return (cell * degree_ + j) % n_dof_; }
    double node_coord(int g) const {
        return mesh_.cell_left(g / degree_) + (g % degree_) * (mesh_.h() / degree_);
    }

    /// k+2 points: exact for the degree-2k integrands of mass/convection assembly.
    const BasisTable& assembly_table() const { return assembly_; }
    /// 2k+2 points: exact through degree 3k (invariants, nonlinear projection).
    const BasisTable& functional_table() const { return functional_; }
    /// 2k+4 points: oversampled rule for error norms and analytic right-hand sides.
    const BasisTable& error_table() const { return error_; }

    BasisTable make_table(int n_points) const;

private:
    PeriodicMesh mesh_;
    int degree_;
    int n_dof_;
    BasisTable assembly_, functional_, error_;
};

std::shared_ptr<const FeSpace> make_space(const PeriodicMesh& mesh, int degree);

/** Coefficient vector in the nodal basis of a shared FeSpace. */
class FeFunction {
public:
    FeFunction(std::shared_ptr<const FeSpace> space, Eigen::VectorXd coeff);
    explicit FeFunction(std::shared_ptr<const FeSpace> space);  // zero function

    const FeSpace& space() const { return *space_; }
    const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
    const Eigen::VectorXd& coeff() const { return coeff_; }
    Eigen::VectorXd& coeff() { return coeff_; }

    double value(double x) const;
    /// Cellwise (broken) derivative, physical scale; one-sided at mesh nodes.
    double deriv(double x) const;

    double l2_norm() const;

private:
    std::shared_ptr<const FeSpace> space_;
    Eigen::VectorXd coeff_;
};

/// Nodal interpolant: coefficients are f sampled at the global nodes.
FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarFn& f);

/// || g - f ||_{L2} over the mesh by the oversampled cellwise rule.
double l2_norm_error(const FeFunction& g, const ScalarFn& f);

/// || g' - fp ||_{L2} with g' the broken derivative of g.
double h1_semi_error(const FeFunction& g, const ScalarFn& fp);

}  // namespace rlwfem
