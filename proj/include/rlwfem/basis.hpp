#pragma once

#include <Eigen/Core>

namespace rlwfem {

/** Values and reference-scale derivatives of the k+1 nodal shape functions of one cell. */
struct BasisValues {
    Eigen::VectorXd values;
    Eigen::VectorXd derivs;
};

/// Lagrange cardinal basis on the uniform reference nodes j/k, j = 0..k, evaluated at
/// t in [0,1].  values[j] is exactly 1 at t == j/k and exactly 0 at the other nodes.
BasisValues eval_basis(int degree, double t);

/**
 * The degree-k polynomial p with p(0) = 0, p(1) = 1 that is L2(0,1)-orthogonal to every
 * degree-k polynomial vanishing at both endpoints.  Expanded in x^{k-j}(1-x)^j the
 * coefficients are integer binomial expressions, computed exactly and cached:
 *
 *   c_j = (-1)^j C(k-1,j) (k+1)! / ((k+1-j)!(j+1)!),  j = 0..k-1.
 */
class NodeOrthogonalPolynomial {
public:
    explicit NodeOrthogonalPolynomial(int degree);

    int degree() const { return degree_; }
    double value(double x) const;
    double deriv(double x) const;

private:
    int degree_;
    Eigen::VectorXd coeff_;
};

/// Node-orthogonal polynomial of odd degree k at x in [0,1].  Odd k only: for even k
/// the construction flips sign and is exercised through NodeOrthogonalPolynomial.
double psi(int k, double x);
double psi_prime(int k, double x);

/// Interior bubble basis: phi_j(x) = x(1-x) * C(k-2,j-1) x^{j-1} (1-x)^{k-1-j} for
/// j = 1..k-1; vanishes at both endpoints.
double bubble_basis(int k, int j, double x);

}  // namespace rlwfem
