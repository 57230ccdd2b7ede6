#pragma once

#include <Eigen/Core>

namespace rlwfem {

/** Gauss-Legendre rule on the reference cell [0,1]; weights sum to 1. */
struct QuadratureRule {
    Eigen::VectorXd points;
    Eigen::VectorXd weights;

    int size() const { return static_cast<int>(points.size()); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_rule(int n_points);

}  // namespace rlwfem
