#pragma once

#include <functional>
#include <memory>
#include <utility>

#include <Eigen/Core>

#include "rlwfem/fe_space.hpp"
#include "rlwfem/projection.hpp"
#include "rlwfem/structured.hpp"

namespace rlwfem {

using SpaceTimeFn = std::function<double(double, double)>;

/// Discrete invariants of a state: mass = int u, impulse = (1/2) int (u^2 + (u')^2)
/// with the broken derivative, energy = (1/2) int u^2 + (1/6) int u^3.
struct Invariants {
    double mass = 0.0;
    double impulse = 0.0;
    double energy = 0.0;
};

/** Solution pair (u, w) at time t; w tracks the projected derivative of u. */
struct RlwState {
    Eigen::VectorXd u;
    Eigen::VectorXd w;
    double t = 0.0;
};

/**
 * Assembled mixed form of u_t + u_x + u u_x - u_xxt = f: with z = P[u + u^2/2],
 *
 *   [A  -B] [u_t]   [-B z + F]          A_ij = (phi_i, phi_j),
 *   [-B  A] [w_t] = [   0    ],         B_ij = (phi_i, phi_j'),
 *
 * where F_i = (f, phi_i).  Note -B = B^T exactly, so the block factorization sees a
 * matrix of the symmetric [[A,B'],[B',A]] shape it expects.  Immutable once built.
 */
class RlwSystem {
public:
    RlwSystem(std::shared_ptr<const FeSpace> space, SpaceTimeFn forcing = nullptr,
              GramPath path = GramPath::automatic);

    const FeSpace& space() const { return *space_; }
    const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
    int n_dof() const { return space_->n_dof(); }
    bool has_forcing() const { return static_cast<bool>(forcing_); }

    const StructuredMatrix& mass() const { return gram_.matrix(); }
    const StructuredMatrix& convection() const { return convection_; }
    const GramOperator& gram() const { return gram_; }
    const BlockFactorization& block() const { return block_; }

    /// Coefficients of P[u + u^2/2]; the quadratic load uses the degree-3k rule.
    Eigen::VectorXd nonlinear_projection(const Eigen::VectorXd& u) const;

    void ode_rhs(double t, const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                 Eigen::VectorXd& du, Eigen::VectorXd& dw) const;

    /// RHS over the stacked vector y = (u; w), for generic integrators.
    void stacked_rhs(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) const;

    Invariants functionals(const Eigen::VectorXd& u) const;

    /// Energy increment along a direction: E(u + e*v) - E(u) = a1 e + a2 e^2 + a3 e^3,
    /// with each coefficient integrated by the degree-3k rule.
    void energy_expansion(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double& a1,
                          double& a2, double& a3) const;

private:
    std::shared_ptr<const FeSpace> space_;
    SpaceTimeFn forcing_;
    GramOperator gram_;
    StructuredMatrix convection_;
    BlockFactorization block_;
};

RlwSystem assemble_rlw(std::shared_ptr<const FeSpace> space, SpaceTimeFn forcing = nullptr,
                       GramPath path = GramPath::automatic);

/// Projected initial data: u(0) = P[u0], w(0) = P[u0'].
RlwState initial_state(const RlwSystem& sys, const ScalarFn& u0, const ScalarFn& u0_prime);

std::pair<Eigen::VectorXd, Eigen::VectorXd> ode_rhs(const RlwSystem& sys, const RlwState& y);
Invariants functionals(const RlwSystem& sys, const RlwState& y);

/// Traveling manufactured solution u = e^t sin(2 pi (x - 2t)) on the unit interval,
/// its space derivative, and the matching forcing term.
double manufactured_solution(double x, double t);
double manufactured_solution_dx(double x, double t);
double manufactured_forcing(double x, double t);

}  // namespace rlwfem
