#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "rlwfem/rlw.hpp"

namespace rlwfem {

struct ButcherTableau {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;

    int stages() const { return static_cast<int>(b.size()); }
    /// Shape/consistency checks: square a, matching sizes, sum(b) == 1, c_i == sum_j a_ij.
    void validate() const;

    static ButcherTableau classical_rk4();
};

using OdeRhsFn = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Runge-Kutta increment direction d = sum_i b_i f(t + c_i dt, y + dt sum_j a_ij k_j);
/// the plain update is y + dt*d.
Eigen::VectorXd rk_direction(const OdeRhsFn& f, const ButcherTableau& tab, double t,
                             const Eigen::VectorXd& y, double dt);

/// One unrelaxed step of the mixed system.
RlwState rk_step(const RlwSystem& sys, const ButcherTableau& tab, const RlwState& y, double dt);

struct GammaResult {
    double gamma = 1.0;
    int newton_iters = 0;
};

/// Relaxation parameter: the root of E(u + gamma*dt*v) = E(u) closest to 1, where v is
/// the u-block of the direction d.  The cubic increment is expanded exactly and the
/// selected quadratic root is polished by Newton on the expansion.
GammaResult solve_gamma(const RlwSystem& sys, const RlwState& y, const Eigen::VectorXd& d,
                        double dt);

struct StepRecord {
    double t = 0.0;
    double gamma = 1.0;
    Invariants invariants;
    int newton_iters = 0;
};

struct EvolveResult {
    RlwState state;
    std::vector<StepRecord> records;
};

/**
 * March the system to t_end.  With relaxation on, each step advances by gamma*dt and
 * lands within one dt of t_end; with relaxation off, the final step is shortened to hit
 * t_end exactly.  records holds the initial state plus every record_every-th step.
 */
EvolveResult evolve(const RlwSystem& sys, const ButcherTableau& tab, RlwState y0, double dt,
                    double t_end, bool relaxation, int record_every = 1);

}  // namespace rlwfem
