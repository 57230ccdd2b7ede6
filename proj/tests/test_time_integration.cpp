#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "doctest.h"
#include "rlwfem/errors.hpp"
#include "rlwfem/time_integration.hpp"

using namespace rlwfem;

namespace {

double gaussian(double x) { return std::exp(-x * x / 10.0); }
double gaussian_dx(double x) { return -0.2 * x * std::exp(-x * x / 10.0); }

RlwSystem desk_system(int n_cells) {
    return assemble_rlw(make_space(PeriodicMesh(-20.0, 20.0, n_cells), 1));
}

double max_gamma_defect(const EvolveResult& res) {
    double worst = 0.0;
    for (const StepRecord& r : res.records) worst = std::max(worst, std::abs(r.gamma - 1.0));
    return worst;
}

double max_energy_drift(const EvolveResult& res) {
    double e0 = res.records.front().invariants.energy;
    double worst = 0.0;
    for (const StepRecord& r : res.records)
        worst = std::max(worst, std::abs(r.invariants.energy - e0));
    return worst / std::abs(e0);
}

}  // namespace

TEST_CASE("ButcherTableau: the classical tableau validates, malformed ones do not") {
    ButcherTableau rk4 = ButcherTableau::classical_rk4();
    CHECK(rk4.stages() == 4);
    CHECK_NOTHROW(rk4.validate());
    CHECK(rk4.b.sum() == doctest::Approx(1.0).epsilon(1e-15));

    ButcherTableau bad_b = rk4;
    bad_b.b[0] += 0.25;
    CHECK_THROWS_AS(bad_b.validate(), std::invalid_argument);

    ButcherTableau bad_c = rk4;
    bad_c.c[2] = 0.9;
    CHECK_THROWS_AS(bad_c.validate(), std::invalid_argument);

    ButcherTableau implicit = rk4;
    implicit.a(1, 1) = 0.5;
    CHECK_THROWS_AS(implicit.validate(), std::invalid_argument);

    ButcherTableau ragged = rk4;
    ragged.c.resize(3);
    CHECK_THROWS_AS(ragged.validate(), std::invalid_argument);
}

TEST_CASE("rk_direction: fifth-order local error on the scalar decay model") {
    ButcherTableau rk4 = ButcherTableau::classical_rk4();
    OdeRhsFn decay = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy = -y; };
    Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);

    auto step_error = [&](double dt) {
        Eigen::VectorXd d = rk_direction(decay, rk4, 0.0, y0, dt);
        return std::abs(y0[0] + dt * d[0] - std::exp(-dt));
    };
    double e1 = step_error(0.1);
    double e2 = step_error(0.05);
    CHECK(e1 <= 1e-7);
    CHECK(e1 / e2 == doctest::Approx(32.0).epsilon(0.15));
}

TEST_CASE("rk_step: one plain step equals the stacked direction update") {
    RlwSystem sys = desk_system(50);
    RlwState y0 = initial_state(sys, gaussian, gaussian_dx);
    const double dt = 0.05;

    RlwState y1 = rk_step(sys, ButcherTableau::classical_rk4(), y0, dt);

    Eigen::VectorXd stacked(2 * sys.n_dof());
    stacked << y0.u, y0.w;
    OdeRhsFn rhs = [&sys](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        sys.stacked_rhs(t, y, dy);
    };
    Eigen::VectorXd d = rk_direction(rhs, ButcherTableau::classical_rk4(), y0.t, stacked, dt);
    CHECK((y1.u - (y0.u + dt * d.head(sys.n_dof()))).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK((y1.w - (y0.w + dt * d.tail(sys.n_dof()))).lpNorm<Eigen::Infinity>() <= 1e-14);
    CHECK(y1.t == doctest::Approx(dt).epsilon(1e-15));
}

TEST_CASE("solve_gamma: root near one on a travelling state, input checking") {
    RlwSystem sys = desk_system(100);
    RlwState y0 = initial_state(sys, gaussian, gaussian_dx);
    const double dt = 0.02;

    Eigen::VectorXd stacked(2 * sys.n_dof());
    stacked << y0.u, y0.w;
    OdeRhsFn rhs = [&sys](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
        sys.stacked_rhs(t, y, dy);
    };
    Eigen::VectorXd d = rk_direction(rhs, ButcherTableau::classical_rk4(), 0.0, stacked, dt);

    GammaResult res = solve_gamma(sys, y0, d, dt);
    CHECK(std::abs(res.gamma - 1.0) <= 1e-4);

    // The root conserves the energy expansion exactly.
    double a1, a2, a3;
    sys.energy_expansion(y0.u, d.head(sys.n_dof()), a1, a2, a3);
    double s = res.gamma * dt;
    CHECK(std::abs(a1 * s + a2 * s * s + a3 * s * s * s) <=
          1e-13 * std::max(1.0, std::abs(a1 * s)));

    CHECK_THROWS_AS(solve_gamma(sys, y0, d, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_gamma(sys, y0, d.head(7).eval(), dt), std::invalid_argument);

    RlwSystem forced = assemble_rlw(sys.space_ptr(), manufactured_forcing);
    CHECK_THROWS_AS(solve_gamma(forced, y0, d, dt), std::invalid_argument);

    // Zero direction: nothing to balance.
    GammaResult idle = solve_gamma(sys, y0, Eigen::VectorXd::Zero(2 * sys.n_dof()), dt);
    CHECK(idle.gamma == 1.0);
    CHECK(idle.newton_iters == 0);

    // At the zero state the only balancing root sits far from one.
    RlwState zero = y0;
    zero.u.setZero();
    zero.w.setZero();
    CHECK_THROWS_AS(solve_gamma(sys, zero, Eigen::VectorXd::Ones(2 * sys.n_dof()), dt),
                    NumericalError);
}

TEST_CASE("evolve: argument validation") {
    RlwSystem sys = desk_system(40);
    RlwState y0 = initial_state(sys, gaussian, gaussian_dx);
    ButcherTableau rk4 = ButcherTableau::classical_rk4();

    CHECK_THROWS_AS(evolve(sys, rk4, y0, -0.1, 1.0, false), std::invalid_argument);
    CHECK_THROWS_AS(evolve(sys, rk4, y0, 0.1, y0.t - 1.0, false), std::invalid_argument);
    CHECK_THROWS_AS(evolve(sys, rk4, y0, 0.1, 1.0, false, 0), std::invalid_argument);

    RlwState ragged = y0;
    ragged.w.resize(3);
    CHECK_THROWS_AS(evolve(sys, rk4, ragged, 0.1, 1.0, false), std::invalid_argument);

    RlwSystem forced = assemble_rlw(sys.space_ptr(), manufactured_forcing);
    RlwState f0 = initial_state(forced, gaussian, gaussian_dx);
    CHECK_THROWS_AS(evolve(forced, rk4, f0, 0.1, 1.0, true), std::invalid_argument);
    CHECK_NOTHROW(evolve(forced, rk4, f0, 0.1, 0.5, false));
}

TEST_CASE("evolve: record cadence, exact final time, and determinism") {
    RlwSystem sys = desk_system(40);
    RlwState y0 = initial_state(sys, gaussian, gaussian_dx);
    ButcherTableau rk4 = ButcherTableau::classical_rk4();

    EvolveResult res = evolve(sys, rk4, y0, 0.1, 1.0, false, 3);
    // Initial record, steps 3, 6, 9, and the final step.
    CHECK(res.records.size() == 5);
    CHECK(res.records.front().t == y0.t);
    CHECK(res.records.front().gamma == 1.0);
    CHECK(std::abs(res.state.t - 1.0) <= 1e-12);
    CHECK(std::abs(res.records.back().t - 1.0) <= 1e-12);

    EvolveResult again = evolve(sys, rk4, y0, 0.1, 1.0, false, 3);
    CHECK((res.state.u - again.state.u).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((res.state.w - again.state.w).lpNorm<Eigen::Infinity>() == 0.0);

    EvolveResult relaxed = evolve(sys, rk4, y0, 0.1, 1.0, true, 1);
    CHECK(std::abs(relaxed.state.t - 1.0) <= 0.1 + 1e-12);

    RlwState still = y0;
    still.u.setZero();
    still.w.setZero();
    EvolveResult idle = evolve(sys, rk4, still, 0.1, 0.5, true);
    CHECK(idle.state.u.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(max_gamma_defect(idle) == 0.0);
}

TEST_CASE("evolve: relaxation pins the energy and its defect decays cubically") {
    RlwSystem sys = desk_system(200);
    RlwState y0 = initial_state(sys, gaussian, gaussian_dx);
    ButcherTableau rk4 = ButcherTableau::classical_rk4();

    EvolveResult relaxed = evolve(sys, rk4, y0, 0.05, 2.0, true);
    EvolveResult plain = evolve(sys, rk4, y0, 0.05, 2.0, false);

    double drift_on = max_energy_drift(relaxed);
    double drift_off = max_energy_drift(plain);
    CHECK(drift_on <= 1e-13);
    CHECK(drift_off >= 10.0 * drift_on);

    // Mass is conserved by both variants.
    double m0 = relaxed.records.front().invariants.mass;
    for (const EvolveResult* res : {&relaxed, &plain})
        for (const StepRecord& r : res->records)
            CHECK(std::abs(r.invariants.mass - m0) <= 1e-12 * std::abs(m0));

    double g1 = max_gamma_defect(evolve(sys, rk4, y0, 0.1, 1.0, true));
    double g2 = max_gamma_defect(evolve(sys, rk4, y0, 0.05, 1.0, true));
    double g3 = max_gamma_defect(evolve(sys, rk4, y0, 0.025, 1.0, true));
    CHECK(g1 / g2 >= 5.0);
    CHECK(g2 / g3 >= 5.0);
}

TEST_CASE("evolve: fourth-order decay of the time error against a fine reference") {
    auto space = make_space(PeriodicMesh(0.0, 1.0, 8), 2);
    RlwSystem sys = assemble_rlw(space, manufactured_forcing);
    RlwState y0 = initial_state(
        sys, [](double x) { return manufactured_solution(x, 0.0); },
        [](double x) { return manufactured_solution_dx(x, 0.0); });
    ButcherTableau rk4 = ButcherTableau::classical_rk4();
    const double t_end = 0.5;

    Eigen::VectorXd ref = evolve(sys, rk4, y0, t_end / 1280, t_end, false).state.u;
    auto err = [&](int steps) {
        Eigen::VectorXd u = evolve(sys, rk4, y0, t_end / steps, t_end, false).state.u;
        return (u - ref).lpNorm<Eigen::Infinity>();
    };
    double e40 = err(40), e80 = err(80), e160 = err(160);
    CHECK(e40 / e80 >= 10.0);
    CHECK(e40 / e80 <= 24.0);
    CHECK(e80 / e160 >= 10.0);
    CHECK(e80 / e160 <= 24.0);
}
