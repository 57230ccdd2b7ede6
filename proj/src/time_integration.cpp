#include "rlwfem/time_integration.hpp"

#include <cmath>
#include <stdexcept>

#include "rlwfem/errors.hpp"

namespace rlwfem {

void ButcherTableau::validate() const {
    const int s = stages();
    if (s < 1) throw std::invalid_argument("ButcherTableau: no stages");
    if (a.rows() != s || a.cols() != s || c.size() != s)
        throw std::invalid_argument("ButcherTableau: inconsistent sizes");
    if (std::abs(b.sum() - 1.0) > 1e-14)
        throw std::invalid_argument("ButcherTableau: weights must sum to 1");
    for (int i = 0; i < s; ++i) {
        if (std::abs(a.row(i).sum() - c[i]) > 1e-14)
            throw std::invalid_argument("ButcherTableau: c_i must equal row sums of a");
        for (int j = i; j < s; ++j)
            if (a(i, j) != 0.0)
                throw std::invalid_argument("ButcherTableau: only explicit tableaus supported");
    }
}

ButcherTableau ButcherTableau::classical_rk4() {
    ButcherTableau tab;
    tab.a = Eigen::MatrixXd::Zero(4, 4);
    tab.a(1, 0) = 0.5;
    tab.a(2, 1) = 0.5;
    tab.a(3, 2) = 1.0;
    tab.b.resize(4);
    tab.b << 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0;
    tab.c.resize(4);
    tab.c << 0.0, 0.5, 0.5, 1.0;
    return tab;
}

Eigen::VectorXd rk_direction(const OdeRhsFn& f, const ButcherTableau& tab, double t,
                             const Eigen::VectorXd& y, double dt) {
    const int s = tab.stages();
    std::vector<Eigen::VectorXd> k(s);
    Eigen::VectorXd stage = y;
    for (int i = 0; i < s; ++i) {
        if (i > 0) {
            stage = y;
            for (int j = 0; j < i; ++j)
                if (tab.a(i, j) != 0.0) stage += (dt * tab.a(i, j)) * k[j];
        }
        f(t + tab.c[i] * dt, stage, k[i]);
    }
    Eigen::VectorXd d = tab.b[0] * k[0];
    for (int i = 1; i < s; ++i) d += tab.b[i] * k[i];
    return d;
}

RlwState rk_step(const RlwSystem& sys, const ButcherTableau& tab, const RlwState& y, double dt) {
    const int n = sys.n_dof();
    Eigen::VectorXd stacked(2 * n);
    stacked.head(n) = y.u;
    stacked.tail(n) = y.w;
    auto f = [&sys](double t, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
        sys.stacked_rhs(t, yy, dy);
    };
    Eigen::VectorXd d = rk_direction(f, tab, y.t, stacked, dt);
    RlwState out;
    out.u = y.u + dt * d.head(n);
    out.w = y.w + dt * d.tail(n);
    out.t = y.t + dt;
    return out;
}

GammaResult solve_gamma(const RlwSystem& sys, const RlwState& y, const Eigen::VectorXd& d,
                        double dt) {
    if (sys.has_forcing())
        throw std::invalid_argument("solve_gamma: relaxation requires an unforced system");
    if (!(dt > 0.0)) throw std::invalid_argument("solve_gamma: dt must be positive");
    const int n = sys.n_dof();
    if (d.size() != 2 * n && d.size() != n)
        throw std::invalid_argument("solve_gamma: direction size mismatch");
    Eigen::VectorXd v = (d.size() == 2 * n) ? Eigen::VectorXd(d.head(n)) : d;

    double a1, a2, a3;
    sys.energy_expansion(y.u, v, a1, a2, a3);

    // Nontrivial roots of a1 e + a2 e^2 + a3 e^3 = 0, stable quadratic form.
    double roots[2];
    int n_roots = 0;
    if (a3 == 0.0) {
        if (a2 != 0.0) {
            roots[n_roots++] = -a1 / a2;
        } else if (a1 == 0.0) {
            return {1.0, 0};  // energy flat along the direction; no constraint
        } else {
            throw NumericalError("solve_gamma: energy increment has no root");
        }
    } else {
        double disc = a2 * a2 - 4.0 * a3 * a1;
        if (disc < 0.0)
            throw NumericalError("solve_gamma: no real relaxation root (discriminant < 0)");
        double q = -0.5 * (a2 + std::copysign(std::sqrt(disc), a2 == 0.0 ? 1.0 : a2));
        roots[n_roots++] = q / a3;
        if (q != 0.0) roots[n_roots++] = a1 / q;
    }

    double gamma = 0.0;
    bool found = false;
    for (int i = 0; i < n_roots; ++i) {
        double g = roots[i] / dt;
        if (g <= 0.0) continue;  // gamma <= 0 cannot advance time; examine the other root
        if (!found || std::abs(g - 1.0) < std::abs(gamma - 1.0)) {
            gamma = g;
            found = true;
        }
    }
    if (!found) throw NumericalError("solve_gamma: relaxation roots all have gamma <= 0");
    if (std::abs(gamma - 1.0) > 0.5)
        throw NumericalError("solve_gamma: relaxation root too far from 1 (dt too large?)");

    // Newton polish on the exact increment polynomial; evaluating the polynomial rather
    // than the energy difference avoids catastrophic cancellation near the root.
    const double tol = 1e-14 * std::max(1.0, std::abs(sys.functionals(y.u).energy));
    int iters = 0;
    for (; iters < 20; ++iters) {
        double e = gamma * dt;
        double g = ((a3 * e + a2) * e + a1) * e;
        if (std::abs(g) <= 1e-3 * tol) break;
        double dg = dt * ((3.0 * a3 * e + 2.0 * a2) * e + a1);
        if (dg == 0.0) break;
        double next = gamma - g / dg;
        if (next == gamma) break;
        gamma = next;
    }
    double e = gamma * dt;
    if (std::abs(((a3 * e + a2) * e + a1) * e) > tol)
        throw NumericalError("solve_gamma: Newton polish did not reach tolerance");
    return {gamma, iters};
}

EvolveResult evolve(const RlwSystem& sys, const ButcherTableau& tab, RlwState y0, double dt,
                    double t_end, bool relaxation, int record_every) {
    tab.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
    if (!(t_end > y0.t)) throw std::invalid_argument("evolve: t_end must exceed the initial time");
    if (record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
    if (relaxation && sys.has_forcing())
        throw std::invalid_argument("evolve: relaxation conserves energy only without forcing");

    const int n = sys.n_dof();
    if (y0.u.size() != n || y0.w.size() != n)
        throw std::invalid_argument("evolve: state size mismatch");

    auto f = [&sys](double t, const Eigen::VectorXd& yy, Eigen::VectorXd& dy) {
        sys.stacked_rhs(t, yy, dy);
    };

    EvolveResult out;
    out.records.push_back({y0.t, 1.0, sys.functionals(y0.u), 0});

    Eigen::VectorXd y(2 * n);
    y.head(n) = y0.u;
    y.tail(n) = y0.w;
    double t = y0.t;
    long step = 0;
    const double t_eps = 1e-12 * std::max(1.0, std::abs(t_end));
    while (t < t_end - t_eps) {
        // Relaxed runs keep dt and land within one dt of t_end; plain runs shorten the
        // final step to hit it exactly.
        double step_dt = relaxation ? dt : std::min(dt, t_end - t);
        Eigen::VectorXd d = rk_direction(f, tab, t, y, step_dt);
        double gamma = 1.0;
        int iters = 0;
        if (relaxation && d.lpNorm<Eigen::Infinity>() > 0.0) {
            RlwState cur{y.head(n), y.tail(n), t};
            GammaResult gr = solve_gamma(sys, cur, d, step_dt);
            gamma = gr.gamma;
            iters = gr.newton_iters;
        }
        y += (gamma * step_dt) * d;
        t += gamma * step_dt;
        ++step;
        if (step % record_every == 0 || t >= t_end - t_eps)
            out.records.push_back({t, gamma, sys.functionals(y.head(n)), iters});
    }

    out.state.u = y.head(n);
    out.state.w = y.tail(n);
    out.state.t = t;
    return out;
}

}  // namespace rlwfem
