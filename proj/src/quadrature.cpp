#include "rlwfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace rlwfem {

namespace {

// P_n(x) and P_n'(x) on [-1,1] by the three-term recurrence.
void legendre(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    p = (n == 0) ? p0 : p1;
    dp = (n == 0) ? 0.0 : n * (x * p1 - p0) / (x * x - 1.0);
}

}  // namespace

QuadratureRule gauss_rule(int n_points) {
    if (n_points < 1) throw std::invalid_argument("gauss_rule: n_points must be >= 1");
    const int n = n_points;
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    // Roots of P_n by Newton from the Chebyshev-like initial guess; each root and its
    // mirror fill symmetric slots, so only the first half is iterated.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            legendre(n, x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre(n, x, p, dp);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1,1] -> [0,1]: the guess sequence has descending x, ascending point.
        rule.points[i] = 0.5 * (1.0 - x);
        rule.weights[i] = 0.5 * w;
        rule.points[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

}  // namespace rlwfem
