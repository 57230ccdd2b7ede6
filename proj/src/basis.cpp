#include "rlwfem/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace rlwfem {

namespace {

constexpr int kMaxDegree = 12;  // exact integer coefficient construction overflows beyond this

void check_unit_interval(double x, const char* who) {
    if (!(x >= -1e-12 && x <= 1.0 + 1e-12))
        throw std::invalid_argument(std::string(who) + ": x outside [0,1]");
}

double binom(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    double acc = 1.0;
    for (int i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
    return acc;
}

// x^n with the convention 0^0 = 1.
double ipow(double x, int n) {
    double acc = 1.0;
    for (int i = 0; i < n; ++i) acc *= x;
    return acc;
}

}  // namespace

BasisValues eval_basis(int degree, double t) {
    if (degree < 1) throw std::invalid_argument("eval_basis: degree must be >= 1");
    check_unit_interval(t, "eval_basis");
    const int k = degree;
    BasisValues out;
    out.values.resize(k + 1);
    out.derivs.resize(k + 1);
    for (int j = 0; j <= k; ++j) {
        double num = 1.0, den = 1.0;
        for (int m = 0; m <= k; ++m) {
            if (m == j) continue;
            num *= t - static_cast<double>(m) / k;
            den *= static_cast<double>(j) / k - static_cast<double>(m) / k;
        }
        double dnum = 0.0;
        for (int m = 0; m <= k; ++m) {
            if (m == j) continue;
            double prod = 1.0;
            for (int r = 0; r <= k; ++r) {
                if (r == j || r == m) continue;
                prod *= t - static_cast<double>(r) / k;
            }
            dnum += prod;
        }
        out.values[j] = num / den;
        out.derivs[j] = dnum / den;
    }
    return out;
}

NodeOrthogonalPolynomial::NodeOrthogonalPolynomial(int degree) : degree_(degree) {
    if (degree < 1 || degree > kMaxDegree)
        throw std::invalid_argument("NodeOrthogonalPolynomial: degree must be in [1,12]");
    const int k = degree;
    coeff_.resize(k);
    for (int j = 0; j < k; ++j) {
        // (k+1)!/(k+1-j)! as a falling product; everything stays integer-valued.
        long double falling = 1.0L;
        for (int m = k + 1; m >= k + 2 - j; --m) falling *= m;
        long double fact = 1.0L;
        for (int m = 2; m <= j + 1; ++m) fact *= m;
        long double c = binom(k - 1, j) * falling / fact;
        coeff_[j] = static_cast<double>(j % 2 ? -c : c);
    }
}

double NodeOrthogonalPolynomial::value(double x) const {
    check_unit_interval(x, "NodeOrthogonalPolynomial::value");
    const int k = degree_;
    double acc = 0.0;
    for (int j = 0; j < k; ++j) acc += coeff_[j] * ipow(x, k - j) * ipow(1.0 - x, j);
    return acc;
}

double NodeOrthogonalPolynomial::deriv(double x) const {
    check_unit_interval(x, "NodeOrthogonalPolynomial::deriv");
    const int k = degree_;
    double acc = 0.0;
    for (int j = 0; j < k; ++j) {
        double d = (k - j) * ipow(x, k - j - 1) * ipow(1.0 - x, j);
        if (j > 0) d -= j * ipow(x, k - j) * ipow(1.0 - x, j - 1);
        acc += coeff_[j] * d;
    }
    return acc;
}

namespace {

const NodeOrthogonalPolynomial& odd_poly(int k, const char* who) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument(std::string(who) + ": k must be odd");
    static NodeOrthogonalPolynomial cache[] = {
        NodeOrthogonalPolynomial(1),  NodeOrthogonalPolynomial(3), NodeOrthogonalPolynomial(5),
        NodeOrthogonalPolynomial(7),  NodeOrthogonalPolynomial(9), NodeOrthogonalPolynomial(11),
    };
    if (k > kMaxDegree) throw std::invalid_argument(std::string(who) + ": k too large");
    return cache[(k - 1) / 2];
}

}  // namespace

double psi(int k, double x) { return odd_poly(k, "psi").value(x); }

double psi_prime(int k, double x) { return odd_poly(k, "psi_prime").deriv(x); }

double bubble_basis(int k, int j, double x) {
    if (k < 2) throw std::invalid_argument("bubble_basis: k must be >= 2");
    if (j < 1 || j > k - 1) throw std::invalid_argument("bubble_basis: j must be in [1,k-1]");
    check_unit_interval(x, "bubble_basis");
    return x * (1.0 - x) * binom(k - 2, j - 1) * ipow(x, j - 1) * ipow(1.0 - x, k - 1 - j);
}

}  // namespace rlwfem
