/// @file acceptance.cpp
/// @brief End-to-end acceptance suite for the projection/RLW stack.
///
/// Each criterion prints exactly one [PASS]/[FAIL] line with its key numbers and
/// wall time; the process exits nonzero if any criterion fails.  Tolerances are
/// pinned here on purpose -- do not loosen them to make a regression green.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rlwfem/experiments.hpp"
#include "rlwfem/projection.hpp"
#include "rlwfem/rlw.hpp"
#include "rlwfem/time_integration.hpp"

using namespace rlwfem;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

class Criterion {
public:
    Criterion(int number, std::string name)
        : number_(number), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            failed_ = true;
            if (!detail_.empty()) detail_ += "; ";
            detail_ += what;
        }
    }

    void note(const std::string& what) {
        if (!note_.empty()) note_ += ", ";
        note_ += what;
    }

    void finish(double budget_seconds) {
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
                             .count();
        if (elapsed > budget_seconds) {
            failed_ = true;
            detail_ += (detail_.empty() ? "" : "; ") + std::string("over time budget");
        }
        std::printf("[%s] %d. %s (%s%st=%.2fs)\n", failed_ ? "FAIL" : "PASS", number_,
                    name_.c_str(), note_.c_str(), note_.empty() ? "" : ", ", elapsed);
        if (!detail_.empty()) std::printf("       -> %s\n", detail_.c_str());
        if (failed_) ++g_failures;
    }

private:
    int number_;
    std::string name_;
    std::string detail_, note_;
    bool failed_ = false;
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

double integrate01(const std::function<double(double)>& f, int n_points) {
    QuadratureRule rule = gauss_rule(n_points);
    double acc = 0.0;
    for (int q = 0; q < rule.size(); ++q) acc += rule.weights[q] * f(rule.points[q]);
    return acc;
}

double least_squares_rate(const std::vector<double>& cells, const std::vector<double>& errors) {
    const int m = static_cast<int>(cells.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        double x = -std::log(cells[i]);
        double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// --------------------------------------------------------------------------
// 1. Node-orthogonal polynomial identity suite.
void criterion_psi_identities() {
    Criterion c(1, "psi identity suite: odd-degree closed forms, even-degree sign flips");
    double worst = 0.0;
    auto track = [&worst](double err) { worst = std::max(worst, err); };

    for (int k : {1, 3, 5, 7}) {
        const double kk = k;
        const int n_q = k + 2;
        track(std::abs(integrate01([k](double x) { return psi(k, x) * psi(k, x); }, n_q) -
                       1.0 / (kk * (kk + 2))));
        track(std::abs(integrate01([k](double x) { return psi(k, x) * psi(k, 1 - x); }, n_q) -
                       1.0 / (kk * (kk + 1) * (kk + 2))));
        track(std::abs(integrate01([k](double x) { return psi(k, x); }, n_q) -
                       1.0 / (kk * (kk + 1))));
        for (int j = 1; j <= k; ++j) {
            track(std::abs(
                integrate01([k, j](double x) { return ipow(x, j) * psi(k, x); }, n_q) -
                1.0 / (kk * (kk + 2))));
            track(std::abs(
                integrate01([k, j](double x) { return ipow(1 - x, j) * psi(k, x); }, n_q) -
                1.0 / (kk * (kk + 1) * (kk + 2))));
        }
        track(std::abs(
            integrate01([k](double x) { return psi_prime(k, x) * psi(k, 1 - x); }, n_q) -
            1.0 / (kk + 1)));
        track(std::abs(psi_prime(k, 0.0) - (kk + 1) / 2));
        track(std::abs(psi_prime(k, 1.0) - (kk * kk + 2 * kk - 1) / 2));
    }

    for (int k : {2, 4, 6}) {
        const double kk = k;
        NodeOrthogonalPolynomial p(k);
        track(std::abs(
            integrate01([&p](double x) { return p.value(x) * p.value(1 - x); }, k + 2) +
            1.0 / (kk * (kk + 1) * (kk + 2))));
        track(std::abs(p.deriv(0.0) + (kk + 1) / 2));
    }

    c.note("max defect " + fmt(worst));
    c.expect(worst <= 1e-12, "identity defect above 1e-12");
    c.finish(1.0);
}

// --------------------------------------------------------------------------
// 2. Closed-form Gram eigenvalues vs a dense eigensolve.
void criterion_gram_eigenvalues() {
    Criterion c(2, "node-basis Gram eigenvalue formula matches dense eigensolve");
    double worst = 0.0;
    for (int k : {1, 3, 5}) {
        PeriodicMesh mesh(0.0, 1.0, 8);
        SplitBasis split = build_split_basis(make_space(mesh, k));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(split.node_gram().dense());
        Eigen::VectorXd formula = gram_eigenvalues_s1(k, mesh);
        std::sort(formula.data(), formula.data() + formula.size());
        worst = std::max(worst, (formula - eig.eigenvalues()).lpNorm<Eigen::Infinity>());
    }
    c.note("max |formula - eig| " + fmt(worst));
    c.expect(worst <= 1e-10, "eigenvalue mismatch above 1e-10");
    c.finish(1.0);
}

// --------------------------------------------------------------------------
// 3. Projected-derivative defect rates over the reference grids.
void criterion_defect_rate_table() {
    Criterion c(3, "projected-derivative defect rates at the finest grid pair");
    const double expected[6] = {4.001, 1.997, 4.002, 3.998, 6.030, 5.953};
    auto u = [](double x) { return std::sin(2 * kPi * x); };
    std::string rates;
    for (int k = 1; k <= 6; ++k) {
        std::vector<int> grid = (k <= 4) ? std::vector<int>{10, 20, 50, 100, 200}
                                         : std::vector<int>{5, 10, 15, 20, 25};
        int n1 = grid[grid.size() - 2], n2 = grid.back();
        double e1 = dichotomy_norm(GramOperator(make_space(PeriodicMesh(0, 1, n1), k)), u);
        double e2 = dichotomy_norm(GramOperator(make_space(PeriodicMesh(0, 1, n2), k)), u);
        double rate = std::log(e1 / e2) / std::log(double(n2) / n1);
        rates += (k > 1 ? " " : "") + std::to_string(rate).substr(0, 5);
        std::ostringstream what;
        what << "k=" << k << " rate " << rate << " vs " << expected[k - 1];
        c.expect(std::abs(rate - expected[k - 1]) <= 0.15, what.str());
    }
    c.note("rates " + rates);
    c.finish(30.0);
}

// --------------------------------------------------------------------------
// 4. Structured solvers against dense LU.
void criterion_structured_vs_dense() {
    Criterion c(4, "FFT and periodic-banded solvers match dense LU");
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double worst = 0.0;

    for (int k = 1; k <= 4; ++k)
        for (int n_cells : {8, 16, 32, 64}) {
            auto space = make_space(PeriodicMesh(0.0, 1.0, n_cells), k);
            RlwSystem sys = assemble_rlw(space);
            const int n = sys.n_dof();

            Eigen::VectorXd b(n);
            for (int i = 0; i < n; ++i) b[i] = unif(rng);
            Eigen::MatrixXd a_dense = structured_dense(sys.mass());
            Eigen::VectorXd x_ref = Eigen::PartialPivLU<Eigen::MatrixXd>(a_dense).solve(b);
            worst = std::max(worst,
                             (sys.gram().solve(b) - x_ref).lpNorm<Eigen::Infinity>());

            Eigen::MatrixXd big(2 * n, 2 * n);
            Eigen::MatrixXd bm = structured_dense(sys.convection());
            big << a_dense, -bm, -bm, a_dense;
            Eigen::VectorXd z(2 * n);
            for (int i = 0; i < 2 * n; ++i) z[i] = unif(rng);
            Eigen::VectorXd big_ref = Eigen::PartialPivLU<Eigen::MatrixXd>(big).solve(z);
            auto [x1, x2] = sys.block().solve(z.head(n), z.tail(n));
            worst = std::max(worst, (x1 - big_ref.head(n)).lpNorm<Eigen::Infinity>());
            worst = std::max(worst, (x2 - big_ref.tail(n)).lpNorm<Eigen::Infinity>());
        }

    // Plain random systems, both kinds.
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<int> size(2, 64);
        int n = size(rng);
        Eigen::VectorXd row(n);
        for (int i = 0; i < n; ++i) row[i] = unif(rng);
        row[0] += n;
        CirculantMatrix circ(row);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) b[i] = unif(rng);
        Eigen::VectorXd x_ref = Eigen::PartialPivLU<Eigen::MatrixXd>(circ.dense()).solve(b);
        worst = std::max(worst,
                         (CirculantFactorization(circ).solve(b) - x_ref)
                             .lpNorm<Eigen::Infinity>());

        std::uniform_int_distribution<int> band(0, std::min(9, n - 1));
        int p = band(rng);
        PeriodicBandedMatrix m(n, p);
        for (int i = 0; i < n; ++i)
            for (int d = -p; d <= p; ++d) {
                int j = (i + d + n) % n;
                if (m.entry(i, j) == 0.0) m.add(i, j, d == 0 ? n + 1.0 : unif(rng));
            }
        Eigen::VectorXd y_ref = Eigen::PartialPivLU<Eigen::MatrixXd>(m.dense()).solve(b);
        worst = std::max(worst,
                         (PeriodicBandedFactorization(m).solve(b) - y_ref)
                             .lpNorm<Eigen::Infinity>());
    }

    c.note("max |structured - dense| " + fmt(worst));
    c.expect(worst <= 1e-10, "solver deviation above 1e-10");
    c.finish(5.0);
}

// --------------------------------------------------------------------------
// 5. Manufactured-solution convergence of the mixed solver.
void criterion_manufactured_convergence() {
    Criterion c(5, "manufactured-solution convergence slopes of the mixed solver");
    const double u_threshold[6] = {1.8, 1.8, 3.8, 3.8, 5.6, 5.6};
    for (int k = 1; k <= 6; ++k) {
        RunConfig cfg;
        cfg.degrees = {k};
        RateTable table = cmd_rlw_convergence(cfg);

        std::vector<double> n, eu, ew, eux;
        for (const auto& row : table.rows) {
            n.push_back(row[1]);
            eu.push_back(row[4]);
            ew.push_back(row[6]);
            eux.push_back(row[8]);
        }
        double su = least_squares_rate(n, eu);
        double sw = least_squares_rate(n, ew);
        std::ostringstream what;
        what << "k=" << k << " slopes u " << su << " w " << sw;
        c.expect(su >= u_threshold[k - 1], what.str() + " (u below threshold)");
        c.expect(sw >= u_threshold[k - 1], what.str() + " (w below threshold)");
        if (k % 2 == 1) {
            double sux = least_squares_rate(n, eux);
            std::ostringstream what2;
            what2 << "k=" << k << " slope ux " << sux;
            c.expect(sux >= k - 0.2, what2.str());
        }
    }
    c.finish(300.0);
}

// --------------------------------------------------------------------------
// 6. Invariant drift of the relaxed Gaussian run.
void criterion_conservation() {
    Criterion c(6, "relaxed Gaussian run conserves mass and energy to roundoff");
    RunConfig cfg;
    cfg.degrees = {1};
    RateTable table = cmd_conservation(cfg);

    double mass0 = 0.0, impulse0 = 0.0, energy0 = 0.0;
    for (const std::string& line : table.comments) {
        std::sscanf(line.c_str(), "mass0: %lf", &mass0);
        std::sscanf(line.c_str(), "impulse0: %lf", &impulse0);
        std::sscanf(line.c_str(), "energy0: %lf", &energy0);
    }

    double mass = 0.0, imp = 0.0, en = 0.0, gam = 0.0;
    for (const auto& row : table.rows) {
        mass = std::max(mass, std::abs(row[1]));
        imp = std::max(imp, std::abs(row[2]));
        en = std::max(en, std::abs(row[3]));
        gam = std::max(gam, std::abs(row[4]));
    }
    c.note("mass " + fmt(mass / std::abs(mass0)) + ", energy " + fmt(en / std::abs(energy0)) +
           ", impulse " + fmt(imp) + ", |gamma-1| " + fmt(gam));
    c.expect(mass / std::abs(mass0) <= 1e-12, "relative mass drift above 1e-12");
    c.expect(en / std::abs(energy0) <= 1e-12, "relative energy drift above 1e-12");
    c.expect(imp <= 1e-4, "impulse error above 1e-4");
    c.expect(gam <= 1e-8, "relaxation parameter drifted above 1e-8");
    c.finish(120.0);
}

// --------------------------------------------------------------------------
// 7. Relaxation contrast.
void criterion_relaxation_contrast() {
    Criterion c(7, "switching relaxation off grows the energy drift tenfold");
    RunConfig cfg;
    cfg.degrees = {1};
    RateTable relaxed = cmd_conservation(cfg);
    cfg.relax = 0;
    RateTable plain = cmd_conservation(cfg);

    auto max_energy = [](const RateTable& t) {
        double worst = 0.0;
        for (const auto& row : t.rows) worst = std::max(worst, std::abs(row[3]));
        return worst;
    };
    double on = max_energy(relaxed), off = max_energy(plain);
    c.note("drift on " + fmt(on) + ", off " + fmt(off));
    c.expect(off >= 10.0 * on, "plain-run energy drift not 10x the relaxed drift");
    c.finish(120.0);
}

// --------------------------------------------------------------------------
// 8. Impulse-defect convergence rates.
void criterion_impulse_rates() {
    Criterion c(8, "impulse-defect rates across degrees 1..3");
    const double expected[3] = {2.0, 2.0, 6.0};
    RunConfig cfg;
    RateTable table = cmd_impulse_rates(cfg);

    for (int k = 1; k <= 3; ++k) {
        std::vector<double> n, err;
        for (const auto& row : table.rows)
            if (static_cast<int>(row[0]) == k) {
                n.push_back(row[1]);
                err.push_back(row[4]);
            }
        double rate = least_squares_rate(n, err);
        std::ostringstream what;
        what << "k=" << k << " rate " << rate << " vs " << expected[k - 1];
        c.note(what.str());
        c.expect(std::abs(rate - expected[k - 1]) <= 0.4, what.str());
    }
    c.finish(600.0);
}

// --------------------------------------------------------------------------
// 9. Randomized property sweeps.
void criterion_property_sweeps() {
    Criterion c(9, "randomized property sweeps (>=100 cases each)");
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    // Quadrature exactness on random monomials.
    double worst_quad = 0.0;
    std::uniform_int_distribution<int> order(1, 12);
    for (int trial = 0; trial < 120; ++trial) {
        int n = order(rng);
        std::uniform_int_distribution<int> degree(0, 2 * n - 1);
        int j = degree(rng);
        worst_quad = std::max(
            worst_quad,
            std::abs(integrate01([j](double x) { return ipow(x, j); }, n) - 1.0 / (j + 1)));
    }
    c.expect(worst_quad <= 1e-13, "quadrature exactness defect " + fmt(worst_quad));

    // Partition of unity across degrees.
    double worst_pu = 0.0;
    std::uniform_int_distribution<int> degree(1, 7);
    std::uniform_real_distribution<double> tdist(0.0, 1.0);
    for (int trial = 0; trial < 150; ++trial) {
        BasisValues bv = eval_basis(degree(rng), tdist(rng));
        worst_pu = std::max(worst_pu, std::abs(bv.values.sum() - 1.0));
    }
    c.expect(worst_pu <= 1e-13, "partition-of-unity defect " + fmt(worst_pu));

    // Projection idempotence and orthogonality of the defect.
    double worst_idem = 0.0, worst_orth = 0.0;
    std::uniform_int_distribution<int> kdist(1, 4), ndist(4, 20);
    for (int trial = 0; trial < 100; ++trial) {
        int k = kdist(rng), n_cells = ndist(rng);
        GramOperator gram(make_space(PeriodicMesh(0.0, 1.0, n_cells), k));
        const auto& space = gram.space_ptr();

        Eigen::VectorXd coeff(space->n_dof());
        for (int i = 0; i < coeff.size(); ++i) coeff[i] = unif(rng);
        FeFunction member(space, coeff);
        FeFunction again = l2_project(gram, [&member](double x) { return member.value(x); });
        worst_idem = std::max(worst_idem,
                              (again.coeff() - coeff).lpNorm<Eigen::Infinity>());

        double a1 = unif(rng), a2 = unif(rng), ph = unif(rng);
        ScalarFn f = [a1, a2, ph](double x) {
            return a1 * std::sin(2 * kPi * x + ph) + a2 * std::cos(4 * kPi * x);
        };
        FeFunction pf = l2_project(gram, f);
        Eigen::VectorXd load = assemble_load(*space, f);
        double fnorm = l2_norm_error(FeFunction(space), f);
        worst_orth = std::max(worst_orth,
                              (gram.apply(pf.coeff()) - load).lpNorm<Eigen::Infinity>() /
                                  std::max(fnorm, 1e-30));
    }
    c.expect(worst_idem <= 1e-12, "projection idempotence defect " + fmt(worst_idem));
    c.expect(worst_orth <= 1e-11, "projection orthogonality defect " + fmt(worst_orth));

    // Convection skew-symmetry and mass positive definiteness.
    double worst_skew = 0.0;
    bool all_positive = true;
    for (int trial = 0; trial < 100; ++trial) {
        int k = kdist(rng), n_cells = ndist(rng);
        auto space = make_space(PeriodicMesh(-1.0, 1.0, n_cells), k);
        Eigen::MatrixXd b = structured_dense(assemble_convection(*space));
        worst_skew = std::max(worst_skew, (b + b.transpose()).lpNorm<Eigen::Infinity>() /
                                              b.lpNorm<Eigen::Infinity>());

        StructuredMatrix mass = assemble_mass(*space);
        Eigen::VectorXd x(space->n_dof());
        for (int i = 0; i < x.size(); ++i) x[i] = unif(rng);
        if (x.dot(structured_multiply(mass, x)) <= 0.0) all_positive = false;
    }
    c.expect(worst_skew <= 1e-13, "skew-symmetry defect " + fmt(worst_skew));
    c.expect(all_positive, "mass matrix lost positive definiteness");

    c.finish(30.0);
}

}  // namespace

int main() {
    std::printf("acceptance suite: periodic FE projection + conservative RLW solver\n");
    criterion_psi_identities();
    criterion_gram_eigenvalues();
    criterion_defect_rate_table();
    criterion_structured_vs_dense();
    criterion_manufactured_convergence();
    criterion_conservation();
    criterion_relaxation_contrast();
    criterion_impulse_rates();
    criterion_property_sweeps();
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
