#include "rlwfem/projection.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "rlwfem/errors.hpp"

namespace rlwfem {

namespace {

enum class Kind { symmetric, skew };

StructuredMatrix finalize_assembly(PeriodicBandedMatrix m, const FeSpace& space, GramPath path,
                                   Kind kind) {
    // Enforce the structural symmetry class exactly; skipped only when the band wraps
    // onto itself (tiny meshes handled by the dense fallback of the factorization).
    if (2 * m.bandwidth() < m.size()) {
        if (kind == Kind::symmetric)
            m.symmetrize();
        else
            m.antisymmetrize();
    }
    bool want_circulant =
        path == GramPath::circulant_fft || (path == GramPath::automatic && space.degree() == 1);
    if (!want_circulant) return m;
    if (space.degree() != 1)
        throw std::invalid_argument("assemble: circulant storage requires degree 1");
    const int n = m.size();
    Eigen::VectorXd row(n);
    for (int j = 0; j < n; ++j) row[j] = m.entry(0, j);
    return CirculantMatrix(std::move(row));
}

}  // namespace

StructuredMatrix assemble_mass(const FeSpace& space, GramPath path) {
    const int k = space.degree();
    const int n = space.n_dof();
    const double h = space.mesh().h();
    const auto& tb = space.assembly_table();
    PeriodicBandedMatrix m(n, k);
    for (int cell = 0; cell < space.mesh().n_cells(); ++cell)
        for (int q = 0; q < tb.rule.size(); ++q) {
            double w = h * tb.rule.weights[q];
            for (int i = 0; i <= k; ++i)
                for (int j = 0; j <= k; ++j)
                    m.add(space.cell_dof(cell, i), space.cell_dof(cell, j),
                          w * tb.values(q, i) * tb.values(q, j));
        }
    return finalize_assembly(std::move(m), space, path, Kind::symmetric);
}

StructuredMatrix assemble_convection(const FeSpace& space, GramPath path) {
    const int k = space.degree();
    const int n = space.n_dof();
    const auto& tb = space.assembly_table();
    PeriodicBandedMatrix m(n, k);
    for (int cell = 0; cell < space.mesh().n_cells(); ++cell)
        for (int q = 0; q < tb.rule.size(); ++q) {
            // (phi_i, phi_j'): the cell scale h cancels against the reference derivative.
            double w = tb.rule.weights[q];
            for (int i = 0; i <= k; ++i)
                for (int j = 0; j <= k; ++j)
                    m.add(space.cell_dof(cell, i), space.cell_dof(cell, j),
                          w * tb.values(q, i) * tb.derivs(q, j));
        }
    return finalize_assembly(std::move(m), space, path, Kind::skew);
}

GramOperator::GramOperator(std::shared_ptr<const FeSpace> space, GramPath path)
    : space_(std::move(space)), mass_(assemble_mass(*space_, path)), fact_(mass_) {}

Eigen::VectorXd GramOperator::apply(const Eigen::VectorXd& x) const {
    return structured_multiply(mass_, x);
}

Eigen::VectorXd GramOperator::solve(const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = fact_.solve(b);
    x += fact_.solve(b - apply(x));
    return x;
}

Eigen::VectorXd assemble_load(const FeSpace& space, const ScalarFn& f) {
    const int k = space.degree();
    const double h = space.mesh().h();
    const auto& tb = space.error_table();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.n_dof());
    for (int cell = 0; cell < space.mesh().n_cells(); ++cell) {
        double x0 = space.mesh().cell_left(cell);
        for (int q = 0; q < tb.rule.size(); ++q) {
            double wf = h * tb.rule.weights[q] * f(x0 + tb.rule.points[q] * h);
            for (int i = 0; i <= k; ++i) b[space.cell_dof(cell, i)] += wf * tb.values(q, i);
        }
    }
    return b;
}

FeFunction l2_project(const GramOperator& gram, const ScalarFn& f) {
    return FeFunction(gram.space_ptr(), gram.solve(assemble_load(gram.space(), f)));
}

FeFunction project_fe_derivative(const GramOperator& gram, const FeFunction& g) {
    const FeSpace& sp = gram.space();
    if (&g.space() != &sp) throw std::invalid_argument("project_fe_derivative: space mismatch");
    const int k = sp.degree();
    const auto& tb = sp.assembly_table();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(sp.n_dof());
    for (int cell = 0; cell < sp.mesh().n_cells(); ++cell)
        for (int q = 0; q < tb.rule.size(); ++q) {
            double gp = 0.0;  // reference-scale derivative; h cancels against dx
            for (int j = 0; j <= k; ++j) gp += g.coeff()[sp.cell_dof(cell, j)] * tb.derivs(q, j);
            double wgp = tb.rule.weights[q] * gp;
            for (int i = 0; i <= k; ++i) b[sp.cell_dof(cell, i)] += wgp * tb.values(q, i);
        }
    return FeFunction(gram.space_ptr(), gram.solve(b));
}

double dichotomy_norm(const GramOperator& gram, const ScalarFn& u) {
    const FeSpace& sp = gram.space();
    const int k = sp.degree();
    const double h = sp.mesh().h();
    FeFunction pu = l2_project(gram, u);
    // ((Pu - u)', chi) = ((Pu)', chi) + (u, chi') under periodicity; no u' needed.
    const auto& tb = sp.error_table();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(sp.n_dof());
    for (int cell = 0; cell < sp.mesh().n_cells(); ++cell) {
        double x0 = sp.mesh().cell_left(cell);
        for (int q = 0; q < tb.rule.size(); ++q) {
            double pup = 0.0;
            for (int j = 0; j <= k; ++j) pup += pu.coeff()[sp.cell_dof(cell, j)] * tb.derivs(q, j);
            double w = tb.rule.weights[q];
            double uq = u(x0 + tb.rule.points[q] * h);
            for (int i = 0; i <= k; ++i)
                b[sp.cell_dof(cell, i)] += w * (pup * tb.values(q, i) + uq * tb.derivs(q, i));
        }
    }
    return FeFunction(gram.space_ptr(), gram.solve(b)).l2_norm();
}

namespace {

std::shared_ptr<const FeSpace> validate_split_space(std::shared_ptr<const FeSpace> space) {
    if (!space) throw std::invalid_argument("SplitBasis: null space");
    if (space->degree() % 2 == 0)
        throw std::invalid_argument("SplitBasis: the node/bubble split requires odd degree");
    if (space->mesh().n_cells() < 2)
        throw std::invalid_argument("SplitBasis: requires at least two cells");
    return space;
}

CirculantMatrix make_node_gram(const FeSpace& space, const SplitBasis& split) {
    const int N = space.mesh().n_cells();
    StructuredMatrix mass = assemble_mass(space);
    Eigen::VectorXd l0 = split.node_function(0).coeff();
    Eigen::VectorXd row = Eigen::VectorXd::Zero(N);
    row[0] = l0.dot(structured_multiply(mass, l0));
    double r1 = l0.dot(structured_multiply(mass, split.node_function(1 % N).coeff()));
    row[1] = r1;
    if (N > 2) row[N - 1] = r1;
    return CirculantMatrix(std::move(row));
}

}  // namespace

SplitBasis::SplitBasis(std::shared_ptr<const FeSpace> space)
    : space_(validate_split_space(std::move(space))),
      node_gram_(make_node_gram(*space_, *this)),
      node_fact_(node_gram_) {
    // Construction-time verification of the split invariants.
    const int N = n_nodes();
    const int k = space_->degree();
    for (int i = 0; i < N; ++i) {
        Eigen::VectorXd c = node_function(i).coeff();
        for (int m = 0; m < N; ++m) {
            double expected = (m == i) ? 1.0 : 0.0;
            if (std::abs(c[m * k] - expected) > 1e-12)
                throw NumericalError("SplitBasis: node function misses its nodal values");
        }
    }
    StructuredMatrix mass = assemble_mass(*space_);
    for (int cell = 0; cell < N; ++cell)
        for (int m = 1; m <= k - 1; ++m) {
            FeFunction q = bubble_function(cell, m);
            for (int g = 0; g < N; ++g)
                if (std::abs(q.coeff()[g * k]) > 1e-12)
                    throw NumericalError("SplitBasis: bubble does not vanish at a mesh node");
            Eigen::VectorXd aq = structured_multiply(mass, q.coeff());
            for (int i : {cell, (cell + 1) % N})
                if (std::abs(node_function(i).coeff().dot(aq)) > 1e-12)
                    throw NumericalError("SplitBasis: node/bubble families not orthogonal");
        }
}

FeFunction SplitBasis::node_function(int i) const {
    const int N = n_nodes();
    const int k = space_->degree();
    if (i < 0 || i >= N) throw std::invalid_argument("SplitBasis::node_function: index");
    FeFunction f(space_);
    int left = (i + N - 1) % N;
    for (int j = 0; j <= k; ++j) {
        f.coeff()[space_->cell_dof(left, j)] = psi(k, static_cast<double>(j) / k);
        f.coeff()[space_->cell_dof(i, j)] = psi(k, 1.0 - static_cast<double>(j) / k);
    }
    return f;
}

FeFunction SplitBasis::bubble_function(int cell, int m) const {
    const int N = n_nodes();
    const int k = space_->degree();
    if (cell < 0 || cell >= N) throw std::invalid_argument("SplitBasis::bubble_function: cell");
    FeFunction f(space_);
    for (int j = 1; j <= k - 1; ++j)
        f.coeff()[space_->cell_dof(cell, j)] = bubble_basis(k, m, static_cast<double>(j) / k);
    return f;
}

Eigen::VectorXd SplitBasis::node_load(const ScalarFn& v) const {
    const FeSpace& sp = *space_;
    const int N = n_nodes();
    const int k = sp.degree();
    const double h = sp.mesh().h();
    const auto& rule = sp.error_table().rule;
    Eigen::VectorXd psi_t(rule.size()), psi_1mt(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
        psi_t[q] = psi(k, rule.points[q]);
        psi_1mt[q] = psi(k, 1.0 - rule.points[q]);
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(N);
    for (int cell = 0; cell < N; ++cell) {
        double x0 = sp.mesh().cell_left(cell);
        for (int q = 0; q < rule.size(); ++q) {
            double wv = h * rule.weights[q] * v(x0 + rule.points[q] * h);
            b[cell] += wv * psi_1mt[q];          // l_cell is psi(1-t) on its right cell
            b[(cell + 1) % N] += wv * psi_t[q];  // l_{cell+1} is psi(t) on its left cell
        }
    }
    return b;
}

Eigen::VectorXd SplitBasis::node_coefficients(const ScalarFn& v) const {
    return node_fact_.solve(node_load(v));
}

FeFunction SplitBasis::project_node_component(const ScalarFn& v) const {
    Eigen::VectorXd d = node_coefficients(v);
    FeFunction f(space_);
    for (int i = 0; i < n_nodes(); ++i) f.coeff() += d[i] * node_function(i).coeff();
    return f;
}

SplitBasis build_split_basis(std::shared_ptr<const FeSpace> space) {
    return SplitBasis(std::move(space));
}

Eigen::VectorXd gram_eigenvalues_s1(int k, const PeriodicMesh& mesh) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("gram_eigenvalues_s1: k must be odd");
    const int N = mesh.n_cells();
    const double scale = 2.0 * mesh.h() / (static_cast<double>(k) * (k + 1) * (k + 2));
    Eigen::VectorXd lam(N);
    for (int m = 1; m <= N; ++m) lam[m - 1] = scale * (k + 1 + std::cos(2.0 * M_PI * m / N));
    return lam;
}

}  // namespace rlwfem
