#pragma once

#include <memory>

#include <Eigen/Core>

#include "rlwfem/fe_space.hpp"
#include "rlwfem/structured.hpp"

namespace rlwfem {

/// Storage/solve kind for assembled operators.  automatic picks circulant (FFT) for
/// degree 1 and periodic banded for higher degrees; the explicit kinds force one path.
enum class GramPath { automatic, circulant_fft, periodic_banded };

/// Mass matrix (phi_i, phi_j) in the nodal basis; assembly rule is exact.
StructuredMatrix assemble_mass(const FeSpace& space, GramPath path = GramPath::automatic);

/// Convection matrix with entries (phi_i, phi_j'); exactly skew-symmetric as stored.
StructuredMatrix assemble_convection(const FeSpace& space, GramPath path = GramPath::automatic);

/** Factorized mass operator of a space; immutable after construction. */
class GramOperator {
public:
    explicit GramOperator(std::shared_ptr<const FeSpace> space,
                          GramPath path = GramPath::automatic);

    const FeSpace& space() const { return *space_; }
    const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
    const StructuredMatrix& matrix() const { return mass_; }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    /// Solve A c = b; one iterative-refinement pass keeps ||A c - b||_inf <= 1e-12 ||b||_inf.
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

private:
    std::shared_ptr<const FeSpace> space_;
    StructuredMatrix mass_;
    StructuredFactorization fact_;
};

/// Load vector (f, phi_i) with the oversampled rule.
Eigen::VectorXd assemble_load(const FeSpace& space, const ScalarFn& f);

/// L2 projection of f onto the space.
FeFunction l2_project(const GramOperator& gram, const ScalarFn& f);

/// L2 projection of the broken derivative g' of a member function g.
FeFunction project_fe_derivative(const GramOperator& gram, const FeFunction& g);

/// || P[(Pu - u)'] ||_{L2}: the projected-derivative defect of the projection error.
double dichotomy_norm(const GramOperator& gram, const ScalarFn& u);

/**
 * Node-value / bubble split of an odd-degree space: node functions l_i peak at the mesh
 * nodes and vanish at the others, interior bubbles vanish at every mesh node, and the
 * two families are mutually L2-orthogonal.  Construction verifies both properties.
 */
class SplitBasis {
public:
    explicit SplitBasis(std::shared_ptr<const FeSpace> space);

    const FeSpace& space() const { return *space_; }
    int n_nodes() const { return space_->mesh().n_cells(); }

    /// l_i: 1 at mesh node x_i, 0 at the other mesh nodes, supported on the two cells
    /// meeting at x_i.
    FeFunction node_function(int i) const;
    /// Bubble m (1 <= m <= degree-1) supported on one cell.
    FeFunction bubble_function(int cell, int m) const;

    /// Gram matrix of the node functions (circulant, three nonzero diagonals).
    const CirculantMatrix& node_gram() const { return node_gram_; }

    /// Loads (v, l_i) with the oversampled rule.
    Eigen::VectorXd node_load(const ScalarFn& v) const;
    /// Coefficients of the node component of v in the l_i family.
    Eigen::VectorXd node_coefficients(const ScalarFn& v) const;
    /// The node-component projection of v, expanded back to the nodal basis.
    FeFunction project_node_component(const ScalarFn& v) const;

private:
    std::shared_ptr<const FeSpace> space_;
    CirculantMatrix node_gram_;
    CirculantFactorization node_fact_;
};

SplitBasis build_split_basis(std::shared_ptr<const FeSpace> space);

/// Closed-form eigenvalues of the node-function Gram matrix, odd degree k:
/// lambda_m = 2h/(k(k+1)(k+2)) * (k+1 + cos(2 pi m / N)), m = 1..N.
Eigen::VectorXd gram_eigenvalues_s1(int k, const PeriodicMesh& mesh);

}  // namespace rlwfem
