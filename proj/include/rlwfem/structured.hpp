#pragma once

#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "rlwfem/fft.hpp"

namespace rlwfem {

/** Circulant matrix: entry (i,j) = first_row[(j-i) mod n]. */
class CirculantMatrix {
public:
    explicit CirculantMatrix(Eigen::VectorXd first_row);

    int size() const { return static_cast<int>(row_.size()); }
    const Eigen::VectorXd& first_row() const { return row_; }
    double entry(int i, int j) const { return row_[(j - i + size()) % size()]; }

    CirculantMatrix negated() const { return CirculantMatrix(-row_); }

    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;         // via FFT
    Eigen::VectorXd multiply_direct(const Eigen::VectorXd& x) const;  // O(n^2) reference
    Eigen::MatrixXd dense() const;

private:
    Eigen::VectorXd row_;
};

/**
 * Cyclically banded matrix: nonzeros at (i, (i+d) mod n) for |d| <= bandwidth.  Each
 * logical entry lives in exactly one storage slot: add() canonicalizes the offset to
 * minimal |d| (ties to d > 0), which keeps multiply()/dense() single-counting even when
 * 2*bandwidth == n and the two corner offsets alias.
 */
class PeriodicBandedMatrix {
public:
    PeriodicBandedMatrix(int n, int bandwidth);

    int size() const { return n_; }
    int bandwidth() const { return p_; }

    double band(int offset, int i) const { return band_(offset + p_, i); }
    double& band(int offset, int i) { return band_(offset + p_, i); }

    double entry(int i, int j) const;
    void add(int i, int j, double v);

    PeriodicBandedMatrix negated() const;
    void symmetrize();      // M <- (M + M^T)/2; requires 2*bandwidth < n
    void antisymmetrize();  // M <- (M - M^T)/2; requires 2*bandwidth < n

    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd dense() const;

private:
    int n_, p_;
    Eigen::MatrixXd band_;  // (2p+1) x n, row p+d holds diagonal offset d
};

using StructuredMatrix = std::variant<CirculantMatrix, PeriodicBandedMatrix>;

int structured_size(const StructuredMatrix& m);
Eigen::VectorXd structured_multiply(const StructuredMatrix& m, const Eigen::VectorXd& x);
Eigen::MatrixXd structured_dense(const StructuredMatrix& m);
StructuredMatrix structured_negated(const StructuredMatrix& m);

/** FFT diagonalization of one circulant system; immutable after construction. */
class CirculantFactorization {
public:
    explicit CirculantFactorization(const CirculantMatrix& c);

    int size() const { return static_cast<int>(eig_.size()); }
    Eigen::VectorXd solve(const Eigen::VectorXd& z) const;

private:
    std::shared_ptr<Fft> fft_;
    Eigen::VectorXcd eig_;  // DFT of the first column
};

/// One-shot convenience: solve C x = z for the circulant with the given first row.
Eigen::VectorXd circulant_solve(const Eigen::VectorXd& first_row, const Eigen::VectorXd& z);

/**
 * LU factorization of a periodic banded matrix: partial-pivot banded LU of the
 * non-wrapping core plus a rank-r Woodbury correction (r <= 2p) carrying the corner
 * entries.  Falls back to a dense LU when 2*bandwidth >= n, where the corner blocks
 * overlap the core band.
 */
class PeriodicBandedFactorization {
public:
    explicit PeriodicBandedFactorization(const PeriodicBandedMatrix& m);

    int size() const { return n_; }
    Eigen::VectorXd solve(const Eigen::VectorXd& z) const;

private:
    Eigen::VectorXd core_solve(const Eigen::VectorXd& z) const;

    int n_, p_;
    bool dense_path_;
    Eigen::PartialPivLU<Eigen::MatrixXd> dense_lu_;
    Eigen::MatrixXd lu_;  // (3p+1) x n banded LU of the core, offsets -p..2p
    std::vector<int> pivot_;
    std::vector<int> corner_rows_;
    Eigen::MatrixXd wcols_;  // column-space of the corner correction, n x r
    Eigen::MatrixXd ycols_;  // core^{-1} * selection columns, n x r
    Eigen::PartialPivLU<Eigen::MatrixXd> capacitance_;
};

PeriodicBandedFactorization periodic_banded_factor(const PeriodicBandedMatrix& m);

/** Either factorization behind one solve interface. */
class StructuredFactorization {
public:
    explicit StructuredFactorization(const StructuredMatrix& m);
    int size() const;
    Eigen::VectorXd solve(const Eigen::VectorXd& z) const;

private:
    std::variant<CirculantFactorization, PeriodicBandedFactorization> impl_;
};

/**
 * Fourier-space factorization of [[A,B],[B,A]] with circulant A, B: per frequency the
 * 2x2 block is eliminated through the scalar Schur complement b^2/a - a.
 */
class BlockCirculantFactorization {
public:
    BlockCirculantFactorization(const Eigen::VectorXd& a_row, const Eigen::VectorXd& b_row);

    int block_size() const { return static_cast<int>(eig_a_.size()); }
    std::pair<Eigen::VectorXd, Eigen::VectorXd> solve(const Eigen::VectorXd& z1,
                                                      const Eigen::VectorXd& z2) const;

private:
    std::shared_ptr<Fft> fft_;
    Eigen::VectorXcd eig_a_, eig_b_, schur_;
};

/// Solve [[A,B],[B,A]] (x;y) = (z;0) for circulants given by their first rows.
std::pair<Eigen::VectorXd, Eigen::VectorXd> block_circulant_solve(const Eigen::VectorXd& a_row,
                                                                  const Eigen::VectorXd& b_row,
                                                                  const Eigen::VectorXd& z);

/**
 * Factorization of the 2n x 2n block matrix [[A,B],[B,A]] for structured A, B of equal
 * size and kind.  Circulant blocks go through the Fourier path; banded blocks are
 * interleaved into one periodic banded system of scalar bandwidth 2p+1.
 */
class BlockFactorization {
public:
    BlockFactorization(StructuredMatrix a, StructuredMatrix b);

    int block_size() const { return n_; }
    std::pair<Eigen::VectorXd, Eigen::VectorXd> solve(const Eigen::VectorXd& z1,
                                                      const Eigen::VectorXd& z2) const;
    /// Apply [[A,B],[B,A]] to a stacked vector (x;y); used for residual checks.
    Eigen::VectorXd multiply(const Eigen::VectorXd& stacked) const;

private:
    int n_;
    StructuredMatrix a_, b_;
    std::variant<BlockCirculantFactorization, PeriodicBandedFactorization> impl_;
};

}  // namespace rlwfem
