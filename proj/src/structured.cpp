#include "rlwfem/structured.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rlwfem/errors.hpp"

namespace rlwfem {

namespace {

// First column of the circulant with the given first row.
Eigen::VectorXcd dft_of_first_column(const Eigen::VectorXd& row, Fft& fft) {
    const int n = static_cast<int>(row.size());
    Eigen::VectorXcd buf(n);
    for (int d = 0; d < n; ++d) buf[d] = row[(n - d) % n];
    fft.forward(buf.data());
    return buf;
}

void check_spectrum(const Eigen::VectorXcd& eig, const char* what) {
    double maxabs = 0.0;
    for (int i = 0; i < eig.size(); ++i) maxabs = std::max(maxabs, std::abs(eig[i]));
    for (int i = 0; i < eig.size(); ++i)
        if (std::abs(eig[i]) <= 1e-13 * maxabs)
            throw NumericalError(std::string(what) + ": singular spectrum");
}

}  // namespace

CirculantMatrix::CirculantMatrix(Eigen::VectorXd first_row) : row_(std::move(first_row)) {
    if (row_.size() < 1) throw std::invalid_argument("CirculantMatrix: empty first row");
}

Eigen::VectorXd CirculantMatrix::multiply(const Eigen::VectorXd& x) const {
    const int n = size();
    if (x.size() != n) throw std::invalid_argument("CirculantMatrix::multiply: size mismatch");
    Fft fft(n);
    Eigen::VectorXcd eig = dft_of_first_column(row_, fft);
    Eigen::VectorXcd buf = x.cast<std::complex<double>>();
    fft.forward(buf.data());
    buf.array() *= eig.array();
    fft.inverse(buf.data());
    return buf.real();
}

Eigen::VectorXd CirculantMatrix::multiply_direct(const Eigen::VectorXd& x) const {
    const int n = size();
    if (x.size() != n) throw std::invalid_argument("CirculantMatrix::multiply_direct: size mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y[i] += row_[(j - i + n) % n] * x[j];
    return y;
}

Eigen::MatrixXd CirculantMatrix::dense() const {
    const int n = size();
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = row_[(j - i + n) % n];
    return m;
}

PeriodicBandedMatrix::PeriodicBandedMatrix(int n, int bandwidth) : n_(n), p_(bandwidth) {
    if (n < 1) throw std::invalid_argument("PeriodicBandedMatrix: n must be >= 1");
    if (bandwidth < 0 || bandwidth >= n)
        throw std::invalid_argument("PeriodicBandedMatrix: bandwidth must be in [0, n)");
    band_ = Eigen::MatrixXd::Zero(2 * p_ + 1, n_);
}

namespace {

// Canonical signed offset of column j relative to row i: minimal |d|, ties to d > 0.
// Returns false when j is outside the cyclic band.
bool canonical_offset(int n, int p, int i, int j, int& d) {
    int fwd = ((j - i) % n + n) % n;  // in [0, n)
    int bwd = fwd - n;
    bool fwd_ok = fwd <= p;
    bool bwd_ok = -bwd <= p;
    if (!fwd_ok && !bwd_ok) return false;
    if (fwd_ok && bwd_ok) d = (fwd <= -bwd) ? fwd : bwd;
    else d = fwd_ok ? fwd : bwd;
    return true;
}

}  // namespace

double PeriodicBandedMatrix::entry(int i, int j) const {
    int d;
    if (!canonical_offset(n_, p_, i, j, d)) return 0.0;
    return band_(d + p_, i);
}

void PeriodicBandedMatrix::add(int i, int j, double v) {
    int d;
    if (!canonical_offset(n_, p_, i, j, d))
        throw std::invalid_argument("PeriodicBandedMatrix::add: entry outside band");
    band_(d + p_, i) += v;
}

PeriodicBandedMatrix PeriodicBandedMatrix::negated() const {
    PeriodicBandedMatrix m(*this);
    m.band_ = -m.band_;
    return m;
}

void PeriodicBandedMatrix::symmetrize() {
    if (2 * p_ >= n_)
        throw std::invalid_argument("PeriodicBandedMatrix::symmetrize: requires 2*bandwidth < n");
    Eigen::MatrixXd old = band_;
    for (int i = 0; i < n_; ++i)
        for (int d = -p_; d <= p_; ++d) {
            int j = (i + d + n_) % n_;
            band_(d + p_, i) = 0.5 * (old(d + p_, i) + old(-d + p_, j));
        }
}

void PeriodicBandedMatrix::antisymmetrize() {
    if (2 * p_ >= n_)
        throw std::invalid_argument("PeriodicBandedMatrix::antisymmetrize: requires 2*bandwidth < n");
    Eigen::MatrixXd old = band_;
    for (int i = 0; i < n_; ++i)
        for (int d = -p_; d <= p_; ++d) {
            int j = (i + d + n_) % n_;
            band_(d + p_, i) = 0.5 * (old(d + p_, i) - old(-d + p_, j));
        }
}

Eigen::VectorXd PeriodicBandedMatrix::multiply(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw std::invalid_argument("PeriodicBandedMatrix::multiply: size mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int d = -p_; d <= p_; ++d) acc += band_(d + p_, i) * x[(i + d + n_) % n_];
        y[i] = acc;
    }
    return y;
}

Eigen::MatrixXd PeriodicBandedMatrix::dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int d = -p_; d <= p_; ++d) m(i, (i + d + n_) % n_) += band_(d + p_, i);
    return m;
}

int structured_size(const StructuredMatrix& m) {
    return std::visit([](const auto& mm) { return mm.size(); }, m);
}

Eigen::VectorXd structured_multiply(const StructuredMatrix& m, const Eigen::VectorXd& x) {
    return std::visit([&](const auto& mm) { return mm.multiply(x); }, m);
}

Eigen::MatrixXd structured_dense(const StructuredMatrix& m) {
    return std::visit([](const auto& mm) { return mm.dense(); }, m);
}

StructuredMatrix structured_negated(const StructuredMatrix& m) {
    return std::visit([](const auto& mm) { return StructuredMatrix(mm.negated()); }, m);
}

CirculantFactorization::CirculantFactorization(const CirculantMatrix& c)
    : fft_(std::make_shared<Fft>(c.size())) {
    eig_ = dft_of_first_column(c.first_row(), *fft_);
    check_spectrum(eig_, "CirculantFactorization");
}

Eigen::VectorXd CirculantFactorization::solve(const Eigen::VectorXd& z) const {
    if (z.size() != size()) throw std::invalid_argument("CirculantFactorization::solve: size mismatch");
    Eigen::VectorXcd buf = z.cast<std::complex<double>>();
    fft_->forward(buf.data());
    buf.array() /= eig_.array();
    fft_->inverse(buf.data());
    return buf.real();
}

Eigen::VectorXd circulant_solve(const Eigen::VectorXd& first_row, const Eigen::VectorXd& z) {
    return CirculantFactorization(CirculantMatrix(first_row)).solve(z);
}

PeriodicBandedFactorization::PeriodicBandedFactorization(const PeriodicBandedMatrix& m)
    : n_(m.size()), p_(m.bandwidth()), dense_path_(2 * m.bandwidth() >= m.size()) {
    if (dense_path_) {
        dense_lu_.compute(m.dense());
        const auto& diag = dense_lu_.matrixLU().diagonal();
        double maxd = diag.cwiseAbs().maxCoeff();
        if (diag.cwiseAbs().minCoeff() <= 1e-13 * maxd)
            throw NumericalError("PeriodicBandedFactorization: singular matrix (dense path)");
        return;
    }

    // Core band (offsets -p..2p with fill space), LAPACK-style: entry (i,j) of the
    // non-wrapping part lives at lu_(2p + i - j, j).
    lu_ = Eigen::MatrixXd::Zero(3 * p_ + 1, n_);
    for (int i = 0; i < n_; ++i)
        for (int d = -p_; d <= p_; ++d) {
            int j = i + d;
            if (j >= 0 && j < n_) lu_(2 * p_ + i - j, j) = m.band(d, i);
        }

    // Corner (wrapping) entries become a rank-r correction M = T + U W^T with U the
    // selection columns of the affected rows.
    std::vector<int> rows;
    for (int i = 0; i < n_; ++i)
        for (int d = -p_; d <= p_; ++d) {
            int j = i + d;
            if ((j < 0 || j >= n_) && m.band(d, i) != 0.0) {
                if (rows.empty() || rows.back() != i) rows.push_back(i);
                break;
            }
        }
    corner_rows_ = rows;
    const int r = static_cast<int>(rows.size());
    wcols_ = Eigen::MatrixXd::Zero(n_, r);
    for (int s = 0; s < r; ++s) {
        int i = rows[s];
        for (int d = -p_; d <= p_; ++d) {
            int j = i + d;
            if (j < 0 || j >= n_) wcols_((j + n_) % n_, s) += m.band(d, i);
        }
    }

    // Banded LU of the core with partial pivoting.
    pivot_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        int km = std::min(p_, n_ - 1 - j);
        int jp = 0;
        for (int t = 1; t <= km; ++t)
            if (std::abs(lu_(2 * p_ + t, j)) > std::abs(lu_(2 * p_ + jp, j))) jp = t;
        pivot_[j] = j + jp;
        if (lu_(2 * p_ + jp, j) == 0.0)
            throw NumericalError("PeriodicBandedFactorization: zero pivot");
        int cmax = std::min(j + 2 * p_, n_ - 1);
        if (jp != 0)
            for (int c = j; c <= cmax; ++c)
                std::swap(lu_(2 * p_ + j - c, c), lu_(2 * p_ + j + jp - c, c));
        for (int t = 1; t <= km; ++t) {
            double mult = lu_(2 * p_ + t, j) / lu_(2 * p_, j);
            lu_(2 * p_ + t, j) = mult;
            for (int c = j + 1; c <= cmax; ++c)
                lu_(2 * p_ + j + t - c, c) -= mult * lu_(2 * p_ + j - c, c);
        }
    }

    ycols_.resize(n_, r);
    for (int s = 0; s < r; ++s) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
        e[rows[s]] = 1.0;
        ycols_.col(s) = core_solve(e);
    }
    if (r > 0) {
        Eigen::MatrixXd cap = Eigen::MatrixXd::Identity(r, r) + wcols_.transpose() * ycols_;
        capacitance_.compute(cap);
        const auto& diag = capacitance_.matrixLU().diagonal();
        double maxd = diag.cwiseAbs().maxCoeff();
        if (diag.cwiseAbs().minCoeff() <= 1e-13 * maxd)
            throw NumericalError("PeriodicBandedFactorization: singular corner capacitance");
    }
}

Eigen::VectorXd PeriodicBandedFactorization::core_solve(const Eigen::VectorXd& z) const {
    Eigen::VectorXd x = z;
    for (int j = 0; j < n_; ++j) {
        if (pivot_[j] != j) std::swap(x[j], x[pivot_[j]]);
        int km = std::min(p_, n_ - 1 - j);
        for (int t = 1; t <= km; ++t) x[j + t] -= lu_(2 * p_ + t, j) * x[j];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        double s = x[i];
        int cmax = std::min(i + 2 * p_, n_ - 1);
        for (int c = i + 1; c <= cmax; ++c) s -= lu_(2 * p_ + i - c, c) * x[c];
        x[i] = s / lu_(2 * p_, i);
    }
    return x;
}

Eigen::VectorXd PeriodicBandedFactorization::solve(const Eigen::VectorXd& z) const {
    if (z.size() != n_) throw std::invalid_argument("PeriodicBandedFactorization::solve: size mismatch");
    if (dense_path_) return dense_lu_.solve(z);
    Eigen::VectorXd x = core_solve(z);
    if (!corner_rows_.empty()) x -= ycols_ * capacitance_.solve(wcols_.transpose() * x);
    return x;
}

PeriodicBandedFactorization periodic_banded_factor(const PeriodicBandedMatrix& m) {
    return PeriodicBandedFactorization(m);
}

StructuredFactorization::StructuredFactorization(const StructuredMatrix& m)
    : impl_(std::holds_alternative<CirculantMatrix>(m)
                ? std::variant<CirculantFactorization, PeriodicBandedFactorization>(
                      CirculantFactorization(std::get<CirculantMatrix>(m)))
                : std::variant<CirculantFactorization, PeriodicBandedFactorization>(
                      PeriodicBandedFactorization(std::get<PeriodicBandedMatrix>(m)))) {}

int StructuredFactorization::size() const {
    return std::visit([](const auto& f) { return f.size(); }, impl_);
}

Eigen::VectorXd StructuredFactorization::solve(const Eigen::VectorXd& z) const {
    return std::visit([&](const auto& f) { return f.solve(z); }, impl_);
}

BlockCirculantFactorization::BlockCirculantFactorization(const Eigen::VectorXd& a_row,
                                                         const Eigen::VectorXd& b_row) {
    if (a_row.size() != b_row.size())
        throw std::invalid_argument("BlockCirculantFactorization: block size mismatch");
    fft_ = std::make_shared<Fft>(static_cast<int>(a_row.size()));
    eig_a_ = dft_of_first_column(a_row, *fft_);
    eig_b_ = dft_of_first_column(b_row, *fft_);
    check_spectrum(eig_a_, "BlockCirculantFactorization: diagonal block");
    schur_ = (eig_b_.array().square() / eig_a_.array() - eig_a_.array()).matrix();
    check_spectrum(schur_, "BlockCirculantFactorization: Schur complement");
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> BlockCirculantFactorization::solve(
    const Eigen::VectorXd& z1, const Eigen::VectorXd& z2) const {
    const int n = block_size();
    if (z1.size() != n || z2.size() != n)
        throw std::invalid_argument("BlockCirculantFactorization::solve: size mismatch");
    Eigen::VectorXcd zh1 = z1.cast<std::complex<double>>();
    Eigen::VectorXcd zh2 = z2.cast<std::complex<double>>();
    fft_->forward(zh1.data());
    fft_->forward(zh2.data());
    Eigen::VectorXcd yh(n), xh(n);
    for (int m = 0; m < n; ++m) {
        std::complex<double> ratio = eig_b_[m] / eig_a_[m];
        yh[m] = (ratio * zh1[m] - zh2[m]) / schur_[m];
        xh[m] = (zh1[m] - eig_b_[m] * yh[m]) / eig_a_[m];
    }
    fft_->inverse(xh.data());
    fft_->inverse(yh.data());
    return {xh.real(), yh.real()};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> block_circulant_solve(const Eigen::VectorXd& a_row,
                                                                  const Eigen::VectorXd& b_row,
                                                                  const Eigen::VectorXd& z) {
    BlockCirculantFactorization fact(a_row, b_row);
    return fact.solve(z, Eigen::VectorXd::Zero(z.size()));
}

namespace {

std::variant<BlockCirculantFactorization, PeriodicBandedFactorization> make_block_impl(
    const StructuredMatrix& a, const StructuredMatrix& b) {
    if (structured_size(a) != structured_size(b))
        throw std::invalid_argument("BlockFactorization: block size mismatch");
    if (a.index() != b.index())
        throw std::invalid_argument("BlockFactorization: blocks must share one structure kind");
    if (std::holds_alternative<CirculantMatrix>(a))
        return BlockCirculantFactorization(std::get<CirculantMatrix>(a).first_row(),
                                           std::get<CirculantMatrix>(b).first_row());

    // Interleave (x;y) as (x0,y0,x1,y1,...): the block system becomes one periodic
    // banded system of scalar bandwidth 2p+1.
    const auto& ab = std::get<PeriodicBandedMatrix>(a);
    const auto& bb = std::get<PeriodicBandedMatrix>(b);
    if (ab.bandwidth() != bb.bandwidth())
        throw std::invalid_argument("BlockFactorization: blocks must share one bandwidth");
    const int n = ab.size(), p = ab.bandwidth();
    PeriodicBandedMatrix inter(2 * n, 2 * p + 1);
    for (int i = 0; i < n; ++i)
        for (int d = -p; d <= p; ++d) {
            int j = (i + d + n) % n;
            double av = ab.band(d, i), bv = bb.band(d, i);
            if (av != 0.0) {
                inter.add(2 * i, 2 * j, av);
                inter.add(2 * i + 1, 2 * j + 1, av);
            }
            if (bv != 0.0) {
                inter.add(2 * i, 2 * j + 1, bv);
                inter.add(2 * i + 1, 2 * j, bv);
            }
        }
    return PeriodicBandedFactorization(inter);
}

}  // namespace

BlockFactorization::BlockFactorization(StructuredMatrix a, StructuredMatrix b)
    : n_(structured_size(a)), a_(std::move(a)), b_(std::move(b)), impl_(make_block_impl(a_, b_)) {}

std::pair<Eigen::VectorXd, Eigen::VectorXd> BlockFactorization::solve(
    const Eigen::VectorXd& z1, const Eigen::VectorXd& z2) const {
    if (z1.size() != n_ || z2.size() != n_)
        throw std::invalid_argument("BlockFactorization::solve: size mismatch");
    if (std::holds_alternative<BlockCirculantFactorization>(impl_))
        return std::get<BlockCirculantFactorization>(impl_).solve(z1, z2);
    Eigen::VectorXd zz(2 * n_);
    for (int i = 0; i < n_; ++i) {
        zz[2 * i] = z1[i];
        zz[2 * i + 1] = z2[i];
    }
    Eigen::VectorXd xx = std::get<PeriodicBandedFactorization>(impl_).solve(zz);
    Eigen::VectorXd x(n_), y(n_);
    for (int i = 0; i < n_; ++i) {
        x[i] = xx[2 * i];
        y[i] = xx[2 * i + 1];
    }
    return {x, y};
}

Eigen::VectorXd BlockFactorization::multiply(const Eigen::VectorXd& stacked) const {
    if (stacked.size() != 2 * n_)
        throw std::invalid_argument("BlockFactorization::multiply: size mismatch");
    Eigen::VectorXd x = stacked.head(n_), y = stacked.tail(n_);
    Eigen::VectorXd out(2 * n_);
    out.head(n_) = structured_multiply(a_, x) + structured_multiply(b_, y);
    out.tail(n_) = structured_multiply(b_, x) + structured_multiply(a_, y);
    return out;
}

}  // namespace rlwfem
