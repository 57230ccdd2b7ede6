#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace rlwfem {

/** Uniform partition of [a,b] into n_cells cells, with periodic identification
 *  of the endpoints.  Cell i spans [a + i*h, a + (i+1)*h]. */
class PeriodicMesh {
public:
    PeriodicMesh(double a, double b, int n_cells) : a_(a), b_(b), n_cells_(n_cells) {
        if (!(b > a)) throw std::invalid_argument("PeriodicMesh: requires b > a");
        if (n_cells < 1) throw std::invalid_argument("PeriodicMesh: requires n_cells >= 1");
        h_ = (b - a) / n_cells;
    }

    double a() const { return a_; }
    double b() const { return b_; }
    int n_cells() const { return n_cells_; }
    double h() const { return h_; }

    double cell_left(int i) const { return a_ + i * h_; }

    /// Containing cell and reference coordinate in [0,1); x is wrapped periodically.
    std::pair<int, double> locate(double x) const {
        double s = (x - a_) / h_;
        double f = std::floor(s);
        double t = s - f;
        long cell = static_cast<long>(f) % n_cells_;
        if (cell < 0) cell += n_cells_;
        return {static_cast<int>(cell), t};
    }

private:
    double a_, b_;
    int n_cells_;
    double h_;
};

}  // namespace rlwfem
