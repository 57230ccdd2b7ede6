#pragma once

#include <complex>

struct fftw_plan_s;

namespace rlwfem {

/**
 * Fixed-size in-place complex DFT backed by FFTW.  Plan creation is serialized on a
 * global mutex (FFTW's planner is not thread-safe); executing on caller-owned buffers
 * is safe from concurrent threads.
 */
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }

    /// Unnormalized analysis transform, kernel e^{-2*pi*i*jk/n}.
    void forward(std::complex<double>* buf) const;
    /// Synthesis transform scaled by 1/n, so inverse(forward(x)) == x.
    void inverse(std::complex<double>* buf) const;

private:
    int n_;
    fftw_plan_s* fwd_;
    fftw_plan_s* bwd_;
};

}  // namespace rlwfem
