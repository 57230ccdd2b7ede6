#include "rlwfem/fft.hpp"

#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace rlwfem {

namespace {
std::mutex planner_mutex;
}

Fft::Fft(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("Fft: size must be >= 1");
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_complex* scratch = fftw_alloc_complex(static_cast<size_t>(n));
    // UNALIGNED keeps the plans valid for arbitrary caller buffers.
    fwd_ = fftw_plan_dft_1d(n, scratch, scratch, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_1d(n, scratch, scratch, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!fwd_ || !bwd_) throw std::runtime_error("Fft: planner failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
}

void Fft::forward(std::complex<double>* buf) const {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(buf);
    fftw_execute_dft(fwd_, p, p);
}

void Fft::inverse(std::complex<double>* buf) const {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(buf);
    fftw_execute_dft(bwd_, p, p);
    const double scale = 1.0 / n_;
    for (int i = 0; i < n_; ++i) buf[i] *= scale;
}

}  // namespace rlwfem
