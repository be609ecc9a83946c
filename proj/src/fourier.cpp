#include "speclab/fourier.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "speclab/errors.hpp"

namespace speclab {

namespace {
// FFTW plan creation touches global tables.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

FourierTransform::FourierTransform(std::size_t n) : n_(n) {
    if (n < 2) throw DomainError("FourierTransform: need at least two samples");
    real_buf_ = fftw_alloc_real(n_);
    auto* cbuf = fftw_alloc_complex(n_ / 2 + 1);
    cplx_buf_ = cbuf;
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), real_buf_, cbuf, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(n_), cbuf, real_buf_, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_inv_) throw NumericError("FourierTransform: FFTW planning failed");
}

FourierTransform::~FourierTransform() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(real_buf_);
    fftw_free(static_cast<fftw_complex*>(cplx_buf_));
}

void FourierTransform::forward(const double* in, std::complex<double>* out) {
    std::memcpy(real_buf_, in, n_ * sizeof(double));
    fftw_execute(static_cast<fftw_plan>(plan_fwd_));
    auto* c = static_cast<fftw_complex*>(cplx_buf_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k < n_modes(); ++k)
        out[k] = std::complex<double>(c[k][0] * scale, c[k][1] * scale);
}

void FourierTransform::inverse(const std::complex<double>* in, double* out) {
    auto* c = static_cast<fftw_complex*>(cplx_buf_);
    for (std::size_t k = 0; k < n_modes(); ++k) {
        c[k][0] = in[k].real();
        c[k][1] = in[k].imag();
    }
    fftw_execute(static_cast<fftw_plan>(plan_inv_));
    std::memcpy(out, real_buf_, n_ * sizeof(double));
}

void FourierTransform::derivative(const double* in, double* out) {
    std::vector<std::complex<double>> c(n_modes());
    forward(in, c.data());
    for (std::size_t k = 0; k < n_modes(); ++k)
        c[k] *= std::complex<double>(0.0, static_cast<double>(k));
    // An even-length grid cannot represent the derivative of the Nyquist mode
    // (it is pure cosine there); the standard choice is to zero it.
    if (n_ % 2 == 0) c[n_ / 2] = 0.0;
    inverse(c.data(), out);
}

std::vector<std::complex<double>> FourierTransform::forward(const std::vector<double>& in) {
    if (in.size() != n_) throw DomainError("FourierTransform::forward: wrong sample count");
    std::vector<std::complex<double>> out(n_modes());
    forward(in.data(), out.data());
    return out;
}

std::vector<double> FourierTransform::inverse(const std::vector<std::complex<double>>& in) {
    if (in.size() != n_modes()) throw DomainError("FourierTransform::inverse: wrong mode count");
    std::vector<double> out(n_);
    inverse(in.data(), out.data());
    return out;
}

} // namespace speclab
