#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace speclab {

// Discrete Fourier transforms of real periodic samples u_j = u(2*pi*j/n), j = 0..n-1.
// Coefficient convention: forward() returns c_k = (1/n) * sum_j u_j exp(-i k theta_j)
// for k = 0..n/2, so u(theta) = c_0 + 2*Re sum_{k>=1} c_k exp(i k theta) (the Nyquist
// term, present when n is even, enters once). inverse() is the exact inverse of forward().
// Instances hold FFTW plans and scratch buffers; they are not safe for concurrent use.
class FourierTransform {
  public:
    explicit FourierTransform(std::size_t n);
    ~FourierTransform();
    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;

    std::size_t size() const { return n_; }
    std::size_t n_modes() const { return n_ / 2 + 1; }

    void forward(const double* in, std::complex<double>* out);
    void inverse(const std::complex<double>* in, double* out);

    // Spectral d/dtheta of a sample row (real to real).
    void derivative(const double* in, double* out);

    std::vector<std::complex<double>> forward(const std::vector<double>& in);
    std::vector<double> inverse(const std::vector<std::complex<double>>& in);

  private:
    std::size_t n_;
    void* plan_fwd_;
    void* plan_inv_;
    double* real_buf_;
    void* cplx_buf_;
};

} // namespace speclab
