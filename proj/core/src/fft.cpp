#include "fmcw/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace fmcw::fft {

struct ComplexFft::Impl {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;
};

ComplexFft::ComplexFft(std::size_t n, bool inverse)
    : impl_(std::make_unique<Impl>()), n_(n), inverse_(inverse) {
    if (n == 0) throw std::invalid_argument("ComplexFft: n must be > 0");
    impl_->in = fftw_alloc_complex(n);
    impl_->out = fftw_alloc_complex(n);
    impl_->plan = fftw_plan_dft_1d(static_cast<int>(n), impl_->in, impl_->out,
                                   inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                   FFTW_ESTIMATE);
}

ComplexFft::~ComplexFft() {
    if (impl_->plan) fftw_destroy_plan(impl_->plan);
    if (impl_->in) fftw_free(impl_->in);
    if (impl_->out) fftw_free(impl_->out);
}

std::vector<std::complex<double>> ComplexFft::operator()(
    std::span<const std::complex<double>> in) {
    const std::size_t m = std::min(in.size(), n_);
    std::memcpy(impl_->in, in.data(), m * sizeof(fftw_complex));
    if (m < n_) std::memset(impl_->in + m, 0, (n_ - m) * sizeof(fftw_complex));
    fftw_execute(impl_->plan);
    std::vector<std::complex<double>> out(n_);
    std::memcpy(out.data(), impl_->out, n_ * sizeof(fftw_complex));
    if (inverse_) {
        const double s = 1.0 / static_cast<double>(n_);
        for (auto& v : out) v *= s;
    }
    return out;
}

struct RealFft::Impl {
    double* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan plan = nullptr;
};

RealFft::RealFft(std::size_t n) : impl_(std::make_unique<Impl>()), n_(n) {
    if (n == 0) throw std::invalid_argument("RealFft: n must be > 0");
    impl_->in = fftw_alloc_real(n);
    impl_->out = fftw_alloc_complex(n / 2 + 1);
    impl_->plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), impl_->in, impl_->out,
                                       FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    if (impl_->plan) fftw_destroy_plan(impl_->plan);
    if (impl_->in) fftw_free(impl_->in);
    if (impl_->out) fftw_free(impl_->out);
}

std::vector<std::complex<double>> RealFft::operator()(std::span<const double> in) {
    const std::size_t m = std::min(in.size(), n_);
    std::memcpy(impl_->in, in.data(), m * sizeof(double));
    if (m < n_) std::memset(impl_->in + m, 0, (n_ - m) * sizeof(double));
    fftw_execute(impl_->plan);
    std::vector<std::complex<double>> out(bins());
    std::memcpy(out.data(), impl_->out, bins() * sizeof(fftw_complex));
    return out;
}

struct InverseRealFft::Impl {
    fftw_complex* in = nullptr;
    double* out = nullptr;
    fftw_plan plan = nullptr;
};

InverseRealFft::InverseRealFft(std::size_t n)
    : impl_(std::make_unique<Impl>()), n_(n) {
    if (n == 0) throw std::invalid_argument("InverseRealFft: n must be > 0");
    impl_->in = fftw_alloc_complex(n / 2 + 1);
    impl_->out = fftw_alloc_real(n);
    impl_->plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), impl_->in, impl_->out,
                                       FFTW_ESTIMATE);
}

InverseRealFft::~InverseRealFft() {
    if (impl_->plan) fftw_destroy_plan(impl_->plan);
    if (impl_->in) fftw_free(impl_->in);
    if (impl_->out) fftw_free(impl_->out);
}

std::vector<double> InverseRealFft::operator()(
    std::span<const std::complex<double>> half_spectrum) {
    const std::size_t nb = n_ / 2 + 1;
    if (half_spectrum.size() != nb)
        throw std::invalid_argument("InverseRealFft: expected n/2+1 bins");
    std::memcpy(impl_->in, half_spectrum.data(), nb * sizeof(fftw_complex));
    fftw_execute(impl_->plan);
    std::vector<double> out(n_);
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = impl_->out[i] * s;
    return out;
}

Window window_from_name(const std::string& name) {
    if (name == "hann") return Window::hann;
    if (name == "rectangular" || name == "rect" || name == "none")
        return Window::rectangular;
    throw std::invalid_argument("unknown window: " + name);
}

std::string window_name(Window w) {
    return w == Window::hann ? "hann" : "rectangular";
}

std::vector<double> make_window(Window w, std::size_t n) {
    std::vector<double> win(n, 1.0);
    if (w == Window::hann) {
        for (std::size_t i = 0; i < n; ++i)
            win[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                           static_cast<double>(i) /
                                           static_cast<double>(n)));
    }
    return win;
}

} // namespace fmcw::fft
