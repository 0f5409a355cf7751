#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fmcw::fft {

// Thin RAII wrappers around FFTW double-precision plans. Plans are created
// with FFTW_ESTIMATE so results are reproducible run-to-run. Not thread-safe;
// create one plan per thread if parallelizing.

class ComplexFft {
public:
    explicit ComplexFft(std::size_t n, bool inverse = false);
    ~ComplexFft();
    ComplexFft(const ComplexFft&) = delete;
    ComplexFft& operator=(const ComplexFft&) = delete;

    std::size_t size() const { return n_; }

    // Zero-pads (or truncates) input to n. Forward transform is unnormalized;
    // inverse divides by n.
    std::vector<std::complex<double>> operator()(std::span<const std::complex<double>> in);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t n_;
    bool inverse_;
};

class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const { return n_; }
    std::size_t bins() const { return n_ / 2 + 1; }

    // r2c transform of input zero-padded to n; returns n/2+1 bins.
    std::vector<std::complex<double>> operator()(std::span<const double> in);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t n_;
};

class InverseRealFft {
public:
    explicit InverseRealFft(std::size_t n);
    ~InverseRealFft();
    InverseRealFft(const InverseRealFft&) = delete;
    InverseRealFft& operator=(const InverseRealFft&) = delete;

    std::size_t size() const { return n_; }

    // c2r transform; expects n/2+1 bins, returns n samples scaled by 1/n.
    std::vector<double> operator()(std::span<const std::complex<double>> half_spectrum);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::size_t n_;
};

enum class Window { rectangular, hann };

Window window_from_name(const std::string& name);
std::string window_name(Window w);

// Periodic window of length n.
std::vector<double> make_window(Window w, std::size_t n);

} // namespace fmcw::fft
