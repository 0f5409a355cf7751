#include "fmcw/phase_noise.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "fmcw/errors.hpp"
#include "fmcw/fft.hpp"
#include "fmcw/rng.hpp"

namespace fmcw {

// Frequency-domain shaping: draw Hermitian-symmetric Gaussian bins with
// E|X[k]|^2 = S(f_k) * rate * L / 2 and inverse-transform. X[0] is zero, so
// every realization has exactly zero sample mean. The one-sided periodogram
// 2|X|^2/(rate*L) of the output then estimates S(f).
PhaseNoiseRealization synth_phase_noise(const PhaseNoiseSpec& spec,
                                        std::size_t count, double rate_hz,
                                        std::uint64_t seed) {
    PhaseNoiseRealization out;
    out.rate_hz = rate_hz;
    if (count == 0) return out;
    if (spec.empty()) {
        out.samples.assign(count, 0.0);
        return out;
    }
    const double f_max = spec.psd_breakpoints.back().first;
    if (rate_hz <= 2.0 * f_max)
        throw BreakpointBandExceedsRate(
            "phase noise: sampling rate must exceed twice the highest breakpoint offset");

    const std::size_t L = count;
    const std::size_t half = L / 2;
    std::vector<std::complex<double>> bins(half + 1, {0.0, 0.0});
    Rng rng(seed);
    const double df = rate_hz / static_cast<double>(L);
    for (std::size_t k = 1; k <= half; ++k) {
        const double f = df * static_cast<double>(k);
        double s = spec.psd_at(f);
        if (spec.rce_enabled) {
            const double arg = std::numbers::pi * f * spec.rce_delay_tau_s;
            const double sn = std::sin(arg);
            s *= 4.0 * sn * sn;
        }
        const double sigma2 = s * rate_hz * static_cast<double>(L) / 2.0;
        const double g1 = rng.gaussian();
        const double g2 = rng.gaussian();
        if (2 * k == L) {
            // Nyquist bin must be real for a real sequence.
            bins[k] = {std::sqrt(sigma2) * g1, 0.0};
        } else {
            const double a = std::sqrt(sigma2 / 2.0);
            bins[k] = {a * g1, a * g2};
        }
    }

    fft::InverseRealFft ifft(L);
    out.samples = ifft(bins);
    out.samples.resize(count);

    double acc = 0.0;
    for (double v : out.samples) acc += v * v;
    out.rms = std::sqrt(acc / static_cast<double>(count));
    return out;
}

} // namespace fmcw
