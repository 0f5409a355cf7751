#include "fmcw/spc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fmcw/errors.hpp"
#include "fmcw/fft.hpp"

namespace fmcw {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(
            v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lo);
    }
    return m;
}
} // namespace

LeakageEstimate estimate_leakage_spc(const FrameCube& frames, std::size_t nfft) {
    if (!frames.is_real())
        throw DimensionMismatch("spc estimation expects a real frame");
    if (frames.samples() == 0 || frames.chirps() == 0)
        throw EmptyFrame("spc estimation: empty frame");
    if (nfft < frames.samples())
        throw DimensionMismatch("nfft must be >= samples per chirp");

    // Exclusive band endpoints around the quarter point: nfft/8 < k < 3*nfft/8
    // with fractional bounds honored for nfft not divisible by 8.
    const std::size_t lo = nfft / 8 + 1;
    const std::size_t hi_excl = (3 * nfft) / 8 + ((3 * nfft) % 8 != 0 ? 1 : 0);
    if (lo >= hi_excl)
        throw BandEmpty("spc estimation: quarter-point search band has no bins");

    LeakageEstimate est;
    est.nfft_used = nfft;
    est.rate_hz = frames.rate_hz();
    est.band_lo = lo;
    est.band_hi = hi_excl - 1;

    fft::RealFft plan(nfft);
    const double df = frames.rate_hz() / static_cast<double>(nfft);
    std::vector<double> band_power(hi_excl - lo);
    for (std::size_t m = 0; m < frames.chirps(); ++m) {
        const auto spec = plan(frames.real_chirp(m));
        std::size_t best = lo;
        double best_p = -1.0;
        for (std::size_t k = lo; k < hi_excl; ++k) {
            const double p = std::norm(spec[k]);
            band_power[k - lo] = p;
            if (p > best_p) { // strict: ties keep the lowest bin
                best_p = p;
                best = k;
            }
        }
        const double med = median_of(band_power);
        est.k_index.push_back(best);
        est.f_hat_hz.push_back(df * static_cast<double>(best));
        est.theta_hat_rad.push_back(std::arg(spec[best]));
        est.peak_to_median_db.push_back(
            10.0 * std::log10(best_p / std::max(med, 1e-300)));
    }
    return est;
}

FrameCube make_nco_spc(const LeakageEstimate& estimate, std::size_t samples,
                       double rate_hz) {
    FrameCube nco = FrameCube::make_real(samples, estimate.chirps(), rate_hz);
    const double ts = 1.0 / rate_hz;
    for (std::size_t m = 0; m < estimate.chirps(); ++m) {
        auto row = nco.real_chirp(m);
        const double f = estimate.f_hat_hz[m];
        const double th = estimate.theta_hat_rad[m];
        for (std::size_t n = 0; n < samples; ++n)
            row[n] = std::cos(kTwoPi * f * static_cast<double>(n) * ts + th);
    }
    return nco;
}

SpcResult run_spc_detailed(const FrameCube& frames, std::size_t nfft) {
    SpcResult result;
    result.estimate = estimate_leakage_spc(frames, nfft);
    const FrameCube nco =
        make_nco_spc(result.estimate, frames.samples(), frames.rate_hz());
    FrameCube out = FrameCube::make_real(frames.samples(), frames.chirps(),
                                         frames.rate_hz());
    out.set_provenance(frames.scenario_hash(), frames.path_tag() + "+spc");
    for (std::size_t m = 0; m < frames.chirps(); ++m)
        for (std::size_t n = 0; n < frames.samples(); ++n)
            out.real_at(n, m) = frames.real_at(n, m) * nco.real_at(n, m);
    result.output = std::move(out);
    return result;
}

FrameCube run_spc(const FrameCube& frames, std::size_t nfft) {
    return run_spc_detailed(frames, nfft).output;
}

double spc_mur_hz(const SamplingPlan& plan, const LeakageEstimate& estimate) {
    const double rate = plan.effective_rate_hz();
    double mur = rate / 2.0;
    for (double f : estimate.f_hat_hz) {
        const double gap = std::min(2.0 * f, rate - 2.0 * f) / 2.0;
        mur = std::min(mur, gap);
    }
    return mur;
}

} // namespace fmcw
