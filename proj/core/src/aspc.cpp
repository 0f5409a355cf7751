#include "fmcw/aspc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fmcw/errors.hpp"
#include "fmcw/fft.hpp"
#include "fmcw/synth.hpp"

namespace fmcw {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double median_of(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}
} // namespace

LeakageEstimate estimate_leakage_aspc(const FrameCube& frames, std::size_t nfft) {
    if (frames.is_real())
        throw DimensionMismatch("aspc estimation expects a complex frame");
    if (frames.samples() == 0 || frames.chirps() == 0)
        throw EmptyFrame("aspc estimation: empty frame");
    if (nfft < frames.samples())
        throw DimensionMismatch("nfft must be >= samples per chirp");

    LeakageEstimate est;
    est.nfft_used = nfft;
    est.rate_hz = frames.rate_hz();
    est.band_lo = 0;
    est.band_hi = nfft - 1;

    fft::ComplexFft plan(nfft);
    const double df = frames.rate_hz() / static_cast<double>(nfft);
    std::vector<double> power(nfft);
    for (std::size_t m = 0; m < frames.chirps(); ++m) {
        const auto spec = plan(frames.cplx_chirp(m));
        std::size_t best = 0;
        double best_p = -1.0;
        for (std::size_t k = 0; k < nfft; ++k) {
            const double p = std::norm(spec[k]);
            power[k] = p;
            if (p > best_p) {
                best_p = p;
                best = k;
            }
        }
        // Signed frequency in (-rate/2, rate/2].
        const double f = best <= nfft / 2
                             ? df * static_cast<double>(best)
                             : df * (static_cast<double>(best) -
                                     static_cast<double>(nfft));
        est.k_index.push_back(best);
        est.f_hat_hz.push_back(f);
        est.theta_hat_rad.push_back(std::arg(spec[best]));
        est.peak_to_median_db.push_back(
            10.0 * std::log10(best_p / std::max(median_of(power), 1e-300)));
    }
    return est;
}

FrameCube make_nco_aspc(const LeakageEstimate& estimate, std::size_t samples,
                        double rate_hz) {
    FrameCube nco = FrameCube::make_complex(samples, estimate.chirps(), rate_hz);
    const double ts = 1.0 / rate_hz;
    for (std::size_t m = 0; m < estimate.chirps(); ++m) {
        auto row = nco.cplx_chirp(m);
        const double f = estimate.f_hat_hz[m];
        const double th = estimate.theta_hat_rad[m];
        for (std::size_t n = 0; n < samples; ++n) {
            const double arg = kTwoPi * f * static_cast<double>(n) * ts + th;
            row[n] = {std::cos(arg), std::sin(arg)};
        }
    }
    return nco;
}

AspcResult run_aspc_complex(const FrameCube& frames, std::size_t nfft) {
    AspcResult result;
    result.estimate = estimate_leakage_aspc(frames, nfft);
    const FrameCube nco =
        make_nco_aspc(result.estimate, frames.samples(), frames.rate_hz());

    FrameCube mixed = FrameCube::make_complex(frames.samples(), frames.chirps(),
                                              frames.rate_hz());
    FrameCube out = FrameCube::make_real(frames.samples(), frames.chirps(),
                                         frames.rate_hz());
    mixed.set_provenance(frames.scenario_hash(), frames.path_tag() + "+aspc-mixed");
    out.set_provenance(frames.scenario_hash(), frames.path_tag() + "+aspc");
    for (std::size_t m = 0; m < frames.chirps(); ++m)
        for (std::size_t n = 0; n < frames.samples(); ++n) {
            const std::complex<double> v =
                frames.cplx_at(n, m) * std::conj(nco.cplx_at(n, m));
            mixed.cplx_at(n, m) = v;
            out.real_at(n, m) = v.real();
        }
    result.mixed_complex = std::move(mixed);
    result.output = std::move(out);
    return result;
}

AspcResult run_aspc_detailed(const FrameCube& i, const FrameCube& q,
                             std::size_t nfft, bool use_iq_correction,
                             const CalibrationOptions& cal) {
    FrameCube x;
    std::optional<ImbalanceEstimate> imbalance;
    if (use_iq_correction) {
        imbalance = estimate_imbalance(i, q, cal);
        x = correct_iq(i, q, *imbalance);
    } else {
        x = combine_iq(i, q);
    }
    AspcResult result = run_aspc_complex(x, nfft);
    result.imbalance = std::move(imbalance);
    return result;
}

FrameCube run_aspc(const FrameCube& i, const FrameCube& q, std::size_t nfft,
                   bool use_iq_correction) {
    return run_aspc_detailed(i, q, nfft, use_iq_correction).output;
}

double aspc_mur_hz(const SamplingPlan& plan) {
    return plan.effective_rate_hz() / 2.0;
}

} // namespace fmcw
