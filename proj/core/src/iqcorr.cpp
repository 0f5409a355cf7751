#include "fmcw/iqcorr.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fmcw/errors.hpp"
#include "fmcw/fft.hpp"
#include "fmcw/synth.hpp"

namespace fmcw {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

double median_of(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}

// Averaged Hann periodogram of a complex cube, linear power per bin.
std::vector<double> averaged_complex_power(const FrameCube& frames,
                                           std::size_t nfft,
                                           std::size_t max_chirps) {
    const auto win = fft::make_window(fft::Window::hann, frames.samples());
    fft::ComplexFft plan(nfft);
    std::vector<std::complex<double>> buf(frames.samples());
    std::vector<double> acc(nfft, 0.0);
    const std::size_t n_avg = std::min<std::size_t>(frames.chirps(), max_chirps);
    for (std::size_t m = 0; m < n_avg; ++m) {
        const auto row = frames.cplx_chirp(m);
        for (std::size_t n = 0; n < row.size(); ++n) buf[n] = row[n] * win[n];
        const auto spec = plan(buf);
        for (std::size_t k = 0; k < nfft; ++k) acc[k] += std::norm(spec[k]);
    }
    for (auto& v : acc) v /= static_cast<double>(n_avg);
    return acc;
}

} // namespace

// Mapping from ellipse geometry to the imbalance pair, with the I channel as
// the amplitude reference.
//
//   i(u) = cos(u),  q(u) = a*sin(u + t)
//        = p*i + s*sin(u),        p = a*sin(t), s = a*cos(t)
//   eliminate u:  (p^2 + s^2)*i^2 - 2p*i*q + q^2 = s^2
//
// so in the centered conic alpha*i^2 + beta*i*q + gamma*q^2 = const, after
// normalizing gamma to 1: alpha = a^2 and beta = -2p. An overall amplitude
// scale multiplies the constant only, leaving alpha and beta untouched:
//   a = sqrt(alpha/gamma),  t = asin(-beta / (2*sqrt(alpha*gamma))).
// |beta| < 2*sqrt(alpha*gamma) holds for every ellipse, so the asin argument
// is always in range and |t| < pi/2.
ImbalanceEstimate estimate_imbalance(const FrameCube& i, const FrameCube& q,
                                     const CalibrationOptions& opts) {
    if (!i.is_real() || !q.is_real() || !i.same_shape(q))
        throw DimensionMismatch("estimate_imbalance needs matching real I/Q frames");
    if (i.samples() == 0 || i.chirps() == 0)
        throw EmptyFrame("estimate_imbalance: empty frame");

    // The calibration tone must dominate the spectrum.
    const std::size_t nfft = next_pow2(2 * i.samples());
    const auto power =
        averaged_complex_power(combine_iq(i, q), nfft, std::size_t{8});
    const double peak = *std::max_element(power.begin(), power.end());
    const double floor = median_of(power);
    const double margin_db = 10.0 * std::log10(peak / std::max(floor, 1e-300));
    if (margin_db < opts.min_peak_to_floor_db)
        throw LowSNRForCalibration(
            "calibration tone margin " + std::to_string(margin_db) +
            " dB is below the required " +
            std::to_string(opts.min_peak_to_floor_db) + " dB");

    const std::size_t total = i.samples() * i.chirps();
    const std::size_t stride = std::max<std::size_t>(1, total / opts.max_points);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(total / stride + 1);
    for (std::size_t idx = 0; idx < total; idx += stride)
        pts.emplace_back(i.real_data()[idx], q.real_data()[idx]);

    EllipseFit fit = fit_ellipse_taubin(pts);
    fit = refine_ellipse_lm(fit, pts, opts.lm_tol, opts.lm_max_iters);

    const double cs = std::cos(fit.tilt_rad);
    const double sn = std::sin(fit.tilt_rad);
    const double ia2 = 1.0 / (fit.semi_major * fit.semi_major);
    const double ib2 = 1.0 / (fit.semi_minor * fit.semi_minor);
    const double alpha = cs * cs * ia2 + sn * sn * ib2;
    const double beta = 2.0 * cs * sn * (ia2 - ib2);
    const double gamma = sn * sn * ia2 + cs * cs * ib2;

    ImbalanceEstimate est;
    est.a_e_hat = std::sqrt(alpha / gamma);
    est.theta_e_hat_rad = std::asin(-beta / (2.0 * std::sqrt(alpha * gamma)));
    est.source_fit = fit;
    return est;
}

FrameCube correct_iq(const FrameCube& i, const FrameCube& q,
                     const ImbalanceEstimate& est) {
    if (!i.is_real() || !q.is_real() || !i.same_shape(q))
        throw DimensionMismatch("correct_iq needs matching real I/Q frames");
    const double cs = std::cos(est.theta_e_hat_rad);
    if (std::abs(cs) < 1e-9)
        throw SingularTransform("phase imbalance too close to +-pi/2");
    const double tn = std::tan(est.theta_e_hat_rad);
    const double qs = 1.0 / (est.a_e_hat * cs);

    FrameCube out = FrameCube::make_complex(i.samples(), i.chirps(), i.rate_hz());
    out.set_provenance(i.scenario_hash(), i.path_tag() + "+iqcorr");
    for (std::size_t m = 0; m < i.chirps(); ++m)
        for (std::size_t n = 0; n < i.samples(); ++n) {
            const double vi = i.real_at(n, m);
            const double vq = q.real_at(n, m);
            out.cplx_at(n, m) = {vi, -tn * vi + qs * vq};
        }
    return out;
}

double irr_db(double a_e, double theta_e_rad) {
    const double c = std::cos(theta_e_rad);
    const double num = 1.0 + a_e * a_e + 2.0 * a_e * c;
    const double den = 1.0 + a_e * a_e - 2.0 * a_e * c;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(num / den);
}

double measured_irr_db(const FrameCube& frames, std::size_t nfft) {
    if (frames.is_real())
        throw DimensionMismatch("measured IRR needs a complex frame");
    const auto power = averaged_complex_power(frames, nfft, frames.chirps());
    const std::size_t k_peak = static_cast<std::size_t>(
        std::max_element(power.begin(), power.end()) - power.begin());
    if (k_peak < 4 || k_peak + 4 > nfft)
        throw PeakNotFound("carrier too close to DC for an image measurement");
    const std::size_t k_img = nfft - k_peak;
    double img = 0.0;
    for (std::size_t k = k_img - 3; k <= k_img + 3; ++k)
        img = std::max(img, power[k % nfft]);
    return 10.0 * std::log10(power[k_peak] / std::max(img, 1e-300));
}

} // namespace fmcw
