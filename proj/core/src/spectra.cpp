#include "fmcw/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>

#include "fmcw/errors.hpp"

namespace fmcw {

namespace {

constexpr double kPowerFloor = 1e-300;

double to_db(double p) { return 10.0 * std::log10(std::max(p, kPowerFloor)); }

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

// Median of `values` after dropping +-guard around every entry that pokes
// above the rough median by threshold_db. Returns nullopt when nothing is left.
std::optional<double> guarded_median_db(const std::vector<double>& values_db,
                                        std::size_t guard, double threshold_db) {
    if (values_db.empty()) return std::nullopt;
    std::vector<double> rough = values_db;
    const double med = median_of(std::move(rough));
    std::vector<bool> masked(values_db.size(), false);
    for (std::size_t i = 0; i < values_db.size(); ++i) {
        if (values_db[i] > med + threshold_db) {
            const std::size_t lo = i > guard ? i - guard : 0;
            const std::size_t hi = std::min(values_db.size() - 1, i + guard);
            for (std::size_t j = lo; j <= hi; ++j) masked[j] = true;
        }
    }
    std::vector<double> kept;
    kept.reserve(values_db.size());
    for (std::size_t i = 0; i < values_db.size(); ++i)
        if (!masked[i]) kept.push_back(values_db[i]);
    if (kept.empty()) return std::nullopt;
    return median_of(std::move(kept));
}

// Three-point parabolic refinement of a peak power in dB.
double refine_peak_db(double p_left, double p_mid, double p_right) {
    const double denom = p_left - 2.0 * p_mid + p_right;
    if (denom >= 0.0) return p_mid;
    const double delta = 0.5 * (p_left - p_right) / denom;
    if (std::abs(delta) > 1.0) return p_mid;
    return p_mid - 0.25 * (p_left - p_right) * delta;
}

} // namespace

PowerSpectrum PowerSpectrum::positive_half() const {
    if (!from_complex) return *this;
    PowerSpectrum out;
    out.meters_per_hz = meters_per_hz;
    out.n_averaged = n_averaged;
    out.window = window;
    out.nfft = nfft;
    out.rate_hz = rate_hz;
    out.from_complex = false;
    // Shifted axis puts f = 0 at index nfft/2; keep [0, rate/2].
    const std::size_t zero = nfft / 2;
    for (std::size_t i = zero; i < bins(); ++i) {
        out.freq_hz.push_back(freq_hz[i]);
        out.power_db.push_back(power_db[i]);
    }
    out.floor_estimate_db = floor_estimate_db;
    return out;
}

PowerSpectrum power_spectrum(const FrameCube& frames, fft::Window window,
                             std::size_t nfft, std::size_t n_avg,
                             double meters_per_hz) {
    if (frames.samples() == 0 || frames.chirps() == 0)
        throw EmptyFrame("power_spectrum: empty frame");
    if (n_avg == 0 || n_avg > frames.chirps())
        throw TooFewChirps("power_spectrum: n_avg must be in [1, chirps]");
    if (nfft < frames.samples())
        throw DimensionMismatch("power_spectrum: nfft < samples per chirp");

    const auto win = fft::make_window(window, frames.samples());
    double wsum = 0.0;
    for (double w : win) wsum += w;
    const double scale = 1.0 / (wsum * wsum);

    PowerSpectrum out;
    out.window = fft::window_name(window);
    out.nfft = nfft;
    out.rate_hz = frames.rate_hz();
    out.n_averaged = n_avg;
    out.meters_per_hz = meters_per_hz;
    out.from_complex = !frames.is_real();

    const double df = frames.rate_hz() / static_cast<double>(nfft);
    if (frames.is_real()) {
        fft::RealFft plan(nfft);
        std::vector<double> buf(frames.samples());
        std::vector<double> acc(nfft / 2 + 1, 0.0);
        for (std::size_t m = 0; m < n_avg; ++m) {
            const auto row = frames.real_chirp(m);
            for (std::size_t n = 0; n < row.size(); ++n) buf[n] = row[n] * win[n];
            const auto spec = plan(buf);
            for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(spec[k]);
        }
        out.power_db.resize(acc.size());
        out.freq_hz.resize(acc.size());
        for (std::size_t k = 0; k < acc.size(); ++k) {
            out.power_db[k] = to_db(acc[k] * scale / static_cast<double>(n_avg));
            out.freq_hz[k] = df * static_cast<double>(k);
        }
    } else {
        fft::ComplexFft plan(nfft);
        std::vector<std::complex<double>> buf(frames.samples());
        std::vector<double> acc(nfft, 0.0);
        for (std::size_t m = 0; m < n_avg; ++m) {
            const auto row = frames.cplx_chirp(m);
            for (std::size_t n = 0; n < row.size(); ++n) buf[n] = row[n] * win[n];
            const auto spec = plan(buf);
            for (std::size_t k = 0; k < nfft; ++k) acc[k] += std::norm(spec[k]);
        }
        // fftshift: negative frequencies first.
        out.power_db.resize(nfft);
        out.freq_hz.resize(nfft);
        const std::size_t half = nfft / 2;
        for (std::size_t k = 0; k < nfft; ++k) {
            const std::size_t src = (k + half) % nfft;
            const double f = (static_cast<double>(k) - static_cast<double>(half)) * df;
            out.power_db[k] = to_db(acc[src] * scale / static_cast<double>(n_avg));
            out.freq_hz[k] = f;
        }
    }

    const auto floor = guarded_median_db(out.power_db, 5, 10.0);
    out.floor_estimate_db = floor.value_or(0.0);
    return out;
}

PowerSpectrum power_spectrum(const FrameCube& frames, const RadarScenario& scenario,
                             fft::Window window, std::size_t nfft, std::size_t n_avg) {
    return power_spectrum(frames, window, nfft, n_avg,
                          1.0 / scenario.beat_hz_per_meter());
}

RangeDopplerMap range_doppler_map(const FrameCube& frames, const RdParams& params) {
    if (frames.samples() == 0 || frames.chirps() == 0)
        throw EmptyFrame("range_doppler_map: empty frame");
    if (frames.chirps() < 2)
        throw TooFewChirps("range_doppler_map: need at least 2 chirps");
    const std::size_t nfft = params.nfft;
    if (nfft < frames.samples())
        throw DimensionMismatch("range_doppler_map: nfft < samples per chirp");

    const std::size_t M = frames.chirps();
    const auto win_fast = fft::make_window(params.window, frames.samples());
    const auto win_slow = fft::make_window(params.window, M);
    double wsum_fast = 0.0, wsum_slow = 0.0;
    for (double w : win_fast) wsum_fast += w;
    for (double w : win_slow) wsum_slow += w;
    const double scale = 1.0 / (wsum_fast * wsum_fast * wsum_slow * wsum_slow);

    RangeDopplerMap map;
    map.window = fft::window_name(params.window);
    map.nfft = nfft;
    map.rate_hz = frames.rate_hz();
    map.doppler_bins = M;

    const double df = frames.rate_hz() / static_cast<double>(nfft);
    const bool real_input = frames.is_real();
    const std::size_t n_range = real_input ? nfft / 2 + 1 : nfft;

    // Fast-time transforms, kept as a [range][chirp] matrix.
    std::vector<std::complex<double>> stage(n_range * M);
    if (real_input) {
        fft::RealFft plan(nfft);
        std::vector<double> buf(frames.samples());
        for (std::size_t m = 0; m < M; ++m) {
            const auto row = frames.real_chirp(m);
            for (std::size_t n = 0; n < row.size(); ++n) buf[n] = row[n] * win_fast[n];
            const auto spec = plan(buf);
            for (std::size_t k = 0; k < n_range; ++k) stage[k * M + m] = spec[k];
        }
        map.freq_axis_hz.resize(n_range);
        for (std::size_t k = 0; k < n_range; ++k)
            map.freq_axis_hz[k] = df * static_cast<double>(k);
    } else {
        fft::ComplexFft plan(nfft);
        std::vector<std::complex<double>> buf(frames.samples());
        const std::size_t half = nfft / 2;
        for (std::size_t m = 0; m < M; ++m) {
            const auto row = frames.cplx_chirp(m);
            for (std::size_t n = 0; n < row.size(); ++n) buf[n] = row[n] * win_fast[n];
            const auto spec = plan(buf);
            for (std::size_t k = 0; k < nfft; ++k) {
                const std::size_t dst = (k + half) % nfft; // fftshifted range axis
                stage[dst * M + m] = spec[k];
            }
        }
        map.freq_axis_hz.resize(n_range);
        for (std::size_t k = 0; k < nfft; ++k)
            map.freq_axis_hz[k] =
                (static_cast<double>(k) - static_cast<double>(half)) * df;
    }
    map.range_bins = n_range;
    map.range_axis_m.resize(n_range);
    for (std::size_t k = 0; k < n_range; ++k)
        map.range_axis_m[k] = map.freq_axis_hz[k] * params.meters_per_hz;

    // Slow-time transform per range bin, fftshifted.
    map.power_db.assign(n_range * M, 0.0);
    fft::ComplexFft slow_plan(M);
    std::vector<std::complex<double>> slow_buf(M);
    const std::size_t half_m = M / 2;
    for (std::size_t k = 0; k < n_range; ++k) {
        for (std::size_t m = 0; m < M; ++m)
            slow_buf[m] = stage[k * M + m] * win_slow[m];
        const auto spec = slow_plan(slow_buf);
        for (std::size_t d = 0; d < M; ++d) {
            const std::size_t src = (d + half_m) % M;
            map.power_db[k * M + d] = to_db(std::norm(spec[src]) * scale);
        }
    }

    // Velocity bin centers; index M/2 is zero Doppler.
    map.velocity_axis_mps.resize(M);
    const double dv = params.wavelength_m /
                      (2.0 * static_cast<double>(M) * params.chirp_period_s);
    for (std::size_t d = 0; d < M; ++d)
        map.velocity_axis_mps[d] =
            (static_cast<double>(d) - static_cast<double>(half_m)) * dv;

    // 2-D floor: median excluding guard regions around detected peaks.
    const auto floor = guarded_median_db(map.power_db, params.peak_guard, 10.0);
    map.floor_2d_db = floor.value_or(0.0);

    // Peak list: local maxima above floor + threshold.
    const double thresh = map.floor_2d_db + params.peak_threshold_db;
    for (std::size_t k = 1; k + 1 < n_range; ++k) {
        for (std::size_t d = 1; d + 1 < M; ++d) {
            const double p = map.at(k, d);
            if (p < thresh) continue;
            bool is_max = true;
            for (int dk = -1; dk <= 1 && is_max; ++dk)
                for (int dd = -1; dd <= 1; ++dd) {
                    if (dk == 0 && dd == 0) continue;
                    const std::size_t kk = static_cast<std::size_t>(
                        static_cast<std::ptrdiff_t>(k) + dk);
                    const std::size_t nn = static_cast<std::size_t>(
                        static_cast<std::ptrdiff_t>(d) + dd);
                    if (map.at(kk, nn) > p) {
                        is_max = false;
                        break;
                    }
                }
            if (!is_max) continue;
            RdPeak peak;
            peak.range_bin = k;
            peak.doppler_bin = d;
            peak.range_m = map.range_axis_m[k];
            peak.velocity_mps = map.velocity_axis_mps[d];
            peak.power_db = p;
            peak.snr_2d_db = p - map.floor_2d_db;
            map.peaks.push_back(peak);
        }
    }
    std::sort(map.peaks.begin(), map.peaks.end(),
              [](const RdPeak& a, const RdPeak& b) { return a.power_db > b.power_db; });
    if (map.peaks.size() > 64) map.peaks.resize(64);
    return map;
}

RangeDopplerMap range_doppler_map(const FrameCube& frames, const RadarScenario& scenario,
                                  fft::Window window, std::size_t nfft) {
    RdParams params;
    params.window = window;
    params.nfft = nfft;
    params.meters_per_hz = 1.0 / scenario.beat_hz_per_meter();
    params.wavelength_m = scenario.sweep.center_wavelength_m();
    params.chirp_period_s = scenario.sweep.sweep_period_s;
    return range_doppler_map(frames, params);
}

double noise_floor_db(const PowerSpectrum& spectrum, double f_lo_hz, double f_hi_hz,
                      std::size_t guard_bins) {
    if (spectrum.bins() == 0) throw BandEmpty("noise floor: empty spectrum");
    if (f_lo_hz > f_hi_hz) throw BandEmpty("noise floor: inverted band");
    std::size_t lo = spectrum.bins(), hi = 0;
    for (std::size_t i = 0; i < spectrum.bins(); ++i) {
        if (spectrum.freq_hz[i] >= f_lo_hz && spectrum.freq_hz[i] <= f_hi_hz) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    if (lo > hi) throw BandEmpty("noise floor: band outside the spectrum axis");
    std::vector<double> band(spectrum.power_db.begin() + static_cast<std::ptrdiff_t>(lo),
                             spectrum.power_db.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    const auto floor = guarded_median_db(band, guard_bins, 10.0);
    if (!floor) throw BandEmpty("noise floor: peak guards cover the whole band");
    return *floor;
}

PowerSpectrum slice_band(const PowerSpectrum& spectrum, double f_lo_hz,
                         double f_hi_hz) {
    PowerSpectrum out = spectrum;
    out.power_db.clear();
    out.freq_hz.clear();
    for (std::size_t i = 0; i < spectrum.bins(); ++i) {
        if (spectrum.freq_hz[i] >= f_lo_hz && spectrum.freq_hz[i] <= f_hi_hz) {
            out.freq_hz.push_back(spectrum.freq_hz[i]);
            out.power_db.push_back(spectrum.power_db[i]);
        }
    }
    if (out.power_db.empty()) throw BandEmpty("slice_band: no bins in band");
    return out;
}

std::vector<double> improvement_curve(const PowerSpectrum& before,
                                      const PowerSpectrum& after,
                                      std::size_t smooth_bins) {
    if (before.bins() != after.bins())
        throw AxisMismatch("improvement curve: bin counts differ");
    if (before.bins() == 0) throw AxisMismatch("improvement curve: empty spectra");
    if (before.freq_hz.front() != after.freq_hz.front() ||
        before.freq_hz.back() != after.freq_hz.back())
        throw AxisMismatch("improvement curve: frequency axes differ");

    const std::size_t n = before.bins();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i)
        diff[i] = before.power_db[i] - after.power_db[i];

    std::size_t w = smooth_bins > 0 ? smooth_bins : std::max<std::size_t>(1, n / 100);
    if (w % 2 == 0) ++w;
    if (w <= 1) return diff;
    const std::size_t half = w / 2;
    std::vector<double> out(n);
    // Moving average with shrinking edges.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += diff[j];
        out[i] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

SnrMeasurement measure_snr(const PowerSpectrum& spectrum, double truth_freq_hz) {
    if (spectrum.bins() < 8) throw PeakNotFound("spectrum too short");
    const double df = (spectrum.freq_hz.back() - spectrum.freq_hz.front()) /
                      static_cast<double>(spectrum.bins() - 1);
    const double pos = (truth_freq_hz - spectrum.freq_hz.front()) / df;
    if (pos < 0.0 || pos > static_cast<double>(spectrum.bins() - 1))
        throw PeakNotFound("truth frequency outside the spectrum axis");
    const std::size_t center = static_cast<std::size_t>(std::lround(pos));

    const std::size_t search = 2;
    const std::size_t lo = center > search ? center - search : 0;
    const std::size_t hi = std::min(spectrum.bins() - 1, center + search);
    std::size_t best = lo;
    for (std::size_t i = lo; i <= hi; ++i)
        if (spectrum.power_db[i] > spectrum.power_db[best]) best = i;

    // Local floor: median over a window around the truth, guarding the peak.
    const std::size_t window = 128;
    const std::size_t guard = 8;
    const std::size_t wlo = center > window ? center - window : 0;
    const std::size_t whi = std::min(spectrum.bins() - 1, center + window);
    std::vector<double> floor_bins;
    for (std::size_t i = wlo; i <= whi; ++i) {
        const std::size_t dist = i > best ? i - best : best - i;
        if (dist > guard) floor_bins.push_back(spectrum.power_db[i]);
    }
    if (floor_bins.empty()) throw PeakNotFound("no floor bins around truth");
    const double floor = median_of(std::move(floor_bins));

    const double p = spectrum.power_db[best];
    if (p < floor + 3.0)
        throw PeakNotFound("no peak above floor + 3 dB at the truth location");

    SnrMeasurement meas;
    meas.peak_bin = best;
    meas.floor_db = floor;
    meas.peak_db = (best > 0 && best + 1 < spectrum.bins())
                       ? refine_peak_db(spectrum.power_db[best - 1], p,
                                        spectrum.power_db[best + 1])
                       : p;
    meas.snr_db = meas.peak_db - floor;
    return meas;
}

SnrMeasurement measure_snr(const RangeDopplerMap& map, double truth_range_m,
                           double truth_velocity_mps) {
    if (map.range_bins < 8 || map.doppler_bins < 4)
        throw PeakNotFound("map too small");
    const double dr = (map.range_axis_m.back() - map.range_axis_m.front()) /
                      static_cast<double>(map.range_bins - 1);
    const double dv = map.velocity_axis_mps[1] - map.velocity_axis_mps[0];
    const double kpos = (truth_range_m - map.range_axis_m.front()) / dr;
    const double dpos = (truth_velocity_mps - map.velocity_axis_mps.front()) / dv;
    if (kpos < 0.0 || kpos > static_cast<double>(map.range_bins - 1) ||
        dpos < 0.0 || dpos > static_cast<double>(map.doppler_bins - 1))
        throw PeakNotFound("truth location outside the map");
    const std::size_t kc = static_cast<std::size_t>(std::lround(kpos));
    const std::size_t dc = static_cast<std::size_t>(std::lround(dpos));

    const std::size_t search = 2;
    std::size_t bk = kc, bd = dc;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = kc > search ? kc - search : 0;
         k <= std::min(map.range_bins - 1, kc + search); ++k)
        for (std::size_t d = dc > search ? dc - search : 0;
             d <= std::min(map.doppler_bins - 1, dc + search); ++d)
            if (map.at(k, d) > best) {
                best = map.at(k, d);
                bk = k;
                bd = d;
            }

    // Local 2-D floor around the truth, guarding the peak neighborhood.
    const std::size_t wk = 24, wd = 8, gk = 5, gd = 3;
    std::vector<double> floor_bins;
    for (std::size_t k = kc > wk ? kc - wk : 0;
         k <= std::min(map.range_bins - 1, kc + wk); ++k)
        for (std::size_t d = dc > wd ? dc - wd : 0;
             d <= std::min(map.doppler_bins - 1, dc + wd); ++d) {
            const std::size_t dk = k > bk ? k - bk : bk - k;
            const std::size_t dd = d > bd ? d - bd : bd - d;
            if (dk > gk || dd > gd) floor_bins.push_back(map.at(k, d));
        }
    if (floor_bins.empty()) throw PeakNotFound("no floor bins around truth");
    const double floor = median_of(std::move(floor_bins));
    if (best < floor + 3.0)
        throw PeakNotFound("no peak above floor + 3 dB at the truth location");

    SnrMeasurement meas;
    meas.peak_bin = bk;
    meas.peak_doppler_bin = bd;
    meas.floor_db = floor;
    double refined = best;
    if (bk > 0 && bk + 1 < map.range_bins)
        refined = refine_peak_db(map.at(bk - 1, bd), best, map.at(bk + 1, bd));
    if (bd > 0 && bd + 1 < map.doppler_bins) {
        const double along_d =
            refine_peak_db(map.at(bk, bd - 1), best, map.at(bk, bd + 1));
        refined += along_d - best; // combine both axis corrections
    }
    meas.peak_db = refined;
    meas.snr_db = meas.peak_db - floor;
    return meas;
}

namespace {

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& columns) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for write: " + path);
    os << header << "\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    char buf[64];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.9g", columns[c][r]);
            os << (c ? "," : "") << buf;
        }
        os << "\n";
    }
    if (!os) throw IoError("write failed: " + path);
}

} // namespace

void write_spectrum_csv(const std::string& path, const PowerSpectrum& s) {
    std::vector<double> range(s.bins());
    for (std::size_t i = 0; i < s.bins(); ++i) range[i] = s.range_m(i);
    write_csv(path, "freq_hz,range_m,power_db", {s.freq_hz, range, s.power_db});
}

void write_rdmap_csv(const std::string& path, const RangeDopplerMap& map) {
    std::vector<double> range, velocity, power;
    range.reserve(map.power_db.size());
    velocity.reserve(map.power_db.size());
    power.reserve(map.power_db.size());
    for (std::size_t k = 0; k < map.range_bins; ++k)
        for (std::size_t d = 0; d < map.doppler_bins; ++d) {
            range.push_back(map.range_axis_m[k]);
            velocity.push_back(map.velocity_axis_mps[d]);
            power.push_back(map.at(k, d));
        }
    write_csv(path, "range_m,velocity_mps,power_db", {range, velocity, power});
}

void write_improvement_csv(const std::string& path, const PowerSpectrum& ref,
                           const std::vector<double>& curve) {
    if (curve.size() != ref.bins())
        throw AxisMismatch("improvement CSV: curve length differs from axis");
    std::vector<double> range(ref.bins());
    for (std::size_t i = 0; i < ref.bins(); ++i) range[i] = ref.range_m(i);
    write_csv(path, "freq_hz,range_m,improvement_db", {ref.freq_hz, range, curve});
}

} // namespace fmcw
