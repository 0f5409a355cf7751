#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fmcw/fft.hpp"
#include "fmcw/frame.hpp"
#include "fmcw/scenario.hpp"

namespace fmcw {

// Averaged periodogram. Power is normalized by the window sum squared, so a
// unit-amplitude complex exponential on an exact bin reads 0 dB (a real
// cosine reads -6.02 dB). dB conversion happens after linear averaging.
struct PowerSpectrum {
    std::vector<double> power_db;
    std::vector<double> freq_hz;     // half axis [0, rate/2] for real input,
                                     // signed fftshifted axis for complex input
    double meters_per_hz = 0.0;      // beat-to-range scale; 0 when unknown
    std::size_t n_averaged = 0;
    std::string window;
    std::size_t nfft = 0;
    double rate_hz = 0.0;
    double floor_estimate_db = 0.0;
    bool from_complex = false;

    std::size_t bins() const { return power_db.size(); }
    double range_m(std::size_t bin) const { return freq_hz[bin] * meters_per_hz; }
    double bin_spacing_hz() const { return rate_hz / static_cast<double>(nfft); }
    // Positive-frequency half of a complex-input spectrum, on the same grid a
    // real-input spectrum of the same nfft/rate would use.
    PowerSpectrum positive_half() const;
};

PowerSpectrum power_spectrum(const FrameCube& frames, fft::Window window,
                             std::size_t nfft, std::size_t n_avg,
                             double meters_per_hz = 0.0);
PowerSpectrum power_spectrum(const FrameCube& frames, const RadarScenario& scenario,
                             fft::Window window, std::size_t nfft, std::size_t n_avg);

struct RdPeak {
    double range_m = 0.0;
    double velocity_mps = 0.0;
    double power_db = 0.0;
    double snr_2d_db = 0.0;
    std::size_t range_bin = 0;
    std::size_t doppler_bin = 0;
};

// Fast-time FFT per chirp, then slow-time FFT per range bin, both windowed;
// Doppler axis centered (fftshift) and mapped to velocity.
struct RangeDopplerMap {
    std::size_t range_bins = 0;
    std::size_t doppler_bins = 0;
    std::vector<double> power_db;       // row-major [range][doppler]
    std::vector<double> freq_axis_hz;   // fast-time axis
    std::vector<double> range_axis_m;
    std::vector<double> velocity_axis_mps; // bin centers, [-lambda/4T, +lambda/4T)
    std::vector<RdPeak> peaks;
    double floor_2d_db = 0.0;           // median excluding peak guard regions
    std::string window;
    std::size_t nfft = 0;
    double rate_hz = 0.0;

    double at(std::size_t range_bin, std::size_t doppler_bin) const {
        return power_db[range_bin * doppler_bins + doppler_bin];
    }
};

struct RdParams {
    fft::Window window = fft::Window::hann;
    std::size_t nfft = 0;               // fast-time FFT length
    double meters_per_hz = 0.0;
    double wavelength_m = 0.0;
    double chirp_period_s = 0.0;
    double peak_threshold_db = 10.0;    // above the 2-D floor
    std::size_t peak_guard = 8;         // bins excluded around peaks for floors
};

RangeDopplerMap range_doppler_map(const FrameCube& frames, const RdParams& params);
RangeDopplerMap range_doppler_map(const FrameCube& frames, const RadarScenario& scenario,
                                  fft::Window window, std::size_t nfft);

// Median power over [f_lo, f_hi] excluding +-guard_bins around every detected
// peak (anything above the rough median by 10 dB). Throws BandEmpty.
double noise_floor_db(const PowerSpectrum& spectrum, double f_lo_hz, double f_hi_hz,
                      std::size_t guard_bins);

// Bins with f_lo <= freq <= f_hi, keeping the grid; throws BandEmpty when no
// bin falls inside.
PowerSpectrum slice_band(const PowerSpectrum& spectrum, double f_lo_hz,
                         double f_hi_hz);

// Per-bin (before - after) dB difference smoothed with a moving average.
// smooth_bins == 0 picks 1% of the band. Throws AxisMismatch.
std::vector<double> improvement_curve(const PowerSpectrum& before,
                                      const PowerSpectrum& after,
                                      std::size_t smooth_bins = 0);

struct SnrMeasurement {
    double peak_db = 0.0;     // parabolic-interpolated peak power
    double floor_db = 0.0;    // local median floor
    double snr_db = 0.0;
    std::size_t peak_bin = 0;
    std::size_t peak_doppler_bin = 0; // maps only
};

// Peak within +-2 bins of the truth location minus the local noise floor.
// Throws PeakNotFound when no local maximum exceeds floor + 3 dB.
SnrMeasurement measure_snr(const PowerSpectrum& spectrum, double truth_freq_hz);
SnrMeasurement measure_snr(const RangeDopplerMap& map, double truth_range_m,
                           double truth_velocity_mps);

// CSV exports. Column names are fixed:
//   spectrum:    freq_hz,range_m,power_db
//   rdmap:       range_m,velocity_mps,power_db
//   improvement: freq_hz,range_m,improvement_db
void write_spectrum_csv(const std::string& path, const PowerSpectrum& spectrum);
void write_rdmap_csv(const std::string& path, const RangeDopplerMap& map);
void write_improvement_csv(const std::string& path, const PowerSpectrum& axis_ref,
                           const std::vector<double>& curve);

} // namespace fmcw
