#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmcw/frame.hpp"
#include "fmcw/scenario.hpp"

namespace fmcw {

// Per-chirp leakage line estimate from zero-padded FFT peak picking.
// k_index is stored 0-based; the frequency mapping f = rate*k/nfft is the
// 1-based textbook (k-1) convention expressed with 0-based indices.
struct LeakageEstimate {
    std::vector<std::size_t> k_index; // per chirp, 0-based peak bin
    std::vector<double> f_hat_hz;     // per chirp
    std::vector<double> theta_hat_rad;
    std::vector<double> peak_to_median_db; // peak power over in-band median
    std::size_t nfft_used = 0;
    double rate_hz = 0.0;
    // Searched band, 0-based bin indices, inclusive.
    std::size_t band_lo = 0;
    std::size_t band_hi = 0;

    std::size_t chirps() const { return f_hat_hz.size(); }
};

// Raw (windowless) zero-padded FFT per chirp; argmax of |X|^2 restricted to
// bins strictly inside (NFFT/8, 3*NFFT/8), the quarter-point neighborhood.
// Ties break to the lowest bin. Throws EmptyFrame / BandEmpty.
LeakageEstimate estimate_leakage_spc(const FrameCube& frames, std::size_t nfft);

// Real per-chirp cosine at the estimated frequency and phase.
FrameCube make_nco_spc(const LeakageEstimate& estimate, std::size_t samples,
                       double rate_hz);

struct SpcResult {
    FrameCube output;         // frames * NCO, sum-terms included
    LeakageEstimate estimate;
};

// The final down-conversion: estimate the leakage per chirp, build the NCO,
// mix. Sum-terms around twice the leakage frequency are deliberately left in
// the output; restricting the displayed band is a reporting concern.
SpcResult run_spc_detailed(const FrameCube& frames, std::size_t nfft);
FrameCube run_spc(const FrameCube& frames, std::size_t nfft);

// Alias-free beat-frequency extent of the mixed output: the desired terms
// stay clear of the folded sum-terms up to min(2*f_hat, rate - 2*f_hat)/2,
// minimized over chirps. Larger carrier offsets and leakage beats shrink it.
double spc_mur_hz(const SamplingPlan& plan, const LeakageEstimate& estimate);

} // namespace fmcw
