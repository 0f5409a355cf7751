#pragma once

#include <optional>

#include "fmcw/frame.hpp"
#include "fmcw/iqcorr.hpp"
#include "fmcw/scenario.hpp"
#include "fmcw/spc.hpp"

namespace fmcw {

// Complex leakage estimation: per-chirp zero-padded FFT, unrestricted argmax
// over all bins, frequency mapped to signed Hz in (-rate/2, rate/2].
LeakageEstimate estimate_leakage_aspc(const FrameCube& frames, std::size_t nfft);

// Unit-magnitude complex exponential per chirp at the estimated line.
FrameCube make_nco_aspc(const LeakageEstimate& estimate, std::size_t samples,
                        double rate_hz);

struct AspcResult {
    FrameCube output;        // real part after conjugate mixing
    FrameCube mixed_complex; // pre-real-part signal, for diagnostics
    LeakageEstimate estimate;
    std::optional<ImbalanceEstimate> imbalance; // set when correction ran
};

// Full pipeline on an I/Q pair: optional imbalance calibration/correction,
// complex leakage estimation, conjugate mixing, real-part extraction. The
// concentrated leakage stays in the output as a DC line; floor measurements
// should guard-band it.
AspcResult run_aspc_detailed(const FrameCube& i, const FrameCube& q,
                             std::size_t nfft, bool use_iq_correction,
                             const CalibrationOptions& cal = {});
FrameCube run_aspc(const FrameCube& i, const FrameCube& q, std::size_t nfft,
                   bool use_iq_correction = true);

// Same pipeline starting from an already-complex cube (no imbalance step).
AspcResult run_aspc_complex(const FrameCube& complex_frames, std::size_t nfft);

// Half the effective rate: real-part extraction leaves the positive
// half-spectrum usable, independent of carrier offsets and leakage beat.
double aspc_mur_hz(const SamplingPlan& plan);

} // namespace fmcw
