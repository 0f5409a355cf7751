#pragma once

#include <utility>
#include <vector>

#include "fmcw/frame.hpp"
#include "fmcw/scenario.hpp"

namespace fmcw {

// Per-chirp ground truth recorded during synthesis, for oracles and tests.
struct ChirpTruth {
    double f_random_ft_hz = 0.0;
    double f_random_st_hz = 0.0;
    double f_fast_leakage_hz = 0.0;    // fast-time leakage frequency of this chirp
    double theta_slow_leakage_rad = 0.0; // slow-time leakage phase of this chirp
};

struct SynthTruth {
    std::vector<ChirpTruth> chirps;
    std::vector<double> target_beat_hz;    // per target, range-derived
    std::vector<double> target_doppler_hz; // per target, signed
    double rate_hz = 0.0;
    std::uint32_t discarded_samples = 0;
};

// Real oversampled beat frames at rate Q*Fs for the original pipeline.
// Requires a heterodyne scenario with an spc sampling plan.
FrameCube synth_spc_frames(const RadarScenario& scenario, SynthTruth* truth = nullptr);

// Quadrature beat frames at rate Fs with amplitude/phase imbalance applied to
// the Q channel. Requires a heterodyne scenario with an aspc sampling plan.
std::pair<FrameCube, FrameCube> synth_aspc_iq_frames(const RadarScenario& scenario,
                                                     SynthTruth* truth = nullptr);

// Baseband quadrature frames for the homodyne architecture (no IF carrier, no
// carrier offset; range-correlation shaping of the phase noise per the spec).
std::pair<FrameCube, FrameCube> synth_homodyne_iq_frames(const RadarScenario& scenario,
                                                         SynthTruth* truth = nullptr);

// I + jQ as one complex cube.
FrameCube combine_iq(const FrameCube& i, const FrameCube& q);

// Down-conversion by a plain fixed-frequency oscillator (the conventional
// last stage, used by the no-technique reference path). The oscillator phase
// is continuous across chirps.
FrameCube mix_fixed_lo(const FrameCube& frames, const RadarScenario& scenario,
                       double lo_freq_hz);

} // namespace fmcw
