#pragma once

#include <cstdint>
#include <vector>

#include "fmcw/scenario.hpp"

namespace fmcw {

struct PhaseNoiseRealization {
    std::vector<double> samples; // radians
    double rms = 0.0;
    double rate_hz = 0.0;
};

// Colored zero-mean Gaussian phase sequence whose one-sided PSD follows the
// piecewise log-log interpolation of the spec's breakpoints. When rce_enabled,
// the PSD is multiplied by 4*sin^2(pi*f*tau) before time-domain synthesis.
// Throws BreakpointBandExceedsRate unless rate > 2 * highest breakpoint offset.
PhaseNoiseRealization synth_phase_noise(const PhaseNoiseSpec& spec,
                                        std::size_t count, double rate_hz,
                                        std::uint64_t seed);

} // namespace fmcw
