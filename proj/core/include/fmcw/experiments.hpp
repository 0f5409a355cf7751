#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fmcw/scenario.hpp"

namespace fmcw {

struct Claim {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentReport {
    std::string experiment;
    std::string scenario_name;
    std::uint64_t scenario_hash = 0;
    std::uint64_t seed = 0;
    bool desk = true;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<Claim> claims;

    bool all_pass() const {
        for (const auto& c : claims)
            if (!c.pass) return false;
        return true;
    }
    // Deterministic text form: human-readable header, then machine-parseable
    // "## metrics" (key = value) and "## claims" (PASS|FAIL name detail)
    // sections. Identical inputs produce identical bytes.
    std::string to_text() const;
};

struct ExperimentOptions {
    std::optional<RadarScenario> scenario; // defaults per experiment
    std::optional<std::uint64_t> seed;     // overrides the scenario seed
    bool desk = true;                      // shrink to desk scale first
    bool use_iq_correction = true;
    std::string out_dir;                   // when set, CSV/report artifacts land here
};

// Leakage-only heterodyne comparison of the three processing paths
// (conventional fixed-oscillator mix, real-NCO concentration, complex-NCO
// concentration on critically sampled I/Q): averaged spectra, improvement
// curves, floor-ordering verdict.
ExperimentReport experiment_a(const ExperimentOptions& opts = {});

// Heterodyne moving-target run with an injected carrier offset: range-Doppler
// maps for the three paths, velocity-error correction, MUR ratio, image
// rejection before/after the quadrature correction, SNR preservation.
ExperimentReport experiment_b(const ExperimentOptions& opts = {});

// Homodyne run with range-correlation-shaped phase noise: range accuracy for
// a hovering target, floor improvement with and without the correlation
// shaping, 2-D SNR gain for a moving target.
ExperimentReport experiment_c(const ExperimentOptions& opts = {});

} // namespace fmcw
