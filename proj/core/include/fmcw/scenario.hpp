#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fmcw {

inline constexpr double kSpeedOfLight = 299'792'458.0;

// Exact rational, used for the oversampling factor so the quarter-point
// carrier rule can be checked without rounding slop.
struct Ratio {
    std::uint64_t num = 1;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Ratio&) const = default;
};

struct SweepParams {
    double f_start_hz = 0.0;        // low edge of the RF sweep
    double bandwidth_hz = 0.0;      // BW
    double sweep_period_s = 0.0;    // T
    std::uint32_t samples_per_chirp = 0;
    std::uint32_t samples_kept = 0; // after discarding the early part of each chirp
    std::uint32_t chirps_per_frame = 0; // M

    double center_frequency_hz() const { return f_start_hz + 0.5 * bandwidth_hz; }
    double center_wavelength_m() const { return kSpeedOfLight / center_frequency_hz(); }
    // Resolution as it appears on the displayed range axis; the kept fraction
    // of the chirp sets the effective bandwidth.
    double apparent_range_resolution_m() const {
        return kSpeedOfLight /
               (2.0 * bandwidth_hz * static_cast<double>(samples_kept) /
                static_cast<double>(samples_per_chirp));
    }
    bool operator==(const SweepParams&) const = default;
};

enum class PlanKind { spc, aspc };

struct SamplingPlan {
    PlanKind kind = PlanKind::aspc;
    double f_s_hz = 0.0;            // minimum available sampling frequency
    Ratio oversampling_q{1, 1};     // Q (used by spc plans only)
    std::uint32_t undersampling_n = 0; // N
    double f_if_carrier_hz = 0.0;   // 0 / unused for homodyne

    // Q*Fs for spc plans, Fs for aspc plans.
    double effective_rate_hz() const {
        return kind == PlanKind::spc ? f_s_hz * oversampling_q.value() : f_s_hz;
    }
    double sample_interval_s() const { return 1.0 / effective_rate_hz(); }
    bool operator==(const SamplingPlan&) const = default;
};

// Carrier frequency demanded by strategic frequency planning: Q*Fs*(4N+1)/4.
// Always compute it through this helper so the validator's equality check is
// exact in floating point.
double spc_carrier_for(double f_s_hz, Ratio q, std::uint32_t n);

enum class DistKind { none, uniform, gaussian };

// Zero-mean per-chirp random frequency component. width_hz is the half-range
// for uniform draws and the standard deviation for gaussian draws.
struct DistributionSpec {
    DistKind kind = DistKind::none;
    double width_hz = 0.0;
    bool operator==(const DistributionSpec&) const = default;
};

struct OscillatorDefects {
    double f_offset_hz = 0.0;       // constant carrier offset
    DistributionSpec f_random_ft;   // per-chirp fast-time random component
    DistributionSpec f_random_st;   // per-chirp slow-time random component
    std::uint64_t rng_seed = 1;
    bool operator==(const OscillatorDefects&) const = default;
};

struct PhaseNoiseSpec {
    // (offset Hz, level dB re rad^2/Hz) breakpoints of a piecewise log-log
    // one-sided PSD skirt. Levels are clamped flat outside the breakpoint span.
    std::vector<std::pair<double, double>> psd_breakpoints;
    bool rce_enabled = false;
    double rce_delay_tau_s = 0.0;   // used only when rce_enabled

    bool empty() const { return psd_breakpoints.empty(); }
    // One-sided PSD in rad^2/Hz at offset f (no RCE factor applied).
    double psd_at(double f_hz) const;
    // Flat skirt over [f_lo, f_hi] whose integrated power gives the wanted rms.
    static PhaseNoiseSpec flat_for_rms(double rms_rad, double f_lo_hz, double f_hi_hz);
    // Same shape with every level moved by delta_db.
    PhaseNoiseSpec scaled(double delta_db) const;
    bool operator==(const PhaseNoiseSpec&) const = default;
};

struct LeakageSpec {
    double amplitude = 1.0;         // linear volts
    double f_beat_hz = 0.0;         // internal-delay beat frequency
    double theta_rad = 0.0;
    PhaseNoiseSpec phase_noise;
    bool operator==(const LeakageSpec&) const = default;
};

struct TargetSpec {
    double amplitude = 0.0;
    double range_m = 0.0;
    double velocity_mps = 0.0;      // positive = approaching => positive Doppler
    double theta_rad = 0.0;
    PhaseNoiseSpec phase_noise;
    bool correlated_with_leakage = false; // share the leakage phase-noise realization
    bool operator==(const TargetSpec&) const = default;
};

struct ImbalanceSpec {
    double a_e = 1.0;               // amplitude imbalance
    double theta_e_rad = 0.0;       // phase imbalance
    bool operator==(const ImbalanceSpec&) const = default;
};

enum class Architecture { heterodyne, homodyne };

// Processing defaults carried with a scenario (FFT sizes for leakage
// estimation and reporting, window). Not part of the physical model.
struct ProcessingHints {
    std::uint32_t nfft_estimation = 1u << 18;
    std::uint32_t nfft_spectrum = 1u << 14;
    std::string window = "hann";
    bool operator==(const ProcessingHints&) const = default;
};

struct RadarScenario {
    std::string name;
    Architecture architecture = Architecture::heterodyne;
    SweepParams sweep;
    SamplingPlan sampling;
    OscillatorDefects defects;
    LeakageSpec leakage;
    std::vector<TargetSpec> targets;
    ImbalanceSpec imbalance;
    double thermal_noise_floor_db_hz = -300.0; // dB re full scale per Hz
    ProcessingHints processing;
    // Link-budget style table entries carried as metadata only.
    std::vector<std::pair<std::string, std::string>> metadata;

    // Hz of beat frequency per meter of range: 2*BW/(c*T).
    double beat_hz_per_meter() const {
        return 2.0 * sweep.bandwidth_hz / (kSpeedOfLight * sweep.sweep_period_s);
    }
    double range_for_beat(double f_hz) const { return f_hz / beat_hz_per_meter(); }
    double beat_for_range(double r_m) const { return r_m * beat_hz_per_meter(); }
    double doppler_for_velocity(double v_mps) const {
        return 2.0 * v_mps / sweep.center_wavelength_m();
    }
    bool operator==(const RadarScenario&) const = default;
};

enum class Severity { error, warning };

struct ValidationEntry {
    Severity severity = Severity::error;
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;

    bool runnable() const {
        for (const auto& e : entries)
            if (e.severity == Severity::error) return false;
        return true;
    }
    std::string to_string() const;
};

// Report-style validation: collects every violation in a fixed order and
// never throws.
ValidationReport validate_scenario(const RadarScenario& scenario);

struct AxisSet {
    double apparent_range_resolution_m = 0.0;
    double range_bin_spacing_m = 0.0;   // for the scenario's default spectrum NFFT
    double velocity_resolution_mps = 0.0; // lambda/(2*M*T)
    double unambiguous_velocity_mps = 0.0; // lambda/(4*T)
    double desired_bandwidth_hz = 0.0;  // Fs/2
    double max_range_m = 0.0;           // range at the desired bandwidth edge
    double beat_hz_per_meter = 0.0;
    double center_wavelength_m = 0.0;
};

// Pure function of the scenario values; throws InvalidScenario when
// validate_scenario reports errors.
AxisSet derive_axes(const RadarScenario& scenario);

// FNV-1a over the canonical serialized form; embedded in frame dumps and
// experiment reports.
std::uint64_t scenario_hash(const RadarScenario& scenario);

// Shipped presets mirroring the three radar parameter tables.
RadarScenario preset_table1();
RadarScenario preset_table2();
RadarScenario preset_table3();
// Returns the preset for "table1"/"table2"/"table3", nullopt otherwise.
std::optional<RadarScenario> preset_by_name(const std::string& name);

// Critically-sampled quadrature twin of an spc-plan scenario: drops the
// oversampling (rate becomes Fs), divides the per-chirp sample counts by Q
// and zeroes the IF carrier.
RadarScenario aspc_variant(const RadarScenario& scenario);

// Quadrature variant sampled at the full oversampled rate (for MUR
// comparisons under a shared rate).
RadarScenario aspc_variant_at_oversampled_rate(const RadarScenario& scenario);

// Shrinks a preset so the full pipeline runs in seconds: samples_kept scaled
// down to <= 2048 (sweep period scaled with it), 64 chirps, reporting FFTs
// 2^14. Frequencies and rates are untouched.
RadarScenario desk_scale(const RadarScenario& scenario);

} // namespace fmcw
