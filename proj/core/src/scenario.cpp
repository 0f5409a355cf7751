#include "fmcw/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fmcw/errors.hpp"
#include "fmcw/rng.hpp"
#include "fmcw/scenario_io.hpp"

namespace fmcw {

double spc_carrier_for(double f_s_hz, Ratio q, std::uint32_t n) {
    return f_s_hz * static_cast<double>(q.num) *
           static_cast<double>(4ull * n + 1ull) /
           (4.0 * static_cast<double>(q.den));
}

double PhaseNoiseSpec::psd_at(double f_hz) const {
    if (psd_breakpoints.empty()) return 0.0;
    const auto& bp = psd_breakpoints;
    double level_db;
    if (f_hz <= bp.front().first) {
        level_db = bp.front().second;
    } else if (f_hz >= bp.back().first) {
        level_db = bp.back().second;
    } else {
        std::size_t i = 1;
        while (i < bp.size() && bp[i].first < f_hz) ++i;
        const double lf0 = std::log10(bp[i - 1].first);
        const double lf1 = std::log10(bp[i].first);
        const double t = (std::log10(f_hz) - lf0) / (lf1 - lf0);
        level_db = bp[i - 1].second + t * (bp[i].second - bp[i - 1].second);
    }
    return std::pow(10.0, level_db / 10.0);
}

PhaseNoiseSpec PhaseNoiseSpec::flat_for_rms(double rms_rad, double f_lo_hz,
                                            double f_hi_hz) {
    PhaseNoiseSpec spec;
    const double s = rms_rad * rms_rad / (f_hi_hz - f_lo_hz);
    const double level_db = 10.0 * std::log10(s);
    spec.psd_breakpoints = {{f_lo_hz, level_db}, {f_hi_hz, level_db}};
    return spec;
}

PhaseNoiseSpec PhaseNoiseSpec::scaled(double delta_db) const {
    PhaseNoiseSpec out = *this;
    for (auto& [f, level] : out.psd_breakpoints) level += delta_db;
    return out;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    if (entries.empty()) {
        os << "scenario valid\n";
        return os.str();
    }
    for (const auto& e : entries) {
        os << (e.severity == Severity::error ? "error" : "warning") << " ["
           << e.field << "] " << e.message << "\n";
    }
    return os.str();
}

namespace {

void check_phase_noise(const PhaseNoiseSpec& pn, const std::string& field,
                       std::vector<ValidationEntry>& out) {
    double prev = -1.0;
    for (const auto& [f, level] : pn.psd_breakpoints) {
        if (f <= prev)
            out.push_back({Severity::error, field,
                           "psd breakpoint offsets must be strictly increasing"});
        if (f <= 0.0)
            out.push_back({Severity::error, field, "psd breakpoint offset must be > 0"});
        if (!std::isfinite(level))
            out.push_back({Severity::error, field, "psd breakpoint level must be finite"});
        prev = f;
    }
    if (pn.rce_enabled && pn.rce_delay_tau_s < 0.0)
        out.push_back({Severity::error, field, "rce delay must be >= 0"});
}

} // namespace

ValidationReport validate_scenario(const RadarScenario& sc) {
    ValidationReport report;
    auto& out = report.entries;

    const auto& sw = sc.sweep;
    if (sw.samples_per_chirp == 0 || sw.samples_kept == 0)
        out.push_back({Severity::error, "sweep", "sample counts must be > 0"});
    if (sw.samples_kept > sw.samples_per_chirp)
        out.push_back({Severity::error, "sweep",
                       "samples_kept must not exceed samples_per_chirp"});
    if (sw.bandwidth_hz <= 0.0)
        out.push_back({Severity::error, "sweep", "bandwidth must be > 0"});
    if (sw.sweep_period_s <= 0.0)
        out.push_back({Severity::error, "sweep", "sweep period must be > 0"});
    if (sw.chirps_per_frame == 0)
        out.push_back({Severity::error, "sweep", "chirps_per_frame must be > 0"});

    const auto& pl = sc.sampling;
    if (pl.f_s_hz <= 0.0)
        out.push_back({Severity::error, "sampling", "F_s must be > 0"});
    if (pl.oversampling_q.num == 0 || pl.oversampling_q.den == 0)
        out.push_back({Severity::error, "sampling", "oversampling ratio must be positive"});
    if (pl.kind == PlanKind::spc && pl.f_s_hz > 0.0) {
        const double want = spc_carrier_for(pl.f_s_hz, pl.oversampling_q,
                                            pl.undersampling_n);
        if (pl.f_if_carrier_hz != want) {
            std::ostringstream msg;
            msg << "strategic frequency planning: f_IF_carrier must equal "
                   "Q*Fs*(4N+1)/4 = " << want << " Hz, got " << pl.f_if_carrier_hz;
            out.push_back({Severity::error, "sampling", msg.str()});
        }
    }

    // Sweep period and sample count should describe the same chirp duration.
    if (sw.sweep_period_s > 0.0 && pl.f_s_hz > 0.0) {
        const double expected = sw.sweep_period_s * pl.effective_rate_hz();
        if (std::abs(expected - static_cast<double>(sw.samples_per_chirp)) > 1.0)
            out.push_back({Severity::warning, "sweep",
                           "samples_per_chirp does not match sweep_period * rate"});
    }

    if (sc.architecture == Architecture::homodyne) {
        if (pl.f_if_carrier_hz != 0.0)
            out.push_back({Severity::error, "architecture",
                           "homodyne forbids an IF carrier (direct down-conversion)"});
        if (sc.defects.f_offset_hz != 0.0)
            out.push_back({Severity::error, "architecture",
                           "homodyne forbids f_offset (removed by direct down-conversion)"});
        if (pl.kind == PlanKind::spc)
            out.push_back({Severity::error, "architecture",
                           "homodyne has no IF stage; spc sampling plan not applicable"});
    }

    const double rate = pl.effective_rate_hz();
    if (sc.leakage.amplitude <= 0.0)
        out.push_back({Severity::error, "leakage", "amplitude must be > 0"});
    if (sc.leakage.f_beat_hz < 0.0 || (rate > 0.0 && sc.leakage.f_beat_hz >= rate / 2.0))
        out.push_back({Severity::error, "leakage",
                       "f_beat_leakage must lie in [0, rate/2)"});
    check_phase_noise(sc.leakage.phase_noise, "leakage.phase_noise", out);

    const double v_unamb = sw.sweep_period_s > 0.0
                               ? sw.center_wavelength_m() / (4.0 * sw.sweep_period_s)
                               : 0.0;
    for (std::size_t r = 0; r < sc.targets.size(); ++r) {
        const auto& tg = sc.targets[r];
        const std::string field = "targets[" + std::to_string(r) + "]";
        if (tg.amplitude <= 0.0)
            out.push_back({Severity::error, field, "amplitude must be > 0"});
        if (tg.range_m < 0.0)
            out.push_back({Severity::error, field, "range must be >= 0"});
        // Hard limit: representable without full wrap at the sampled rate. The
        // desired-band edge (Fs/2) is advisory; probe targets beyond it are
        // legal so aliasing behavior can be demonstrated.
        if (rate > 0.0 && sw.sweep_period_s > 0.0) {
            const double f_beat = sc.beat_for_range(tg.range_m);
            if (f_beat >= rate)
                out.push_back({Severity::error, field,
                               "range beats beyond the sampled domain"});
            else if (f_beat >= pl.f_s_hz / 2.0)
                out.push_back({Severity::warning, field,
                               "range beyond the desired maximum detectable range"});
        }
        if (v_unamb > 0.0 && std::abs(tg.velocity_mps) >= v_unamb)
            out.push_back({Severity::error, field,
                           "|velocity| must be below the unambiguous velocity"});
        check_phase_noise(tg.phase_noise, field + ".phase_noise", out);
    }

    if (sc.imbalance.a_e <= 0.0)
        out.push_back({Severity::error, "imbalance", "A_E must be > 0"});
    if (!std::isfinite(sc.thermal_noise_floor_db_hz))
        out.push_back({Severity::error, "thermal", "thermal noise level must be finite"});

    return report;
}

AxisSet derive_axes(const RadarScenario& sc) {
    const auto report = validate_scenario(sc);
    if (!report.runnable())
        throw InvalidScenario("derive_axes: " + report.to_string());

    AxisSet ax;
    ax.apparent_range_resolution_m = sc.sweep.apparent_range_resolution_m();
    ax.beat_hz_per_meter = sc.beat_hz_per_meter();
    ax.center_wavelength_m = sc.sweep.center_wavelength_m();
    ax.velocity_resolution_mps =
        ax.center_wavelength_m /
        (2.0 * static_cast<double>(sc.sweep.chirps_per_frame) * sc.sweep.sweep_period_s);
    ax.unambiguous_velocity_mps =
        ax.center_wavelength_m / (4.0 * sc.sweep.sweep_period_s);
    ax.desired_bandwidth_hz = sc.sampling.f_s_hz / 2.0;
    ax.max_range_m = sc.range_for_beat(ax.desired_bandwidth_hz);
    ax.range_bin_spacing_m = sc.range_for_beat(
        sc.sampling.effective_rate_hz() /
        static_cast<double>(sc.processing.nfft_spectrum));
    return ax;
}

std::uint64_t scenario_hash(const RadarScenario& scenario) {
    return fnv1a64(scenario_to_json(scenario));
}

namespace {

// Synthetic skirts; the last breakpoint stays below half of the smallest
// sampling rate a preset is processed at, and the level clamps flat beyond it.
PhaseNoiseSpec default_heterodyne_skirt() {
    PhaseNoiseSpec pn;
    pn.psd_breakpoints = {{1e3, -75.0}, {1e4, -87.0}, {1e5, -100.0}, {1.2e6, -115.0}};
    return pn;
}

PhaseNoiseSpec default_homodyne_skirt() {
    PhaseNoiseSpec pn;
    pn.psd_breakpoints = {{1e3, -72.0}, {1e4, -84.0}, {1e5, -97.0}, {2.4e6, -112.0}};
    pn.rce_enabled = true;
    pn.rce_delay_tau_s = 100e-9;
    return pn;
}

RadarScenario heterodyne_base() {
    RadarScenario sc;
    sc.architecture = Architecture::heterodyne;
    sc.sweep.f_start_hz = 14.35e9;
    sc.sweep.bandwidth_hz = 150e6;
    sc.sweep.sweep_period_s = 880e-6;
    sc.sweep.samples_per_chirp = 8800;
    sc.sweep.samples_kept = 8192;
    sc.sweep.chirps_per_frame = 256;
    sc.sampling.kind = PlanKind::spc;
    sc.sampling.f_s_hz = 2.5e6;
    sc.sampling.oversampling_q = {4, 1};
    sc.sampling.undersampling_n = 0;
    sc.sampling.f_if_carrier_hz = spc_carrier_for(2.5e6, {4, 1}, 0);
    sc.defects.rng_seed = 1;
    sc.leakage.amplitude = 1.0;
    sc.leakage.f_beat_hz = 100e3;
    sc.leakage.theta_rad = 0.7;
    sc.leakage.phase_noise = default_heterodyne_skirt();
    // Uncorrected operating point of the quadrature path: analytic image
    // rejection of about 52.62 dB.
    sc.imbalance.a_e = 1.003595;
    sc.imbalance.theta_e_rad = 0.003;
    sc.thermal_noise_floor_db_hz = -160.0;
    sc.processing.nfft_estimation = 1u << 20;
    sc.processing.nfft_spectrum = 1u << 16;
    sc.processing.window = "hann";
    sc.metadata = {{"radar_configuration", "quasi-monostatic"},
                   {"transmit_power_dbm", "30"},
                   {"antenna_gain_dbi", "16"},
                   {"true_range_resolution_m", "1"},
                   {"phase_noise_label", "synthetic"}};
    return sc;
}

} // namespace

RadarScenario preset_table1() {
    RadarScenario sc = heterodyne_base();
    sc.name = "table1";
    return sc;
}

RadarScenario preset_table2() {
    RadarScenario sc = heterodyne_base();
    sc.name = "table2";
    TargetSpec drone;
    drone.amplitude = 0.01;
    drone.range_m = 100.0;
    drone.velocity_mps = 4.95; // ascent speed of the larger drone
    drone.theta_rad = 0.3;
    sc.targets.push_back(drone);
    return sc;
}

RadarScenario preset_table3() {
    RadarScenario sc;
    sc.name = "table3";
    sc.architecture = Architecture::homodyne;
    sc.sweep.f_start_hz = 14.35e9;
    sc.sweep.bandwidth_hz = 150e6;
    sc.sweep.sweep_period_s = 500e-6;
    sc.sweep.samples_per_chirp = 2500;
    sc.sweep.samples_kept = 2048;
    sc.sweep.chirps_per_frame = 256;
    sc.sampling.kind = PlanKind::aspc;
    sc.sampling.f_s_hz = 5e6;
    sc.sampling.oversampling_q = {1, 1};
    sc.sampling.undersampling_n = 0;
    sc.sampling.f_if_carrier_hz = 0.0;
    sc.defects.rng_seed = 1;
    sc.leakage.amplitude = 1.0;
    sc.leakage.f_beat_hz = 5e3;
    sc.leakage.theta_rad = 0.4;
    sc.leakage.phase_noise = default_homodyne_skirt();
    sc.imbalance.a_e = 1.02;
    sc.imbalance.theta_e_rad = 0.02;
    TargetSpec drone;
    drone.amplitude = 0.01;
    drone.range_m = 40.0;
    drone.velocity_mps = 0.0; // hovering
    drone.theta_rad = 0.9;
    sc.targets.push_back(drone);
    sc.thermal_noise_floor_db_hz = -160.0;
    sc.processing.nfft_estimation = 1u << 19;
    sc.processing.nfft_spectrum = 1u << 16;
    sc.processing.window = "hann";
    sc.metadata = {{"radar_configuration", "quasi-monostatic"},
                   {"transmit_power_dbm", "42"},
                   {"antenna_gain_dbi", "16"},
                   {"true_range_resolution_m", "1"},
                   {"phase_noise_label", "synthetic"}};
    return sc;
}

std::optional<RadarScenario> preset_by_name(const std::string& name) {
    if (name == "table1") return preset_table1();
    if (name == "table2") return preset_table2();
    if (name == "table3") return preset_table3();
    return std::nullopt;
}

RadarScenario aspc_variant(const RadarScenario& scenario) {
    if (scenario.sampling.kind != PlanKind::spc)
        return scenario;
    RadarScenario out = scenario;
    const auto q = scenario.sampling.oversampling_q;
    const auto scale = [&](std::uint32_t v) {
        const std::uint64_t scaled = static_cast<std::uint64_t>(v) * q.den / q.num;
        return static_cast<std::uint32_t>(scaled);
    };
    out.sweep.samples_per_chirp = scale(scenario.sweep.samples_per_chirp);
    out.sweep.samples_kept = scale(scenario.sweep.samples_kept);
    out.sampling.kind = PlanKind::aspc;
    out.sampling.oversampling_q = {1, 1};
    out.sampling.undersampling_n = 0;
    out.sampling.f_if_carrier_hz = 0.0;
    if (!out.name.empty()) out.name += "-aspc";
    return out;
}

RadarScenario aspc_variant_at_oversampled_rate(const RadarScenario& scenario) {
    RadarScenario out = scenario;
    out.sampling.f_s_hz = scenario.sampling.effective_rate_hz();
    out.sampling.kind = PlanKind::aspc;
    out.sampling.oversampling_q = {1, 1};
    out.sampling.undersampling_n = 0;
    out.sampling.f_if_carrier_hz = 0.0;
    if (!out.name.empty()) out.name += "-aspc-fullrate";
    return out;
}

RadarScenario desk_scale(const RadarScenario& scenario) {
    RadarScenario out = scenario;
    std::uint32_t factor = 1;
    while (out.sweep.samples_kept / (factor * 2) >= 2048) factor *= 2;
    if (out.sweep.samples_kept / factor > 2048) factor *= 2;
    if (factor > 1) {
        out.sweep.samples_per_chirp /= factor;
        out.sweep.samples_kept /= factor;
        out.sweep.sweep_period_s /= static_cast<double>(factor);
    }
    out.sweep.chirps_per_frame = 64;
    out.processing.nfft_estimation = 1u << 18;
    out.processing.nfft_spectrum = 1u << 14;
    if (!out.name.empty()) out.name += "-desk";
    return out;
}

} // namespace fmcw
