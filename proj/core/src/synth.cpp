#include "fmcw/synth.hpp"

#include <cmath>
#include <numbers>

#include "fmcw/errors.hpp"
#include "fmcw/phase_noise.hpp"
#include "fmcw/rng.hpp"

namespace fmcw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ChirpDraws {
    double ft_hz = 0.0;
    double st_hz = 0.0;
};

double draw_dist(const DistributionSpec& d, Rng& rng) {
    switch (d.kind) {
        case DistKind::none: return 0.0;
        case DistKind::uniform: return rng.uniform_sym(d.width_hz);
        case DistKind::gaussian: return d.width_hz * rng.gaussian();
    }
    return 0.0;
}

// All per-chirp randomness is drawn from named streams derived from the
// scenario seed, so the same seed yields the same Hz values on every path
// regardless of sampling rate or evaluation order.
std::vector<ChirpDraws> draw_defects(const RadarScenario& sc) {
    std::vector<ChirpDraws> draws(sc.sweep.chirps_per_frame);
    for (std::size_t m = 0; m < draws.size(); ++m) {
        Rng ft = stream(sc.defects.rng_seed, "defect-ft", m);
        Rng st = stream(sc.defects.rng_seed, "defect-st", m);
        draws[m].ft_hz = draw_dist(sc.defects.f_random_ft, ft);
        draws[m].st_hz = draw_dist(sc.defects.f_random_st, st);
    }
    return draws;
}

std::vector<double> chirp_phase_noise(const PhaseNoiseSpec& spec,
                                      std::size_t count, double rate,
                                      std::uint64_t seed) {
    if (spec.empty()) return std::vector<double>(count, 0.0);
    return synth_phase_noise(spec, count, rate, seed).samples;
}

void require_runnable(const RadarScenario& sc) {
    const auto report = validate_scenario(sc);
    if (!report.runnable())
        throw InvalidScenario("scenario not runnable:\n" + report.to_string());
}

struct SynthSetup {
    double rate;
    double ts;
    std::uint32_t total;
    std::uint32_t kept;
    std::uint32_t discard;
    std::uint32_t chirps;
    double sigma_thermal;
    std::vector<ChirpDraws> draws;
    std::vector<double> target_beat;
    std::vector<double> target_doppler;
};

SynthSetup make_setup(const RadarScenario& sc) {
    SynthSetup s;
    s.rate = sc.sampling.effective_rate_hz();
    s.ts = 1.0 / s.rate;
    s.total = sc.sweep.samples_per_chirp;
    s.kept = sc.sweep.samples_kept;
    s.discard = s.total - s.kept;
    s.chirps = sc.sweep.chirps_per_frame;
    s.sigma_thermal =
        std::sqrt(std::pow(10.0, sc.thermal_noise_floor_db_hz / 10.0) * s.rate / 2.0);
    s.draws = draw_defects(sc);
    for (const auto& tg : sc.targets) {
        s.target_beat.push_back(sc.beat_for_range(tg.range_m));
        s.target_doppler.push_back(sc.doppler_for_velocity(tg.velocity_mps));
    }
    return s;
}

void fill_truth(SynthTruth* truth, const RadarScenario& sc, const SynthSetup& s,
                double f_carrier, double f_offset) {
    if (!truth) return;
    truth->rate_hz = s.rate;
    truth->discarded_samples = s.discard;
    truth->target_beat_hz = s.target_beat;
    truth->target_doppler_hz = s.target_doppler;
    truth->chirps.resize(s.chirps);
    for (std::size_t m = 0; m < s.chirps; ++m) {
        auto& ct = truth->chirps[m];
        ct.f_random_ft_hz = s.draws[m].ft_hz;
        ct.f_random_st_hz = s.draws[m].st_hz;
        ct.f_fast_leakage_hz =
            f_carrier + f_offset + s.draws[m].ft_hz + sc.leakage.f_beat_hz;
        ct.theta_slow_leakage_rad =
            kTwoPi * (f_carrier + f_offset + s.draws[m].st_hz) *
                sc.sweep.sweep_period_s * static_cast<double>(m) +
            sc.leakage.theta_rad;
    }
}

} // namespace

FrameCube synth_spc_frames(const RadarScenario& sc, SynthTruth* truth) {
    require_runnable(sc);
    if (sc.architecture != Architecture::heterodyne)
        throw InvalidScenario("spc synthesis requires a heterodyne scenario");
    if (sc.sampling.kind != PlanKind::spc)
        throw InvalidScenario("spc synthesis requires an spc sampling plan");

    const SynthSetup s = make_setup(sc);
    const double f_c = sc.sampling.f_if_carrier_hz;
    const double f_off = sc.defects.f_offset_hz;
    const double T = sc.sweep.sweep_period_s;
    fill_truth(truth, sc, s, f_c, f_off);

    FrameCube cube = FrameCube::make_real(s.kept, s.chirps, s.rate);
    cube.set_provenance(scenario_hash(sc), "spc");

    for (std::size_t m = 0; m < s.chirps; ++m) {
        const double f_fast =
            f_c + f_off + s.draws[m].ft_hz + sc.leakage.f_beat_hz;
        const double th_slow =
            kTwoPi * (f_c + f_off + s.draws[m].st_hz) * T * static_cast<double>(m);
        const auto pn_leak =
            chirp_phase_noise(sc.leakage.phase_noise, s.total, s.rate,
                              stream_seed(sc.defects.rng_seed, "pn-leak", m));
        std::vector<std::vector<double>> pn_tg(sc.targets.size());
        for (std::size_t r = 0; r < sc.targets.size(); ++r) {
            if (sc.targets[r].correlated_with_leakage)
                pn_tg[r] = pn_leak;
            else
                pn_tg[r] = chirp_phase_noise(
                    sc.targets[r].phase_noise, s.total, s.rate,
                    stream_seed(sc.defects.rng_seed, "pn-target", r, m));
        }
        Rng thermal = stream(sc.defects.rng_seed, "thermal-i", m);

        auto row = cube.real_chirp(m);
        for (std::size_t j = 0; j < s.kept; ++j) {
            const std::size_t n = s.discard + j;
            const double t = static_cast<double>(n) * s.ts;
            double v = sc.leakage.amplitude *
                       std::cos(kTwoPi * f_fast * t + th_slow +
                                sc.leakage.theta_rad + pn_leak[n]);
            for (std::size_t r = 0; r < sc.targets.size(); ++r) {
                const double arg =
                    kTwoPi * (f_fast + s.target_beat[r]) * t +
                    kTwoPi * (f_c + f_off + s.draws[m].st_hz + s.target_doppler[r]) *
                        T * static_cast<double>(m) +
                    sc.targets[r].theta_rad + pn_tg[r][n];
                v += sc.targets[r].amplitude * std::cos(arg);
            }
            if (s.sigma_thermal > 0.0) v += s.sigma_thermal * thermal.gaussian();
            row[j] = v;
        }
    }
    return cube;
}

namespace {

std::pair<FrameCube, FrameCube> synth_iq_core(const RadarScenario& sc,
                                              const char* path_tag,
                                              SynthTruth* truth) {
    const SynthSetup s = make_setup(sc);
    const double f_c = sc.sampling.f_if_carrier_hz;
    const double f_off = sc.defects.f_offset_hz;
    const double T = sc.sweep.sweep_period_s;
    const double a_e = sc.imbalance.a_e;
    const double th_e = sc.imbalance.theta_e_rad;
    fill_truth(truth, sc, s, f_c, f_off);

    FrameCube ci = FrameCube::make_real(s.kept, s.chirps, s.rate);
    FrameCube cq = FrameCube::make_real(s.kept, s.chirps, s.rate);
    const std::uint64_t hash = scenario_hash(sc);
    ci.set_provenance(hash, std::string(path_tag) + "-i");
    cq.set_provenance(hash, std::string(path_tag) + "-q");

    for (std::size_t m = 0; m < s.chirps; ++m) {
        const double f_fast =
            f_c + f_off + s.draws[m].ft_hz + sc.leakage.f_beat_hz;
        const double th_slow =
            kTwoPi * (f_c + f_off + s.draws[m].st_hz) * T * static_cast<double>(m);
        const auto pn_leak =
            chirp_phase_noise(sc.leakage.phase_noise, s.total, s.rate,
                              stream_seed(sc.defects.rng_seed, "pn-leak", m));
        std::vector<std::vector<double>> pn_tg(sc.targets.size());
        for (std::size_t r = 0; r < sc.targets.size(); ++r) {
            if (sc.targets[r].correlated_with_leakage)
                pn_tg[r] = pn_leak;
            else
                pn_tg[r] = chirp_phase_noise(
                    sc.targets[r].phase_noise, s.total, s.rate,
                    stream_seed(sc.defects.rng_seed, "pn-target", r, m));
        }
        Rng thermal_i = stream(sc.defects.rng_seed, "thermal-i", m);
        Rng thermal_q = stream(sc.defects.rng_seed, "thermal-q", m);

        auto row_i = ci.real_chirp(m);
        auto row_q = cq.real_chirp(m);
        for (std::size_t j = 0; j < s.kept; ++j) {
            const std::size_t n = s.discard + j;
            const double t = static_cast<double>(n) * s.ts;
            const double arg_leak =
                kTwoPi * f_fast * t + th_slow + sc.leakage.theta_rad + pn_leak[n];
            double vi = sc.leakage.amplitude * std::cos(arg_leak);
            double vq = sc.leakage.amplitude * a_e * std::sin(arg_leak + th_e);
            for (std::size_t r = 0; r < sc.targets.size(); ++r) {
                const double arg =
                    kTwoPi * (f_fast + s.target_beat[r]) * t +
                    kTwoPi * (f_c + f_off + s.draws[m].st_hz + s.target_doppler[r]) *
                        T * static_cast<double>(m) +
                    sc.targets[r].theta_rad + pn_tg[r][n];
                vi += sc.targets[r].amplitude * std::cos(arg);
                vq += sc.targets[r].amplitude * a_e * std::sin(arg + th_e);
            }
            if (s.sigma_thermal > 0.0) {
                vi += s.sigma_thermal * thermal_i.gaussian();
                vq += s.sigma_thermal * thermal_q.gaussian();
            }
            row_i[j] = vi;
            row_q[j] = vq;
        }
    }
    return {std::move(ci), std::move(cq)};
}

} // namespace

std::pair<FrameCube, FrameCube> synth_aspc_iq_frames(const RadarScenario& sc,
                                                     SynthTruth* truth) {
    require_runnable(sc);
    if (sc.architecture != Architecture::heterodyne)
        throw InvalidScenario("quadrature IF synthesis requires a heterodyne scenario");
    if (sc.sampling.kind != PlanKind::aspc)
        throw InvalidScenario("quadrature IF synthesis requires an aspc sampling plan "
                              "(rate Fs, no oversampling)");
    return synth_iq_core(sc, "aspc", truth);
}

std::pair<FrameCube, FrameCube> synth_homodyne_iq_frames(const RadarScenario& sc,
                                                         SynthTruth* truth) {
    require_runnable(sc);
    if (sc.architecture != Architecture::homodyne)
        throw InvalidScenario("baseband synthesis requires a homodyne scenario");
    // Validation already forces f_if_carrier = 0 and f_offset = 0 here.
    return synth_iq_core(sc, "homodyne", truth);
}

FrameCube combine_iq(const FrameCube& i, const FrameCube& q) {
    if (!i.is_real() || !q.is_real() || !i.same_shape(q))
        throw DimensionMismatch("combine_iq needs two real cubes of equal shape");
    FrameCube out = FrameCube::make_complex(i.samples(), i.chirps(), i.rate_hz());
    out.set_provenance(i.scenario_hash(), i.path_tag() + "+q");
    for (std::size_t m = 0; m < i.chirps(); ++m)
        for (std::size_t n = 0; n < i.samples(); ++n)
            out.cplx_at(n, m) = {i.real_at(n, m), q.real_at(n, m)};
    return out;
}

FrameCube mix_fixed_lo(const FrameCube& frames, const RadarScenario& sc,
                       double lo_freq_hz) {
    if (!frames.is_real())
        throw DimensionMismatch("mix_fixed_lo expects a real frame");
    const double ts = 1.0 / frames.rate_hz();
    const double T = sc.sweep.sweep_period_s;
    const std::uint32_t discard = sc.sweep.samples_per_chirp - sc.sweep.samples_kept;
    FrameCube out = FrameCube::make_real(frames.samples(), frames.chirps(),
                                         frames.rate_hz());
    out.set_provenance(frames.scenario_hash(), frames.path_tag() + "+fixed-lo");
    for (std::size_t m = 0; m < frames.chirps(); ++m) {
        for (std::size_t n = 0; n < frames.samples(); ++n) {
            const double t = T * static_cast<double>(m) +
                             static_cast<double>(discard + n) * ts;
            out.real_at(n, m) =
                frames.real_at(n, m) * std::cos(kTwoPi * lo_freq_hz * t);
        }
    }
    return out;
}

} // namespace fmcw
