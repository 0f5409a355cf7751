#include "fmcw/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fmcw/errors.hpp"

namespace fmcw {

using nlohmann::json;

namespace {

json dist_to_json(const DistributionSpec& d) {
    json j;
    switch (d.kind) {
        case DistKind::none: j["kind"] = "none"; break;
        case DistKind::uniform: j["kind"] = "uniform"; break;
        case DistKind::gaussian: j["kind"] = "gaussian"; break;
    }
    j["width_hz"] = d.width_hz;
    return j;
}

DistributionSpec dist_from_json(const json& j) {
    DistributionSpec d;
    const std::string kind = j.value("kind", "none");
    if (kind == "none") d.kind = DistKind::none;
    else if (kind == "uniform") d.kind = DistKind::uniform;
    else if (kind == "gaussian") d.kind = DistKind::gaussian;
    else throw IoError("unknown distribution kind: " + kind);
    d.width_hz = j.value("width_hz", 0.0);
    return d;
}

json phase_noise_to_json(const PhaseNoiseSpec& pn) {
    json j;
    j["psd_breakpoints"] = json::array();
    for (const auto& [f, level] : pn.psd_breakpoints)
        j["psd_breakpoints"].push_back({f, level});
    j["rce_enabled"] = pn.rce_enabled;
    j["rce_delay_tau_s"] = pn.rce_delay_tau_s;
    return j;
}

PhaseNoiseSpec phase_noise_from_json(const json& j) {
    PhaseNoiseSpec pn;
    for (const auto& bp : j.value("psd_breakpoints", json::array()))
        pn.psd_breakpoints.emplace_back(bp.at(0).get<double>(), bp.at(1).get<double>());
    pn.rce_enabled = j.value("rce_enabled", false);
    pn.rce_delay_tau_s = j.value("rce_delay_tau_s", 0.0);
    return pn;
}

} // namespace

std::string scenario_to_json(const RadarScenario& sc) {
    json j;
    j["name"] = sc.name;
    j["architecture"] =
        sc.architecture == Architecture::heterodyne ? "heterodyne" : "homodyne";

    json& sw = j["sweep"];
    sw["f_start_hz"] = sc.sweep.f_start_hz;
    sw["bandwidth_hz"] = sc.sweep.bandwidth_hz;
    sw["sweep_period_s"] = sc.sweep.sweep_period_s;
    sw["samples_per_chirp"] = sc.sweep.samples_per_chirp;
    sw["samples_kept"] = sc.sweep.samples_kept;
    sw["chirps_per_frame"] = sc.sweep.chirps_per_frame;

    json& pl = j["sampling"];
    pl["kind"] = sc.sampling.kind == PlanKind::spc ? "spc" : "aspc";
    pl["f_s_hz"] = sc.sampling.f_s_hz;
    pl["oversampling_q"] = {{"num", sc.sampling.oversampling_q.num},
                            {"den", sc.sampling.oversampling_q.den}};
    pl["undersampling_n"] = sc.sampling.undersampling_n;
    pl["f_if_carrier_hz"] = sc.sampling.f_if_carrier_hz;

    json& df = j["defects"];
    df["f_offset_hz"] = sc.defects.f_offset_hz;
    df["f_random_ft"] = dist_to_json(sc.defects.f_random_ft);
    df["f_random_st"] = dist_to_json(sc.defects.f_random_st);
    df["rng_seed"] = sc.defects.rng_seed;

    json& lk = j["leakage"];
    lk["amplitude"] = sc.leakage.amplitude;
    lk["f_beat_hz"] = sc.leakage.f_beat_hz;
    lk["theta_rad"] = sc.leakage.theta_rad;
    lk["phase_noise"] = phase_noise_to_json(sc.leakage.phase_noise);

    j["targets"] = json::array();
    for (const auto& tg : sc.targets) {
        json t;
        t["amplitude"] = tg.amplitude;
        t["range_m"] = tg.range_m;
        t["velocity_mps"] = tg.velocity_mps;
        t["theta_rad"] = tg.theta_rad;
        t["phase_noise"] = phase_noise_to_json(tg.phase_noise);
        t["correlated_with_leakage"] = tg.correlated_with_leakage;
        j["targets"].push_back(t);
    }

    j["imbalance"] = {{"a_e", sc.imbalance.a_e},
                      {"theta_e_rad", sc.imbalance.theta_e_rad}};
    j["thermal_noise_floor_db_hz"] = sc.thermal_noise_floor_db_hz;

    json& pr = j["processing"];
    pr["nfft_estimation"] = sc.processing.nfft_estimation;
    pr["nfft_spectrum"] = sc.processing.nfft_spectrum;
    pr["window"] = sc.processing.window;

    json meta = json::array();
    for (const auto& [k, v] : sc.metadata) meta.push_back({k, v});
    j["metadata"] = meta;

    return j.dump(2) + "\n";
}

RadarScenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("scenario parse error: ") + e.what());
    }

    RadarScenario sc;
    sc.name = j.value("name", "");
    const std::string arch = j.value("architecture", "heterodyne");
    if (arch == "heterodyne") sc.architecture = Architecture::heterodyne;
    else if (arch == "homodyne") sc.architecture = Architecture::homodyne;
    else throw IoError("unknown architecture: " + arch);

    const json& sw = j.at("sweep");
    sc.sweep.f_start_hz = sw.at("f_start_hz").get<double>();
    sc.sweep.bandwidth_hz = sw.at("bandwidth_hz").get<double>();
    sc.sweep.sweep_period_s = sw.at("sweep_period_s").get<double>();
    sc.sweep.samples_per_chirp = sw.at("samples_per_chirp").get<std::uint32_t>();
    sc.sweep.samples_kept = sw.at("samples_kept").get<std::uint32_t>();
    sc.sweep.chirps_per_frame = sw.at("chirps_per_frame").get<std::uint32_t>();

    const json& pl = j.at("sampling");
    const std::string kind = pl.value("kind", "aspc");
    if (kind == "spc") sc.sampling.kind = PlanKind::spc;
    else if (kind == "aspc") sc.sampling.kind = PlanKind::aspc;
    else throw IoError("unknown sampling kind: " + kind);
    sc.sampling.f_s_hz = pl.at("f_s_hz").get<double>();
    if (pl.contains("oversampling_q")) {
        sc.sampling.oversampling_q.num = pl["oversampling_q"].at("num").get<std::uint64_t>();
        sc.sampling.oversampling_q.den = pl["oversampling_q"].at("den").get<std::uint64_t>();
    }
    sc.sampling.undersampling_n = pl.value("undersampling_n", 0u);
    sc.sampling.f_if_carrier_hz = pl.value("f_if_carrier_hz", 0.0);

    if (j.contains("defects")) {
        const json& df = j["defects"];
        sc.defects.f_offset_hz = df.value("f_offset_hz", 0.0);
        if (df.contains("f_random_ft"))
            sc.defects.f_random_ft = dist_from_json(df["f_random_ft"]);
        if (df.contains("f_random_st"))
            sc.defects.f_random_st = dist_from_json(df["f_random_st"]);
        sc.defects.rng_seed = df.value("rng_seed", std::uint64_t{1});
    }

    const json& lk = j.at("leakage");
    sc.leakage.amplitude = lk.at("amplitude").get<double>();
    sc.leakage.f_beat_hz = lk.at("f_beat_hz").get<double>();
    sc.leakage.theta_rad = lk.value("theta_rad", 0.0);
    if (lk.contains("phase_noise"))
        sc.leakage.phase_noise = phase_noise_from_json(lk["phase_noise"]);

    for (const auto& t : j.value("targets", json::array())) {
        TargetSpec tg;
        tg.amplitude = t.at("amplitude").get<double>();
        tg.range_m = t.at("range_m").get<double>();
        tg.velocity_mps = t.value("velocity_mps", 0.0);
        tg.theta_rad = t.value("theta_rad", 0.0);
        if (t.contains("phase_noise"))
            tg.phase_noise = phase_noise_from_json(t["phase_noise"]);
        tg.correlated_with_leakage = t.value("correlated_with_leakage", false);
        sc.targets.push_back(tg);
    }

    if (j.contains("imbalance")) {
        sc.imbalance.a_e = j["imbalance"].value("a_e", 1.0);
        sc.imbalance.theta_e_rad = j["imbalance"].value("theta_e_rad", 0.0);
    }
    sc.thermal_noise_floor_db_hz = j.value("thermal_noise_floor_db_hz", -300.0);

    if (j.contains("processing")) {
        const json& pr = j["processing"];
        sc.processing.nfft_estimation = pr.value("nfft_estimation", 1u << 18);
        sc.processing.nfft_spectrum = pr.value("nfft_spectrum", 1u << 14);
        sc.processing.window = pr.value("window", "hann");
    }

    for (const auto& kv : j.value("metadata", json::array()))
        sc.metadata.emplace_back(kv.at(0).get<std::string>(),
                                 kv.at(1).get<std::string>());

    return sc;
}

void save_scenario(const RadarScenario& scenario, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for write: " + path);
    os << scenario_to_json(scenario);
}

RadarScenario load_scenario(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return scenario_from_json(buf.str());
}

RadarScenario resolve_scenario(const std::string& name_or_path) {
    if (auto preset = preset_by_name(name_or_path)) return *preset;
    return load_scenario(name_or_path);
}

} // namespace fmcw
