#include "upconv/config.hpp"

#include "upconv/errors.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

namespace upconv {

using nlohmann::json;

namespace {

void check_object(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
}

template <typename T>
T value_or(const json& j, std::string_view where, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(where) + "." + key + ": wrong type");
    }
}

Range range_or(const json& j, std::string_view where, const char* key, Range fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(std::string(where) + "." + key + ": expected [lo, hi]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

template <typename T, typename Fn>
std::optional<T> section(const json& root, const char* key, Fn&& parse) {
    if (!root.contains(key)) return std::nullopt;
    return parse(root.at(key));
}

WaveguideIndexModel index_model_from_json(const json& j, const std::filesystem::path& base_dir) {
    constexpr std::string_view where = "crystal.index_model";
    check_object(j, where, {"sellmeier", "sellmeier_file", "delta_n", "delta_n_bands"});
    WaveguideIndexModel model;
    if (j.contains("sellmeier") && j.contains("sellmeier_file")) {
        throw ConfigError("crystal.index_model: give either 'sellmeier' or 'sellmeier_file', not both");
    }
    if (j.contains("sellmeier")) {
        const auto& s = j.at("sellmeier");
        if (s.is_string()) {
            if (s.get<std::string>() != congruent_ln_e().name) {
                throw ConfigError("crystal.index_model.sellmeier: unknown built-in set '" + s.get<std::string>() + "'");
            }
            model.bulk = congruent_ln_e();
        } else {
            model.bulk = parse_sellmeier_json(s.dump());
        }
    }
    if (j.contains("sellmeier_file")) {
        std::filesystem::path p = value_or<std::string>(j, where, "sellmeier_file", "");
        if (p.is_relative()) p = base_dir / p;
        model.bulk = load_sellmeier_file(p.string());
    }
    model.default_delta_n = value_or(j, where, "delta_n", 0.0);
    if (j.contains("delta_n_bands")) {
        if (!j.at("delta_n_bands").is_array()) throw ConfigError("crystal.index_model.delta_n_bands: expected array");
        for (const auto& b : j.at("delta_n_bands")) {
            constexpr std::string_view bw = "crystal.index_model.delta_n_bands[]";
            check_object(b, bw, {"min_um", "max_um", "delta_n"});
            if (!b.contains("min_um") || !b.contains("max_um") || !b.contains("delta_n")) {
                throw ConfigError(std::string(bw) + ": needs min_um, max_um and delta_n");
            }
            model.bands.push_back({{value_or(b, bw, "min_um", 0.0), value_or(b, bw, "max_um", 0.0)},
                                   value_or(b, bw, "delta_n", 0.0)});
        }
    }
    try {
        model.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string(where) + ": " + e.what());
    }
    return model;
}

template <typename T>
T validated(T value, std::string_view where) {
    try {
        value.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string(where) + ": " + e.what());
    }
    return value;
}

}  // namespace

CrystalSpec crystal_from_json(const json& j, const std::filesystem::path& base_dir) {
    constexpr std::string_view where = "crystal";
    check_object(j, where, {"length_cm", "poling_period_um", "qpm_order", "temperature_c",
                            "normalized_efficiency_per_w_cm2", "index_model"});
    CrystalSpec c;
    c.length_cm = value_or(j, where, "length_cm", c.length_cm);
    c.poling_period_um = value_or(j, where, "poling_period_um", c.poling_period_um);
    c.qpm_order = value_or(j, where, "qpm_order", c.qpm_order);
    c.temperature_c = value_or(j, where, "temperature_c", c.temperature_c);
    c.normalized_efficiency = value_or(j, where, "normalized_efficiency_per_w_cm2", c.normalized_efficiency);
    if (j.contains("index_model")) c.index_model = index_model_from_json(j.at("index_model"), base_dir);
    return validated(c, where);
}

PumpSource pump_from_json(const json& j) {
    constexpr std::string_view where = "pump";
    check_object(j, where, {"center_nm", "tuning_halfwidth_nm", "power_w"});
    PumpSource p;
    p.center_nm = value_or(j, where, "center_nm", p.center_nm);
    p.tuning_halfwidth_nm = value_or(j, where, "tuning_halfwidth_nm", p.tuning_halfwidth_nm);
    p.power_w = value_or(j, where, "power_w", p.power_w);
    return validated(p, where);
}

DetectorChain chain_from_json(const json& j) {
    constexpr std::string_view where = "chain";
    check_object(j, where, {"coupling_efficiency", "filter_transmission", "apd_quantum_efficiency",
                            "intrinsic_dark_rate_hz", "dead_time_ns", "jitter_fwhm_ps"});
    DetectorChain c;
    c.coupling_efficiency = value_or(j, where, "coupling_efficiency", c.coupling_efficiency);
    c.filter_transmission = value_or(j, where, "filter_transmission", c.filter_transmission);
    c.apd_quantum_efficiency = value_or(j, where, "apd_quantum_efficiency", c.apd_quantum_efficiency);
    c.intrinsic_dark_rate_hz = value_or(j, where, "intrinsic_dark_rate_hz", c.intrinsic_dark_rate_hz);
    c.dead_time_ns = value_or(j, where, "dead_time_ns", c.dead_time_ns);
    c.jitter_fwhm_ps = value_or(j, where, "jitter_fwhm_ps", c.jitter_fwhm_ps);
    return validated(c, where);
}

NoiseModel noise_from_json(const json& j) {
    constexpr std::string_view where = "noise";
    check_object(j, where, {"dark_offset_hz", "linear_coeff_hz_per_w", "quadratic_coeff_hz_per_w2"});
    NoiseModel n;
    n.dark_offset_hz = value_or(j, where, "dark_offset_hz", n.dark_offset_hz);
    n.linear_coeff_hz_per_w = value_or(j, where, "linear_coeff_hz_per_w", n.linear_coeff_hz_per_w);
    n.quadratic_coeff_hz_per_w2 = value_or(j, where, "quadratic_coeff_hz_per_w2", n.quadratic_coeff_hz_per_w2);
    return validated(n, where);
}

SimConfig sim_from_json(const json& j) {
    constexpr std::string_view where = "sim";
    check_object(j, where, {"seed", "duration_s", "signal_rate_hz", "efficiency", "dark_rate_hz", "dead_time_ns",
                            "jitter_sigma_ps", "true_pulse_times_s"});
    SimConfig s;
    s.seed = value_or(j, where, "seed", s.seed);
    s.duration_s = value_or(j, where, "duration_s", s.duration_s);
    s.signal_rate_hz = value_or(j, where, "signal_rate_hz", s.signal_rate_hz);
    s.efficiency = value_or(j, where, "efficiency", s.efficiency);
    s.dark_rate_hz = value_or(j, where, "dark_rate_hz", s.dark_rate_hz);
    s.dead_time_ns = value_or(j, where, "dead_time_ns", s.dead_time_ns);
    s.jitter_sigma_ps = value_or(j, where, "jitter_sigma_ps", s.jitter_sigma_ps);
    if (j.contains("true_pulse_times_s")) {
        s.true_pulse_times_s = value_or<std::vector<double>>(j, where, "true_pulse_times_s", {});
    }
    return validated(s, where);
}

ChannelPlan plan_from_json(const json& j) {
    constexpr std::string_view where = "plan";
    check_object(j, where, {"target_nm", "covered_band_nm", "channel_count", "channels"});
    if (!j.contains("channels") || !j.at("channels").is_array()) {
        throw ConfigError("plan: 'channels' array required");
    }
    ChannelPlan plan;
    plan.target_nm = range_or(j, where, "target_nm", {});
    plan.covered_band_nm = range_or(j, where, "covered_band_nm", {});
    for (const auto& c : j.at("channels")) {
        constexpr std::string_view cw = "plan.channels[]";
        check_object(c, cw, {"index", "signal_min_nm", "signal_max_nm", "pump_center_nm", "poling_period_um",
                             "temperature_c"});
        Channel ch;
        ch.signal_band_nm = {value_or(c, cw, "signal_min_nm", 0.0), value_or(c, cw, "signal_max_nm", 0.0)};
        if (c.contains("pump_center_nm") && !c.at("pump_center_nm").is_null()) {
            ch.pump_center_nm = value_or(c, cw, "pump_center_nm", 0.0);
        }
        ch.crystal.poling_period_um = value_or(c, cw, "poling_period_um", ch.crystal.poling_period_um);
        ch.crystal.temperature_c = value_or(c, cw, "temperature_c", ch.crystal.temperature_c);
        plan.channels.push_back(ch);
    }
    return plan;
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    check_object(root, "config", {"crystal", "pump", "chain", "noise", "sim", "brackets"});

    RunConfig cfg;
    cfg.crystal = section<CrystalSpec>(root, "crystal", [&](const json& j) { return crystal_from_json(j, base_dir); });
    cfg.pump = section<PumpSource>(root, "pump", pump_from_json);
    cfg.chain = section<DetectorChain>(root, "chain", chain_from_json);
    cfg.noise = section<NoiseModel>(root, "noise", noise_from_json);
    cfg.sim = section<SimConfig>(root, "sim", sim_from_json);
    if (root.contains("brackets")) {
        const auto& b = root.at("brackets");
        constexpr std::string_view where = "brackets";
        check_object(b, where, {"signal_nm", "pump_nm", "temperature_c"});
        cfg.brackets.signal_nm = range_or(b, where, "signal_nm", cfg.brackets.signal_nm);
        cfg.brackets.pump_nm = range_or(b, where, "pump_nm", cfg.brackets.pump_nm);
        cfg.brackets.temperature_c = range_or(b, where, "temperature_c", cfg.brackets.temperature_c);
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path.parent_path());
}

json to_json(const WaveguideIndexModel& model) {
    json j;
    if (model.bulk.name == congruent_ln_e().name && model.bulk.coefficients == congruent_ln_e().coefficients) {
        j["sellmeier"] = model.bulk.name;
    } else {
        j["sellmeier"] = json::parse(sellmeier_to_json(model.bulk));
    }
    j["delta_n"] = model.default_delta_n;
    json bands = json::array();
    for (const auto& b : model.bands) {
        bands.push_back({{"min_um", b.band_um.lo}, {"max_um", b.band_um.hi}, {"delta_n", b.delta_n}});
    }
    j["delta_n_bands"] = bands;
    return j;
}

json to_json(const CrystalSpec& c) {
    return {{"length_cm", c.length_cm},
            {"poling_period_um", c.poling_period_um},
            {"qpm_order", c.qpm_order},
            {"temperature_c", c.temperature_c},
            {"normalized_efficiency_per_w_cm2", c.normalized_efficiency},
            {"index_model", to_json(c.index_model)}};
}

json to_json(const PumpSource& p) {
    return {{"center_nm", p.center_nm}, {"tuning_halfwidth_nm", p.tuning_halfwidth_nm}, {"power_w", p.power_w}};
}

json to_json(const DetectorChain& c) {
    return {{"coupling_efficiency", c.coupling_efficiency},
            {"filter_transmission", c.filter_transmission},
            {"apd_quantum_efficiency", c.apd_quantum_efficiency},
            {"intrinsic_dark_rate_hz", c.intrinsic_dark_rate_hz},
            {"dead_time_ns", c.dead_time_ns},
            {"jitter_fwhm_ps", c.jitter_fwhm_ps}};
}

json to_json(const NoiseModel& n) {
    return {{"dark_offset_hz", n.dark_offset_hz},
            {"linear_coeff_hz_per_w", n.linear_coeff_hz_per_w},
            {"quadratic_coeff_hz_per_w2", n.quadratic_coeff_hz_per_w2}};
}

json to_json(const SimConfig& s) {
    json j{{"seed", s.seed},
           {"duration_s", s.duration_s},
           {"signal_rate_hz", s.signal_rate_hz},
           {"efficiency", s.efficiency},
           {"dark_rate_hz", s.dark_rate_hz},
           {"dead_time_ns", s.dead_time_ns},
           {"jitter_sigma_ps", s.jitter_sigma_ps}};
    if (s.true_pulse_times_s) j["true_pulse_times_s"] = *s.true_pulse_times_s;
    return j;
}

json to_json(const RunConfig& cfg) {
    json j = json::object();
    if (cfg.crystal) j["crystal"] = to_json(*cfg.crystal);
    if (cfg.pump) j["pump"] = to_json(*cfg.pump);
    if (cfg.chain) j["chain"] = to_json(*cfg.chain);
    if (cfg.noise) j["noise"] = to_json(*cfg.noise);
    if (cfg.sim) j["sim"] = to_json(*cfg.sim);
    j["brackets"] = {{"signal_nm", {cfg.brackets.signal_nm.lo, cfg.brackets.signal_nm.hi}},
                     {"pump_nm", {cfg.brackets.pump_nm.lo, cfg.brackets.pump_nm.hi}},
                     {"temperature_c", {cfg.brackets.temperature_c.lo, cfg.brackets.temperature_c.hi}}};
    return j;
}

json to_json(const ChannelPlan& plan) {
    json channels = json::array();
    for (std::size_t i = 0; i < plan.channels.size(); ++i) {
        const auto& ch = plan.channels[i];
        channels.push_back({{"index", i},
                            {"signal_min_nm", ch.signal_band_nm.lo},
                            {"signal_max_nm", ch.signal_band_nm.hi},
                            {"pump_center_nm", ch.pump_center_nm ? json(*ch.pump_center_nm) : json(nullptr)},
                            {"poling_period_um", ch.crystal.poling_period_um},
                            {"temperature_c", ch.crystal.temperature_c}});
    }
    return {{"target_nm", {plan.target_nm.lo, plan.target_nm.hi}},
            {"covered_band_nm", {plan.covered_band_nm.lo, plan.covered_band_nm.hi}},
            {"channel_count", plan.channels.size()},
            {"channels", channels}};
}

}  // namespace upconv
