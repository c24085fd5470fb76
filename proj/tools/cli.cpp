#include "cli.hpp"

#include "upconv/config.hpp"
#include "upconv/csv.hpp"
#include "upconv/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

namespace upconv::cli {

namespace {

using nlohmann::json;

constexpr double kFwhmPerSigma = 2.3548200450309493;

struct Globals {
    std::string config_path;
    std::string out = "-";
    std::string format;
    std::optional<std::uint64_t> seed;
};

/// Error that maps to the usage exit code.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Context {
public:
    explicit Context(const Globals& g) : globals_(g) {
        if (!g.config_path.empty()) config_ = load_run_config(g.config_path);
        if (!g.format.empty() && g.format != "csv" && g.format != "json" && g.format != "table") {
            throw UsageError("--format must be csv, json or table");
        }
    }

    const RunConfig& config() const { return config_; }
    const Globals& globals() const { return globals_; }

    std::string format(std::string_view fallback) const {
        return globals_.format.empty() ? std::string(fallback) : globals_.format;
    }

    const CrystalSpec& crystal() const {
        if (!config_.crystal) throw ConfigError("this command needs a 'crystal' section in --config");
        return *config_.crystal;
    }
    PumpSource pump() const { return config_.pump.value_or(PumpSource{}); }
    DetectorChain chain() const { return config_.chain.value_or(DetectorChain{}); }
    NoiseModel noise() const { return config_.noise.value_or(NoiseModel{}); }

    std::ostringstream& out() { return buffer_; }
    std::string take() { return buffer_.str(); }

private:
    Globals globals_;
    RunConfig config_;
    std::ostringstream buffer_;
};

using Handler = std::function<void(Context&)>;

Range to_range(const std::vector<double>& v, Range fallback) {
    if (v.empty()) return fallback;
    return {v.at(0), v.at(1)};
}

void write_json(Context& ctx, const json& j) { ctx.out() << j.dump(2) << '\n'; }

void emit_scalar(Context& ctx, const std::string& name, double value, json extra) {
    if (ctx.format("csv") == "json") {
        extra[name] = value;
        write_json(ctx, extra);
    } else {
        ctx.out() << name << '\n' << format_number(value) << '\n';
    }
}

json samples_json(std::span<const SpectrumSample> samples) {
    json arr = json::array();
    for (const auto& s : samples) arr.push_back({s.signal_nm, s.efficiency});
    return arr;
}

// ---------------------------------------------------------------------------

void add_index(CLI::App& app, Handler& action) {
    auto* sub = app.add_subcommand("index", "Refractive index lookup");
    auto wavelength = std::make_shared<double>();
    auto temperature = std::make_shared<std::optional<double>>();
    sub->add_option("--wavelength-um", *wavelength, "Wavelength in um")->required();
    sub->add_option("--temperature-c", *temperature, "Temperature in C (default: crystal temperature or 25)");
    sub->callback([&action, wavelength, temperature] {
        action = [wavelength, temperature](Context& ctx) {
            const CrystalSpec crystal = ctx.config().crystal.value_or(CrystalSpec{});
            const double t = temperature->value_or(crystal.temperature_c);
            const double bulk = refractive_index(crystal.index_model.bulk, *wavelength, t);
            const double eff = effective_index(crystal.index_model, *wavelength, t);
            if (ctx.format("csv") == "json") {
                write_json(ctx, {{"model", crystal.index_model.bulk.name},
                                 {"wavelength_um", *wavelength},
                                 {"temperature_c", t},
                                 {"bulk_index", bulk},
                                 {"effective_index", eff}});
            } else {
                ctx.out() << "wavelength_um,temperature_c,bulk_index,effective_index\n"
                          << format_number(*wavelength) << ',' << format_number(t) << ',' << format_number(bulk)
                          << ',' << format_number(eff) << '\n';
            }
        };
    });
}

void add_qpm(CLI::App& app, Handler& action) {
    auto* qpm = app.add_subcommand("qpm", "Quasi-phase-matching calculations");
    qpm->require_subcommand(1);

    auto* solve = qpm->add_subcommand("solve", "Solve the QPM condition for one variable");
    solve->require_subcommand(1);

    {
        auto* sub = solve->add_subcommand("signal", "Phase-matched signal wavelength for a pump");
        auto pump = std::make_shared<std::optional<double>>();
        auto bracket = std::make_shared<std::vector<double>>();
        sub->add_option("--pump", *pump, "Pump wavelength in nm (default: config pump centre)");
        sub->add_option("--bracket", *bracket, "Signal search bracket in nm")->expected(2);
        sub->callback([&action, pump, bracket] {
            action = [pump, bracket](Context& ctx) {
                const auto& c = ctx.crystal();
                const double p = pump->value_or(ctx.pump().center_nm);
                const double s = solve_signal(p, c, to_range(*bracket, ctx.config().brackets.signal_nm));
                emit_scalar(ctx, "signal_nm", s,
                            {{"pump_nm", p},
                             {"upconverted_nm", upconverted_wavelength(s, p)},
                             {"phase_mismatch_rad_per_um", phase_mismatch(s, p, c)}});
            };
        });
    }
    {
        auto* sub = solve->add_subcommand("pump", "Pump wavelength that phase matches a signal");
        auto signal = std::make_shared<double>();
        auto bracket = std::make_shared<std::vector<double>>();
        sub->add_option("--signal", *signal, "Signal wavelength in nm")->required();
        sub->add_option("--bracket", *bracket, "Pump search bracket in nm")->expected(2);
        sub->callback([&action, signal, bracket] {
            action = [signal, bracket](Context& ctx) {
                const auto& c = ctx.crystal();
                const double p = solve_pump(*signal, c, to_range(*bracket, ctx.config().brackets.pump_nm));
                emit_scalar(ctx, "pump_nm", p,
                            {{"signal_nm", *signal},
                             {"upconverted_nm", upconverted_wavelength(*signal, p)},
                             {"phase_mismatch_rad_per_um", phase_mismatch(*signal, p, c)}});
            };
        });
    }
    {
        auto* sub = solve->add_subcommand("poling", "Poling period for a signal/pump pair");
        auto signal = std::make_shared<double>();
        auto pump = std::make_shared<std::optional<double>>();
        auto temperature = std::make_shared<std::optional<double>>();
        auto order = std::make_shared<std::optional<int>>();
        sub->add_option("--signal", *signal, "Signal wavelength in nm")->required();
        sub->add_option("--pump", *pump, "Pump wavelength in nm (default: config pump centre)");
        sub->add_option("--temperature-c", *temperature, "Crystal temperature in C");
        sub->add_option("--order", *order, "QPM order m");
        sub->callback([&action, signal, pump, temperature, order] {
            action = [signal, pump, temperature, order](Context& ctx) {
                const CrystalSpec c = ctx.config().crystal.value_or(CrystalSpec{});
                const double p = pump->value_or(ctx.pump().center_nm);
                const double t = temperature->value_or(c.temperature_c);
                const int m = order->value_or(c.qpm_order);
                const double period = solve_poling(*signal, p, t, m, c.index_model);
                emit_scalar(ctx, "poling_period_um", period,
                            {{"signal_nm", *signal}, {"pump_nm", p}, {"temperature_c", t}, {"qpm_order", m}});
            };
        });
    }
    {
        auto* sub = solve->add_subcommand("temperature", "Crystal temperature that phase matches a signal/pump pair");
        auto signal = std::make_shared<double>();
        auto pump = std::make_shared<std::optional<double>>();
        auto bracket = std::make_shared<std::vector<double>>();
        sub->add_option("--signal", *signal, "Signal wavelength in nm")->required();
        sub->add_option("--pump", *pump, "Pump wavelength in nm (default: config pump centre)");
        sub->add_option("--bracket", *bracket, "Temperature search bracket in C")->expected(2);
        sub->callback([&action, signal, pump, bracket] {
            action = [signal, pump, bracket](Context& ctx) {
                const auto& c = ctx.crystal();
                const double p = pump->value_or(ctx.pump().center_nm);
                const double t =
                    solve_temperature(*signal, p, c, to_range(*bracket, ctx.config().brackets.temperature_c));
                emit_scalar(ctx, "temperature_c", t,
                            {{"signal_nm", *signal},
                             {"pump_nm", p},
                             {"phase_mismatch_rad_per_um", phase_mismatch(*signal, p, c, t)}});
            };
        });
    }
    {
        auto* sub = qpm->add_subcommand("acceptance", "Normalized acceptance spectrum at a fixed pump");
        auto pump = std::make_shared<std::optional<double>>();
        auto lo = std::make_shared<std::optional<double>>();
        auto hi = std::make_shared<std::optional<double>>();
        auto points = std::make_shared<std::size_t>(2001);
        sub->add_option("--pump", *pump, "Pump wavelength in nm (default: config pump centre)");
        sub->add_option("--min", *lo, "Grid start in nm (default: peak minus four lobe half-widths)");
        sub->add_option("--max", *hi, "Grid end in nm");
        sub->add_option("--points", *points, "Grid points")->check(CLI::Range(3, 10000000));
        sub->callback([&action, pump, lo, hi, points] {
            action = [pump, lo, hi, points](Context& ctx) {
                const auto& c = ctx.crystal();
                const double p = pump->value_or(ctx.pump().center_nm);
                double a = 0, b = 0;
                if (lo->has_value() && hi->has_value()) {
                    a = **lo;
                    b = **hi;
                } else {
                    const double s = solve_signal(p, c, ctx.config().brackets.signal_nm);
                    const double hw = main_lobe_halfwidth_nm(p, c, s);
                    a = lo->value_or(s - 4.0 * hw);
                    b = hi->value_or(s + 4.0 * hw);
                }
                const auto spectrum = acceptance_spectrum(p, c, linspace(a, b, *points));
                if (ctx.format("csv") == "json") {
                    json j{{"pump_nm", p}, {"samples", samples_json(spectrum.samples)}};
                    try {
                        j["fwhm_nm"] = fwhm(spectrum);
                    } catch (const DomainError&) {
                        j["fwhm_nm"] = nullptr;
                    }
                    write_json(ctx, j);
                } else {
                    write_spectrum_csv(ctx.out(), spectrum.samples);
                }
            };
        });
    }
    {
        auto* sub = qpm->add_subcommand("tune-slope", "d(signal)/d(pump) or d(signal)/dT at the operating point");
        auto variable = std::make_shared<std::string>("temperature");
        auto step = std::make_shared<std::optional<double>>();
        auto pump = std::make_shared<std::optional<double>>();
        sub->add_option("--variable", *variable, "pump or temperature")
            ->check(CLI::IsMember({"pump", "temperature"}));
        sub->add_option("--step", *step, "Finite-difference step (nm or K)");
        sub->add_option("--pump", *pump, "Pump wavelength in nm (default: config pump centre)");
        sub->callback([&action, variable, step, pump] {
            action = [variable, step, pump](Context& ctx) {
                const auto& c = ctx.crystal();
                const double p = pump->value_or(ctx.pump().center_nm);
                const bool by_pump = *variable == "pump";
                const double h = step->value_or(by_pump ? 0.1 : 0.5);
                const double slope =
                    tuning_slope(p, c, by_pump ? TuningVariable::PumpWavelength : TuningVariable::Temperature, h,
                                 ctx.config().brackets.signal_nm);
                const std::string unit = by_pump ? "nm_per_nm" : "nm_per_k";
                emit_scalar(ctx, "slope_" + unit, slope, {{"variable", *variable}, {"pump_nm", p}, {"step", h}});
            };
        });
    }
    {
        auto* sub = qpm->add_subcommand("envelope", "Composite acceptance of several pump settings");
        auto pmin = std::make_shared<std::optional<double>>();
        auto pmax = std::make_shared<std::optional<double>>();
        auto n_pumps = std::make_shared<int>(3);
        auto points = std::make_shared<std::size_t>(8001);
        sub->add_option("--pump-min", *pmin, "Lowest pump in nm (default: centre - half-width)");
        sub->add_option("--pump-max", *pmax, "Highest pump in nm (default: centre + half-width)");
        sub->add_option("--n-pumps", *n_pumps, "Number of equally spaced pumps")->check(CLI::PositiveNumber);
        sub->add_option("--points", *points, "Grid points")->check(CLI::Range(3, 10000000));
        sub->callback([&action, pmin, pmax, n_pumps, points] {
            action = [pmin, pmax, n_pumps, points](Context& ctx) {
                const auto& c = ctx.crystal();
                const auto range = ctx.pump().tuning_range();
                const Range pumps{pmin->value_or(range.lo), pmax->value_or(range.hi)};
                const auto env = tuning_envelope(pumps, c, *n_pumps, ctx.config().brackets.signal_nm, *points);
                if (ctx.format("csv") == "json") {
                    write_json(ctx, {{"pump_nm", env.pump_nm},
                                     {"span_nm", env.span_nm},
                                     {"samples", samples_json(env.samples)}});
                } else {
                    write_spectrum_csv(ctx.out(), env.samples);
                }
            };
        });
    }
}

void add_response(CLI::App& app, Handler& action) {
    auto* resp = app.add_subcommand("response", "Pump-power efficiency and noise model");
    resp->require_subcommand(1);
    {
        auto* sub = resp->add_subcommand("curve", "Efficiency and noise versus pump power");
        auto pmin = std::make_shared<double>(0.0);
        auto pmax = std::make_shared<std::optional<double>>();
        auto points = std::make_shared<std::size_t>(201);
        auto powers = std::make_shared<std::vector<double>>();
        sub->add_option("--pmin", *pmin, "Lowest power in W");
        sub->add_option("--pmax", *pmax, "Highest power in W (default: twice the first conversion peak)");
        sub->add_option("--points", *points, "Grid points")->check(CLI::Range(1, 10000000));
        sub->add_option("--power", *powers, "Explicit power values in W (replaces the grid)");
        sub->callback([&action, pmin, pmax, points, powers] {
            action = [pmin, pmax, points, powers](Context& ctx) {
                const auto& c = ctx.crystal();
                std::vector<double> grid = *powers;
                if (grid.empty()) {
                    grid = linspace(*pmin, pmax->value_or(2.0 * peak_conversion_power(c)), *points);
                }
                std::sort(grid.begin(), grid.end());
                const auto rows = efficiency_noise_curve(grid, c, ctx.chain(), ctx.noise());
                if (ctx.format("csv") == "json") {
                    json arr = json::array();
                    for (const auto& r : rows) {
                        arr.push_back({{"power_W", r.pump_power_w}, {"efficiency", r.efficiency}, {"noise_hz", r.noise_hz}});
                    }
                    write_json(ctx, {{"rows", arr}});
                } else {
                    write_curve_csv(ctx.out(), rows);
                }
            };
        });
    }
    {
        auto* sub = resp->add_subcommand("calibrate", "Fit the noise model to (power, rate) points");
        auto points = std::make_shared<std::vector<std::string>>();
        auto dark = std::make_shared<std::optional<double>>();
        auto quadratic = std::make_shared<bool>(false);
        sub->add_option("--point", *points, "Measured point as P_W,rate_Hz (repeatable)")->required();
        sub->add_option("--dark", *dark, "Fixed dark offset in Hz (default: config noise dark offset)");
        sub->add_flag("--quadratic", *quadratic, "Also fit a quadratic term");
        sub->callback([&action, points, dark, quadratic] {
            action = [points, dark, quadratic](Context& ctx) {
                std::vector<NoisePoint> data;
                for (const auto& text : *points) {
                    const auto comma = text.find(',');
                    if (comma == std::string::npos) throw UsageError("--point expects P_W,rate_Hz");
                    try {
                        data.push_back({std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))});
                    } catch (const std::exception&) {
                        throw UsageError("--point expects numeric P_W,rate_Hz, got '" + text + "'");
                    }
                }
                const auto fit = calibrate_noise(data, dark->value_or(ctx.noise().dark_offset_hz), *quadratic);
                if (ctx.format("json") == "csv") {
                    ctx.out() << "dark_offset_hz,linear_coeff_hz_per_w,quadratic_coeff_hz_per_w2,clamped\n"
                              << format_number(fit.model.dark_offset_hz) << ','
                              << format_number(fit.model.linear_coeff_hz_per_w) << ','
                              << format_number(fit.model.quadratic_coeff_hz_per_w2) << ',' << fit.clamped << '\n';
                } else {
                    write_json(ctx, {{"noise", to_json(fit.model)}, {"clamped", fit.clamped}});
                }
            };
        });
    }
}

struct SimOverrides {
    std::optional<double> duration_s, signal_rate_hz, efficiency, dark_rate_hz, dead_time_ns, jitter_sigma_ps;
};

void add_sim_overrides(CLI::App* sub, SimOverrides& o) {
    sub->add_option("--duration", o.duration_s, "Run length in s");
    sub->add_option("--signal-rate", o.signal_rate_hz, "Photon rate at the detector input in Hz");
    sub->add_option("--efficiency", o.efficiency, "Detection efficiency");
    sub->add_option("--dark-rate", o.dark_rate_hz, "Dark count rate in Hz");
    sub->add_option("--dead-time-ns", o.dead_time_ns, "Non-paralyzable dead time in ns");
    sub->add_option("--jitter-sigma-ps", o.jitter_sigma_ps, "Gaussian timing jitter sigma in ps");
}

SimConfig resolve_sim(const Context& ctx, const SimOverrides& o) {
    SimConfig s;
    if (ctx.config().sim) {
        s = *ctx.config().sim;
    } else if (ctx.config().chain) {
        s.dead_time_ns = ctx.config().chain->dead_time_ns;
        s.jitter_sigma_ps = ctx.config().chain->jitter_fwhm_ps / kFwhmPerSigma;
        s.dark_rate_hz = ctx.config().chain->intrinsic_dark_rate_hz;
    }
    if (o.duration_s) s.duration_s = *o.duration_s;
    if (o.signal_rate_hz) s.signal_rate_hz = *o.signal_rate_hz;
    if (o.efficiency) s.efficiency = *o.efficiency;
    if (o.dark_rate_hz) s.dark_rate_hz = *o.dark_rate_hz;
    if (o.dead_time_ns) s.dead_time_ns = *o.dead_time_ns;
    if (o.jitter_sigma_ps) s.jitter_sigma_ps = *o.jitter_sigma_ps;
    if (ctx.globals().seed) s.seed = *ctx.globals().seed;
    s.validate();
    return s;
}

void add_sim(CLI::App& app, Handler& action) {
    auto* sim = app.add_subcommand("sim", "Monte Carlo photon counting");
    sim->require_subcommand(1);
    {
        auto* sub = sim->add_subcommand("counts", "Simulate a detection record");
        auto o = std::make_shared<SimOverrides>();
        add_sim_overrides(sub, *o);
        sub->callback([&action, o] {
            action = [o](Context& ctx) {
                const auto record = simulate_counts(resolve_sim(ctx, *o));
                if (ctx.format("csv") == "json") {
                    write_json(ctx, {{"rng_algorithm", record.rng_algorithm},
                                     {"n_generated", record.n_generated},
                                     {"n_detected", record.n_detected},
                                     {"n_dead_time_lost", record.n_dead_time_lost},
                                     {"timestamps_s", record.timestamps_s}});
                } else {
                    write_timestamps_csv(ctx.out(), record.timestamps_s);
                }
            };
        });
    }
    {
        auto* sub = sim->add_subcommand("jitter", "Timing residual histogram against a known pulse train");
        auto o = std::make_shared<SimOverrides>();
        auto period_ns = std::make_shared<double>(1000.0);
        auto bin_ps = std::make_shared<double>(2.0);
        add_sim_overrides(sub, *o);
        sub->add_option("--pulse-period-ns", *period_ns, "Pulse spacing when the config has no pulse times")
            ->check(CLI::PositiveNumber);
        sub->add_option("--bin-ps", *bin_ps, "Histogram bin width in ps")->check(CLI::PositiveNumber);
        sub->callback([&action, o, period_ns, bin_ps] {
            action = [o, period_ns, bin_ps](Context& ctx) {
                SimConfig s = resolve_sim(ctx, *o);
                if (!s.true_pulse_times_s) {
                    std::vector<double> pulses;
                    const double period = *period_ns * 1e-9;
                    for (std::size_t k = 1; static_cast<double>(k) * period < s.duration_s; ++k) {
                        pulses.push_back(static_cast<double>(k) * period);
                    }
                    s.true_pulse_times_s = std::move(pulses);
                }
                const auto record = simulate_counts(s);
                const auto hist = jitter_histogram(record, *s.true_pulse_times_s, *bin_ps);
                if (ctx.format("csv") == "json") {
                    json bins = json::array();
                    for (const auto& b : hist.bins) bins.push_back({b.dt_ps, b.count});
                    write_json(ctx, {{"bin_ps", hist.bin_ps},
                                     {"fwhm_ps", hist.fwhm_ps},
                                     {"n_events", record.n_detected},
                                     {"bins", bins}});
                } else {
                    write_histogram_csv(ctx.out(), hist.bins);
                }
            };
        });
    }
    {
        auto* sub = sim->add_subcommand("snr", "Poisson-limited signal-to-noise ratio for a counting gate");
        auto o = std::make_shared<SimOverrides>();
        auto gate = std::make_shared<double>(1e-3);
        add_sim_overrides(sub, *o);
        sub->add_option("--gate", *gate, "Counting gate in s")->check(CLI::PositiveNumber);
        sub->callback([&action, o, gate] {
            action = [o, gate](Context& ctx) {
                const SimConfig s = resolve_sim(ctx, *o);
                emit_scalar(ctx, "snr", snr_estimate(s.signal_rate_hz, s.efficiency, s.dark_rate_hz, *gate),
                            {{"gate_s", *gate}});
            };
        });
    }
}

void write_plan(Context& ctx, const ChannelPlan& plan) {
    const std::string fmt = ctx.format("json");
    if (fmt == "json") {
        write_json(ctx, to_json(plan));
        return;
    }
    auto pump_text = [](const Channel& ch) {
        return ch.pump_center_nm ? format_number(*ch.pump_center_nm) : std::string();
    };
    if (fmt == "csv") {
        ctx.out() << "channel,signal_min_nm,signal_max_nm,pump_center_nm\n";
        for (std::size_t i = 0; i < plan.channels.size(); ++i) {
            const auto& ch = plan.channels[i];
            ctx.out() << i << ',' << format_number(ch.signal_band_nm.lo) << ','
                      << format_number(ch.signal_band_nm.hi) << ',' << pump_text(ch) << '\n';
        }
        return;
    }
    auto& os = ctx.out();
    os << std::left << std::setw(9) << "channel" << std::setw(26) << "signal band (nm)" << "pump (nm)\n";
    os << std::fixed << std::setprecision(3);
    for (std::size_t i = 0; i < plan.channels.size(); ++i) {
        const auto& ch = plan.channels[i];
        std::ostringstream band;
        band << std::fixed << std::setprecision(3) << ch.signal_band_nm.lo << " - " << ch.signal_band_nm.hi;
        os << std::setw(9) << i << std::setw(26) << band.str();
        if (ch.pump_center_nm) {
            os << *ch.pump_center_nm;
        } else {
            os << "-";
        }
        os << '\n';
    }
    os << plan.channels.size() << " channels covering " << plan.covered_band_nm.lo << " - "
       << plan.covered_band_nm.hi << " nm\n";
}

struct PlanArgs {
    double lo = 1530.0;
    double hi = 1565.0;
    std::optional<double> width;
};

void add_plan_args(CLI::App* sub, PlanArgs& a) {
    sub->add_option("--min", a.lo, "Target band start in nm");
    sub->add_option("--max", a.hi, "Target band end in nm");
    sub->add_option("--width", a.width, "Per-channel width in nm (default: tunable channel width)");
}

ChannelPlan build_plan(const Context& ctx, const PlanArgs& a) {
    const Range target{a.lo, a.hi};
    if (!ctx.config().crystal) {
        if (!a.width) throw ConfigError("--width is required without a 'crystal' config section");
        return tile_band(target, *a.width);
    }
    const auto& c = *ctx.config().crystal;
    const double width = a.width ? *a.width : channel_width(c, ctx.pump(), ctx.config().brackets.signal_nm);
    return plan_band(target, width, c, ctx.config().brackets.pump_nm);
}

void add_plan(CLI::App& app, Handler& action) {
    auto* plan = app.add_subcommand("plan", "Multi-pump channel planning");
    plan->require_subcommand(1);
    {
        auto* sub = plan->add_subcommand("band", "Tile a signal band with equal-width channels");
        auto a = std::make_shared<PlanArgs>();
        add_plan_args(sub, *a);
        sub->callback([&action, a] {
            action = [a](Context& ctx) { write_plan(ctx, build_plan(ctx, *a)); };
        });
    }
    {
        auto* sub = plan->add_subcommand("validate", "Check channel pump centres against the pump tuning range");
        auto a = std::make_shared<PlanArgs>();
        auto plan_path = std::make_shared<std::string>();
        auto centre = std::make_shared<std::optional<double>>();
        auto halfwidth = std::make_shared<std::optional<double>>();
        add_plan_args(sub, *a);
        sub->add_option("--plan", *plan_path, "Plan JSON written by 'plan band'");
        sub->add_option("--pump-center", *centre, "Pump centre in nm (default: config pump)");
        sub->add_option("--halfwidth", *halfwidth, "Pump tuning half-width in nm (default: config pump)");
        sub->callback([&action, a, plan_path, centre, halfwidth] {
            action = [a, plan_path, centre, halfwidth](Context& ctx) {
                ChannelPlan p;
                if (!plan_path->empty()) {
                    std::ifstream in(*plan_path);
                    if (!in) throw ConfigError("cannot open plan '" + *plan_path + "'");
                    json j;
                    try {
                        j = json::parse(in);
                    } catch (const json::parse_error& e) {
                        throw ConfigError(std::string("plan: invalid JSON: ") + e.what());
                    }
                    p = plan_from_json(j);
                } else {
                    p = build_plan(ctx, *a);
                }
                PumpSource pump = ctx.pump();
                if (*centre) pump.center_nm = **centre;
                if (*halfwidth) pump.tuning_halfwidth_nm = **halfwidth;
                const auto violations = validate_plan(p, pump);
                if (ctx.format("json") == "csv") {
                    ctx.out() << "channel,pump_center_nm,message\n";
                    for (const auto& v : violations) {
                        ctx.out() << v.channel << ','
                                  << (v.pump_center_nm ? format_number(*v.pump_center_nm) : std::string()) << ",\""
                                  << v.message << "\"\n";
                    }
                } else {
                    json arr = json::array();
                    for (const auto& v : violations) {
                        arr.push_back({{"channel", v.channel},
                                       {"pump_center_nm", v.pump_center_nm ? json(*v.pump_center_nm) : json(nullptr)},
                                       {"message", v.message}});
                    }
                    write_json(ctx, {{"feasible", violations.empty()},
                                     {"pump", to_json(pump)},
                                     {"violations", arr}});
                }
            };
        });
    }
    {
        auto* sub = plan->add_subcommand("width", "Signal width one tunable pump channel can cover");
        sub->callback([&action] {
            action = [](Context& ctx) {
                const double w = channel_width(ctx.crystal(), ctx.pump(), ctx.config().brackets.signal_nm);
                emit_scalar(ctx, "channel_width_nm", w, {{"pump", to_json(ctx.pump())}});
            };
        });
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Design and simulation toolkit for tunable up-conversion single-photon detectors", "upconv"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals globals;
    std::string seed_text;
    app.add_option("--config", globals.config_path, "JSON run configuration");
    app.add_option("--out", globals.out, "Output path, '-' for standard output");
    app.add_option("--format", globals.format, "Output format: csv or json (plans also accept table)");
    app.add_option("--seed", seed_text, "Simulation seed (unsigned 64-bit)");

    Handler action;
    add_index(app, action);
    add_qpm(app, action);
    add_response(app, action);
    add_sim(app, action);
    add_plan(app, action);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!seed_text.empty()) {
            std::size_t used = 0;
            const auto v = std::stoull(seed_text, &used, 0);
            if (used != seed_text.size() || seed_text.front() == '-') throw std::invalid_argument(seed_text);
            globals.seed = static_cast<std::uint64_t>(v);
        }
    } catch (const std::exception&) {
        err << "--seed expects an unsigned 64-bit integer\n" << app.help();
        return 2;
    }

    try {
        Context ctx(globals);
        if (!action) throw UsageError("no command selected");
        action(ctx);
        const std::string text = ctx.take();
        if (globals.out == "-") {
            out << text;
        } else {
            std::ofstream file(globals.out, std::ios::binary);
            if (!file) throw ConfigError("cannot write '" + globals.out + "'");
            file << text;
        }
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const FitError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace upconv::cli
