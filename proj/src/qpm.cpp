#include "upconv/qpm.hpp"

#include "upconv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace upconv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double interpolate_crossing(const SpectrumSample& a, const SpectrumSample& b, double level) {
    if (b.efficiency == a.efficiency) return a.signal_nm;
    const double t = (level - a.efficiency) / (b.efficiency - a.efficiency);
    return a.signal_nm + t * (b.signal_nm - a.signal_nm);
}

std::size_t argmax(std::span<const SpectrumSample> samples) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].efficiency > samples[best].efficiency) best = i;
    }
    return best;
}

void require_peak(std::span<const SpectrumSample> samples, std::size_t peak) {
    if (samples.size() < 3) throw DomainError("spectrum needs at least three samples");
    const double top = samples[peak].efficiency;
    if (!(top > 0.0) || !std::isfinite(top)) throw DomainError("spectrum has no positive peak");
}

}  // namespace

void CrystalSpec::validate() const {
    if (!(length_cm > 0.0)) throw DomainError("crystal length must be > 0");
    if (!(poling_period_um > 0.0)) throw DomainError("poling period must be > 0");
    if (qpm_order < 1) throw DomainError("QPM order must be >= 1");
    if (!(normalized_efficiency > 0.0)) throw DomainError("normalized efficiency must be > 0");
    index_model.validate();
}

InteractionPoint InteractionPoint::from_signal_pump(double signal_nm, double pump_nm, double temperature_c) {
    return {signal_nm, pump_nm, upconverted_wavelength(signal_nm, pump_nm), temperature_c};
}

double InteractionPoint::energy_mismatch() const noexcept {
    const double lhs = 1.0 / upconverted_nm;
    return std::abs(lhs - 1.0 / signal_nm - 1.0 / pump_nm) / lhs;
}

double upconverted_wavelength(double signal_nm, double pump_nm) {
    if (!(signal_nm > 0.0) || !(pump_nm > 0.0)) {
        throw DomainError("signal and pump wavelengths must be positive");
    }
    return 1.0 / (1.0 / signal_nm + 1.0 / pump_nm);
}

double phase_mismatch(double signal_nm, double pump_nm, const CrystalSpec& crystal, double temperature_c) {
    const double uc_um = upconverted_wavelength(signal_nm, pump_nm) * 1e-3;
    const double s_um = signal_nm * 1e-3;
    const double p_um = pump_nm * 1e-3;
    const auto& model = crystal.index_model;
    const double k_uc = effective_index(model, uc_um, temperature_c) / uc_um;
    const double k_s = effective_index(model, s_um, temperature_c) / s_um;
    const double k_p = effective_index(model, p_um, temperature_c) / p_um;
    return kTwoPi * (k_uc - k_s - k_p - crystal.qpm_order / crystal.poling_period_um);
}

double phase_mismatch(double signal_nm, double pump_nm, const CrystalSpec& crystal) {
    return phase_mismatch(signal_nm, pump_nm, crystal, crystal.temperature_c);
}

double solve_signal(double pump_nm, const CrystalSpec& crystal, Range bracket_nm, const SolverOptions& options) {
    return find_unique_root([&](double s) { return phase_mismatch(s, pump_nm, crystal); }, bracket_nm, options,
                            "signal wavelength");
}

double solve_pump(double signal_nm, const CrystalSpec& crystal, Range bracket_nm, const SolverOptions& options) {
    return find_unique_root([&](double p) { return phase_mismatch(signal_nm, p, crystal); }, bracket_nm, options,
                            "pump wavelength");
}

double solve_temperature(double signal_nm, double pump_nm, const CrystalSpec& crystal, Range bracket_c,
                         const SolverOptions& options) {
    return find_unique_root([&](double t) { return phase_mismatch(signal_nm, pump_nm, crystal, t); }, bracket_c,
                            options, "temperature");
}

double solve_poling(double signal_nm, double pump_nm, double temperature_c, int order,
                    const WaveguideIndexModel& index_model) {
    if (order < 1) throw DomainError("QPM order must be >= 1");
    const double uc_um = upconverted_wavelength(signal_nm, pump_nm) * 1e-3;
    const double s_um = signal_nm * 1e-3;
    const double p_um = pump_nm * 1e-3;
    const double denom = effective_index(index_model, uc_um, temperature_c) / uc_um -
                         effective_index(index_model, s_um, temperature_c) / s_um -
                         effective_index(index_model, p_um, temperature_c) / p_um;
    if (!(denom > 0.0)) {
        throw DomainError("interaction not quasi-phase-matchable at positive period");
    }
    return order / denom;
}

AcceptanceSpectrum acceptance_spectrum(double pump_nm, const CrystalSpec& crystal,
                                       std::span<const double> signal_grid_nm) {
    if (!std::is_sorted(signal_grid_nm.begin(), signal_grid_nm.end())) {
        throw DomainError("signal grid must be sorted ascending");
    }
    AcceptanceSpectrum out;
    out.pump_nm = pump_nm;
    out.samples.reserve(signal_grid_nm.size());
    const double half_length = 0.5 * crystal.length_um();
    for (double s : signal_grid_nm) {
        const double x = phase_mismatch(s, pump_nm, crystal) * half_length;
        const double sc = sinc(x);
        out.samples.push_back({s, std::clamp(sc * sc, 0.0, 1.0)});
    }
    return out;
}

double fwhm(std::span<const SpectrumSample> samples) {
    const std::size_t peak = argmax(samples);
    require_peak(samples, peak);
    const double half = 0.5 * samples[peak].efficiency;

    auto edge = [&](int dir) {
        std::size_t prev = peak;
        for (;;) {
            if ((dir < 0 && prev == 0) || (dir > 0 && prev + 1 == samples.size())) {
                throw DomainError("grid too narrow: no half-maximum crossing inside grid");
            }
            const std::size_t cur = dir < 0 ? prev - 1 : prev + 1;
            if (samples[cur].efficiency <= half) {
                return interpolate_crossing(samples[cur], samples[prev], half);
            }
            if (samples[cur].efficiency > samples[prev].efficiency) {
                throw DomainError("main lobe has no half-maximum crossing before its first minimum");
            }
            prev = cur;
        }
    };
    return edge(+1) - edge(-1);
}

double half_max_span(std::span<const SpectrumSample> samples) {
    const std::size_t peak = argmax(samples);
    require_peak(samples, peak);
    const double half = 0.5 * samples[peak].efficiency;

    std::size_t first = 0;
    while (samples[first].efficiency < half) ++first;
    std::size_t last = samples.size() - 1;
    while (samples[last].efficiency < half) --last;
    if (first == 0 || last + 1 == samples.size()) {
        throw DomainError("grid too narrow: curve above half maximum at grid edge");
    }
    const double left = interpolate_crossing(samples[first - 1], samples[first], half);
    const double right = interpolate_crossing(samples[last], samples[last + 1], half);
    return right - left;
}

double main_lobe_halfwidth_nm(double pump_nm, const CrystalSpec& crystal, double signal_nm) {
    constexpr double h = 0.01;
    const double slope =
        (phase_mismatch(signal_nm + h, pump_nm, crystal) - phase_mismatch(signal_nm - h, pump_nm, crystal)) /
        (2.0 * h);
    if (slope == 0.0) throw DomainError("phase mismatch is stationary in signal wavelength");
    return kTwoPi / (crystal.length_um() * std::abs(slope));
}

double single_peak_fwhm(double pump_nm, const CrystalSpec& crystal, Range signal_bracket_nm) {
    const double s = solve_signal(pump_nm, crystal, signal_bracket_nm);
    const double hw = main_lobe_halfwidth_nm(pump_nm, crystal, s);
    const auto grid = linspace(s - 1.5 * hw, s + 1.5 * hw, 3001);
    return fwhm(acceptance_spectrum(pump_nm, crystal, grid));
}

double tuning_slope(double pump_nm, const CrystalSpec& crystal, TuningVariable variable, double step,
                    Range signal_bracket_nm, const SolverOptions& options) {
    if (!(step > 0.0)) throw DomainError("tuning step must be > 0");
    if (variable == TuningVariable::PumpWavelength) {
        const double up = solve_signal(pump_nm + step, crystal, signal_bracket_nm, options);
        const double down = solve_signal(pump_nm - step, crystal, signal_bracket_nm, options);
        return (up - down) / (2.0 * step);
    }
    CrystalSpec hot = crystal;
    CrystalSpec cold = crystal;
    hot.temperature_c += step;
    cold.temperature_c -= step;
    const double up = solve_signal(pump_nm, hot, signal_bracket_nm, options);
    const double down = solve_signal(pump_nm, cold, signal_bracket_nm, options);
    return (up - down) / (2.0 * step);
}

TuningEnvelope tuning_envelope(Range pump_range_nm, const CrystalSpec& crystal, int n_pumps,
                               std::span<const double> signal_grid_nm) {
    if (n_pumps < 1) throw DomainError("n_pumps must be >= 1");
    if (pump_range_nm.hi < pump_range_nm.lo) throw DomainError("pump range must satisfy lo <= hi");

    TuningEnvelope env;
    if (n_pumps == 1) {
        env.pump_nm.push_back(0.5 * (pump_range_nm.lo + pump_range_nm.hi));
    } else {
        env.pump_nm = linspace(pump_range_nm.lo, pump_range_nm.hi, static_cast<std::size_t>(n_pumps));
    }

    for (double p : env.pump_nm) {
        const auto spectrum = acceptance_spectrum(p, crystal, signal_grid_nm);
        if (env.samples.empty()) {
            env.samples = spectrum.samples;
            continue;
        }
        for (std::size_t i = 0; i < env.samples.size(); ++i) {
            env.samples[i].efficiency = std::max(env.samples[i].efficiency, spectrum.samples[i].efficiency);
        }
    }
    env.span_nm = half_max_span(env.samples);
    return env;
}

TuningEnvelope tuning_envelope(Range pump_range_nm, const CrystalSpec& crystal, int n_pumps,
                               Range signal_bracket_nm, std::size_t grid_points) {
    const double s_a = solve_signal(pump_range_nm.lo, crystal, signal_bracket_nm);
    const double s_b = solve_signal(pump_range_nm.hi, crystal, signal_bracket_nm);
    const double hw = std::max(main_lobe_halfwidth_nm(pump_range_nm.lo, crystal, s_a),
                               main_lobe_halfwidth_nm(pump_range_nm.hi, crystal, s_b));
    const auto grid = linspace(std::min(s_a, s_b) - 3.0 * hw, std::max(s_a, s_b) + 3.0 * hw, grid_points);
    return tuning_envelope(pump_range_nm, crystal, n_pumps, grid);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

}  // namespace upconv
