#include "upconv/response.hpp"

#include "upconv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace upconv {

namespace {

void require_power(double pump_power_w) {
    if (!(pump_power_w >= 0.0) || !std::isfinite(pump_power_w)) {
        throw DomainError("pump power must be a finite value >= 0 W");
    }
}

}  // namespace

void DetectorChain::validate() const {
    for (double f : {coupling_efficiency, filter_transmission, apd_quantum_efficiency}) {
        if (!(f > 0.0 && f <= 1.0)) throw DomainError("detector chain fractions must lie in (0, 1]");
    }
    if (!(intrinsic_dark_rate_hz >= 0.0)) throw DomainError("intrinsic dark rate must be >= 0");
    if (!(dead_time_ns >= 0.0)) throw DomainError("dead time must be >= 0");
    if (!(jitter_fwhm_ps >= 0.0)) throw DomainError("jitter FWHM must be >= 0");
}

void NoiseModel::validate() const {
    if (!(dark_offset_hz >= 0.0 && linear_coeff_hz_per_w >= 0.0 && quadratic_coeff_hz_per_w2 >= 0.0)) {
        throw DomainError("noise model coefficients must be >= 0");
    }
}

double internal_conversion_efficiency(double pump_power_w, const CrystalSpec& crystal) {
    require_power(pump_power_w);
    const double s = std::sin(crystal.length_cm * std::sqrt(crystal.normalized_efficiency * pump_power_w));
    return s * s;
}

double peak_conversion_power(const CrystalSpec& crystal, int k) {
    const double phase = (2 * k + 1) * std::numbers::pi / 2.0;
    return phase * phase / (crystal.normalized_efficiency * crystal.length_cm * crystal.length_cm);
}

double overall_efficiency(double pump_power_w, const CrystalSpec& crystal, const DetectorChain& chain) {
    return internal_conversion_efficiency(pump_power_w, crystal) * chain.transmission_product();
}

double noise_rate(double pump_power_w, const NoiseModel& model) {
    require_power(pump_power_w);
    return model.dark_offset_hz + model.linear_coeff_hz_per_w * pump_power_w +
           model.quadratic_coeff_hz_per_w2 * pump_power_w * pump_power_w;
}

NoiseFit calibrate_noise(std::span<const NoisePoint> points, double fixed_dark_hz, bool use_quadratic) {
    const std::size_t needed = use_quadratic ? 2 : 1;
    if (points.size() < needed) {
        throw FitError(use_quadratic ? "quadratic noise fit needs at least 2 points"
                                     : "linear noise fit needs at least 1 point");
    }
    if (!(fixed_dark_hz >= 0.0)) throw FitError("fixed dark offset must be >= 0");
    std::set<double> seen;
    for (const auto& p : points) {
        if (!(p.pump_power_w > 0.0)) throw FitError("fit powers must be positive");
        if (!seen.insert(p.pump_power_w).second) throw FitError("fit powers must be distinct");
    }

    // Normal equations for y - dark = a·P + b·P².
    double s2 = 0, s3 = 0, s4 = 0, sy1 = 0, sy2 = 0;
    for (const auto& p : points) {
        const double x = p.pump_power_w;
        const double y = p.noise_hz - fixed_dark_hz;
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
        sy1 += x * y;
        sy2 += x * x * y;
    }

    NoiseFit fit;
    fit.model.dark_offset_hz = fixed_dark_hz;
    const auto linear_only = [&] { return sy1 / s2; };
    const auto quadratic_only = [&] { return sy2 / s4; };

    if (!use_quadratic) {
        const double a = linear_only();
        fit.clamped = a < 0.0;
        fit.model.linear_coeff_hz_per_w = std::max(a, 0.0);
        return fit;
    }

    const double det = s2 * s4 - s3 * s3;
    if (!(std::abs(det) > 1e-12 * s2 * s4)) throw FitError("degenerate design matrix in noise fit");
    double a = (sy1 * s4 - sy2 * s3) / det;
    double b = (s2 * sy2 - s3 * sy1) / det;
    if (a < 0.0) {
        fit.clamped = true;
        a = 0.0;
        b = std::max(quadratic_only(), 0.0);
    } else if (b < 0.0) {
        fit.clamped = true;
        b = 0.0;
        a = std::max(linear_only(), 0.0);
    }
    fit.model.linear_coeff_hz_per_w = a;
    fit.model.quadratic_coeff_hz_per_w2 = b;
    return fit;
}

std::vector<CurveRow> efficiency_noise_curve(std::span<const double> power_grid_w, const CrystalSpec& crystal,
                                             const DetectorChain& chain, const NoiseModel& noise) {
    if (!std::is_sorted(power_grid_w.begin(), power_grid_w.end())) {
        throw DomainError("power grid must be sorted ascending");
    }
    std::vector<CurveRow> rows;
    rows.reserve(power_grid_w.size());
    for (double p : power_grid_w) {
        rows.push_back({p, overall_efficiency(p, crystal, chain), noise_rate(p, noise)});
    }
    return rows;
}

}  // namespace upconv
