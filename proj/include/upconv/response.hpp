#pragma once

#include "upconv/qpm.hpp"

#include <span>
#include <vector>

namespace upconv {

/// Loss and noise budget downstream of the waveguide input.
/// Only the product of the three efficiency factors enters the efficiency chain;
/// the defaults multiply to 0.12.
struct DetectorChain {
    double coupling_efficiency = 0.48;
    double filter_transmission = 0.50;
    double apd_quantum_efficiency = 0.50;
    double intrinsic_dark_rate_hz = 100.0;
    double dead_time_ns = 50.0;
    double jitter_fwhm_ps = 50.0;

    double transmission_product() const noexcept {
        return coupling_efficiency * filter_transmission * apd_quantum_efficiency;
    }
    void validate() const;
};

/// noise(P) = dark_offset + linear·P + quadratic·P²
struct NoiseModel {
    double dark_offset_hz = 100.0;
    double linear_coeff_hz_per_w = 0.0;
    double quadratic_coeff_hz_per_w2 = 0.0;

    void validate() const;
};

/// sin²(L·sqrt(η_nor·P)) with L in cm and η_nor in W⁻¹cm⁻².
double internal_conversion_efficiency(double pump_power_w, const CrystalSpec& crystal);

/// Pump power of the k-th conversion maximum, ((2k+1)π/2)² / (η_nor L²).
double peak_conversion_power(const CrystalSpec& crystal, int k = 0);

double overall_efficiency(double pump_power_w, const CrystalSpec& crystal, const DetectorChain& chain);

double noise_rate(double pump_power_w, const NoiseModel& model);

struct NoisePoint {
    double pump_power_w = 0.0;
    double noise_hz = 0.0;
};

struct NoiseFit {
    NoiseModel model;
    /// Set when an unconstrained coefficient came out negative and was pinned to 0.
    bool clamped = false;
};

/// Least-squares fit of the linear (and optionally quadratic) noise terms with
/// the dark offset held fixed. Throws FitError on too few or repeated powers.
NoiseFit calibrate_noise(std::span<const NoisePoint> points, double fixed_dark_hz, bool use_quadratic);

struct CurveRow {
    double pump_power_w = 0.0;
    double efficiency = 0.0;
    double noise_hz = 0.0;
};

std::vector<CurveRow> efficiency_noise_curve(std::span<const double> power_grid_w, const CrystalSpec& crystal,
                                             const DetectorChain& chain, const NoiseModel& noise);

}  // namespace upconv
