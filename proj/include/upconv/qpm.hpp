#pragma once

#include "upconv/dispersion.hpp"
#include "upconv/root_finding.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace upconv {

/// PPLN waveguide geometry and poling. Lengths follow lab units: cm for the
/// device, µm for the poling period.
struct CrystalSpec {
    double length_cm = 2.2;
    double poling_period_um = 9.0;
    int qpm_order = 1;
    double temperature_c = 25.0;
    /// Small-signal SFG efficiency in W⁻¹cm⁻² (5.0 == 500 %/W/cm²).
    double normalized_efficiency = 5.0;
    WaveguideIndexModel index_model;

    double length_um() const noexcept { return length_cm * 1e4; }
    void validate() const;
};

/// A wavelength triple tied together by energy conservation.
struct InteractionPoint {
    double signal_nm = 0.0;
    double pump_nm = 0.0;
    double upconverted_nm = 0.0;
    double temperature_c = 0.0;

    static InteractionPoint from_signal_pump(double signal_nm, double pump_nm, double temperature_c);
    /// |1/uc - 1/s - 1/p| relative to 1/uc.
    double energy_mismatch() const noexcept;
};

struct SpectrumSample {
    double signal_nm = 0.0;
    double efficiency = 0.0;
};

struct AcceptanceSpectrum {
    double pump_nm = 0.0;
    std::vector<SpectrumSample> samples;
};

/// 1 / (1/signal + 1/pump). Throws DomainError on non-positive input.
double upconverted_wavelength(double signal_nm, double pump_nm);

/// Δk = 2π [n(uc)/λuc − n(s)/λs − n(p)/λp − m/Λ] in rad/µm, evaluated at the
/// crystal temperature. Zero exactly at quasi-phase matching.
double phase_mismatch(double signal_nm, double pump_nm, const CrystalSpec& crystal);
double phase_mismatch(double signal_nm, double pump_nm, const CrystalSpec& crystal, double temperature_c);

double solve_signal(double pump_nm, const CrystalSpec& crystal, Range bracket_nm,
                    const SolverOptions& options = {});
double solve_pump(double signal_nm, const CrystalSpec& crystal, Range bracket_nm,
                  const SolverOptions& options = {});
double solve_temperature(double signal_nm, double pump_nm, const CrystalSpec& crystal, Range bracket_c,
                         const SolverOptions& options = {});

/// Closed-form poling period in µm. Throws DomainError when the interaction
/// cannot be phase matched at a positive period.
double solve_poling(double signal_nm, double pump_nm, double temperature_c, int order,
                    const WaveguideIndexModel& index_model);

/// Normalized sinc²(Δk L / 2) conversion efficiency over `signal_grid_nm`.
AcceptanceSpectrum acceptance_spectrum(double pump_nm, const CrystalSpec& crystal,
                                       std::span<const double> signal_grid_nm);

/// Full width at half maximum of the main lobe, bounded by the first minimum
/// on each side of the global peak, with linear interpolation between samples.
double fwhm(std::span<const SpectrumSample> samples);
inline double fwhm(const AcceptanceSpectrum& spectrum) { return fwhm(spectrum.samples); }

/// Signal distance from the phase-matched peak to the first sinc² zero,
/// 2π / (L |∂Δk/∂λs|), from the local slope.
double main_lobe_halfwidth_nm(double pump_nm, const CrystalSpec& crystal, double signal_nm);

/// Solves the peak inside `signal_bracket_nm` and measures its FWHM on a dense local grid.
double single_peak_fwhm(double pump_nm, const CrystalSpec& crystal, Range signal_bracket_nm);

enum class TuningVariable { PumpWavelength, Temperature };

/// Central difference of the phase-matched signal with respect to pump
/// wavelength (nm/nm) or crystal temperature (nm/K).
double tuning_slope(double pump_nm, const CrystalSpec& crystal, TuningVariable variable, double step,
                    Range signal_bracket_nm, const SolverOptions& options = {});

struct TuningEnvelope {
    std::vector<double> pump_nm;
    std::vector<SpectrumSample> samples;
    /// Distance between the outermost half-maximum crossings.
    double span_nm = 0.0;
};

/// Pointwise maximum of acceptance spectra for `n_pumps` equally spaced pumps
/// across `pump_range_nm` (one pump sits at the range midpoint).
TuningEnvelope tuning_envelope(Range pump_range_nm, const CrystalSpec& crystal, int n_pumps,
                               std::span<const double> signal_grid_nm);

/// As above, with a grid that covers every peak plus three lobe half-widths of margin.
TuningEnvelope tuning_envelope(Range pump_range_nm, const CrystalSpec& crystal, int n_pumps,
                               Range signal_bracket_nm, std::size_t grid_points = 8001);

/// Outermost half-maximum crossings of a sampled curve. Throws DomainError if
/// the curve is still above half maximum at either grid edge.
double half_max_span(std::span<const SpectrumSample> samples);

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace upconv
