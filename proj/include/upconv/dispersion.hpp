#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace upconv {

/// Closed interval [lo, hi] in the units of whatever it bounds.
struct Range {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    double width() const noexcept { return hi - lo; }
};

/// Temperature-dependent Sellmeier coefficient set for the extraordinary index.
///
/// Only the "jundt-ln-e" form is supported:
///   f  = (T - 24.5)(T + 570.82),  T in degrees Celsius
///   n² = a1 + b1 f + (a2 + b2 f) / (λ² - (a3 + b3 f)²) + (a4 + b4 f) / (λ² - a5²) - a6 λ²
/// with λ in µm and coefficients ordered {a1..a6, b1..b4}.
struct SellmeierModel {
    std::string name;
    std::string temperature_form = "jundt-ln-e";
    std::vector<double> coefficients;
    Range wavelength_range_um;
    Range temperature_range_c;
};

/// Built-in congruent lithium niobate extraordinary-index set.
const SellmeierModel& congruent_ln_e();

/// Parses a coefficient set from its JSON text. Throws ConfigError on schema problems.
SellmeierModel parse_sellmeier_json(std::string_view text);
SellmeierModel load_sellmeier_file(const std::string& path);
std::string sellmeier_to_json(const SellmeierModel& model);

/// Throws DomainError naming the offending parameter if out of range.
double refractive_index(const SellmeierModel& model, double wavelength_um, double temperature_c);

/// Additive index offset applied to wavelengths inside [band.lo, band.hi] µm.
struct DeltaNBand {
    Range band_um;
    double delta_n = 0.0;
};

/// Bulk index plus a constant, optionally piecewise, waveguide offset.
/// The first band containing the wavelength wins; otherwise default_delta_n applies.
struct WaveguideIndexModel {
    SellmeierModel bulk = congruent_ln_e();
    double default_delta_n = 0.0;
    std::vector<DeltaNBand> bands;

    double delta_n_at(double wavelength_um) const noexcept;
    void validate() const;
};

double effective_index(const WaveguideIndexModel& model, double wavelength_um, double temperature_c);

}  // namespace upconv
