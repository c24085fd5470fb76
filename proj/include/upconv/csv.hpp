#pragma once

#include "upconv/counting.hpp"
#include "upconv/qpm.hpp"
#include "upconv/response.hpp"

#include <ostream>
#include <span>
#include <string>

namespace upconv {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

// Column headers are part of the output contract.
void write_spectrum_csv(std::ostream& os, std::span<const SpectrumSample> samples);  // signal_nm,efficiency
void write_curve_csv(std::ostream& os, std::span<const CurveRow> rows);              // power_W,efficiency,noise_hz
void write_timestamps_csv(std::ostream& os, std::span<const double> times_s);        // t_seconds
void write_histogram_csv(std::ostream& os, std::span<const HistogramBin> bins);      // dt_ps,count

}  // namespace upconv
