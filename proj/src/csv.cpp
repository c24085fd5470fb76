#include "upconv/csv.hpp"

#include <array>
#include <charconv>

namespace upconv {

std::string format_number(double value) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ec == std::errc{} ? end : buf.data());
}

void write_spectrum_csv(std::ostream& os, std::span<const SpectrumSample> samples) {
    os << "signal_nm,efficiency\n";
    for (const auto& s : samples) os << format_number(s.signal_nm) << ',' << format_number(s.efficiency) << '\n';
}

void write_curve_csv(std::ostream& os, std::span<const CurveRow> rows) {
    os << "power_W,efficiency,noise_hz\n";
    for (const auto& r : rows) {
        os << format_number(r.pump_power_w) << ',' << format_number(r.efficiency) << ','
           << format_number(r.noise_hz) << '\n';
    }
}

void write_timestamps_csv(std::ostream& os, std::span<const double> times_s) {
    os << "t_seconds\n";
    for (double t : times_s) os << format_number(t) << '\n';
}

void write_histogram_csv(std::ostream& os, std::span<const HistogramBin> bins) {
    os << "dt_ps,count\n";
    for (const auto& b : bins) os << format_number(b.dt_ps) << ',' << b.count << '\n';
}

}  // namespace upconv
