#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace upconv {

/// Identifier of the sampling scheme, stored with every record. Outputs are
/// reproducible across implementations that follow the same scheme.
inline constexpr const char* kRngAlgorithm =
    "mt19937_64/seed_seq{lo32,hi32,stream}/u53-open/exp-gaps/box-muller";

struct SimConfig {
    std::uint64_t seed = 1;
    double duration_s = 1.0;
    /// Photon rate at the detector input, before efficiency thinning.
    double signal_rate_hz = 0.0;
    double efficiency = 1.0;
    double dark_rate_hz = 0.0;
    double dead_time_ns = 0.0;
    double jitter_sigma_ps = 0.0;
    /// When set, signal photons arrive exactly at these times instead of as a Poisson stream.
    std::optional<std::vector<double>> true_pulse_times_s;

    void validate() const;
};

struct CountRecord {
    std::vector<double> timestamps_s;
    std::uint64_t n_generated = 0;
    std::uint64_t n_detected = 0;
    std::uint64_t n_dead_time_lost = 0;
    std::string rng_algorithm = kRngAlgorithm;
};

/// Seeded uniform/exponential/Gaussian sampler with a fixed, documented
/// transformation from raw 64-bit words so sequences do not depend on the
/// standard library's distribution implementations.
class PhotonRng {
public:
    PhotonRng(std::uint64_t seed, std::uint32_t stream);

    /// Uniform in the open interval (0, 1).
    double uniform();
    double exponential(double rate);
    double gaussian();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// Arrival, thinning, dark-count merge and dead time; no jitter.
CountRecord simulate_detection_stream(const SimConfig& config);

/// Non-paralyzable dead time over an ascending stream: an event is kept only if
/// it arrives at least `dead_time_s` after the last kept event.
std::vector<double> apply_dead_time(std::span<const double> sorted_times_s, double dead_time_s);

/// Adds N(0, sigma) to every timestamp and re-sorts.
void apply_jitter(CountRecord& record, double sigma_s, PhotonRng& rng);

/// Full pipeline: simulate_detection_stream followed by apply_jitter on a separate stream.
CountRecord simulate_counts(const SimConfig& config);

struct HistogramBin {
    double dt_ps = 0.0;
    std::uint64_t count = 0;
};

struct JitterHistogram {
    double bin_ps = 0.0;
    std::vector<HistogramBin> bins;
    double fwhm_ps = 0.0;
};

/// Histogram of timestamp minus nearest true pulse, with bins centred on
/// multiples of `bin_ps` (zero residual falls in the zero bin).
JitterHistogram jitter_histogram(const CountRecord& record, std::span<const double> true_pulse_times_s,
                                 double bin_ps);

/// Poisson-limited SNR, ηR·gate / sqrt(ηR·gate + D·gate).
double snr_estimate(double signal_rate_hz, double efficiency, double dark_rate_hz, double gate_s);

}  // namespace upconv
