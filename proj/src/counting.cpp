#include "upconv/counting.hpp"

#include "upconv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace upconv {

namespace {

constexpr std::uint32_t kSignalStream = 1;
constexpr std::uint32_t kDarkStream = 2;
constexpr std::uint32_t kJitterStream = 3;

std::vector<double> poisson_arrivals(double rate_hz, double duration_s, PhotonRng& rng) {
    std::vector<double> times;
    if (rate_hz <= 0.0) return times;
    times.reserve(static_cast<std::size_t>(rate_hz * duration_s * 1.01) + 16);
    for (double t = rng.exponential(rate_hz); t < duration_s; t += rng.exponential(rate_hz)) {
        times.push_back(t);
    }
    return times;
}

}  // namespace

void SimConfig::validate() const {
    if (!(duration_s > 0.0)) throw DomainError("sim duration must be > 0");
    if (!(signal_rate_hz >= 0.0) || !(dark_rate_hz >= 0.0)) throw DomainError("sim rates must be >= 0");
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw DomainError("sim efficiency must lie in [0, 1]");
    if (!(dead_time_ns >= 0.0)) throw DomainError("sim dead time must be >= 0");
    if (!(jitter_sigma_ps >= 0.0)) throw DomainError("sim jitter sigma must be >= 0");
    if (true_pulse_times_s && !std::is_sorted(true_pulse_times_s->begin(), true_pulse_times_s->end())) {
        throw DomainError("true pulse times must be sorted ascending");
    }
}

PhotonRng::PhotonRng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    engine_.seed(seq);
}

double PhotonRng::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double PhotonRng::exponential(double rate) {
    return -std::log(uniform()) / rate;
}

double PhotonRng::gaussian() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    return r * std::cos(phi);
}

std::vector<double> apply_dead_time(std::span<const double> sorted_times_s, double dead_time_s) {
    std::vector<double> kept;
    kept.reserve(sorted_times_s.size());
    for (double t : sorted_times_s) {
        if (kept.empty() || t - kept.back() >= dead_time_s) kept.push_back(t);
    }
    return kept;
}

CountRecord simulate_detection_stream(const SimConfig& config) {
    config.validate();
    CountRecord record;

    PhotonRng signal_rng(config.seed, kSignalStream);
    std::vector<double> signal;
    if (config.true_pulse_times_s) {
        const auto& pulses = *config.true_pulse_times_s;
        record.n_generated = pulses.size();
        signal.reserve(pulses.size());
        for (double t : pulses) {
            if (signal_rng.uniform() < config.efficiency) signal.push_back(t);
        }
    } else {
        const auto arrivals = poisson_arrivals(config.signal_rate_hz, config.duration_s, signal_rng);
        record.n_generated = arrivals.size();
        signal.reserve(static_cast<std::size_t>(arrivals.size() * config.efficiency) + 16);
        for (double t : arrivals) {
            if (signal_rng.uniform() < config.efficiency) signal.push_back(t);
        }
    }

    PhotonRng dark_rng(config.seed, kDarkStream);
    const auto dark = poisson_arrivals(config.dark_rate_hz, config.duration_s, dark_rng);

    std::vector<double> merged;
    merged.reserve(signal.size() + dark.size());
    std::merge(signal.begin(), signal.end(), dark.begin(), dark.end(), std::back_inserter(merged));

    record.timestamps_s = apply_dead_time(merged, config.dead_time_ns * 1e-9);
    record.n_dead_time_lost = merged.size() - record.timestamps_s.size();
    record.n_detected = record.timestamps_s.size();
    return record;
}

void apply_jitter(CountRecord& record, double sigma_s, PhotonRng& rng) {
    if (sigma_s <= 0.0) return;
    for (double& t : record.timestamps_s) t += sigma_s * rng.gaussian();
    std::sort(record.timestamps_s.begin(), record.timestamps_s.end());
}

CountRecord simulate_counts(const SimConfig& config) {
    CountRecord record = simulate_detection_stream(config);
    PhotonRng jitter_rng(config.seed, kJitterStream);
    apply_jitter(record, config.jitter_sigma_ps * 1e-12, jitter_rng);
    return record;
}

JitterHistogram jitter_histogram(const CountRecord& record, std::span<const double> true_pulse_times_s,
                                 double bin_ps) {
    if (record.timestamps_s.empty()) throw DomainError("jitter histogram needs a non-empty record");
    if (true_pulse_times_s.empty()) throw DomainError("jitter histogram needs true pulse times");
    if (!(bin_ps > 0.0)) throw DomainError("histogram bin width must be > 0");

    std::vector<long long> indices;
    indices.reserve(record.timestamps_s.size());
    for (double t : record.timestamps_s) {
        auto it = std::lower_bound(true_pulse_times_s.begin(), true_pulse_times_s.end(), t);
        double nearest;
        if (it == true_pulse_times_s.end()) {
            nearest = true_pulse_times_s.back();
        } else if (it == true_pulse_times_s.begin()) {
            nearest = *it;
        } else {
            nearest = (t - *(it - 1) <= *it - t) ? *(it - 1) : *it;
        }
        indices.push_back(std::llround((t - nearest) * 1e12 / bin_ps));
    }
    const auto [lo_it, hi_it] = std::minmax_element(indices.begin(), indices.end());
    const long long lo = *lo_it - 1;
    const long long hi = *hi_it + 1;

    JitterHistogram hist;
    hist.bin_ps = bin_ps;
    hist.bins.resize(static_cast<std::size_t>(hi - lo + 1));
    for (long long k = lo; k <= hi; ++k) hist.bins[static_cast<std::size_t>(k - lo)].dt_ps = k * bin_ps;
    for (long long k : indices) ++hist.bins[static_cast<std::size_t>(k - lo)].count;

    const auto peak = std::max_element(hist.bins.begin(), hist.bins.end(),
                                       [](const auto& a, const auto& b) { return a.count < b.count; });
    const double half = 0.5 * static_cast<double>(peak->count);
    auto crossing = [half](const HistogramBin& outside, const HistogramBin& inside) {
        const double c0 = static_cast<double>(outside.count);
        const double c1 = static_cast<double>(inside.count);
        return outside.dt_ps + (half - c0) / (c1 - c0) * (inside.dt_ps - outside.dt_ps);
    };
    std::size_t first = 0;
    while (static_cast<double>(hist.bins[first].count) < half) ++first;
    std::size_t last = hist.bins.size() - 1;
    while (static_cast<double>(hist.bins[last].count) < half) --last;
    hist.fwhm_ps = crossing(hist.bins[last + 1], hist.bins[last]) - crossing(hist.bins[first - 1], hist.bins[first]);
    return hist;
}

double snr_estimate(double signal_rate_hz, double efficiency, double dark_rate_hz, double gate_s) {
    if (!(gate_s > 0.0)) throw DomainError("gate must be > 0");
    const double signal = efficiency * signal_rate_hz * gate_s;
    const double total = signal + dark_rate_hz * gate_s;
    if (total <= 0.0) return 0.0;
    return signal / std::sqrt(total);
}

}  // namespace upconv
