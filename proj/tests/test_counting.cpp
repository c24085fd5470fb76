#include "upconv/counting.hpp"
#include "upconv/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace upconv;

namespace {

SimConfig poisson_config(std::uint64_t seed, double duration, double rate, double eff, double dark) {
    SimConfig s;
    s.seed = seed;
    s.duration_s = duration;
    s.signal_rate_hz = rate;
    s.efficiency = eff;
    s.dark_rate_hz = dark;
    return s;
}

std::vector<double> pulse_train(double period_s, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = (static_cast<double>(i) + 1.0) * period_s;
    return t;
}

}  // namespace

TEST(PhotonRng, UniformInOpenInterval) {
    PhotonRng rng(123, 0);
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(PhotonRng, GaussianMoments) {
    PhotonRng rng(99, 0);
    double s1 = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = rng.gaussian();
        s1 += g;
        s2 += g * g;
    }
    EXPECT_NEAR(s1 / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(SimulateCounts, NothingInNothingOut) {
    const auto r = simulate_counts(poisson_config(1, 1.0, 1e6, 0.0, 0.0));
    EXPECT_EQ(r.n_detected, 0u);
    EXPECT_TRUE(r.timestamps_s.empty());
    EXPECT_GT(r.n_generated, 0u);
}

TEST(SimulateCounts, DeterministicPerSeed) {
    auto cfg = poisson_config(42, 0.1, 1e6, 0.06, 5e4);
    cfg.dead_time_ns = 50;
    cfg.jitter_sigma_ps = 21.2;
    const auto a = simulate_counts(cfg);
    const auto b = simulate_counts(cfg);
    EXPECT_EQ(a.timestamps_s, b.timestamps_s);
    EXPECT_EQ(a.n_generated, b.n_generated);
    EXPECT_EQ(a.n_dead_time_lost, b.n_dead_time_lost);
    EXPECT_EQ(a.rng_algorithm, kRngAlgorithm);

    cfg.seed = 43;
    EXPECT_NE(simulate_counts(cfg).timestamps_s, a.timestamps_s);
}

TEST(SimulateCounts, RecordInvariants) {
    auto cfg = poisson_config(7, 0.05, 2e6, 0.5, 1e5);
    cfg.dead_time_ns = 100;
    const auto stream = simulate_detection_stream(cfg);
    EXPECT_EQ(stream.n_detected, stream.timestamps_s.size());
    for (std::size_t i = 1; i < stream.timestamps_s.size(); ++i) {
        ASSERT_GT(stream.timestamps_s[i], stream.timestamps_s[i - 1]);
        ASSERT_GE(stream.timestamps_s[i] - stream.timestamps_s[i - 1], 100e-9);
    }
    EXPECT_GT(stream.n_dead_time_lost, 0u);

    cfg.jitter_sigma_ps = 30;
    const auto jittered = simulate_counts(cfg);
    EXPECT_EQ(jittered.n_detected, stream.n_detected);
    EXPECT_TRUE(std::is_sorted(jittered.timestamps_s.begin(), jittered.timestamps_s.end()));
}

TEST(SimulateCounts, RateAdditivityWithinFourSigma) {
    const auto r = simulate_counts(poisson_config(2024, 10.0, 1e6, 0.06, 5e4));
    const double expected = 1.1e5;
    const double sigma = std::sqrt(expected * 10.0) / 10.0;
    EXPECT_NEAR(static_cast<double>(r.n_detected) / 10.0, expected, 4.0 * sigma);
}

TEST(SimulateCounts, ThinningMatchesEfficiencyAcrossSeeds) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto r = simulate_detection_stream(poisson_config(seed, 0.2, 1e6, 0.3, 0.0));
        ASSERT_GE(r.n_generated, 100000u);
        const double n = static_cast<double>(r.n_generated);
        const double ratio = static_cast<double>(r.n_detected) / n;
        EXPECT_NEAR(ratio, 0.3, 4.0 * std::sqrt(0.3 * 0.7 / n)) << "seed " << seed;
    }
}

TEST(SimulateCounts, NonParalyzableDeadTime) {
    // Oracle: accepted = R / (1 + R tau); checked at three input rates.
    for (double rate : {2e5, 1e6, 3e6}) {
        auto cfg = poisson_config(17, 1.0, rate, 1.0, 0.0);
        cfg.dead_time_ns = 100;
        const auto r = simulate_counts(cfg);
        const double expected = rate / (1.0 + rate * 100e-9);
        EXPECT_NEAR(static_cast<double>(r.n_detected), expected, 0.02 * expected) << rate;
        EXPECT_EQ(r.n_detected + r.n_dead_time_lost, r.n_generated);
    }
}

TEST(DeadTime, KeepsEventsAtExactlyDeadTime) {
    const std::vector<double> t{0.0, 1.0, 1.5, 2.0, 2.5, 4.0};
    const auto kept = apply_dead_time(t, 1.0);
    EXPECT_EQ(kept, (std::vector<double>{0.0, 1.0, 2.0, 4.0}));
}

TEST(Jitter, ZeroSigmaAllInZeroBin) {
    SimConfig cfg;
    cfg.duration_s = 0.01;
    cfg.true_pulse_times_s = pulse_train(1e-6, 5000);
    const auto r = simulate_counts(cfg);
    const auto h = jitter_histogram(r, *cfg.true_pulse_times_s, 1.0);
    std::uint64_t total = 0;
    for (const auto& b : h.bins) {
        if (b.dt_ps == 0.0) {
            EXPECT_EQ(b.count, r.n_detected);
        } else {
            EXPECT_EQ(b.count, 0u);
        }
        total += b.count;
    }
    EXPECT_EQ(total, 5000u);
}

TEST(Jitter, FwhmRecoveryAndScaling) {
    SimConfig cfg;
    cfg.seed = 5;
    cfg.duration_s = 0.2;
    cfg.true_pulse_times_s = pulse_train(1e-6, 150000);
    cfg.jitter_sigma_ps = 21.2;
    const auto r = simulate_counts(cfg);
    ASSERT_GE(r.n_detected, 100000u);
    const auto h = jitter_histogram(r, *cfg.true_pulse_times_s, 2.0);
    EXPECT_NEAR(h.fwhm_ps, 2.3548 * 21.2, 0.1 * 2.3548 * 21.2);
    EXPECT_NEAR(h.fwhm_ps, 50.0, 5.0);

    cfg.jitter_sigma_ps = 42.4;
    const auto h2 = jitter_histogram(simulate_counts(cfg), *cfg.true_pulse_times_s, 2.0);
    EXPECT_NEAR(h2.fwhm_ps / h.fwhm_ps, 2.0, 0.2);
}

TEST(Jitter, EmptyRecordIsAnError) {
    const CountRecord empty;
    const std::vector<double> pulses{1e-6};
    EXPECT_THROW(jitter_histogram(empty, pulses, 1.0), DomainError);
}

TEST(Snr, ClosedForms) {
    EXPECT_NEAR(snr_estimate(1e6, 0.06, 0.0, 1e-3), std::sqrt(60.0), 1e-12);
    EXPECT_NEAR(snr_estimate(1e6, 0.06, 5e4, 1e-3), 60.0 / std::sqrt(110.0), 1e-12);
    EXPECT_NEAR(snr_estimate(1e6, 0.06, 5e4, 1e-3), 5.72, 0.01);
    const double a = snr_estimate(1e6, 0.06, 5e4, 1e-3);
    const double b = snr_estimate(1e6, 0.06, 5e4, 2e-3);
    EXPECT_NEAR(b / a, std::sqrt(2.0), 1e-9 * std::sqrt(2.0));
    EXPECT_EQ(snr_estimate(0.0, 0.5, 0.0, 1.0), 0.0);
    EXPECT_THROW(snr_estimate(1.0, 1.0, 1.0, 0.0), DomainError);
}

TEST(SimConfig, Validation) {
    SimConfig s;
    s.duration_s = 0.0;
    EXPECT_THROW(simulate_counts(s), DomainError);
    s.duration_s = 1.0;
    s.efficiency = 1.5;
    EXPECT_THROW(simulate_counts(s), DomainError);
}
