#include "upconv/errors.hpp"
#include "upconv/response.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace upconv;
using test_support::device_config;
using test_support::device_crystal;

TEST(InternalEfficiency, ClosedForm) {
    const auto& c = device_crystal();
    EXPECT_EQ(internal_conversion_efficiency(0.0, c), 0.0);
    const double p_peak = std::pow(std::numbers::pi / 2.0, 2) / 24.2;
    EXPECT_NEAR(peak_conversion_power(c), p_peak, 1e-15);
    EXPECT_NEAR(p_peak, 0.102, 0.001);
    EXPECT_NEAR(internal_conversion_efficiency(p_peak, c), 1.0, 1e-15);
    EXPECT_NEAR(internal_conversion_efficiency(0.0255, c), 0.5, 1e-3);
    EXPECT_THROW(internal_conversion_efficiency(-1e-3, c), DomainError);
}

TEST(InternalEfficiency, PeriodicInRootPower) {
    const auto& c = device_crystal();
    for (int k = 0; k < 5; ++k) {
        EXPECT_NEAR(internal_conversion_efficiency(peak_conversion_power(c, k), c), 1.0, 1e-12);
    }
    const double period = std::numbers::pi / (c.length_cm * std::sqrt(c.normalized_efficiency));
    for (double r : {0.05, 0.13, 0.21}) {
        EXPECT_NEAR(internal_conversion_efficiency(r * r, c),
                    internal_conversion_efficiency((r + period) * (r + period), c), 1e-12);
    }
}

TEST(OverallEfficiency, ChainProduct) {
    const auto& c = device_crystal();
    const DetectorChain chain;
    EXPECT_NEAR(chain.transmission_product(), 0.12, 1e-15);
    EXPECT_NEAR(overall_efficiency(peak_conversion_power(c), c, chain), 0.120, 1e-12);
    EXPECT_NEAR(overall_efficiency(0.0255, c, chain), 0.060, 0.001);

    DetectorChain identity{1.0, 1.0, 1.0, 0.0, 0.0, 0.0};
    for (double p : {0.0, 0.01, 0.05, 0.3}) {
        EXPECT_EQ(overall_efficiency(p, c, identity), internal_conversion_efficiency(p, c));
    }
}

TEST(OverallEfficiency, BoundedByChainProperty) {
    const auto& c = device_crystal();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> frac(0.01, 1.0), power(0.0, 2.0);
    for (int i = 0; i < 1000; ++i) {
        DetectorChain chain{frac(rng), frac(rng), frac(rng), 0.0, 0.0, 0.0};
        const double e = overall_efficiency(power(rng), c, chain);
        ASSERT_GE(e, 0.0);
        ASSERT_LE(e, chain.transmission_product() + 1e-15);
    }
}

TEST(DetectorChain, Validation) {
    DetectorChain chain;
    EXPECT_NO_THROW(chain.validate());
    chain.filter_transmission = 0.0;
    EXPECT_THROW(chain.validate(), DomainError);
    chain.filter_transmission = 0.5;
    chain.dead_time_ns = -1.0;
    EXPECT_THROW(chain.validate(), DomainError);
}

TEST(NoiseRate, Basics) {
    const NoiseModel m{100.0, 2e6, 0.0};
    EXPECT_EQ(noise_rate(0.0, m), 100.0);
    EXPECT_DOUBLE_EQ(noise_rate(0.02, m), 100.0 + 2.0 * (noise_rate(0.01, m) - 100.0));
    EXPECT_THROW(noise_rate(-1.0, m), DomainError);

    const auto& calibrated = *device_config().noise;
    EXPECT_NEAR(noise_rate(0.0255, calibrated), 50000.0, 1.0);
}

TEST(NoiseRate, NonDecreasingProperty) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coef(0.0, 1e7), power(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const NoiseModel m{coef(rng) * 1e-3, coef(rng), coef(rng)};
        double a = power(rng), b = power(rng);
        if (a > b) std::swap(a, b);
        ASSERT_LE(noise_rate(a, m), noise_rate(b, m));
    }
}

TEST(CalibrateNoise, SinglePointLinear) {
    const std::vector<NoisePoint> pts{{0.0255, 50000.0}};
    const auto fit = calibrate_noise(pts, 100.0, false);
    EXPECT_NEAR(fit.model.linear_coeff_hz_per_w, 1.957e6, 1e3);
    EXPECT_NEAR(fit.model.linear_coeff_hz_per_w, (50000.0 - 100.0) / 0.0255, 1e-6);
    EXPECT_EQ(fit.model.quadratic_coeff_hz_per_w2, 0.0);
    EXPECT_FALSE(fit.clamped);
    EXPECT_NEAR(noise_rate(0.0255, fit.model), 50000.0, 1e-6);
}

TEST(CalibrateNoise, RecoversSyntheticModelsProperty) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coef(0.0, 1e7), power(0.001, 0.5), dark(0.0, 1000.0);
    for (int i = 0; i < 300; ++i) {
        const NoiseModel truth{dark(rng), coef(rng), coef(rng)};
        std::vector<NoisePoint> pts;
        for (int k = 0; k < 6; ++k) {
            const double p = power(rng);
            pts.push_back({p, noise_rate(p, truth)});
        }
        const auto fit = calibrate_noise(pts, truth.dark_offset_hz, true);
        ASSERT_NEAR(fit.model.linear_coeff_hz_per_w, truth.linear_coeff_hz_per_w,
                    1e-6 * std::max(truth.linear_coeff_hz_per_w, truth.quadratic_coeff_hz_per_w2));
        ASSERT_NEAR(fit.model.quadratic_coeff_hz_per_w2, truth.quadratic_coeff_hz_per_w2,
                    1e-6 * std::max(truth.linear_coeff_hz_per_w, truth.quadratic_coeff_hz_per_w2));
        ASSERT_FALSE(fit.clamped);
    }
}

TEST(CalibrateNoise, ClampsNegativeCoefficients) {
    // Rate falling with power would need a negative linear term.
    const std::vector<NoisePoint> pts{{0.01, 50.0}, {0.02, 40.0}};
    const auto fit = calibrate_noise(pts, 100.0, false);
    EXPECT_TRUE(fit.clamped);
    EXPECT_EQ(fit.model.linear_coeff_hz_per_w, 0.0);

    // Concave data: the unconstrained quadratic term is negative.
    const std::vector<NoisePoint> concave{{0.1, 1100.0}, {0.2, 1900.0}, {0.3, 2500.0}};
    const auto q = calibrate_noise(concave, 100.0, true);
    EXPECT_TRUE(q.clamped);
    EXPECT_EQ(q.model.quadratic_coeff_hz_per_w2, 0.0);
    EXPECT_GT(q.model.linear_coeff_hz_per_w, 0.0);
}

TEST(CalibrateNoise, Errors) {
    const std::vector<NoisePoint> same{{0.02, 100.0}, {0.02, 200.0}};
    EXPECT_THROW(calibrate_noise(same, 0.0, true), FitError);
    EXPECT_THROW(calibrate_noise(same, 0.0, false), FitError);
    const std::vector<NoisePoint> one{{0.02, 100.0}};
    EXPECT_THROW(calibrate_noise(one, 0.0, true), FitError);
    EXPECT_THROW(calibrate_noise(std::vector<NoisePoint>{}, 0.0, false), FitError);
    const std::vector<NoisePoint> zero{{0.0, 100.0}};
    EXPECT_THROW(calibrate_noise(zero, 0.0, false), FitError);
}

TEST(Curve, RowsAndAnchor) {
    const auto& cfg = device_config();
    const auto& c = *cfg.crystal;
    const std::vector<double> zero{0.0};
    const auto rows0 = efficiency_noise_curve(zero, c, *cfg.chain, *cfg.noise);
    ASSERT_EQ(rows0.size(), 1u);
    EXPECT_EQ(rows0[0].efficiency, 0.0);
    EXPECT_EQ(rows0[0].noise_hz, cfg.noise->dark_offset_hz);

    auto grid = linspace(0.0, 0.2, 41);
    grid.push_back(0.0255);
    std::sort(grid.begin(), grid.end());
    const auto rows = efficiency_noise_curve(grid, c, *cfg.chain, *cfg.noise);
    bool anchor = false;
    for (const auto& r : rows) {
        if (r.pump_power_w == 0.0255) {
            anchor = true;
            EXPECT_NEAR(r.efficiency, 0.06, 0.001);
            EXPECT_NEAR(r.noise_hz, 50000.0, 1.0);
        }
    }
    EXPECT_TRUE(anchor);

    const std::vector<double> unsorted{0.1, 0.0};
    EXPECT_THROW(efficiency_noise_curve(unsorted, c, *cfg.chain, *cfg.noise), DomainError);
}

TEST(Curve, EfficiencyRisesToFirstPeak) {
    const auto& cfg = device_config();
    const auto& c = *cfg.crystal;
    const auto grid = linspace(0.0, peak_conversion_power(c), 2001);
    const auto rows = efficiency_noise_curve(grid, c, *cfg.chain, *cfg.noise);
    for (std::size_t i = 1; i < rows.size(); ++i) ASSERT_GE(rows[i].efficiency, rows[i - 1].efficiency);
}
