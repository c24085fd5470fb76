#include "upconv/dispersion.hpp"
#include "upconv/errors.hpp"

#include "oracle/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace upconv;

namespace {

// Frozen from an independent evaluation of the published coefficient set.
constexpr double kIndex1550 = 2.1378613831803728;
constexpr double kIndex600 = 2.2110037535283893;

}  // namespace

TEST(Dispersion, GoldenValuesAtReferenceTemperature) {
    EXPECT_NEAR(refractive_index(congruent_ln_e(), 1.550, 24.5), kIndex1550, 1e-12);
    EXPECT_NEAR(refractive_index(congruent_ln_e(), 0.600, 24.5), kIndex600, 1e-12);
    EXPECT_NEAR(refractive_index(congruent_ln_e(), 1.550, 24.5), 2.138, 0.002);
}

TEST(Dispersion, MatchesLiteralCoefficientOracle) {
    for (double l : {0.45, 0.6, 0.98, 1.31, 1.55, 2.0, 3.5}) {
        for (double t : {20.0, 24.5, 60.0, 150.0, 250.0}) {
            EXPECT_NEAR(refractive_index(congruent_ln_e(), l, t),
                        static_cast<double>(oracle::ln_extraordinary(l, t)), 1e-13)
                << l << " um, " << t << " C";
        }
    }
}

TEST(Dispersion, NormalDispersionOnDenseGrid) {
    const auto& m = congruent_ln_e();
    EXPECT_GT(refractive_index(m, 1.550, 24.5), refractive_index(m, 1.551, 24.5));
    double prev = refractive_index(m, 0.5, 24.5);
    for (int i = 1; i < 1000; ++i) {
        const double l = 0.5 + 1.5 * i / 999.0;
        const double n = refractive_index(m, l, 24.5);
        ASSERT_LT(n, prev) << "at " << l << " um";
        ASSERT_GT(n, 1.0);
        ASSERT_LT(n, 4.0);
        prev = n;
    }
}

TEST(Dispersion, ContinuousInTemperature) {
    const auto& m = congruent_ln_e();
    for (double l : {0.6, 0.98, 1.55}) {
        double prev = refractive_index(m, l, 20.0);
        for (int i = 1; i <= 1800; ++i) {
            const double n = refractive_index(m, l, 20.0 + 0.1 * i);
            ASSERT_LT(std::abs(n - prev), 1e-4);
            prev = n;
        }
    }
}

TEST(Dispersion, OutOfRangeNamesParameter) {
    try {
        refractive_index(congruent_ln_e(), 6.0, 25.0);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("wavelength"), std::string::npos);
    }
    try {
        refractive_index(congruent_ln_e(), 1.55, 400.0);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("temperature"), std::string::npos);
    }
    EXPECT_THROW(refractive_index(congruent_ln_e(), std::nan(""), 25.0), DomainError);
}

TEST(Dispersion, EffectiveIndexOffsets) {
    WaveguideIndexModel flat0;
    for (double l : {0.6, 0.98, 1.55}) {
        EXPECT_EQ(effective_index(flat0, l, 30.0), refractive_index(flat0.bulk, l, 30.0));
    }

    WaveguideIndexModel flat;
    flat.default_delta_n = 0.01;
    EXPECT_DOUBLE_EQ(effective_index(flat, 1.55, 30.0), refractive_index(flat.bulk, 1.55, 30.0) + 0.01);

    WaveguideIndexModel piecewise;
    piecewise.bands.push_back({{0.9, 1.1}, 0.02});
    EXPECT_DOUBLE_EQ(effective_index(piecewise, 0.98, 30.0), refractive_index(piecewise.bulk, 0.98, 30.0) + 0.02);
    EXPECT_EQ(effective_index(piecewise, 1.55, 30.0), refractive_index(piecewise.bulk, 1.55, 30.0));
}

TEST(Dispersion, DeltaNBoundsEnforced) {
    WaveguideIndexModel m;
    m.bands.push_back({{0.4, 0.7}, 0.2});
    EXPECT_THROW(m.validate(), DomainError);
    m.bands.front().delta_n = -0.1;
    EXPECT_NO_THROW(m.validate());
}

TEST(Dispersion, JsonSchema) {
    const auto round = parse_sellmeier_json(sellmeier_to_json(congruent_ln_e()));
    EXPECT_EQ(round.coefficients, congruent_ln_e().coefficients);
    EXPECT_EQ(round.name, "congruent-LN-e");

    EXPECT_THROW(parse_sellmeier_json(R"({"name":"x","coefficients":[1,2,3],
        "wavelength_range_um":[0.4,5],"temperature_range_c":[20,250]})"),
                 ConfigError);
    EXPECT_THROW(parse_sellmeier_json(R"({"name":"x","coefficients":[1,2,3,4,5,6,7,8,9,10],
        "wavelength_range_um":[0.4,5],"temperature_range_c":[20,250],"extra":1})"),
                 ConfigError);
    EXPECT_THROW(parse_sellmeier_json("{not json"), ConfigError);
}
