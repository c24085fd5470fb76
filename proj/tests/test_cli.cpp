#include "cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = upconv::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const std::string kConfig = UPCONV_DEVICE_CONFIG;

}  // namespace

TEST(Cli, SolveSignal) {
    const auto r = run({"qpm", "solve", "signal", "--config", kConfig, "--bracket", "1500", "1600"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string header, value;
    std::getline(lines, header);
    std::getline(lines, value);
    EXPECT_EQ(header, "signal_nm");
    EXPECT_NEAR(std::stod(value), 1550.0, 0.05);
}

TEST(Cli, SolveJsonCarriesResidual) {
    const auto r = run({"qpm", "solve", "pump", "--config", kConfig, "--signal", "1550", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_LT(std::abs(j.at("phase_mismatch_rad_per_um").get<double>()), 1e-10);
}

TEST(Cli, PlanBandFourChannels) {
    const auto r = run({"plan", "band", "--min", "1530", "--max", "1565", "--width", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("channels").size(), 4u);

    const auto with_pumps = run({"plan", "band", "--config", kConfig, "--min", "1530", "--max", "1565", "--width", "10"});
    ASSERT_EQ(with_pumps.code, 0) << with_pumps.err;
    const auto jp = nlohmann::json::parse(with_pumps.out);
    EXPECT_TRUE(jp.at("channels")[0].at("pump_center_nm").is_number());
}

TEST(Cli, PlanValidateFromFile) {
    const auto dir = std::filesystem::temp_directory_path() / "upconv_cli_plan";
    std::filesystem::create_directories(dir);
    const auto plan = (dir / "plan.json").string();
    ASSERT_EQ(run({"plan", "band", "--config", kConfig, "--width", "10", "--out", plan}).code, 0);
    const auto r = run({"plan", "validate", "--config", kConfig, "--plan", plan, "--halfwidth", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j.at("feasible").get<bool>());
    EXPECT_EQ(j.at("violations").size(), 4u);
    std::filesystem::remove_all(dir);
}

TEST(Cli, SimCountsByteIdenticalFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "upconv_cli_sim";
    std::filesystem::create_directories(dir);
    const auto a = (dir / "a.csv").string();
    const auto b = (dir / "b.csv").string();
    const std::vector<std::string> base{"sim", "counts", "--config", kConfig, "--seed", "42", "--duration", "0.01"};
    auto args_a = base;
    args_a.insert(args_a.end(), {"--out", a});
    auto args_b = base;
    args_b.insert(args_b.end(), {"--out", b});
    ASSERT_EQ(run(args_a).code, 0);
    ASSERT_EQ(run(args_b).code, 0);
    const auto text = read_file(a);
    EXPECT_EQ(text, read_file(b));
    EXPECT_EQ(text.rfind("t_seconds\n", 0), 0u);
    EXPECT_GT(text.size(), 100u);
    std::filesystem::remove_all(dir);
}

TEST(Cli, CsvHeaders) {
    EXPECT_EQ(run({"qpm", "acceptance", "--config", kConfig, "--points", "11"}).out.rfind("signal_nm,efficiency\n", 0), 0u);
    EXPECT_EQ(run({"qpm", "envelope", "--config", kConfig, "--points", "101"}).out.rfind("signal_nm,efficiency\n", 0), 0u);
    EXPECT_EQ(run({"response", "curve", "--config", kConfig, "--points", "5"}).out.rfind("power_W,efficiency,noise_hz\n", 0),
              0u);
    EXPECT_EQ(run({"sim", "jitter", "--config", kConfig, "--duration", "0.001", "--efficiency", "1", "--dark-rate", "0"})
                  .out.rfind("dt_ps,count\n", 0),
              0u);
}

TEST(Cli, ResponseCalibrate) {
    const auto r = run({"response", "calibrate", "--point", "0.0255,50000", "--dark", "100"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j.at("noise").at("linear_coeff_hz_per_w").get<double>(), (50000.0 - 100.0) / 0.0255, 1e-6);

    EXPECT_EQ(run({"response", "calibrate", "--point", "0.02,1", "--point", "0.02,2", "--quadratic"}).code, 1);
}

TEST(Cli, IndexAndTuneSlope) {
    const auto r = run({"index", "--wavelength-um", "1.55", "--temperature-c", "24.5", "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(nlohmann::json::parse(r.out).at("bulk_index").get<double>(), 2.138, 0.002);

    const auto s = run({"qpm", "tune-slope", "--config", kConfig, "--variable", "temperature", "--format", "json"});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_GT(nlohmann::json::parse(s.out).at("slope_nm_per_k").get<double>(), 0.15);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"qpm", "solve", "signal", "--no-such-flag"}).code, 2);
    EXPECT_EQ(run({"sim", "counts", "--seed", "abc"}).code, 2);
    EXPECT_EQ(run({"qpm", "solve", "signal", "--config", kConfig, "--bracket", "1600", "1700"}).code, 1);
    EXPECT_EQ(run({"qpm", "solve", "signal"}).code, 1);  // no crystal section
    EXPECT_EQ(run({"index", "--wavelength-um", "9"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}
