#include <json.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct CliRun {
    int code;
    std::string out;
};

CliRun slpass(const std::string& args) {
    const std::string cmd = std::string(SLPASS_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, SpectrumJson) {
    const CliRun r = slpass("spectrum --model pair --kappa 2 --gamma 1 --format json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["rows"][0][1].get<double>(), -2.8284271247461903, 1e-12);
    EXPECT_TRUE(j["metadata"]["ground_fully_entangled"].get<bool>());
}

TEST(Cli, BadConfigExitsTwo) {
    EXPECT_EQ(slpass("spectrum --model pair --kappa -1").code, 2);
    EXPECT_EQ(slpass("spectrum --model banana").code, 2);
    EXPECT_EQ(slpass("omega-grid --resolution 2").code, 2);
    EXPECT_EQ(slpass("local-energy --temperature 0").code, 2);
    EXPECT_EQ(slpass("nonsense").code, 2);
}

TEST(Cli, OmegaGridIsDeterministic) {
    const CliRun a = slpass("omega-grid --kappa 2 --resolution 5");
    const CliRun b = slpass("omega-grid --kappa 2 --resolution 5");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("# config_hash: "), std::string::npos);
    EXPECT_NE(a.out.find("delta0,delta1,omega,branch,masked"), std::string::npos);
    // centre of the diamond
    EXPECT_NE(a.out.find("\n0,0,1,interior,0\n"), std::string::npos);
    // ground-state corner
    EXPECT_NE(a.out.find("\n1,0,0,"), std::string::npos);
    // outside the diamond
    EXPECT_NE(a.out.find("\n-1,-1,nan,,1\n"), std::string::npos);
}

TEST(Cli, OmegaGridCornerEdgeIsPassive) {
    const CliRun r = slpass("omega-grid --kappa 2 --resolution 201 --format json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    int checked = 0;
    for (const auto& row : j["rows"]) {
        const double d0 = row[0], d1 = row[1];
        if (d0 >= 0.8767 && std::abs(d1 - (d0 - 1.0)) < 1e-9) {
            EXPECT_EQ(row[2].get<double>(), 0.0) << d0;
            ++checked;
        }
    }
    EXPECT_GT(checked, 5);
}

TEST(Cli, OmegaGridSvg) {
    const CliRun r = slpass("omega-grid --kappa 2 --resolution 11 --format svg");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("<svg", 0), 0u);
}

TEST(Cli, LocalEnergyReports) {
    const CliRun pops = slpass("local-energy --kappa 2 --populations 0.96,0,0.04,0 --restarts 16 --format json");
    ASSERT_EQ(pops.code, 0);
    const auto j = nlohmann::json::parse(pops.out);
    EXPECT_TRUE(j["sl_passive"].get<bool>());
    EXPECT_FALSE(j["passive"].get<bool>());

    for (const char* t : {"0.5", "5", "50"}) {
        const CliRun x = slpass(std::string("local-energy --model xxx --temperature ") + t + " --restarts 16 --format json");
        ASSERT_EQ(x.code, 0) << t;
        EXPECT_TRUE(nlohmann::json::parse(x.out)["sl_passive"].get<bool>()) << t;
    }

    const CliRun coh = slpass("local-energy --kappa 2 --populations 0.95,0,0.05,0 --r 0.1 --restarts 16 --format json");
    ASSERT_EQ(coh.code, 0);
    const auto c = nlohmann::json::parse(coh.out);
    EXPECT_FALSE(c["sl_passive"].get<bool>());
    EXPECT_GT(c["witness_phi"].get<double>(), 0.0);
}

TEST(Cli, CriticalTempInset) {
    const CliRun r = slpass("critical-temp --family pair --gammas 0,0.5 --kappa-min 0.5 --kappa-max 4 --kappa-steps 35 "
                         "--format json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto& inset = j["metadata"]["inset"];
    ASSERT_EQ(inset.size(), 2u);
    // the dip of T*(kappa) sits on the degeneracy curve within the grid step
    EXPECT_NEAR(inset[1]["kappa_dip"].get<double>(), 2.0 / std::sqrt(0.75), 0.1);
    EXPECT_LT(inset[1]["t_star_at_dip"].get<double>(), 1e-3);
    // isotropic coupling: no local energy below kappa = 2, some above
    for (const auto& row : j["rows"]) {
        if (row[0].get<double>() != 0.0) continue;
        const double kappa = row[1];
        if (kappa < 2.0 - 1e-9) EXPECT_EQ(row[2], 0.0) << kappa;
        if (kappa > 2.0 + 1e-9) EXPECT_GT(row[2].get<double>(), 0.0) << kappa;
    }
}

TEST(Cli, ThresholdText) {
    const CliRun r = slpass("threshold --kappa 2 --format json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["p_star"].get<double>(), 0.9383, 5e-5);
    EXPECT_NEAR(j["p_star_printed"].get<double>(), 0.655, 1e-3);
}

TEST(Cli, VerifyHarness) {
    const CliRun list = slpass("verify --list");
    EXPECT_EQ(list.code, 0);
    EXPECT_NE(list.out.find("threshold reproduction"), std::string::npos);
    EXPECT_EQ(slpass("verify --only 1,2").code, 0);
    EXPECT_EQ(slpass("verify --only 1,2 --corrupt-tolerance").code, 1);
    EXPECT_EQ(slpass("verify --only 11").code, 2);
}
