#include "slp/sweep.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace slp;

namespace {

SweepResult sample() {
    SweepResult r;
    r.columns = {"x", "y", "label", "masked"};
    r.config = Json::object();
    r.config["command"] = "test";
    r.config["kappa"] = 2.0;
    r.seed = 9;
    r.add_row({0.1, 1.0 / 3.0, std::string("a"), std::int64_t{0}});
    r.add_row({0.2, std::numeric_limits<double>::infinity(), std::string("b"), std::int64_t{0}});
    r.add_row({0.3, std::nan(""), std::string(""), std::int64_t{1}});
    return r;
}

}  // namespace

TEST(Sweep, CsvIsDeterministicAndRoundTrips) {
    std::ostringstream a, b;
    write_csv(a, sample());
    write_csv(b, sample());
    EXPECT_EQ(a.str(), b.str());
    EXPECT_NE(a.str().find("# config_hash: " + config_hash(sample().config)), std::string::npos);
    EXPECT_NE(a.str().find("# tool_version: " + std::string(kToolVersion)), std::string::npos);
    EXPECT_NE(a.str().find("# seed: 9"), std::string::npos);
    EXPECT_NE(a.str().find("x,y,label,masked\n"), std::string::npos);
    EXPECT_NE(a.str().find(",inf,"), std::string::npos);
    // 17 significant digits parse back exactly
    const std::string third = format_double(1.0 / 3.0);
    EXPECT_EQ(std::stod(third), 1.0 / 3.0);
    EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Sweep, JsonMirrorsRows) {
    const Json j = to_json(sample());
    EXPECT_EQ(j["columns"].size(), 4u);
    ASSERT_EQ(j["rows"].size(), 3u);
    EXPECT_EQ(j["rows"][1][1], "inf");
    EXPECT_TRUE(j["rows"][2][1].is_null());
    EXPECT_EQ(j["metadata"]["seed"], 9);
    EXPECT_EQ(j["metadata"]["config_hash"], config_hash(sample().config));
    EXPECT_EQ(to_json(sample()).dump(), j.dump());
}

TEST(Sweep, NanNeedsMaskedFlag) {
    SweepResult r = sample();
    EXPECT_NO_THROW(r.check_flags());
    r.add_row({0.4, std::nan(""), std::string("c"), std::int64_t{0}});
    EXPECT_THROW(r.check_flags(), Error);
    std::ostringstream os;
    EXPECT_THROW(write_csv(os, r), Error);
    EXPECT_THROW(r.add_row({1.0}), Error);
}

TEST(Sweep, ConfigHashSeparatesConfigs) {
    Json a = sample().config, b = a;
    b["kappa"] = 2.5;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a), config_hash(sample().config));
    EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Sweep, OmegaSvgOutlinesZeroRegion) {
    SweepResult r;
    r.columns = {"delta0", "delta1", "omega", "masked"};
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double d0 = -1 + 0.5 * i, d1 = -1 + 0.5 * j;
            const bool out = std::abs(d0) + std::abs(d1) > 1;
            r.add_row({d0, d1, out ? std::nan("") : std::max(0.0, 0.5 - d0), std::int64_t{out ? 1 : 0}});
        }
    std::ostringstream os;
    write_omega_svg(os, r, {{0.0, 0.0}, {0.5, 0.2}});
    const std::string svg = os.str();
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("polyline"), std::string::npos);
}

TEST(Sweep, ModelJsonCarriesSpectrum) {
    const Json j = model_to_json(build_pair(2.0, 1.0));
    EXPECT_EQ(j["kind"], "pair");
    ASSERT_EQ(j["energies"].size(), 4u);
    EXPECT_NEAR(j["energies"][0].get<double>(), -std::sqrt(8.0), 1e-12);
}
