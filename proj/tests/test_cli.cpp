#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "galg/cli.hpp"

using namespace galg;

namespace {

const std::string kDir = GALG_SCENARIO_DIR;

struct Result {
    int status;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string reflection_scenario() { return kDir + "/paper_section5.scn"; }

} // namespace

TEST(Cli, CheckPassesOnReflectionExample) {
    const Result r = run({"check", "--scenario", reflection_scenario()});
    EXPECT_EQ(r.status, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("4/4 checks passed"), std::string::npos);
}

TEST(Cli, CheckFailureStatus) {
    const Result r = run({"check", "--scenario", kDir + "/jacobi_counterexample.scn"});
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("FAIL jacobi: (t1, t2, t3): residual -t2"), std::string::npos);
}

TEST(Cli, JsonAndTextAgree) {
    const Result text = run({"check", "--scenario", kDir + "/jacobi_counterexample.scn", "--seed", "7"});
    const Result json = run({"check", "--scenario", kDir + "/jacobi_counterexample.scn", "--seed", "7", "--json"});
    EXPECT_EQ(text.status, json.status);
    const auto j = nlohmann::json::parse(json.out);
    for (const auto& e : j) {
        const std::string line = std::string(e["pass"].get<bool>() ? "PASS " : "FAIL ") + e["check"].get<std::string>();
        EXPECT_NE(text.out.find(line), std::string::npos) << line;
    }
}

TEST(Cli, PinvPrintsLeftInverse) {
    const Result r = run({"pinv", "--scenario", reflection_scenario(), "--matrix", "R"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "[-x1/(x1^2 + 2), x1/(x1^2 + 2), 2/(x1^2 + 2); 1/(x1^2 + 2), (x1^2 + 1)/(x1^2 + 2), x1/(x1^2 + 2)]\n");
    EXPECT_NE(r.err.find("x1^2 + 2"), std::string::npos);
    EXPECT_EQ(run({"pinv", "--scenario", reflection_scenario(), "--matrix", "nope"}).status, 2);
    EXPECT_EQ(run({"pinv", "--scenario", reflection_scenario(), "--matrix", "G"}).status, 0);
    EXPECT_EQ(run({"pinv", "--scenario", reflection_scenario(), "--matrix", "P"}).status, 1); // wide: dimension error
}

TEST(Cli, ComposeReductionAfterReflection) {
    const Result r = run({"compose", "--scenario", reflection_scenario(), "--outer", "R", "--inner", "Ts"});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out, "base map: (x1, x2, x3) -> (-x1, -x2, -x3)\ncomponents: [-x1, -1; 0, -1; -1, 0]\n");
    EXPECT_EQ(run({"compose", "--scenario", reflection_scenario(), "--outer", "Ts", "--inner", "R"}).status, 1);
}

TEST(Cli, UsageErrors) {
    const Result bogus = run({"bogus"});
    EXPECT_EQ(bogus.status, 2);
    EXPECT_NE(bogus.err.find("unknown subcommand 'bogus'"), std::string::npos);
    EXPECT_NE(bogus.err.find("Usage:"), std::string::npos);
    EXPECT_EQ(run({}).status, 2);
    EXPECT_EQ(run({"check"}).status, 2);
    EXPECT_EQ(run({"check", "--frobnicate"}).status, 2);
    EXPECT_EQ(run({"--help"}).status, 0);
}

TEST(Cli, ScenarioErrorsExitThree) {
    EXPECT_EQ(run({"check", "--scenario", kDir + "/invalid/anchor_rank.scn"}).status, 3);
    EXPECT_EQ(run({"check", "--scenario", kDir + "/invalid/not_diffeomorphism.scn"}).status, 3);
    EXPECT_EQ(run({"check", "--scenario", kDir + "/does_not_exist.scn"}).status, 3);
    EXPECT_EQ(run({"simulate", "--scenario", kDir + "/reflected_anchor.scn"}).status, 3);
}

TEST(Cli, SimulateWritesCsv) {
    const std::string path = ::testing::TempDir() + "galg_sim.csv";
    const Result r = run({"simulate", "--scenario", reflection_scenario(), "--out", path});
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "t,x1,x2,x3,y1,y2,y3,E,cost");
    std::size_t lines = 1;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 1002u);
    std::remove(path.c_str());
}

TEST(Cli, EulerLagrangeConservesEnergy) {
    const Result r = run({"euler-lagrange", "--scenario", reflection_scenario()});
    EXPECT_EQ(r.status, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,x1,x2,x3,z1,z2,E,cost");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        const auto e_pos = line.find_last_of(',', line.rfind(',') - 1);
        const double e = std::stod(line.substr(e_pos + 1));
        ASSERT_NEAR(e, 0.5, 1e-9) << line;
    }
    EXPECT_EQ(rows, 5001u);
}

TEST(Cli, VerifyBuiltInExample) {
    const Result r = run({"verify-paper"});
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("10/10 checks passed"), std::string::npos);
    const Result j = run({"verify-paper", "--json"});
    const auto parsed = nlohmann::json::parse(j.out);
    EXPECT_EQ(parsed.size(), 10u);
    for (const auto& e : parsed) EXPECT_TRUE(e["pass"].get<bool>());
}
