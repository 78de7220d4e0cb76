#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "maxlab/config.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(MAXLAB_TEST_WORKDIR) / "cli";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::create_directories(kWork);
    const fs::path p = kWork / (name + ".ini");
    std::ofstream(p) << text;
    return p;
}

struct Outcome {
    int code = -1;
    std::string output;
};

Outcome cli(const std::string& args) {
    const std::string cmd = std::string(MAXLAB_CLI) + " " + args + " 2>&1";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return o;
    char buf[512];
    while (fgets(buf, sizeof buf, pipe)) o.output += buf;
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

std::string out_dir(const std::string& name) { return (kWork / "out" / name).string(); }

}  // namespace

TEST(Cli, RunWritesEveryArtifact) {
    const auto cfg = write_config("tilted", "[scenario]\nname = tilted-plane\n[grid]\nresolution = 65\n");
    const Outcome o = cli("run --quiet --config " + cfg.string() + " --out " + out_dir("tilted"));
    ASSERT_EQ(o.code, 0) << o.output;
    for (const char* f : {"config.ini", "report.json", "timings.json", "estimates.csv", "geometry.csv", "distance.dat",
                          "disc_boundary.dat", "a_norm_profile.dat", "slack_vs_R.dat"}) {
        EXPECT_TRUE(fs::exists(fs::path(out_dir("tilted")) / f)) << f;
    }
    const auto report = nlohmann::json::parse(slurp(fs::path(out_dir("tilted")) / "report.json"));
    EXPECT_TRUE(report["passed"].get<bool>());
    EXPECT_EQ(report["runs"][0]["estimates"].size(), 9u);
    EXPECT_EQ(report["runs"][0]["rigidity"], "totally-geodesic-nonslice");
}

TEST(Cli, OutputsAreBitIdenticalAcrossRuns) {
    const auto cfg = write_config("perturbed", "[scenario]\nname = sphere-perturbed\n[grid]\nresolution = 49\n");
    ASSERT_EQ(cli("run --quiet --config " + cfg.string() + " --out " + out_dir("det")).code, 0);
    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(out_dir("det"))) first[e.path().filename()] = slurp(e.path());
    ASSERT_EQ(cli("run --quiet --config " + cfg.string() + " --out " + out_dir("det")).code, 0);
    for (const auto& [name, text] : first) {
        if (name == "timings.json") continue;
        EXPECT_EQ(slurp(fs::path(out_dir("det")) / name), text) << name;
    }
}

TEST(Cli, ConfigEchoReparsesToEffectiveConfig) {
    const auto cfg = write_config("echo", "[scenario]\nname = flat-plane\n[disc]\npairs = 0.1:0.3\n");
    ASSERT_EQ(cli("run --quiet --resolution 33 --config " + cfg.string() + " --out " + out_dir("echo")).code, 0);
    const maxlab::ExperimentConfig echo = maxlab::load_config((fs::path(out_dir("echo")) / "config.ini").string());
    maxlab::ExperimentConfig expected = maxlab::load_config(cfg.string());
    expected.resolution = 33;
    expected.study = {33, 65, 129};
    expected.out_dir = out_dir("echo");
    EXPECT_EQ(echo, expected);
    const auto report = nlohmann::json::parse(slurp(fs::path(out_dir("echo")) / "report.json"));
    EXPECT_EQ(maxlab::parse_config_string(report["config"].get<std::string>()), expected);
}

TEST(Cli, SweepWritesOneRowPerPair) {
    const auto cfg = write_config("sweep", "[scenario]\nname = flat-plane\n[grid]\nresolution = 65\n");
    ASSERT_EQ(cli("sweep --quiet --config " + cfg.string() + " --out " + out_dir("sweep")).code, 0);
    std::istringstream csv(slurp(fs::path(out_dir("sweep")) / "sweep.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line.rfind("p,r,R,alpha_r,c_r,lhs,L_r,rhs,slack,C_r,R_max,lemma_lhs,lemma_rhs,eq17_min_margin", 0), 0u);
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        // Plane: lhs = 0, so slack equals rhs.
        std::vector<std::string> cells;
        std::stringstream s(line);
        for (std::string c; std::getline(s, c, ',');) cells.push_back(c);
        EXPECT_EQ(std::stod(cells[5]), 0.0);
        EXPECT_EQ(cells[8], cells[7]);
    }
    EXPECT_EQ(rows, 9);
}

TEST(Cli, ConvergeWritesTable) {
    const auto cfg = write_config("conv", "[scenario]\nname = sphere-slice\n[grid]\nstudy = 33 65 129\n");
    const Outcome o = cli("converge --quiet --config " + cfg.string() + " --out " + out_dir("conv"));
    ASSERT_EQ(o.code, 0) << o.output;
    const auto report = nlohmann::json::parse(slurp(fs::path(out_dir("conv")) / "report.json"));
    EXPECT_EQ(report["convergence"]["rows"].size(), 3u);
    EXPECT_GE(report["convergence"]["orders"]["distance"].get<double>(), 0.9);
    EXPECT_TRUE(fs::exists(fs::path(out_dir("conv")) / "convergence.dat"));
}

TEST(Cli, AssertionFailureExitsOne) {
    const auto cfg = write_config("strict", "[scenario]\nname = sphere-slice\n[grid]\nstudy = 33 65\n"
                                            "[converge]\ndistance_order_min = 5\n");
    const Outcome o = cli("converge --config " + cfg.string() + " --out " + out_dir("strict"));
    EXPECT_EQ(o.code, 1) << o.output;
    EXPECT_NE(o.output.find("FAIL order.distance"), std::string::npos) << o.output;
}

TEST(Cli, StageErrorsExitTwoWithTag) {
    const auto steep = write_config("steep", "[scenario]\nname = tilted-plane\n[boundary]\nparams = 0 1.5 0\n"
                                             "[grid]\nresolution = 33\n");
    Outcome o = cli("run --config " + steep.string() + " --out " + out_dir("steep"));
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.output.find("[solver]"), std::string::npos) << o.output;

    const auto big = write_config("big", "[scenario]\nname = flat-plane\n[grid]\nresolution = 33\n"
                                         "[disc]\npairs = 0.5:1.5\n");
    o = cli("run --config " + big.string() + " --out " + out_dir("big"));
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.output.find("[geodesic]"), std::string::npos) << o.output;

    const auto bad = write_config("bad", "[scenario]\nname = flat-plane\n[disc]\npairs = 0.3:0.1\n");
    o = cli("run --config " + bad.string());
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.output.find("[config]"), std::string::npos) << o.output;

    EXPECT_EQ(cli("run --config /nonexistent.ini").code, 2);
    EXPECT_EQ(cli("explode").code, 2);
}
