#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "maxlab/error.hpp"
#include "maxlab/harness.hpp"
#include "maxlab/scenario.hpp"

using namespace maxlab;

namespace {

RunOptions silent() {
    RunOptions o;
    o.quiet = true;
    o.write_outputs = false;
    return o;
}

}  // namespace

TEST(ObservedOrder, RecoversPowerLaws) {
    const std::vector<double> h{0.1, 0.05, 0.025};
    EXPECT_NEAR(observed_order(h, {3e-2, 7.5e-3, 1.875e-3}), 2.0, 1e-12);
    EXPECT_NEAR(observed_order(h, {1e-2, 5e-3, 2.5e-3}), 1.0, 1e-12);
    EXPECT_TRUE(std::isnan(observed_order(h, {0.0, 0.0, 0.0})));
    EXPECT_TRUE(std::isnan(observed_order({0.1}, {1.0})));
}

TEST(EstimateSerialisation, FixedJsonFieldsAndCsvPrefix) {
    EstimateReport e;
    e.p = 7;
    e.r = 0.1;
    e.R = 0.3;
    e.lhs = 0.5;
    e.C_r = 2.0;
    e.R_max = 0.1 * std::exp(2.0);
    const auto j = nlohmann::ordered_json::parse(estimate_json(e));
    const std::vector<std::string> keys{"p",   "r",     "R",         "alpha_r",   "c_r",
                                        "lhs", "L_r",   "rhs",       "slack",     "C_r",
                                        "R_max", "lemma_lhs", "lemma_rhs", "eq17_min_margin"};
    std::vector<std::string> got;
    for (const auto& [k, v] : j.items()) got.push_back(k);
    EXPECT_EQ(got, keys);
    EXPECT_EQ(j["p"], 7);
    EXPECT_EQ(j["R_max"].get<double>(), *e.R_max);
    e.C_r.reset();
    EXPECT_TRUE(nlohmann::json::parse(estimate_json(e))["C_r"].is_null());

    std::string prefix;
    for (const auto& k : keys) prefix += (prefix.empty() ? "" : ",") + k;
    const std::string header = estimate_csv_header();
    EXPECT_EQ(header.rfind(prefix, 0), 0u);
    const std::string row = estimate_csv_row(e);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
    EXPECT_EQ(row.rfind("7,0.10000000000000001,0.29999999999999999,", 0), 0u);
}

TEST(Pipeline, TiltedPlaneRunPasses) {
    ExperimentConfig cfg = scenario_config("tilted-plane");
    cfg.resolution = 65;
    const RunReport report = run(cfg, silent());
    ASSERT_EQ(report.runs.size(), 1u);
    const PipelineResult& r = report.runs.front();
    EXPECT_TRUE(report.passed());
    EXPECT_EQ(exit_code(report), 0);
    ASSERT_EQ(r.estimates.size(), 9u);
    for (const auto& e : r.estimates) {
        EXPECT_LE(std::abs(e.lhs), 1e-10);
        EXPECT_GT(e.slack, 0.0);
    }
    EXPECT_EQ(r.rigidity, Rigidity::totally_geodesic_nonslice);
    EXPECT_LE(r.identity_two_ring.laplacian_theta, 1e-10);
}

TEST(Pipeline, SphereSliceIsSlice) {
    ExperimentConfig cfg = scenario_config("sphere-slice");
    cfg.resolution = 65;
    const RunReport report = run(cfg, silent());
    EXPECT_TRUE(report.passed());
    EXPECT_EQ(report.runs.front().rigidity, Rigidity::totally_geodesic_slice);
}

TEST(Pipeline, NegativeCurvatureIsStageError) {
    ExperimentConfig cfg = scenario_config("bump-metric-perturbed");
    cfg.metric_params = {-0.25};
    cfg.resolution = 33;
    EXPECT_THROW(run(cfg, silent()), DomainError);
}

TEST(Pipeline, OversizedPairIsContainmentError) {
    ExperimentConfig cfg = scenario_config("flat-plane");
    cfg.resolution = 33;
    cfg.pairs = {{0.5, 1.5}};
    EXPECT_THROW(run(cfg, silent()), ContainmentError);
}

TEST(Pipeline, FailedAssertionIsRecorded) {
    ExperimentConfig cfg = scenario_config("flat-plane");
    cfg.resolution = 33;
    PipelineResult r = execute_pipeline(cfg, cfg.resolution);
    r.estimates.front().slack = -2.0 * r.estimates.front().tol_ineq - 1.0;
    const auto asserts = pipeline_assertions(r);
    bool found = false;
    for (const auto& a : asserts) {
        if (a.name == "estimate[0].slack") {
            found = true;
            EXPECT_FALSE(a.pass);
        }
    }
    EXPECT_TRUE(found);
}

TEST(Pipeline, ConvergeRequiresTwoLevels) {
    ExperimentConfig cfg = scenario_config("flat-plane");
    cfg.study = {33};
    EXPECT_THROW(converge(cfg, silent()), ConfigError);
}

TEST(Pipeline, SerialAndParallelReportsMatch) {
    ExperimentConfig cfg = scenario_config("sphere-perturbed");
    cfg.resolution = 33;
    RunOptions a = silent(), b = silent();
    a.exec = Exec::serial;
    const RunReport ra = run(cfg, a), rb = run(cfg, b);
    ASSERT_EQ(ra.runs.front().estimates.size(), rb.runs.front().estimates.size());
    for (std::size_t k = 0; k < ra.runs.front().estimates.size(); ++k) {
        const auto& x = ra.runs.front().estimates[k];
        const auto& y = rb.runs.front().estimates[k];
        EXPECT_NEAR(x.lhs, y.lhs, 1e-10 * std::abs(x.lhs) + 1e-15);
        EXPECT_NEAR(x.rhs, y.rhs, 1e-10 * x.rhs);
    }
}
