#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "maxlab/config.hpp"
#include "maxlab/error.hpp"
#include "maxlab/harness.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    int resolution = 0;
    bool quiet = false;
};

void add_common(CLI::App* sub, Options& opt) {
    sub->add_option("--config", opt.config_path, "experiment config (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--resolution", opt.resolution, "nodes per side (converge: coarsest of N, 2N-1, 4N-3)")
        ->check(CLI::Range(9, 1 << 14));
    sub->add_flag("--quiet", opt.quiet, "print nothing but failures and errors");
}

void print_summary(const maxlab::RunReport& report, bool quiet) {
    int failed = 0;
    for (const auto& a : report.assertions) {
        if (a.pass) continue;
        ++failed;
        std::printf("FAIL %s: %.6g %s %.6g\n", a.name.c_str(), a.value, a.relation.c_str(), a.limit);
    }
    if (!quiet) {
        std::printf("%s %s: %zu assertions, %d failed, outputs in %s\n", report.command.c_str(),
                    report.config.scenario.c_str(), report.assertions.size(), failed, report.config.out_dir.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximal spacelike graph lab"};
    app.require_subcommand(1);
    Options opt;
    CLI::App* run_cmd = app.add_subcommand("run", "solve, analyse and check one configuration");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "estimate table over the (r, R) pairs");
    CLI::App* converge_cmd = app.add_subcommand("converge", "refinement study over the grid resolutions");
    for (CLI::App* sub : {run_cmd, sweep_cmd, converge_cmd}) add_common(sub, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        maxlab::ExperimentConfig cfg = maxlab::load_config(opt.config_path);
        if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
        if (opt.resolution > 0) {
            cfg.resolution = opt.resolution;
            cfg.study = {opt.resolution, 2 * opt.resolution - 1, 4 * opt.resolution - 3};
        }
        maxlab::validate(cfg);
        maxlab::RunOptions ro;
        ro.quiet = opt.quiet;

        maxlab::RunReport report;
        if (*run_cmd) {
            report = maxlab::run(cfg, ro);
        } else if (*sweep_cmd) {
            report = maxlab::sweep(cfg, ro);
        } else {
            report = maxlab::converge(cfg, ro);
        }
        print_summary(report, opt.quiet);
        return maxlab::exit_code(report);
    } catch (const maxlab::Error& e) {
        std::cerr << "[" << e.stage() << "] " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "[internal] " << e.what() << '\n';
        return 2;
    }
}
