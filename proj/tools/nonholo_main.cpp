// Command-line harness: classify constraints, decompose the curl tensor,
// evaluate pointwise compatibility verdicts, integrate both dynamical
// systems, and compare trajectories, all driven by scenario files or the
// built-in registry.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric/degenerate error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "nonholo/runner.hpp"

namespace {

struct Options {
    std::string scenario;
    std::string out_dir;
    std::optional<double> duration;
    std::optional<double> step;
    std::optional<double> mu0;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    bool project_velocity = false;
};

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->set_help_flag("--help", "print help"); // frees -h / --h for the step size
    cmd->add_option("--scenario", opt.scenario, "builtin name or scenario JSON file")->required();
    cmd->add_option("--out", opt.out_dir, "output directory (default runs/<name>-<timestamp>)");
    cmd->add_option("--T", opt.duration, "integration duration");
    cmd->add_option("--h", opt.step, "integration step");
    cmd->add_option("--mu0", opt.mu0, "initial multiplier for the variational system");
    cmd->add_option("--seed", opt.seed, "seed for sampling");
    cmd->add_option("--tol", opt.tol, "tolerance for classification and compatibility verdicts");
    cmd->add_flag("--project-velocity", opt.project_velocity,
                  "project qdot0 onto the constraint plane if it violates the constraint");
}

int run_stages(const Options& opt, const nonholo::StageSet& stages) {
    nonholo::Scenario scenario = nonholo::Scenario::load(opt.scenario);
    if (opt.duration) scenario.run.duration = *opt.duration;
    if (opt.step) scenario.run.step = *opt.step;
    if (opt.mu0) scenario.run.mu0 = *opt.mu0;
    if (opt.seed) scenario.run.seed = *opt.seed;
    if (opt.tol) {
        scenario.run.tol_classify = *opt.tol;
        scenario.run.tol_compat = *opt.tol;
    }
    if (opt.project_velocity) scenario.run.project_velocity = true;

    std::filesystem::path dir = opt.out_dir.empty()
                                    ? std::filesystem::path("runs") /
                                          (scenario.name + "-" + nonholo::timestamp_compact())
                                    : std::filesystem::path(opt.out_dir);
    const nonholo::RunOutcome outcome = nonholo::run_scenario(std::move(scenario), dir, stages);
    std::cout << nonholo::report(outcome.dir);
    std::cout << "artifacts: " << outcome.dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-holonomic constraint analysis and constrained dynamics"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    Options opt;
    std::string report_dir;

    CLI::App* cmd_run = app.add_subcommand("run", "all stages");
    CLI::App* cmd_classify = app.add_subcommand("classify", "constraint classification only");
    CLI::App* cmd_spectrum = app.add_subcommand("spectrum", "curl-tensor spectrum at q0");
    CLI::App* cmd_compat = app.add_subcommand("compat", "compatibility verdict at (q0, qdot0)");
    CLI::App* cmd_simulate = app.add_subcommand("simulate", "integrate both systems");
    CLI::App* cmd_compare = app.add_subcommand("compare", "integrate and compare trajectories");
    for (CLI::App* c : {cmd_run, cmd_classify, cmd_spectrum, cmd_compat, cmd_simulate, cmd_compare})
        add_common_flags(c, opt);

    CLI::App* cmd_report = app.add_subcommand("report", "summarize a finished run directory");
    cmd_report->add_option("run_dir", report_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_report->parsed()) {
            std::cout << nonholo::report(report_dir);
            return 0;
        }
        nonholo::StageSet stages;
        if (cmd_run->parsed()) stages = nonholo::StageSet::all();
        if (cmd_classify->parsed()) stages.classify = true;
        if (cmd_spectrum->parsed()) stages.spectrum = true;
        if (cmd_compat->parsed()) stages.compat = true;
        if (cmd_simulate->parsed()) stages.simulate = true;
        if (cmd_compare->parsed()) stages.simulate = stages.compare = true;
        return run_stages(opt, stages);
    } catch (const nonholo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
