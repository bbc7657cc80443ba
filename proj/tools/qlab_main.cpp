// Command-line front end: exact MDP solving, online Q-learning runs, and the
// canned studies (concentration scaling, regret scaling, noise decomposition,
// hyperparameter audit, sensitivity heatmap).
//
// Exit codes: 0 ok, 1 usage, 2 file not found, 3 parse error, 4 validation
// error, 5 conditions violated in strict mode, 6 numeric failure, 7 internal.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qlab/errors.hpp"
#include "qlab/studies.hpp"

namespace {

int exit_code_for(const qlab::Error& e) {
    const std::string& code = e.code();
    if (code == "FileNotFound") return 2;
    if (code == "ParseError") return 3;
    if (code == "RowSumViolation" || code == "RewardOutOfRange" ||
        code == "GammaOutOfRange" || code == "DimensionMismatch" ||
        code == "MissingParameter" || code == "PolicyRowNotStochastic" ||
        code == "NonPositiveValue" || code == "TooFewPoints" ||
        code == "GridMismatch" || code == "PreconditionUnmet")
        return 4;
    if (code == "ConditionViolated") return 5;
    if (code == "SingularSystem" || code == "NotIrreducible" || code == "NonConvergence" ||
        code == "IterateEscaped" || code == "HorizonOverflow" || code == "Unreachable" ||
        code == "InstanceTooLarge" || code == "NegativeLambda" ||
        code == "LambdaUnderflow" || code == "LogDomain" || code == "StepsizeTooLarge" ||
        code == "WindowTooLarge")
        return 6;
    return 7;
}

struct CommonOpts {
    std::string configPath;
    std::string out;
    int seeds = 0;
    bool strict = false;
    int jobs = 0;
};

qlab::ExperimentConfig load_with_overrides(const CommonOpts& opts,
                                           const std::string& forcedStudy) {
    qlab::ExperimentConfig cfg = qlab::load_experiment_config(opts.configPath);
    if (!forcedStudy.empty()) cfg.study = forcedStudy;
    if (!opts.out.empty()) cfg.outDir = opts.out;
    if (opts.seeds > 0) {
        const std::uint64_t master = cfg.seeds.empty() ? 20240601ULL : cfg.seeds.front();
        cfg.seeds.clear();
        for (int i = 0; i < opts.seeds; ++i)
            cfg.seeds.push_back(qlab::RngPair::derive(master, i));
    }
    if (opts.strict) cfg.strictConditions = true;
    if (opts.jobs > 0) cfg.jobs = opts.jobs;
    return cfg;
}

void print_outcome(const qlab::StudyOutcome& outcome) {
    for (const auto& line : outcome.verdictLines) std::cout << line << "\n";
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.configPath, "experiment config (JSON)")->required();
    cmd->add_option("--out", opts.out, "output directory (overrides config)");
    cmd->add_option("--seeds", opts.seeds, "seed count (overrides config)");
    cmd->add_flag("--strict-conditions", opts.strict, "abort on condition violations");
    cmd->add_option("--jobs", opts.jobs, "parallel seed workers");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabular online Q-learning laboratory"};
    app.require_subcommand(1);

    std::string mdpPath, solveOut = "out/solve";
    CLI::App* solve = app.add_subcommand("solve", "solve an MDP exactly");
    solve->add_option("mdp", mdpPath, "MDP file (JSON)")->required();
    solve->add_option("--out", solveOut, "output directory");

    std::string benchDir = "benchmarks";
    CLI::App* bench = app.add_subcommand("benchmarks", "write the canned benchmark MDPs");
    bench->add_option("--out", benchDir, "target directory");

    CommonOpts runB, runS, conc, regr, deco, heat, audit;
    add_common(app.add_subcommand("run-boltzmann", "single Boltzmann run"), runB);
    add_common(app.add_subcommand("run-seg", "single smoothed epsilon-greedy run"), runS);
    add_common(app.add_subcommand("concentration", "error-curve study"), conc);
    add_common(app.add_subcommand("regret", "regret study"), regr);
    add_common(app.add_subcommand("decomposition", "noise-decomposition diagnostic"), deco);
    add_common(app.add_subcommand("heatmap", "sensitivity heatmap"), heat);
    add_common(app.add_subcommand("audit", "hyperparameter condition audit"), audit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (solve->parsed()) {
            print_outcome(qlab::run_solve_command(mdpPath, solveOut));
        } else if (bench->parsed()) {
            qlab::write_benchmark_files(benchDir);
            std::cout << "status=ok dir=" << benchDir << "\n";
        } else if (app.got_subcommand("run-boltzmann")) {
            auto cfg = load_with_overrides(runB, "run");
            cfg.algo = qlab::AlgoKind::boltzmann;
            print_outcome(qlab::run_single(cfg));
        } else if (app.got_subcommand("run-seg")) {
            auto cfg = load_with_overrides(runS, "run");
            cfg.algo = qlab::AlgoKind::seg;
            print_outcome(qlab::run_single(cfg));
        } else if (app.got_subcommand("concentration")) {
            print_outcome(qlab::run_concentration_study(load_with_overrides(conc, "concentration")));
        } else if (app.got_subcommand("regret")) {
            print_outcome(qlab::run_regret_study(load_with_overrides(regr, "regret")));
        } else if (app.got_subcommand("decomposition")) {
            print_outcome(qlab::run_decomposition_study(load_with_overrides(deco, "decomposition")));
        } else if (app.got_subcommand("heatmap")) {
            print_outcome(qlab::run_heatmap_study(load_with_overrides(heat, "heatmap")));
        } else if (app.got_subcommand("audit")) {
            print_outcome(qlab::run_audit(load_with_overrides(audit, "audit")));
        }
    } catch (const qlab::Error& e) {
        std::cerr << "error=" << e.code() << " message=\"" << e.what() << "\"\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error=Internal message=\"" << e.what() << "\"\n";
        return 7;
    }
    return 0;
}
