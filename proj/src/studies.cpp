#include "qlab/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qlab/csv.hpp"
#include "qlab/markov.hpp"
#include "qlab/policies.hpp"
#include "qlab/rng.hpp"
#include "qlab/sa.hpp"

namespace qlab {

namespace {

using nlohmann::json;

std::string bool_str(bool b) { return b ? "true" : "false"; }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileNotFound(path);
    out << text;
}

void emit(StudyOutcome& outcome, const std::string& line) {
    outcome.verdictLines.push_back(line);
}

/// Ordered parallel map over seeds; output order is independent of the
/// degree of parallelism.
template <typename Fn>
void parallel_for_indexed(int jobs, std::size_t count, Fn fn) {
    jobs = std::max(1, jobs);
    if (jobs == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex errorMutex;
    const int workers = std::min<std::size_t>(jobs, count);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(errorMutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<long> geometric_grid(double ratio, long maxN, const std::vector<long>& include) {
    if (!(ratio > 1.0)) throw NonPositiveValue("checkpoint ratio must exceed 1");
    std::vector<long> grid;
    double v = 1.0;
    long last = 0;
    while (true) {
        const long idx = static_cast<long>(std::floor(v));
        if (idx > maxN) break;
        if (idx != last) {
            grid.push_back(idx);
            last = idx;
        }
        v *= ratio;
    }
    for (long inc : include)
        if (inc >= 1 && inc <= maxN + 1) grid.push_back(inc);
    grid.push_back(maxN + 1);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw TooFewPoints(0, 1);
    std::sort(values.begin(), values.end());
    const double pos = p * (values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double w = pos - lo;
    return (1.0 - w) * values[lo] + w * values[hi];
}

std::string resolve_out_dir(const std::string& outDir) {
    if (!outDir.empty() && outDir.front() == '/') return outDir;
    if (const char* root = std::getenv("QLAB_OUT_ROOT"); root && *root)
        return std::string(root) + "/" + outDir;
    return outDir;
}

ExperimentConfig parse_experiment_config(const std::string& jsonText) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
    ExperimentConfig cfg;
    cfg.rawJson = jsonText;
    try {
        cfg.mdpPath = j.at("mdp").get<std::string>();
        cfg.study = j.value("study", cfg.study);
        cfg.outDir = j.value("out", cfg.outDir);

        if (j.contains("algo")) {
            const auto& a = j["algo"];
            const std::string kind = a.value("kind", "seg");
            if (kind == "boltzmann") cfg.algo = AlgoKind::boltzmann;
            else if (kind == "seg") cfg.algo = AlgoKind::seg;
            else throw ParseError("algo.kind must be boltzmann or seg");
            cfg.a = a.value("a", 0.0);
            cfg.b = a.value("b", 0.0);
            cfg.d = a.value("d", 0.0);
            cfg.e = a.value("e", 0.0);
            if (a.contains("beta") && a["beta"].is_number()) {
                cfg.autoBeta = false;
                cfg.beta = a["beta"].get<double>();
            }
            if (a.contains("n0") && a["n0"].is_number()) {
                cfg.autoN0 = false;
                cfg.n0 = a["n0"].get<long>();
            }
            cfg.steps = a.value("steps", cfg.steps);
            cfg.initialState = a.value("initial_state", 0);
        }

        if (j.contains("seeds")) {
            const auto& s = j["seeds"];
            if (s.is_array()) {
                for (const auto& v : s) cfg.seeds.push_back(v.get<std::uint64_t>());
            } else {
                const int count = s.at("count").get<int>();
                const std::uint64_t master = s.value("master", 20240601ULL);
                for (int i = 0; i < count; ++i) cfg.seeds.push_back(RngPair::derive(master, i));
            }
        }
        if (cfg.seeds.empty()) throw ParseError("seeds must be nonempty");

        if (j.contains("checkpoints")) {
            const auto& c = j["checkpoints"];
            cfg.checkpointRatio = c.value("ratio", cfg.checkpointRatio);
            if (c.contains("include"))
                for (const auto& v : c["include"]) cfg.checkpointInclude.push_back(v.get<long>());
        }
        if (j.contains("fit_window")) {
            cfg.fitLo = j["fit_window"][0].get<long>();
            cfg.fitHi = j["fit_window"][1].get<long>();
            if (cfg.fitLo >= cfg.fitHi) throw ParseError("fit_window must be increasing");
        }
        cfg.strictConditions = j.value("strict_conditions", false);
        cfg.jobs = j.value("jobs", 1);

        if (j.contains("regret")) {
            const auto& r = j["regret"];
            const std::string m = r.value("method", "frozen");
            if (m == "frozen") cfg.regretMethod = RegretMethod::frozen;
            else if (m == "mc") cfg.regretMethod = RegretMethod::mc;
            else if (m == "both") cfg.regretMethod = RegretMethod::both;
            else throw ParseError("regret.method must be frozen, mc, or both");
            cfg.mcK = r.value("K", cfg.mcK);
            cfg.mcTol = r.value("tol", cfg.mcTol);
            cfg.mcSeed = r.value("seed", cfg.mcSeed);
        }
        if (j.contains("decomposition")) {
            const auto& d = j["decomposition"];
            if (d.contains("window")) {
                cfg.windowLo = d["window"][0].get<long>();
                cfg.windowHi = d["window"][1].get<long>();
            }
            cfg.iStar = d.value("i_star", 0);
        }
        if (j.contains("heatmap")) {
            const auto& h = j["heatmap"];
            if (h.contains("x")) {
                cfg.xMin = h["x"][0].get<double>();
                cfg.xMax = h["x"][1].get<double>();
            }
            if (h.contains("lambda")) {
                cfg.lambdaMin = h["lambda"][0].get<double>();
                cfg.lambdaMax = h["lambda"][1].get<double>();
            }
            cfg.resolution = h.value("resolution", cfg.resolution);
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

InstanceInfo resolve_instance(const ExperimentConfig& cfg) {
    InstanceInfo info{Mdp::load(cfg.mdpPath), {}, 0.0, 0.0, {}, {}, {}};
    info.solve = solve_optimal(info.mdp);
    info.diameter = mdp_diameter(info.mdp);
    info.muMinS = min_state_occupancy(info.mdp);

    const Mdp& m = info.mdp;
    const double oneMinusGamma = 1.0 - m.gamma();
    double beta = cfg.beta;
    if (cfg.autoBeta) {
        if (cfg.algo == AlgoKind::boltzmann) {
            beta = 2.0 * m.num_actions() / (oneMinusGamma * info.muMinS);
        } else if (cfg.a == 0.0) {
            beta = std::max(2.0 * (1.0 - 2.0 * cfg.d),
                            m.num_actions() / (oneMinusGamma * info.muMinS));
        } else if (cfg.a == cfg.d) {
            beta = m.num_actions() / (2.0 * oneMinusGamma * info.muMinS) *
                   std::max({1.0 - (3.0 * cfg.a + 4.0 * cfg.d + 2.0 * cfg.e),
                             2.0 - (4.0 * cfg.a + 6.0 * cfg.d + 4.0 * cfg.e),
                             2.0 - (2.0 * cfg.a + 6.0 * cfg.d + 4.0 * cfg.e)});
        } else {
            beta = 2.0;
        }
    }
    long n0 = cfg.n0;
    if (cfg.autoN0)
        n0 = std::max<long>(10, static_cast<long>(std::ceil(
                                    std::pow(beta, 1.0 / (1.0 - cfg.a)))) + 1);

    QlearnConfig q;
    q.algo = cfg.algo;
    q.stepsize = Schedule::stepsize(beta, cfg.a, n0);
    if (cfg.algo == AlgoKind::boltzmann) {
        q.temperature = Schedule::inverse_log(cfg.b, n0);
    } else {
        q.temperature = Schedule::power(1.0, cfg.e, n0);
        q.epsilonSchedule = Schedule::power(1.0, cfg.d, n0);
    }
    q.steps = cfg.steps;
    q.initialState = cfg.initialState;
    q.conditions = ConditionPolicy::skip;  // checked once at study level
    info.qcfg = q;

    info.extras.b = cfg.b;
    info.extras.dExp = cfg.d;
    info.extras.eExp = cfg.e;
    info.extras.gap = info.solve.gap;
    info.extras.rmax = m.rmax();
    info.extras.gamma = m.gamma();
    info.extras.muMinS = info.muMinS;
    info.extras.numActions = m.num_actions();

    info.spec = cfg.algo == AlgoKind::boltzmann
                    ? make_boltzmann_spec(m, cfg.b, cfg.a, beta, n0, 0.01, info.muMinS,
                                          info.diameter)
                    : make_seg_spec(m, cfg.d, cfg.e, cfg.a, beta, n0, 0.01, info.muMinS,
                                    info.diameter);
    return info;
}

namespace {

/// Shared condition gate: strict mode aborts, otherwise a verdict line.
void apply_condition_gate(const ExperimentConfig& cfg, const InstanceInfo& info,
                          StudyOutcome& outcome) {
    const ConditionReport rep = check_conditions(info.spec, cfg.algo, info.extras);
    std::string failed;
    for (const auto& c : rep.checks)
        if (!c.satisfied) failed += (failed.empty() ? "" : ",") + c.id;
    if (!rep.allSatisfied && cfg.strictConditions) throw ConditionViolated(failed);
    emit(outcome, "conditions_ok=" + bool_str(rep.allSatisfied) +
                      (failed.empty() ? "" : " conditions_failed=" + failed));
}

void write_summary(const std::string& dir, const StudyOutcome& outcome,
                   const std::string& rawConfig) {
    std::string text;
    for (const auto& line : outcome.verdictLines) text += line + "\n";
    write_text(dir + "/summary.txt", text);
    if (!rawConfig.empty()) write_text(dir + "/config.json", rawConfig);
}

std::vector<long> study_grid(const ExperimentConfig& cfg) {
    std::vector<long> include = cfg.checkpointInclude;
    include.push_back(cfg.fitLo);
    include.push_back(cfg.fitHi);
    return geometric_grid(cfg.checkpointRatio, cfg.steps, include);
}

}  // namespace

StudyOutcome run_concentration_study(const ExperimentConfig& cfg) {
    const std::string dir = resolve_out_dir(cfg.outDir);
    std::filesystem::create_directories(dir);
    const InstanceInfo info = resolve_instance(cfg);

    StudyOutcome outcome;
    emit(outcome, "study=concentration algo=" + to_string(cfg.algo) +
                      " beta=" + format_double(info.qcfg.stepsize.scale) +
                      " n0=" + std::to_string(info.qcfg.stepsize.n0) +
                      " seeds=" + std::to_string(cfg.seeds.size()));
    apply_condition_gate(cfg, info, outcome);

    const std::vector<long> grid = study_grid(cfg);
    RecordingOptions rec;
    rec.checkpoints = grid;

    std::vector<std::vector<std::pair<long, double>>> errors(cfg.seeds.size());
    std::vector<std::vector<int>> noiseStates(cfg.seeds.size());
    parallel_for_indexed(cfg.jobs, cfg.seeds.size(), [&](std::size_t i) {
        QlearnConfig qc = info.qcfg;
        qc.seed = cfg.seeds[i];
        const RunResult run = cfg.algo == AlgoKind::boltzmann
                                  ? run_boltzmann(info.mdp, qc, rec)
                                  : run_seg(info.mdp, qc, rec);
        errors[i] = error_series(run, info.solve.qStar);
        noiseStates[i] = run.trajectory.snapshotNoiseStates;
    });

    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        CsvWriter csv({"n", "err_inf", "beta_n", "epsilon_n", "lambda_n", "y_n"});
        for (std::size_t j = 0; j < errors[i].size(); ++j) {
            const long n = errors[i][j].first;
            const ControlValue ctrl = info.qcfg.control_at(n);
            csv.add_row({std::to_string(n), format_double(errors[i][j].second),
                         format_double(eval_schedule(info.qcfg.stepsize, n)),
                         format_double(ctrl.epsilon), format_double(ctrl.lambda),
                         std::to_string(noiseStates[i][j])});
        }
        csv.write(dir + "/seed_" + std::to_string(i) + "_errors.csv");
    }

    CsvWriter envelope({"n", "q10", "q50", "q90"});
    std::vector<std::pair<long, double>> medianSeries;
    for (std::size_t j = 0; j < errors[0].size(); ++j) {
        const long n = errors[0][j].first;
        std::vector<double> sample;
        sample.reserve(cfg.seeds.size());
        for (const auto& series : errors) sample.push_back(series[j].second);
        const double q50 = quantile(sample, 0.5);
        envelope.add_row({std::to_string(n), format_double(quantile(sample, 0.1)),
                          format_double(q50), format_double(quantile(sample, 0.9))});
        medianSeries.emplace_back(n, q50);
    }
    envelope.write(dir + "/envelope.csv");

    const PowerLawFit fit = fit_power_law(medianSeries, cfg.fitLo, cfg.fitHi);
    const Theorem1Rate rate = theorem1_rate(info.spec);
    const bool pass = fit.exponent <= rate.dominant + 0.15;
    emit(outcome, "slope=" + format_double(fit.exponent) +
                      " r2=" + format_double(fit.r2) +
                      " theory_exponent=" + format_double(rate.dominant) +
                      " headline_exponent=" + format_double(rate.headline) +
                      " band=0.15 pass=" + bool_str(pass));
    outcome.pass = pass;
    write_summary(dir, outcome, cfg.rawJson);
    return outcome;
}

StudyOutcome run_regret_study(const ExperimentConfig& cfg) {
    const std::string dir = resolve_out_dir(cfg.outDir);
    std::filesystem::create_directories(dir);
    const InstanceInfo info = resolve_instance(cfg);

    StudyOutcome outcome;
    emit(outcome, "study=regret algo=" + to_string(cfg.algo) +
                      " beta=" + format_double(info.qcfg.stepsize.scale) +
                      " n0=" + std::to_string(info.qcfg.stepsize.n0) +
                      " gap=" + format_double(info.solve.gap) +
                      " seeds=" + std::to_string(cfg.seeds.size()));
    apply_condition_gate(cfg, info, outcome);

    RegretParams params{cfg.a, cfg.b, cfg.d, cfg.e};
    const RegretExponent theory =
        theoretical_regret_exponent(cfg.algo, params, info.solve.gap);

    const std::vector<long> grid = study_grid(cfg);
    RecordingOptions rec;
    rec.checkpoints = grid;

    std::vector<RegretEstimate> estimates(cfg.seeds.size());
    parallel_for_indexed(cfg.jobs, cfg.seeds.size(), [&](std::size_t i) {
        QlearnConfig qc = info.qcfg;
        qc.seed = cfg.seeds[i];
        const RunResult run = cfg.algo == AlgoKind::boltzmann
                                  ? run_boltzmann(info.mdp, qc, rec)
                                  : run_seg(info.mdp, qc, rec);
        McOptions mc{cfg.mcK, cfg.mcTol, RngPair::derive(cfg.mcSeed, i)};
        estimates[i] = cumulative_regret(info.mdp, info.solve, run, cfg.regretMethod, mc);
    });

    for (std::size_t i = 0; i < estimates.size(); ++i) {
        CsvWriter csv({"N", "regret_frozen", "regret_mc", "mc_stderr",
                       "theoretical_exponent"});
        const auto& est = estimates[i];
        for (std::size_t j = 0; j < est.perCheckpoint.size(); ++j) {
            const auto& p = est.perCheckpoint[j];
            csv.add_row({std::to_string(p.n),
                         format_double(est.cumulativeFrozen[j].second),
                         p.mc ? format_double(est.cumulativeMc[j].second) : "",
                         p.mc ? format_double(p.mcStdErr) : "",
                         format_double(theory.exponent)});
        }
        csv.write(dir + "/seed_" + std::to_string(i) + "_regret.csv");
    }

    // Median cumulative regret and median per-checkpoint frozen term.
    std::vector<std::pair<long, double>> medianCumulative;
    std::vector<std::pair<long, double>> medianTerm;
    CsvWriter envelope({"N", "cum_q10", "cum_q50", "cum_q90", "term_q50"});
    const std::size_t points = estimates[0].perCheckpoint.size();
    for (std::size_t j = 0; j < points; ++j) {
        const long n = estimates[0].perCheckpoint[j].n;
        std::vector<double> cums, terms;
        for (const auto& est : estimates) {
            cums.push_back(est.cumulativeFrozen[j].second);
            terms.push_back(est.perCheckpoint[j].frozen);
        }
        const double cumMed = quantile(cums, 0.5);
        const double termMed = quantile(terms, 0.5);
        envelope.add_row({std::to_string(n), format_double(quantile(cums, 0.1)),
                          format_double(cumMed), format_double(quantile(cums, 0.9)),
                          format_double(termMed)});
        medianCumulative.emplace_back(n, cumMed);
        medianTerm.emplace_back(n, termMed);
    }
    envelope.write(dir + "/envelope.csv");

    const PowerLawFit fit = fit_power_law(medianCumulative, cfg.fitLo, cfg.fitHi);
    double termFirst = 0.0, termLast = 0.0;
    bool haveFirst = false;
    for (const auto& [n, v] : medianTerm) {
        if (n >= cfg.fitLo && !haveFirst) {
            termFirst = v;
            haveFirst = true;
        }
        if (n <= cfg.fitHi && n >= cfg.fitLo) termLast = v;
    }
    const bool decay = haveFirst && termLast <= termFirst;
    const bool pass = fit.exponent <= theory.exponent + 0.1;
    emit(outcome, "fitted_exponent=" + format_double(fit.exponent) +
                      " r2=" + format_double(fit.r2) +
                      " theoretical_exponent=" + format_double(theory.exponent) +
                      " frozen_term_first=" + format_double(termFirst) +
                      " frozen_term_last=" + format_double(termLast) +
                      " frozen_decay=" + bool_str(decay) + " band=0.1 pass=" +
                      bool_str(pass));
    outcome.pass = pass;
    write_summary(dir, outcome, cfg.rawJson);
    return outcome;
}

StudyOutcome run_decomposition_study(const ExperimentConfig& cfg) {
    const std::string dir = resolve_out_dir(cfg.outDir);
    std::filesystem::create_directories(dir);
    const InstanceInfo info = resolve_instance(cfg);

    StudyOutcome outcome;
    emit(outcome, "study=decomposition algo=" + to_string(cfg.algo) +
                      " window=[" + std::to_string(cfg.windowLo) + "," +
                      std::to_string(cfg.windowHi) + "] i_star=" + std::to_string(cfg.iStar));

    QlearnConfig qc = info.qcfg;
    qc.seed = cfg.seeds.front();
    qc.steps = cfg.windowHi;
    QlearnSaSystem system(info.mdp, qc);
    RecordingOptions rec;
    rec.fullResSteps = cfg.windowHi;
    rec.recordNoise = true;
    const SaTrajectory traj = run_sa(system, cfg.windowHi, qc.seed, rec);
    const DecompositionReport rep =
        noise_decomposition(traj, system, cfg.iStar, cfg.windowLo, cfg.windowHi);

    CsvWriter csv({"n", "x_minus_z", "martingale", "t1", "t2", "t3", "residual"});
    for (const auto& row : rep.rows)
        csv.add_row({std::to_string(row.n), format_double(row.xMinusZ),
                     format_double(row.martingale), format_double(row.t1),
                     format_double(row.t2), format_double(row.t3),
                     format_double(row.residual)});
    csv.write(dir + "/decomposition.csv");

    const bool pass = rep.maxResidual <= 1e-8;
    emit(outcome, "max_residual=" + format_double(rep.maxResidual) +
                      " tolerance=1e-08 pass=" + bool_str(pass));
    outcome.pass = pass;
    write_summary(dir, outcome, cfg.rawJson);
    return outcome;
}

StudyOutcome run_audit(const ExperimentConfig& cfg) {
    const std::string dir = resolve_out_dir(cfg.outDir);
    std::filesystem::create_directories(dir);
    const InstanceInfo info = resolve_instance(cfg);

    StudyOutcome outcome;
    emit(outcome, "study=audit algo=" + to_string(cfg.algo) +
                      " beta=" + format_double(info.spec.beta) +
                      " n0=" + std::to_string(info.spec.n0) +
                      " kappa1=" + format_double(info.spec.kappa1) +
                      " gap=" + format_double(info.solve.gap) +
                      " diameter=" + format_double(info.diameter) +
                      " mu_min_s=" + format_double(info.muMinS));

    const ConditionReport rep = check_conditions(info.spec, cfg.algo, info.extras);
    CsvWriter csv({"kind", "id", "satisfied", "lhs", "rhs", "witness_n",
                   "lhs_exponent", "rhs_exponent", "lhs_decays_faster"});
    for (const auto& c : rep.checks) {
        emit(outcome, "condition=" + c.id + " satisfied=" + bool_str(c.satisfied) +
                          " lhs=" + format_double(c.lhs) + " relation=" + c.relation +
                          " rhs=" + format_double(c.rhs));
        csv.add_row({"condition", c.id, bool_str(c.satisfied), format_double(c.lhs),
                     format_double(c.rhs), "", "", "", ""});
    }

    const N0Report n0rep = check_n0(info.spec, cfg.algo, info.extras, default_n0_grid());
    for (const auto& c : n0rep.checks) {
        emit(outcome, "n0_condition=" + c.id + " satisfied=" + bool_str(c.satisfiedOnGrid) +
                          (c.satisfiedOnGrid ? "" : " witness_n=" + std::to_string(c.witnessN)) +
                          " lhs_exponent=" + format_double(c.lhsExponent) +
                          " rhs_exponent=" + format_double(c.rhsExponent) +
                          " lhs_decays_faster=" + bool_str(c.lhsDecaysFaster));
        csv.add_row({"n0", c.id, bool_str(c.satisfiedOnGrid), "", "",
                     c.satisfiedOnGrid ? "" : std::to_string(c.witnessN),
                     format_double(c.lhsExponent), format_double(c.rhsExponent),
                     bool_str(c.lhsDecaysFaster)});
    }
    csv.write(dir + "/audit.csv");

    emit(outcome, "conditions_pass=" + bool_str(rep.allSatisfied) +
                      " n0_pass=" + bool_str(n0rep.allSatisfied) + " case=" + rep.caseLabel);
    outcome.pass = true;  // the audit reports; it does not gate
    write_summary(dir, outcome, cfg.rawJson);
    return outcome;
}

StudyOutcome run_heatmap_study(const ExperimentConfig& cfg) {
    const std::string dir = resolve_out_dir(cfg.outDir);
    std::filesystem::create_directories(dir);
    const auto cells = sensitivity_grid({cfg.xMin, cfg.xMax}, {cfg.lambdaMin, cfg.lambdaMax},
                                        cfg.resolution);
    CsvWriter csv({"x", "lambda", "dP_dx_abs", "dP_dlambda_abs"});
    double maxDpdx = 0.0;
    for (const auto& c : cells) {
        csv.add_row({format_double(c.x), format_double(c.lambda),
                     format_double(c.dPdxAbs), format_double(c.dPdlambdaAbs)});
        maxDpdx = std::max(maxDpdx, c.dPdxAbs);
    }
    csv.write(dir + "/heatmap.csv");

    StudyOutcome outcome;
    emit(outcome, "study=heatmap rows=" + std::to_string(cells.size()) +
                      " max_dP_dx=" + format_double(maxDpdx) +
                      " lambda_min=" + format_double(cfg.lambdaMin));
    write_summary(dir, outcome, cfg.rawJson);
    return outcome;
}

StudyOutcome run_solve_command(const std::string& mdpPath, const std::string& outDir) {
    const std::string dir = resolve_out_dir(outDir);
    std::filesystem::create_directories(dir);
    const Mdp mdp = Mdp::load(mdpPath);
    const SolveResult solve = solve_optimal(mdp);
    const double diameter = mdp_diameter(mdp);

    CsvWriter csv({"s", "a", "q_star", "v_star", "optimal", "gap", "diameter"});
    for (int s = 0; s < mdp.num_states(); ++s)
        for (int a = 0; a < mdp.num_actions(); ++a) {
            const bool optimal =
                std::find(solve.optimalActions[s].begin(), solve.optimalActions[s].end(),
                          a) != solve.optimalActions[s].end();
            csv.add_row({std::to_string(s), std::to_string(a),
                         format_double(solve.qStar(s, a)), format_double(solve.vStar(s)),
                         optimal ? "1" : "0", format_double(solve.gap),
                         format_double(diameter)});
        }
    csv.write(dir + "/solve.csv");

    StudyOutcome outcome;
    emit(outcome, "study=solve gap=" + format_double(solve.gap) +
                      " diameter=" + format_double(diameter) +
                      " residual=" + format_double(solve.residual));
    for (int s = 0; s < mdp.num_states(); ++s)
        emit(outcome, "v_star_" + std::to_string(s) + "=" + format_double(solve.vStar(s)));
    write_summary(dir, outcome, "");
    return outcome;
}

StudyOutcome run_single(const ExperimentConfig& cfg) {
    const std::string dir = resolve_out_dir(cfg.outDir);
    std::filesystem::create_directories(dir);
    const InstanceInfo info = resolve_instance(cfg);

    StudyOutcome outcome;
    emit(outcome, "study=run algo=" + to_string(cfg.algo) +
                      " seed=" + std::to_string(cfg.seeds.front()) +
                      " steps=" + std::to_string(cfg.steps));
    apply_condition_gate(cfg, info, outcome);

    QlearnConfig qc = info.qcfg;
    qc.seed = cfg.seeds.front();
    RecordingOptions rec;
    rec.checkpoints = study_grid(cfg);
    const RunResult run = cfg.algo == AlgoKind::boltzmann ? run_boltzmann(info.mdp, qc, rec)
                                                          : run_seg(info.mdp, qc, rec);
    const auto errors = error_series(run, info.solve.qStar);

    CsvWriter csv({"n", "err_inf", "s_n", "cumulative_reward"});
    for (std::size_t j = 0; j < errors.size(); ++j) {
        const auto& snap = run.checkpoints[j];
        csv.add_row({std::to_string(errors[j].first), format_double(errors[j].second),
                     std::to_string(snap.state), format_double(snap.cumulativeReward)});
    }
    csv.write(dir + "/run.csv");

    emit(outcome, "final_error=" + format_double(errors.back().second));
    write_summary(dir, outcome, cfg.rawJson);
    return outcome;
}

}  // namespace qlab
