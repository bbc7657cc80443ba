#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlab/benchmarks.hpp"
#include "qlab/bounds.hpp"
#include "qlab/mdp.hpp"
#include "qlab/qlearn.hpp"
#include "qlab/regret.hpp"

namespace qlab {

/// Parsed experiment description (JSON file; see README for the schema).
struct ExperimentConfig {
    std::string mdpPath;
    std::string study = "concentration";
    std::string outDir = "out";

    AlgoKind algo = AlgoKind::seg;
    double a = 0.0;      // stepsize exponent offset
    double b = 0.0;      // Boltzmann temperature coefficient
    double d = 0.0;      // epsilon exponent (seg)
    double e = 0.0;      // temperature exponent (seg)
    bool autoBeta = true;
    double beta = 0.0;
    bool autoN0 = true;
    long n0 = 10;
    long steps = 100000;
    int initialState = 0;

    std::vector<std::uint64_t> seeds;
    double checkpointRatio = 1.2;
    std::vector<long> checkpointInclude;
    long fitLo = 1000;
    long fitHi = 100000;
    bool strictConditions = false;
    int jobs = 1;

    RegretMethod regretMethod = RegretMethod::frozen;
    int mcK = 64;
    double mcTol = 0.0;
    std::uint64_t mcSeed = 7;

    long windowLo = 2;
    long windowHi = 200;
    int iStar = 0;

    double xMin = -2.0, xMax = 2.0;
    double lambdaMin = 0.05, lambdaMax = 1.0;
    int resolution = 100;

    std::string rawJson;  // echoed into the output directory for provenance
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& jsonText);

/// Fully resolved instance: the MDP, its exact solution, the occupancy and
/// diameter constants, the assembled run configuration, and the identified
/// bound spec.  `beta`/`n0` marked auto are resolved here (see README).
struct InstanceInfo {
    Mdp mdp;
    SolveResult solve;
    double diameter = 0.0;
    double muMinS = 0.0;
    QlearnConfig qcfg;
    BoundSpec spec;
    AlgoExtras extras;
};

InstanceInfo resolve_instance(const ExperimentConfig& cfg);

struct StudyOutcome {
    std::vector<std::string> verdictLines;
    bool pass = true;
};

StudyOutcome run_concentration_study(const ExperimentConfig& cfg);
StudyOutcome run_regret_study(const ExperimentConfig& cfg);
StudyOutcome run_decomposition_study(const ExperimentConfig& cfg);
StudyOutcome run_audit(const ExperimentConfig& cfg);
StudyOutcome run_heatmap_study(const ExperimentConfig& cfg);
StudyOutcome run_solve_command(const std::string& mdpPath, const std::string& outDir);
StudyOutcome run_single(const ExperimentConfig& cfg);

/// Geometric checkpoint grid floor(ratio^k) in [1, maxN], deduplicated, plus
/// the entries of `include` (clamped to [1, maxN + 1]) and maxN + 1 itself.
std::vector<long> geometric_grid(double ratio, long maxN, const std::vector<long>& include);

/// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> values, double p);

/// Output directory after applying the QLAB_OUT_ROOT environment variable to
/// relative paths.
std::string resolve_out_dir(const std::string& outDir);

}  // namespace qlab
