#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlab/mdp.hpp"
#include "qlab/qlearn.hpp"

namespace qlab {

enum class RegretMethod { frozen, mc, both };

struct RegretPoint {
    long n = 0;
    double frozen = 0.0;
    std::optional<double> mc;
    double mcStdErr = 0.0;
};

struct RegretEstimate {
    std::vector<RegretPoint> perCheckpoint;
    std::vector<std::pair<long, double>> cumulativeFrozen;
    std::vector<std::pair<long, double>> cumulativeMc;
    std::string interpolation = "left-constant";
    RegretMethod method = RegretMethod::frozen;
};

/// (1-gamma)(V*(s_n) - V^pi(s_n)) with pi the behavior policy frozen at the
/// snapshot's (ctrl, Q); exact via the policy-evaluation linear solve.
double frozen_policy_regret_term(const Mdp& mdp, const SolveResult& solve,
                                 const CheckpointSnapshot& snap, AlgoKind algo,
                                 double tieTol = 1e-9);

/// Rollout horizon H with geometric-tail truncation bias at most tol:
/// smallest H with gamma^H rmax/(1-gamma) <= tol.  Throws HorizonOverflow
/// beyond `cap`.
long mc_truncation_horizon(double gamma, double rmax, double tol, long cap = 10000000);

struct McRegret {
    double estimate = 0.0;
    double stdErr = 0.0;
    long horizon = 0;
};

/// Monte Carlo estimate of the regret term at a checkpoint: K clones continue
/// running the actual algorithm (schedules advancing from n) for the
/// truncation horizon; returns (1-gamma)(V*(s_n) - mean truncated return).
/// Each clone redraws the first action from the checkpoint policy and uses an
/// independent stream derived from `seed`; reduction order is fixed.
McRegret mc_continuation_regret(const Mdp& mdp, const QlearnConfig& config,
                                const SolveResult& solve, const CheckpointSnapshot& snap,
                                int K, double tol, std::uint64_t seed);

struct McOptions {
    int K = 64;
    double tol = 0.0;  // 0 -> default 1e-4 * rmax/(1-gamma)
    std::uint64_t seed = 0;
};

/// Per-checkpoint regret terms plus the cumulative series, accumulated with
/// left-constant interpolation between checkpoints.
RegretEstimate cumulative_regret(const Mdp& mdp, const SolveResult& solve,
                                 const RunResult& run, RegretMethod method,
                                 const McOptions& mc = {});

struct RegretExponent {
    double exponent = 0.0;
    bool gapTermDropped = false;
};

struct RegretParams {
    double a = 0.0;  // stepsize exponent offset
    double b = 0.0;  // Boltzmann temperature coefficient
    double d = 0.0;  // epsilon exponent
    double e = 0.0;  // temperature exponent
};

/// Theoretical cumulative-regret growth exponent: Boltzmann
/// max{0.5 + 4a, 1 - b gap/2}; smoothed epsilon-greedy
/// max{1-d, 1/2+a+3d+2e, 2a+4d+3e, 1-(d-e)}; both clipped to (0, 1].
/// A Boltzmann instance with infinite gap drops the gap term and flags it.
RegretExponent theoretical_regret_exponent(AlgoKind algo, const RegretParams& params,
                                           double gap);

struct PowerLawFit {
    double exponent = 0.0;
    double r2 = 0.0;
    int points = 0;
};

/// Ordinary least squares on (log n, log value) over n in [nLo, nHi].
PowerLawFit fit_power_law(const std::vector<std::pair<long, double>>& series, long nLo,
                          long nHi);

}  // namespace qlab
