#pragma once

#include <map>
#include <string>
#include <vector>

#include "qlab/errors.hpp"
#include "qlab/mdp.hpp"

namespace qlab {

enum class AlgoKind { genericSA, boltzmann, seg };

std::string to_string(AlgoKind k);

/// Exponent/constant bundle feeding the bound evaluators and condition
/// checkers.  `constants` carries c1..c10 (keys "c1".."c10"); the identified
/// defaults come from make_boltzmann_spec / make_seg_spec and every entry can
/// be overridden.
struct BoundSpec {
    double a = 0.0;                 // stepsize exponent offset (beta_n ~ n^{-(1-a)})
    double kappa1 = 0.0, kappa2 = 0.0, kappa3 = 0.0;
    double beta = 2.0;
    long n0 = 10;
    double delta = 0.01;
    int d = 1;                      // iterate dimension
    std::map<std::string, double> constants;

    double c(int idx) const;
};

struct GBundle {
    double g = 0.0, g1 = 0.0, g2 = 0.0;
};

/// g(n, delta), g1(n), g2(n):
///   g  = sqrt(log(n^2/delta) / (n+n0)^{1-(a+2k1)})
///   g1 = log(n+n0) / (n+n0)^{1-(a+2k1+k3)}
///   g2 = (n+n0)^{-(1-(2k1+k2))}
GBundle bound_g(long n, const BoundSpec& spec);

/// Decay exponents of the uniform concentration bound.  `headline` reads the
/// theorem display as n^{-1/2} * n^{2k1+max(a+k3,k2)}; the three detailed
/// exponents come from n^{2k1+k3} * {g, g1, g2}; `dominant` (their max, the
/// slowest decay) is the number to compare against fitted slopes.
struct Theorem1Rate {
    double headline = 0.0;
    double gTerm = 0.0, g1Term = 0.0, g2Term = 0.0;
    double dominant = 0.0;
};

Theorem1Rate theorem1_rate(const BoundSpec& spec);

/// Constants of the detailed concentration bound derived from c1..c10.
struct DerivedConstants {
    double C1 = 0.0, C2 = 0.0, C3 = 0.0, C4 = 0.0, C5 = 0.0, C6 = 0.0;
};

DerivedConstants derive_constants(const BoundSpec& spec);

/// Algorithm-specific quantities consumed by the condition checkers.
struct AlgoExtras {
    double b = 0.0;         // Boltzmann temperature coefficient
    double dExp = 0.0;      // epsilon exponent
    double eExp = 0.0;      // temperature exponent
    double gap = 0.0;
    double rmax = 1.0;
    double gamma = 0.5;
    double muMinS = 0.0;    // minimum stationary state occupancy
    int numActions = 2;
    double qOneNorm = 0.0;  // 0 -> defaults to |A| rmax / (1-gamma)
};

struct ConditionCheck {
    std::string id;
    bool satisfied = false;
    double lhs = 0.0, rhs = 0.0;
    std::string relation;  // ">=", "<", ...
};

struct ConditionReport {
    std::vector<ConditionCheck> checks;
    std::string caseLabel;
    bool allSatisfied = true;
};

/// Evaluates the hyperparameter condition family for the given algorithm
/// (the generic SA set, the Boltzmann set, or the smoothed epsilon-greedy
/// set), reporting every inequality individually with the selected case.
ConditionReport check_conditions(const BoundSpec& spec, AlgoKind algo,
                                 const AlgoExtras& extras);

struct N0Check {
    std::string id;
    bool satisfiedOnGrid = false;
    long witnessN = -1;            // first grid point violating the condition
    double lhsExponent = 0.0;      // polynomial decay exponent of the lhs
    double rhsExponent = 0.0;
    bool lhsDecaysFaster = false;  // tail-dominance flag
};

struct N0Report {
    std::vector<N0Check> checks;
    bool allSatisfied = true;
};

/// Geometric grid {0, 1, 2, 4, ..., <= maxN}.
std::vector<long> default_n0_grid(long maxN = 1000000);

/// Evaluates the "for all n" burn-in conditions on a grid, with a
/// tail-dominance flag from the decay exponents of both sides.
N0Report check_n0(const BoundSpec& spec, AlgoKind algo, const AlgoExtras& extras,
                  const std::vector<long>& grid);

struct RecursionBoundResult {
    double Sn = 0.0;
    double bound = 0.0;  // 2 b_n / a_n
    bool ok = false;
    int part = 0;
};

/// Direct evaluation of S_n = sum_i b_i prod_{j=i+1}^{n-1}(1-a_j) for
/// a_i = a/(i+n0)^rho, b_i = b/(i+n0)^rhoPrime, against the closed bound
/// 2 b_n / a_n.  Throws PreconditionUnmet unless the parameters satisfy one
/// of the two admissible regimes.
RecursionBoundResult recursion_bound_check(double a, double b, double rho,
                                           double rhoPrime, long n0, long n);

/// Identified constant bundle for Boltzmann exploration on a given MDP
/// (kappa1 = b rmax/(1-gamma), kappa2 = kappa3 = 0).
BoundSpec make_boltzmann_spec(const Mdp& mdp, double b, double a, double beta, long n0,
                              double delta, double muMinS, double diameter);

/// Identified constant bundle for smoothed epsilon-greedy exploration
/// (kappa1 = d, kappa2 = kappa3 = e).
BoundSpec make_seg_spec(const Mdp& mdp, double dExp, double eExp, double a, double beta,
                        long n0, double delta, double muMinS, double diameter);

}  // namespace qlab
