#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "qlab/markov.hpp"
#include "qlab/mdp.hpp"

namespace qlab {

/// External control of the exploration policy: lambda alone for Boltzmann,
/// the (epsilon, lambda) pair for smoothed epsilon-greedy.
struct ControlValue {
    double epsilon = 0.0;
    double lambda = 0.0;
};

/// Threshold below which lambda is treated as exact greedy.
inline constexpr double kGreedyLambdaFloor = 1e-12;

/// Softmax over a Q row at temperature lambda, computed with max-subtraction.
/// lambda below the greedy floor yields the greedy limit with uniform mass
/// over argmax entries within tieTol.
Eigen::VectorXd softmax_policy(const Eigen::VectorXd& qRow, double lambda,
                               double tieTol = 1e-9);

/// epsilon/|A| + (1 - epsilon) * softmax.
Eigen::VectorXd seg_policy(const Eigen::VectorXd& qRow, const ControlValue& ctrl,
                           double tieTol = 1e-9);

struct SoftmaxGradients {
    Eigen::MatrixXd dq;               // dq(a,b) = d sigma(a) / d q(b)
    Eigen::VectorXd dLambdaPrinted;   // sigma(a) * sum_{b != a} sigma(b) q(b) / lambda^2
    Eigen::VectorXd dLambdaFull;      // sigma(a) * sum_b sigma(b)(q(b) - q(a)) / lambda^2
};

/// Closed-form softmax derivatives.  Two lambda derivatives are reported: the
/// short form printed in the source analysis and the full analytic one; they
/// coincide when q(a) = 0.  Finite-difference checks should target the full
/// form.  Throws LambdaUnderflow when lambda is at or below the greedy floor.
SoftmaxGradients softmax_gradients(const Eigen::VectorXd& qRow, double lambda);

/// Closed-form lower bound on the smallest action probability over Q in the
/// admissible box: softmax part 1/(|A| exp(rmax/(lambda(1-gamma)))), mixed as
/// epsilon/|A| + (1-epsilon) * that for smoothed epsilon-greedy.  lambda at
/// the greedy floor gives epsilon/|A|.
double action_prob_lower_bound(const ControlValue& ctrl, double rmax, double gamma,
                               int numActions);

/// One policy row per state from a Q table; seg=false gives pure softmax.
Eigen::MatrixXd policy_matrix(const QTable& q, const ControlValue& ctrl, bool seg,
                              double tieTol = 1e-9);

/// Markov kernel on S x A induced by a stationary policy:
/// p((s,a),(s',a')) = p(s,a,s') pi(s',a').
Kernel induced_kernel(const Mdp& mdp, const Eigen::MatrixXd& policy);

struct ContractionFactor {
    double alphaTilde = 0.0;  // (1-gamma) * muMin; contraction modulus is 1 - alphaTilde
    double muMin = 0.0;
};

/// Exact contraction-gap of the stationary-averaged update map under the
/// given policy.
ContractionFactor contraction_factor(const Mdp& mdp, const Eigen::MatrixXd& policy);

struct SensitivityCell {
    double x = 0.0;
    double lambda = 0.0;
    double dPdxAbs = 0.0;
    double dPdlambdaAbs = 0.0;
};

/// Sensitivity grid of the two-action Boltzmann rule P(x, lambda) =
/// (1 + exp(-x/lambda))^{-1}: |dP/dx| = P(1-P)/lambda and
/// |dP/dlambda| = |x| P(1-P)/lambda^2 on a uniform resolution x resolution grid.
std::vector<SensitivityCell> sensitivity_grid(std::pair<double, double> xRange,
                                              std::pair<double, double> lambdaRange,
                                              int resolution);

}  // namespace qlab
