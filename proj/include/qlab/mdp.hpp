#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qlab/errors.hpp"

namespace qlab {

/// Action-value table, one row per state, one column per action.
using QTable = Eigen::MatrixXd;

/// Finite discounted MDP with deterministic rewards r(s,a) in [0, rmax].
/// Immutable after construction; `validated` enforces the model invariants
/// (stochastic rows, reward range, gamma in (0,1)).
class Mdp {
  public:
    static Mdp validated(int numStates, int numActions, std::vector<double> transition,
                         std::vector<double> reward, double gamma, double rmax,
                         double rowTol = 1e-12);

    int num_states() const { return numStates_; }
    int num_actions() const { return numActions_; }
    double gamma() const { return gamma_; }
    double rmax() const { return rmax_; }
    /// Upper bound rmax/(1-gamma) of the admissible Q box.
    double vmax() const { return rmax_ / (1.0 - gamma_); }

    double transition(int s, int a, int sNext) const {
        return transition_[(static_cast<std::size_t>(s) * numActions_ + a) * numStates_ + sNext];
    }
    const double* transition_row(int s, int a) const {
        return transition_.data() + (static_cast<std::size_t>(s) * numActions_ + a) * numStates_;
    }
    double reward(int s, int a) const {
        return reward_[static_cast<std::size_t>(s) * numActions_ + a];
    }

    /// Flat index of a state-action pair; also indexes the noise space Y = S x A.
    int pair_index(int s, int a) const { return s * numActions_ + a; }

    static Mdp load(const std::string& path);
    void save(const std::string& path) const;
    std::string to_json_string() const;
    static Mdp from_json_string(const std::string& text);

  private:
    Mdp() = default;
    int numStates_ = 0;
    int numActions_ = 0;
    std::vector<double> transition_;  // [s][a][s'] row-major
    std::vector<double> reward_;      // [s][a]
    double gamma_ = 0.0;
    double rmax_ = 0.0;
};

struct SolveResult {
    QTable qStar;
    Eigen::VectorXd vStar;
    std::vector<std::vector<int>> optimalActions;  // per state, ordered
    double gap = 0.0;   // +infinity when every action is optimal everywhere
    double residual = 0.0;
};

/// One application of the Bellman optimality operator.
QTable bellman_update(const QTable& q, const Mdp& mdp);

/// Value iteration to within `tol` of Q*, plus greedy structure and gap.
SolveResult solve_optimal(const Mdp& mdp, double tol = 1e-10, double tieTol = 1e-9,
                          long maxIters = 1000000);

/// Exact value function of a stationary randomized policy (direct solve of
/// V = r_pi + gamma P_pi V).  `policy` has one probability row per state.
Eigen::VectorXd policy_value(const Mdp& mdp, const Eigen::MatrixXd& policy,
                             double rowTol = 1e-12);

}  // namespace qlab
