#pragma once

// Shared fixtures and independent oracles for the test suites.  Everything in
// here recomputes quantities by brute force (naive summation, simulation,
// enumeration) so the library paths are checked against separate code.

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "qlab/benchmarks.hpp"
#include "qlab/markov.hpp"
#include "qlab/mdp.hpp"
#include "qlab/rng.hpp"

namespace qlab::testutil {

inline Mdp random_mdp(int S, int A, double gamma, double rmax, Xoshiro256pp& rng,
                      double minMass = 0.02) {
    std::vector<double> t, r;
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            std::vector<double> row(S);
            double sum = 0.0;
            for (int s2 = 0; s2 < S; ++s2) {
                row[s2] = minMass + rng.uniform01();
                sum += row[s2];
            }
            // Exact stochastic row: make the last entry absorb rounding.
            double acc = 0.0;
            for (int s2 = 0; s2 < S - 1; ++s2) {
                row[s2] /= sum;
                acc += row[s2];
            }
            row[S - 1] = 1.0 - acc;
            t.insert(t.end(), row.begin(), row.end());
            r.push_back(rmax * rng.uniform01());
        }
    }
    return Mdp::validated(S, A, t, r, gamma, rmax);
}

inline Kernel random_kernel(int n, Xoshiro256pp& rng, double minMass = 0.02) {
    Kernel k(n, n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            k(i, j) = minMass + rng.uniform01();
            sum += k(i, j);
        }
        double acc = 0.0;
        for (int j = 0; j < n - 1; ++j) {
            k(i, j) /= sum;
            acc += k(i, j);
        }
        k(i, n - 1) = 1.0 - acc;
    }
    return k;
}

inline QTable random_q(const Mdp& mdp, Xoshiro256pp& rng) {
    QTable q(mdp.num_states(), mdp.num_actions());
    for (int s = 0; s < mdp.num_states(); ++s)
        for (int a = 0; a < mdp.num_actions(); ++a) q(s, a) = mdp.vmax() * rng.uniform01();
    return q;
}

inline Eigen::MatrixXd random_policy(int S, int A, Xoshiro256pp& rng) {
    Eigen::MatrixXd pi(S, A);
    for (int s = 0; s < S; ++s) {
        double sum = 0.0;
        for (int a = 0; a < A; ++a) {
            pi(s, a) = 0.05 + rng.uniform01();
            sum += pi(s, a);
        }
        double acc = 0.0;
        for (int a = 0; a < A - 1; ++a) {
            pi(s, a) /= sum;
            acc += pi(s, a);
        }
        pi(s, A - 1) = 1.0 - acc;
    }
    return pi;
}

/// Naive Bellman application, written independently of bellman_update.
inline QTable naive_bellman(const QTable& q, const Mdp& mdp) {
    QTable out(mdp.num_states(), mdp.num_actions());
    for (int s = 0; s < mdp.num_states(); ++s) {
        for (int a = 0; a < mdp.num_actions(); ++a) {
            double acc = mdp.reward(s, a);
            for (int s2 = 0; s2 < mdp.num_states(); ++s2) {
                double best = q(s2, 0);
                for (int a2 = 1; a2 < mdp.num_actions(); ++a2)
                    best = std::max(best, q(s2, a2));
                acc += mdp.gamma() * mdp.transition(s, a, s2) * best;
            }
            out(s, a) = acc;
        }
    }
    return out;
}

inline int draw(std::span<const double> probs, Xoshiro256pp& rng) {
    return sample_index(probs, rng.uniform01());
}

/// Long-run state occupancy of a kernel.
inline Eigen::VectorXd simulate_occupancy(const Kernel& k, long steps,
                                          std::uint64_t seed) {
    const int n = static_cast<int>(k.rows());
    Xoshiro256pp rng(seed);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n);
    int y = 0;
    for (long t = 0; t < steps; ++t) {
        counts(y) += 1.0;
        const Eigen::VectorXd row = k.row(y).transpose();
        y = draw(std::span<const double>(row.data(), n), rng);
    }
    return counts / static_cast<double>(steps);
}

struct MeanStderr {
    double mean = 0.0;
    double stderrOfMean = 0.0;
};

/// Episode-based mean hitting time from `start` to `target`.
inline MeanStderr simulate_hitting_time(const Kernel& k, int start, int target,
                                        long episodes, std::uint64_t seed,
                                        long capSteps = 1000000) {
    const int n = static_cast<int>(k.rows());
    Xoshiro256pp rng(seed);
    double sum = 0.0, sumSq = 0.0;
    for (long e = 0; e < episodes; ++e) {
        int y = start;
        long steps = 0;
        while (y != target && steps < capSteps) {
            const Eigen::VectorXd row = k.row(y).transpose();
            y = draw(std::span<const double>(row.data(), n), rng);
            ++steps;
        }
        sum += static_cast<double>(steps);
        sumSq += static_cast<double>(steps) * steps;
    }
    MeanStderr out;
    out.mean = sum / episodes;
    const double var = (sumSq - episodes * out.mean * out.mean) / (episodes - 1);
    out.stderrOfMean = std::sqrt(var / episodes);
    return out;
}

/// Truncated-discounted-return estimate of a stationary policy's value.
inline MeanStderr simulate_policy_value(const Mdp& mdp, const Eigen::MatrixXd& policy,
                                        int start, long episodes, long horizon,
                                        std::uint64_t seed) {
    Xoshiro256pp rng(seed);
    double sum = 0.0, sumSq = 0.0;
    for (long e = 0; e < episodes; ++e) {
        int s = start;
        double ret = 0.0;
        double discount = 1.0;
        for (long t = 0; t < horizon; ++t) {
            const Eigen::VectorXd row = policy.row(s).transpose();
            const int a = draw(std::span<const double>(row.data(), row.size()), rng);
            ret += discount * mdp.reward(s, a);
            discount *= mdp.gamma();
            s = draw(std::span<const double>(mdp.transition_row(s, a), mdp.num_states()),
                     rng);
        }
        sum += ret;
        sumSq += ret * ret;
    }
    MeanStderr out;
    out.mean = sum / episodes;
    const double var = (sumSq - episodes * out.mean * out.mean) / (episodes - 1);
    out.stderrOfMean = std::sqrt(var / episodes);
    return out;
}

}  // namespace qlab::testutil
