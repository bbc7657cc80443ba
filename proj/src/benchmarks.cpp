#include "qlab/benchmarks.hpp"

#include <filesystem>
#include <vector>

#include "qlab/markov.hpp"
#include "qlab/rng.hpp"

namespace qlab {

Mdp make_bench4x2() {
    const std::vector<double> t = {
        // s0
        0.50, 0.25, 0.15, 0.10,   0.45, 0.30, 0.15, 0.10,
        // s1
        0.10, 0.50, 0.25, 0.15,   0.10, 0.45, 0.30, 0.15,
        // s2
        0.15, 0.10, 0.50, 0.25,   0.15, 0.10, 0.45, 0.30,
        // s3
        0.25, 0.15, 0.10, 0.50,   0.30, 0.15, 0.10, 0.45,
    };
    const std::vector<double> r = {
        5.0, 1.0,
        4.8, 0.8,
        5.0, 1.2,
        4.9, 0.9,
    };
    return Mdp::validated(4, 2, t, r, 0.6, 5.0);
}

Mdp make_bench2x2() {
    const std::vector<double> t = {
        0.7, 0.3,   0.4, 0.6,
        0.3, 0.7,   0.6, 0.4,
    };
    const std::vector<double> r = {
        1.0, 0.3,
        0.2, 0.8,
    };
    return Mdp::validated(2, 2, t, r, 0.5, 1.0);
}

Mdp make_bench3x2() {
    const std::vector<double> t = {
        0.1, 0.8, 0.1,   0.1, 0.1, 0.8,
        0.8, 0.1, 0.1,   0.1, 0.1, 0.8,
        0.8, 0.1, 0.1,   0.1, 0.8, 0.1,
    };
    const std::vector<double> r = {
        0.2, 0.9,
        0.5, 0.1,
        0.7, 0.3,
    };
    return Mdp::validated(3, 2, t, r, 0.7, 1.0);
}

Mdp make_gap_instance(double gap) {
    // Both actions share the transition row, so gap(M) = 1.0 - (1.0 - gap).
    const std::vector<double> t = {
        0.7, 0.3,   0.7, 0.3,
        0.4, 0.6,   0.4, 0.6,
    };
    const std::vector<double> r = {
        1.0, 1.0 - gap,
        1.0, 1.0 - gap,
    };
    return Mdp::validated(2, 2, t, r, 0.5, 1.0);
}

namespace {

// Stationary state occupancy of the chain induced by a (possibly randomized)
// policy; 0 signals a reducible chain.
double occupancy_min(const Mdp& mdp, const Eigen::MatrixXd& policy) {
    const int S = mdp.num_states();
    Eigen::MatrixXd pPi = Eigen::MatrixXd::Zero(S, S);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < mdp.num_actions(); ++a) {
            const double w = policy(s, a);
            if (w == 0.0) continue;
            const double* row = mdp.transition_row(s, a);
            for (int s2 = 0; s2 < S; ++s2) pPi(s, s2) += w * row[s2];
        }
    if (!is_irreducible(pPi)) return 0.0;
    return stationary_distribution(pPi).probs.minCoeff();
}

}  // namespace

double min_state_occupancy(const Mdp& mdp, int randomPolicies, std::uint64_t seed) {
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    double minOcc = 1.0;

    long numPolicies = 1;
    for (int s = 0; s < S; ++s) numPolicies *= A;
    Eigen::MatrixXd policy = Eigen::MatrixXd::Zero(S, A);
    for (long code = 0; code < numPolicies; ++code) {
        policy.setZero();
        long c = code;
        for (int s = 0; s < S; ++s) {
            policy(s, static_cast<int>(c % A)) = 1.0;
            c /= A;
        }
        const double occ = occupancy_min(mdp, policy);
        if (occ == 0.0) return 0.0;
        minOcc = std::min(minOcc, occ);
    }

    Xoshiro256pp rng(seed);
    for (int k = 0; k < randomPolicies; ++k) {
        for (int s = 0; s < S; ++s) {
            double sum = 0.0;
            for (int a = 0; a < A; ++a) {
                policy(s, a) = -std::log(1.0 - rng.uniform01());
                sum += policy(s, a);
            }
            for (int a = 0; a < A; ++a) policy(s, a) /= sum;
        }
        minOcc = std::min(minOcc, occupancy_min(mdp, policy));
    }
    return minOcc;
}

void write_benchmark_files(const std::string& dir) {
    std::filesystem::create_directories(dir);
    make_bench4x2().save(dir + "/bench4x2.json");
    make_bench2x2().save(dir + "/bench2x2.json");
    make_bench3x2().save(dir + "/bench3x2.json");
    make_gap_instance(1.0).save(dir + "/gap_large.json");
    make_gap_instance(0.1).save(dir + "/gap_small.json");
}

}  // namespace qlab
