#pragma once

#include <cstdint>
#include <string>

#include "qlab/mdp.hpp"

namespace qlab {

/// Canned benchmark instances used by the studies and the test suites.
/// bench4x2: 4 states / 2 actions, gamma = 0.6, full-support transitions with
/// a mild action effect and a large suboptimality gap.
Mdp make_bench4x2();

/// 2 states / 2 actions, gamma = 0.5; small instance for decomposition
/// windows and convergence smoke runs.
Mdp make_bench2x2();

/// 3 states / 2 actions with strongly action-dependent transitions; exercises
/// diameter and policy enumeration.
Mdp make_bench3x2();

/// Two-state pair identical except for the suboptimal rewards: gap(M) equals
/// `gap` exactly (action-independent transitions).
Mdp make_gap_instance(double gap);

/// Minimum stationary state occupancy min_s sum_a mu(s, a) over deterministic
/// policies plus `randomPolicies` sampled interior policies.  Returns 0 when
/// some deterministic policy makes the state chain reducible.
double min_state_occupancy(const Mdp& mdp, int randomPolicies = 200,
                           std::uint64_t seed = 987654321ULL);

/// Writes the canned instances as JSON files into `dir`.
void write_benchmark_files(const std::string& dir);

}  // namespace qlab
