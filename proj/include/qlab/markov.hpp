#pragma once

#include <Eigen/Dense>

#include "qlab/errors.hpp"
#include "qlab/mdp.hpp"

namespace qlab {

/// Row-stochastic transition matrix on a finite state space.
using Kernel = Eigen::MatrixXd;

struct StationaryDistribution {
    Eigen::VectorXd probs;
    double muMin = 0.0;
};

struct PoissonSolution {
    Eigen::MatrixXd h;    // one row per noise state, one column per iterate coordinate
    int designated = 0;   // pinned state i* with h(i*) = 0
    double residual = 0.0;
};

/// Throws unless every row is nonnegative and sums to 1 within `tol`.
void validate_kernel(const Kernel& k, double tol = 1e-12);

/// Distance between kernels: max over rows of the L1 row difference
/// (the induced infinity norm used throughout).
double kernel_distance(const Kernel& a, const Kernel& b);

/// Strong connectivity of the directed graph of entries > floor.
bool is_irreducible(const Kernel& k, double floor = 1e-14);

/// Unique stationary distribution of an irreducible kernel (exact solve).
StationaryDistribution stationary_distribution(const Kernel& k);

/// Exact expected hitting times of `target` from every state; zero at the target.
Eigen::VectorXd expected_hitting_times(const Kernel& k, int target);

/// Worst-case expected hitting time over deterministic stationary policies and
/// state pairs.  Returns +infinity if some policy disconnects a pair that other
/// policies connect; throws Unreachable if a pair is disconnected under every
/// policy, InstanceTooLarge past the enumeration cap.
double mdp_diameter(const Mdp& mdp, long enumCap = 1000000);

/// Solution of  H(i) = F(i) - sum_j mu(j) F(j) + sum_j k(i,j) H(j)  pinned by
/// H(iStar) = 0.  `fValues` holds F(i) as rows.
PoissonSolution solve_poisson(const Kernel& k, const Eigen::MatrixXd& fValues,
                              const StationaryDistribution& mu, int iStar);

/// Residual of the Poisson identity for a candidate solution (max abs entry).
double poisson_residual(const Kernel& k, const Eigen::MatrixXd& fValues,
                        const StationaryDistribution& mu, const Eigen::MatrixXd& h);

/// || p^ell - pPrime^ell || by exact matrix powers; always <= ell * || p - pPrime ||.
double multistep_kernel_deviation(const Kernel& p, const Kernel& pPrime, int ell);

struct SensitivityReport {
    double muDistance = 0.0;      // || mu - mu' ||_inf, exact
    double kernelDistance = 0.0;  // || p - p' ||
    double bound = 0.0;           // constant * kernelDistance / muMin
    bool holds = false;
};

/// Checks || mu - mu' ||_inf <= constant * || p - p' || / muMin with both
/// stationary distributions computed exactly.
SensitivityReport stationary_sensitivity_check(const Kernel& p, const Kernel& pPrime,
                                               double constant, double muMin);

}  // namespace qlab
