#include "qlab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qlab {

void validate_kernel(const Kernel& k, double tol) {
    if (k.rows() != k.cols() || k.rows() == 0)
        throw DimensionMismatch("kernel must be square and nonempty");
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < k.cols(); ++j) {
            if (k(i, j) < 0.0) throw RowSumViolation(static_cast<int>(i), 0, k(i, j));
            sum += k(i, j);
        }
        if (std::abs(sum - 1.0) > tol) throw RowSumViolation(static_cast<int>(i), 0, sum);
    }
}

double kernel_distance(const Kernel& a, const Kernel& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("kernel sizes differ");
    return (a - b).cwiseAbs().rowwise().sum().maxCoeff();
}

namespace {

// Iterative DFS reachability over entries > floor.
std::vector<bool> reachable_from(const Kernel& k, int start, double floor) {
    const int n = static_cast<int>(k.rows());
    std::vector<bool> seen(n, false);
    std::vector<int> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (!seen[j] && k(i, j) > floor) {
                seen[j] = true;
                stack.push_back(j);
            }
        }
    }
    return seen;
}

}  // namespace

bool is_irreducible(const Kernel& k, double floor) {
    const auto fwd = reachable_from(k, 0, floor);
    if (!std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; })) return false;
    const Kernel kt = k.transpose();
    const auto bwd = reachable_from(kt, 0, floor);
    return std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

StationaryDistribution stationary_distribution(const Kernel& k) {
    validate_kernel(k);
    if (!is_irreducible(k)) throw NotIrreducible();
    const int n = static_cast<int>(k.rows());
    // Solve mu (P - I) = 0 with the normalization sum(mu) = 1 replacing the
    // last equation.
    Eigen::MatrixXd a = (k.transpose() - Eigen::MatrixXd::Identity(n, n));
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd mu = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(b);
    if (!mu.allFinite()) throw SingularSystem("stationary solve produced non-finite values");
    StationaryDistribution out;
    out.probs = mu;
    out.muMin = mu.minCoeff();
    return out;
}

Eigen::VectorXd expected_hitting_times(const Kernel& k, int target) {
    validate_kernel(k);
    if (!is_irreducible(k)) throw NotIrreducible();
    const int n = static_cast<int>(k.rows());
    if (target < 0 || target >= n) throw DimensionMismatch("hitting-time target out of range");
    // h(i) = 1 + sum_{j != target} k(i,j) h(j) for i != target, h(target) = 0.
    const int m = n - 1;
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
    auto idx = [&](int i) { return i < target ? i : i - 1; };
    for (int i = 0; i < n; ++i) {
        if (i == target) continue;
        for (int j = 0; j < n; ++j) {
            if (j == target) continue;
            a(idx(i), idx(j)) = (i == j ? 1.0 : 0.0) - k(i, j);
        }
    }
    Eigen::VectorXd hRest = Eigen::PartialPivLU<Eigen::MatrixXd>(a).solve(b);
    if (!hRest.allFinite()) throw SingularSystem("hitting-time solve produced non-finite values");
    Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i)
        if (i != target) h(i) = hRest(idx(i));
    return h;
}

namespace {

// Expected hitting times to `target` under the state chain pPi, allowing
// disconnection: returns +infinity entries for states that never reach the
// target.  Solves on the set of states that can reach it.
Eigen::VectorXd hitting_times_allow_inf(const Eigen::MatrixXd& pPi, int target) {
    const int n = static_cast<int>(pPi.rows());
    // States that can reach target: reverse reachability.
    std::vector<bool> canReach(n, false);
    canReach[target] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            if (canReach[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (pPi(i, j) > 0.0 && canReach[j]) {
                    canReach[i] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    const double inf = std::numeric_limits<double>::infinity();
    Eigen::VectorXd h = Eigen::VectorXd::Constant(n, inf);
    h(target) = 0.0;
    std::vector<int> solveSet;
    for (int i = 0; i < n; ++i)
        if (i != target && canReach[i]) solveSet.push_back(i);
    if (solveSet.empty()) return h;

    // Restricted system: escaping to a state that cannot reach the target
    // leaves the hitting time infinite, so such rows only appear when every
    // positive-probability successor stays in {canReach}.  If some row leaks
    // to a non-reaching state the start state is still infinite; detect and
    // mark those rows by checking leak mass.
    const int m = static_cast<int>(solveSet.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
    std::vector<bool> leaks(m, false);
    for (int r = 0; r < m; ++r) {
        const int i = solveSet[r];
        for (int j = 0; j < n; ++j) {
            if (pPi(i, j) <= 0.0 || j == target) continue;
            if (!canReach[j]) {
                leaks[r] = true;
                continue;
            }
            const auto it = std::find(solveSet.begin(), solveSet.end(), j);
            a(r, static_cast<int>(it - solveSet.begin())) = pPi(i, j);
        }
    }
    // A leak means reaching the target is not almost sure from that state, so
    // the expected hitting time is infinite; propagate to predecessors.
    std::vector<bool> infinite(m, false);
    for (int r = 0; r < m; ++r) infinite[r] = leaks[r];
    changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < m; ++r) {
            if (infinite[r]) continue;
            for (int c = 0; c < m; ++c) {
                if (a(r, c) > 0.0 && infinite[c]) {
                    infinite[r] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<int> finiteSet;
    for (int r = 0; r < m; ++r)
        if (!infinite[r]) finiteSet.push_back(r);
    if (!finiteSet.empty()) {
        const int f = static_cast<int>(finiteSet.size());
        Eigen::MatrixXd af(f, f);
        Eigen::VectorXd bf = Eigen::VectorXd::Ones(f);
        for (int r = 0; r < f; ++r)
            for (int c = 0; c < f; ++c)
                af(r, c) = (r == c ? 1.0 : 0.0) - a(finiteSet[r], finiteSet[c]);
        Eigen::VectorXd hf = Eigen::PartialPivLU<Eigen::MatrixXd>(af).solve(bf);
        if (!hf.allFinite())
            throw SingularSystem("restricted hitting-time solve produced non-finite values");
        for (int r = 0; r < f; ++r) h(solveSet[finiteSet[r]]) = hf(r);
    }
    return h;
}

}  // namespace

double mdp_diameter(const Mdp& mdp, long enumCap) {
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    double total = 1.0;
    for (int s = 0; s < S; ++s) {
        total *= A;
        if (total > static_cast<double>(enumCap))
            throw InstanceTooLarge("policy enumeration exceeds cap");
    }
    const long numPolicies = static_cast<long>(total);

    // connected(s,s') under at least one policy == reachability in the graph
    // with an edge (s -> s2) whenever some action moves s to s2.
    Eigen::MatrixXd anyAction = Eigen::MatrixXd::Zero(S, S);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
            for (int s2 = 0; s2 < S; ++s2)
                if (mdp.transition(s, a, s2) > 0.0) anyAction(s, s2) = 1.0;
    for (int target = 0; target < S; ++target) {
        for (int s = 0; s < S; ++s) {
            if (s == target) continue;
            // BFS on anyAction
            std::vector<bool> seen(S, false);
            std::vector<int> stack{s};
            seen[s] = true;
            bool found = false;
            while (!stack.empty() && !found) {
                int i = stack.back();
                stack.pop_back();
                for (int j = 0; j < S; ++j) {
                    if (anyAction(i, j) > 0.0 && !seen[j]) {
                        if (j == target) { found = true; break; }
                        seen[j] = true;
                        stack.push_back(j);
                    }
                }
                if (seen[target]) found = true;
            }
            if (!found) throw Unreachable(s, target);
        }
    }

    double diameter = 0.0;
    std::vector<int> choice(S, 0);
    for (long code = 0; code < numPolicies; ++code) {
        long c = code;
        for (int s = 0; s < S; ++s) {
            choice[s] = static_cast<int>(c % A);
            c /= A;
        }
        Eigen::MatrixXd pPi(S, S);
        for (int s = 0; s < S; ++s) {
            const double* row = mdp.transition_row(s, choice[s]);
            for (int s2 = 0; s2 < S; ++s2) pPi(s, s2) = row[s2];
        }
        for (int target = 0; target < S; ++target) {
            Eigen::VectorXd h = hitting_times_allow_inf(pPi, target);
            diameter = std::max(diameter, h.maxCoeff());
        }
        if (std::isinf(diameter)) return diameter;
    }
    return diameter;
}

PoissonSolution solve_poisson(const Kernel& k, const Eigen::MatrixXd& fValues,
                              const StationaryDistribution& mu, int iStar) {
    validate_kernel(k);
    if (!is_irreducible(k)) throw NotIrreducible();
    const int n = static_cast<int>(k.rows());
    if (fValues.rows() != n) throw DimensionMismatch("fValues rows != kernel size");
    if (mu.probs.size() != n) throw DimensionMismatch("stationary distribution size mismatch");
    if (iStar < 0 || iStar >= n) throw DimensionMismatch("designated state out of range");

    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - k;
    Eigen::MatrixXd rhs = fValues;
    const Eigen::RowVectorXd fBar = mu.probs.transpose() * fValues;
    rhs.rowwise() -= fBar;
    a.row(iStar).setZero();
    a(iStar, iStar) = 1.0;
    rhs.row(iStar).setZero();

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::MatrixXd h = lu.solve(rhs);
    if (!h.allFinite()) throw SingularSystem("Poisson solve produced non-finite values");
    h.row(iStar).setZero();  // pin exactly

    PoissonSolution out;
    out.h = std::move(h);
    out.designated = iStar;
    out.residual = poisson_residual(k, fValues, mu, out.h);
    return out;
}

double poisson_residual(const Kernel& k, const Eigen::MatrixXd& fValues,
                        const StationaryDistribution& mu, const Eigen::MatrixXd& h) {
    const Eigen::RowVectorXd fBar = mu.probs.transpose() * fValues;
    Eigen::MatrixXd lhs = h;
    Eigen::MatrixXd rhs = fValues + (k * h);
    rhs.rowwise() -= fBar;
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

double multistep_kernel_deviation(const Kernel& p, const Kernel& pPrime, int ell) {
    if (p.rows() != pPrime.rows() || p.cols() != pPrime.cols())
        throw DimensionMismatch("kernel sizes differ");
    if (ell < 1) throw NonPositiveValue("ell must be >= 1");
    Kernel pk = p;
    Kernel qk = pPrime;
    for (int i = 1; i < ell; ++i) {
        pk = pk * p;
        qk = qk * pPrime;
    }
    return (pk - qk).cwiseAbs().rowwise().sum().maxCoeff();
}

SensitivityReport stationary_sensitivity_check(const Kernel& p, const Kernel& pPrime,
                                               double constant, double muMin) {
    const auto mu = stationary_distribution(p);
    const auto muPrime = stationary_distribution(pPrime);
    SensitivityReport rep;
    rep.muDistance = (mu.probs - muPrime.probs).cwiseAbs().maxCoeff();
    rep.kernelDistance = kernel_distance(p, pPrime);
    rep.bound = constant * rep.kernelDistance / muMin;
    rep.holds = rep.muDistance <= rep.bound;
    return rep;
}

}  // namespace qlab
