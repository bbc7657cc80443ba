#include "qlab/policies.hpp"

#include <cmath>

namespace qlab {

Eigen::VectorXd softmax_policy(const Eigen::VectorXd& qRow, double lambda, double tieTol) {
    if (lambda < 0.0) throw NegativeLambda(lambda);
    const int n = static_cast<int>(qRow.size());
    Eigen::VectorXd out(n);
    const double top = qRow.maxCoeff();
    if (lambda < kGreedyLambdaFloor) {
        // Greedy limit: uniform mass over argmax within tieTol.
        int ties = 0;
        for (int a = 0; a < n; ++a)
            if (qRow(a) >= top - tieTol) ++ties;
        for (int a = 0; a < n; ++a) out(a) = qRow(a) >= top - tieTol ? 1.0 / ties : 0.0;
        return out;
    }
    for (int a = 0; a < n; ++a) out(a) = std::exp((qRow(a) - top) / lambda);
    out /= out.sum();
    return out;
}

Eigen::VectorXd seg_policy(const Eigen::VectorXd& qRow, const ControlValue& ctrl,
                           double tieTol) {
    const int n = static_cast<int>(qRow.size());
    Eigen::VectorXd soft = softmax_policy(qRow, ctrl.lambda, tieTol);
    return Eigen::VectorXd::Constant(n, ctrl.epsilon / n) + (1.0 - ctrl.epsilon) * soft;
}

SoftmaxGradients softmax_gradients(const Eigen::VectorXd& qRow, double lambda) {
    if (lambda < 0.0) throw NegativeLambda(lambda);
    if (lambda < kGreedyLambdaFloor) throw LambdaUnderflow(lambda);
    const int n = static_cast<int>(qRow.size());
    const Eigen::VectorXd sigma = softmax_policy(qRow, lambda);
    SoftmaxGradients g;
    g.dq.resize(n, n);
    g.dLambdaPrinted.resize(n);
    g.dLambdaFull.resize(n);
    const double lambda2 = lambda * lambda;
    const double sq = sigma.dot(qRow);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            g.dq(a, b) = (a == b) ? sigma(a) * (1.0 - sigma(a)) / lambda
                                  : -sigma(a) * sigma(b) / lambda;
        double printed = 0.0;
        for (int b = 0; b < n; ++b)
            if (b != a) printed += sigma(b) * qRow(b);
        g.dLambdaPrinted(a) = sigma(a) * printed / lambda2;
        g.dLambdaFull(a) = sigma(a) * (sq - qRow(a)) / lambda2;
    }
    return g;
}

double action_prob_lower_bound(const ControlValue& ctrl, double rmax, double gamma,
                               int numActions) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw GammaOutOfRange(gamma);
    if (ctrl.lambda < 0.0) throw NegativeLambda(ctrl.lambda);
    double softBound = 0.0;
    if (ctrl.lambda >= kGreedyLambdaFloor) {
        softBound = 1.0 / (numActions * std::exp(rmax / (ctrl.lambda * (1.0 - gamma))));
    }
    return ctrl.epsilon / numActions + (1.0 - ctrl.epsilon) * softBound;
}

Eigen::MatrixXd policy_matrix(const QTable& q, const ControlValue& ctrl, bool seg,
                              double tieTol) {
    Eigen::MatrixXd out(q.rows(), q.cols());
    for (Eigen::Index s = 0; s < q.rows(); ++s) {
        const Eigen::VectorXd row = q.row(s).transpose();
        out.row(s) = seg ? seg_policy(row, ctrl, tieTol).transpose()
                         : softmax_policy(row, ctrl.lambda, tieTol).transpose();
    }
    return out;
}

Kernel induced_kernel(const Mdp& mdp, const Eigen::MatrixXd& policy) {
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    if (policy.rows() != S || policy.cols() != A)
        throw DimensionMismatch("policy shape does not match MDP");
    const int n = S * A;
    Kernel k(n, n);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            const double* row = mdp.transition_row(s, a);
            for (int s2 = 0; s2 < S; ++s2)
                for (int a2 = 0; a2 < A; ++a2)
                    k(mdp.pair_index(s, a), mdp.pair_index(s2, a2)) = row[s2] * policy(s2, a2);
        }
    }
    return k;
}

ContractionFactor contraction_factor(const Mdp& mdp, const Eigen::MatrixXd& policy) {
    const Kernel k = induced_kernel(mdp, policy);
    const auto mu = stationary_distribution(k);
    ContractionFactor out;
    out.muMin = mu.muMin;
    out.alphaTilde = (1.0 - mdp.gamma()) * mu.muMin;
    return out;
}

std::vector<SensitivityCell> sensitivity_grid(std::pair<double, double> xRange,
                                              std::pair<double, double> lambdaRange,
                                              int resolution) {
    if (lambdaRange.first <= 0.0 || lambdaRange.second <= 0.0)
        throw NegativeLambda(std::min(lambdaRange.first, lambdaRange.second));
    if (resolution < 2) throw NonPositiveValue("grid resolution must be >= 2");
    std::vector<SensitivityCell> cells;
    cells.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
        const double x = xRange.first +
                         (xRange.second - xRange.first) * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double lambda = lambdaRange.first +
                                  (lambdaRange.second - lambdaRange.first) * j / (resolution - 1);
            const double p = 1.0 / (1.0 + std::exp(-x / lambda));
            SensitivityCell c;
            c.x = x;
            c.lambda = lambda;
            c.dPdxAbs = p * (1.0 - p) / lambda;
            c.dPdlambdaAbs = std::abs(x) * p * (1.0 - p) / (lambda * lambda);
            cells.push_back(c);
        }
    }
    return cells;
}

}  // namespace qlab
