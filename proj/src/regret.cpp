#include "qlab/regret.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "qlab/policies.hpp"
#include "qlab/rng.hpp"

namespace qlab {

namespace {

Eigen::VectorXd behavior_row(const QTable& q, int s, const ControlValue& ctrl,
                             AlgoKind algo, double tieTol) {
    const Eigen::VectorXd row = q.row(s).transpose();
    return algo == AlgoKind::seg ? seg_policy(row, ctrl, tieTol)
                                 : softmax_policy(row, ctrl.lambda, tieTol);
}

}  // namespace

double frozen_policy_regret_term(const Mdp& mdp, const SolveResult& solve,
                                 const CheckpointSnapshot& snap, AlgoKind algo,
                                 double tieTol) {
    const Eigen::MatrixXd pi =
        policy_matrix(snap.q, snap.ctrl, algo == AlgoKind::seg, tieTol);
    const Eigen::VectorXd v = policy_value(mdp, pi);
    return (1.0 - mdp.gamma()) * (solve.vStar(snap.state) - v(snap.state));
}

long mc_truncation_horizon(double gamma, double rmax, double tol, long cap) {
    if (!(tol > 0.0)) throw NonPositiveValue("truncation tol must be > 0");
    const double ratio = tol * (1.0 - gamma) / rmax;
    if (ratio >= 1.0) return 1;
    const double h = std::ceil(std::log(ratio) / std::log(gamma));
    if (h > static_cast<double>(cap))
        throw HorizonOverflow(static_cast<long>(h), cap);
    return std::max(1L, static_cast<long>(h));
}

McRegret mc_continuation_regret(const Mdp& mdp, const QlearnConfig& config,
                                const SolveResult& solve, const CheckpointSnapshot& snap,
                                int K, double tol, std::uint64_t seed) {
    if (K < 2) throw NonPositiveValue("mc_continuation_regret needs K >= 2");
    const long horizon = mc_truncation_horizon(mdp.gamma(), mdp.rmax(), tol);
    const double gamma = mdp.gamma();

    std::vector<double> returns(K, 0.0);
    for (int k = 0; k < K; ++k) {
        RngPair rng = RngPair::for_trajectory(RngPair::derive(seed, k));
        QTable q = snap.q;
        int s = snap.state;
        // The continuation is scored against the policy at (ctrl_n, Q_n), so
        // the first action is redrawn from it rather than taken from the
        // paused loop state.
        Eigen::VectorXd row = behavior_row(q, s, snap.ctrl, config.algo, config.tieTol);
        int a = sample_index(std::span<const double>(row.data(), row.size()),
                             rng.action.uniform01());
        double discounted = 0.0;
        double discount = 1.0;
        for (long m = 0; m < horizon; ++m) {
            const long n = snap.n + m;
            const ControlValue ctrl = config.control_at(n);
            const double betaN = eval_schedule(config.stepsize, n);
            discounted += discount * mdp.reward(s, a);
            discount *= gamma;
            const int sNext = sample_index(
                std::span<const double>(mdp.transition_row(s, a), mdp.num_states()),
                rng.state.uniform01());
            row = behavior_row(q, sNext, ctrl, config.algo, config.tieTol);
            const int aNext = sample_index(
                std::span<const double>(row.data(), row.size()), rng.action.uniform01());
            q = q_update(q, s, a, mdp.reward(s, a), sNext, betaN, gamma);
            s = sNext;
            a = aNext;
        }
        returns[k] = discounted;
    }
    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= K;
    double var = 0.0;
    for (double r : returns) var += (r - mean) * (r - mean);
    var /= (K - 1);

    McRegret out;
    out.estimate = (1.0 - gamma) * (solve.vStar(snap.state) - mean);
    out.stdErr = (1.0 - gamma) * std::sqrt(var / K);
    out.horizon = horizon;
    return out;
}

RegretEstimate cumulative_regret(const Mdp& mdp, const SolveResult& solve,
                                 const RunResult& run, RegretMethod method,
                                 const McOptions& mc) {
    if (run.checkpoints.empty()) throw GridMismatch("run carries no checkpoints");
    for (std::size_t i = 1; i < run.checkpoints.size(); ++i)
        if (run.checkpoints[i].n <= run.checkpoints[i - 1].n)
            throw GridMismatch("checkpoint grid not strictly increasing");

    const double mcTol = mc.tol > 0.0 ? mc.tol : 1e-4 * mdp.vmax();
    RegretEstimate est;
    est.method = method;
    for (std::size_t i = 0; i < run.checkpoints.size(); ++i) {
        const auto& snap = run.checkpoints[i];
        RegretPoint p;
        p.n = snap.n;
        p.frozen = frozen_policy_regret_term(mdp, solve, snap, run.config.algo,
                                             run.config.tieTol);
        if (method != RegretMethod::frozen) {
            const McRegret m =
                mc_continuation_regret(mdp, run.config, solve, snap, mc.K, mcTol,
                                       RngPair::derive(mc.seed, i));
            p.mc = m.estimate;
            p.mcStdErr = m.stdErr;
        }
        est.perCheckpoint.push_back(p);
    }

    // Left-constant interpolation: the regret at checkpoint n_j stands in for
    // every step in [n_j, n_{j+1}); the partial sum at n_k includes n_k itself.
    auto accumulate = [&](auto term) {
        std::vector<std::pair<long, double>> cum;
        double acc = 0.0;
        for (std::size_t j = 0; j < est.perCheckpoint.size(); ++j) {
            cum.emplace_back(est.perCheckpoint[j].n, acc + term(est.perCheckpoint[j]));
            if (j + 1 < est.perCheckpoint.size())
                acc += term(est.perCheckpoint[j]) *
                       static_cast<double>(est.perCheckpoint[j + 1].n -
                                           est.perCheckpoint[j].n);
        }
        return cum;
    };
    est.cumulativeFrozen = accumulate([](const RegretPoint& p) { return p.frozen; });
    if (method != RegretMethod::frozen)
        est.cumulativeMc = accumulate([](const RegretPoint& p) { return *p.mc; });
    return est;
}

RegretExponent theoretical_regret_exponent(AlgoKind algo, const RegretParams& params,
                                           double gap) {
    RegretExponent out;
    if (algo == AlgoKind::boltzmann) {
        const double estimation = 0.5 + 4.0 * params.a;
        if (std::isinf(gap)) {
            out.exponent = std::min(1.0, estimation);
            out.gapTermDropped = true;
            return out;
        }
        if (!(gap > 0.0)) throw MissingParameter("gap");
        out.exponent = std::min(1.0, std::max(estimation, 1.0 - params.b * gap / 2.0));
        return out;
    }
    if (algo == AlgoKind::seg) {
        out.exponent = std::min(
            1.0, std::max({1.0 - params.d, 0.5 + params.a + 3.0 * params.d + 2.0 * params.e,
                           2.0 * params.a + 4.0 * params.d + 3.0 * params.e,
                           1.0 - (params.d - params.e)}));
        return out;
    }
    throw PreconditionUnmet("regret exponent defined for boltzmann and seg only");
}

PowerLawFit fit_power_law(const std::vector<std::pair<long, double>>& series, long nLo,
                          long nHi) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [n, v] : series) {
        if (n < nLo || n > nHi) continue;
        if (!(v > 0.0))
            throw NonPositiveValue("fit_power_law requires positive values in the window");
        pts.emplace_back(std::log(static_cast<double>(n)), std::log(v));
    }
    if (pts.size() < 5) throw TooFewPoints(pts.size(), 5);

    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    PowerLawFit fit;
    fit.points = static_cast<int>(pts.size());
    fit.exponent = sxy / sxx;
    double ssRes = 0.0;
    for (const auto& [x, y] : pts) {
        const double yh = my + fit.exponent * (x - mx);
        ssRes += (y - yh) * (y - yh);
    }
    // A flat series carries rounding-level spread; treat it as a perfect fit.
    fit.r2 = syy <= 1e-18 ? 1.0 : 1.0 - ssRes / syy;
    return fit;
}

}  // namespace qlab
