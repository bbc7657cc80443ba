#include "qlab/sa.hpp"

#include <algorithm>
#include <cmath>

namespace qlab {

int SaSystem::sample_next(const ControlValue& ctrl, const Eigen::VectorXd& x, int y,
                          RngPair& rng) const {
    const Kernel k = kernel_at(ctrl, x);
    const double u = rng.state.uniform01();
    const Eigen::VectorXd row = k.row(y).transpose();
    return sample_index(std::span<const double>(row.data(), row.size()), u);
}

SaTrajectory run_sa(const SaSystem& system, long steps, std::uint64_t seed,
                    const RecordingOptions& recording) {
    if (steps < 1) throw NonPositiveValue("run_sa needs steps >= 1");
    RngPair rng = RngPair::for_trajectory(seed);

    SaTrajectory traj;
    traj.seed = seed;
    traj.steps = steps;
    traj.records.reserve(steps);
    if (recording.recordNoise) traj.noise.reserve(steps);

    std::vector<long> grid = recording.checkpoints;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::size_t gridPos = 0;

    Eigen::VectorXd x = system.initial_iterate();
    int y = system.initial_noise_state(rng);

    const auto [boxLo, boxHi] = system.iterate_box();
    const double escapeTol = 1e-9 * (1.0 + std::abs(boxHi - boxLo));

    auto maybeSnapshot = [&](long index) {
        while (gridPos < grid.size() && grid[gridPos] == index) {
            traj.snapshots.emplace_back(index, x);
            traj.snapshotNoiseStates.push_back(y);
            ++gridPos;
        }
    };
    maybeSnapshot(1);
    if (recording.fullResSteps > 0) traj.fullRes.push_back(x);

    const Schedule beta = system.stepsize();
    for (long n = 1; n <= steps; ++n) {
        const ControlValue ctrl = system.control_at(n);
        const double betaN = eval_schedule(beta, n);

        const int yNext = system.sample_next(ctrl, x, y, rng);
        const Eigen::VectorXd m = system.martingale_sample(x, y, yNext);
        const Eigen::VectorXd f = system.update_map(x, y);

        traj.records.push_back(SaStepRecord{y, ctrl, betaN});
        if (recording.recordNoise) traj.noise.push_back(m);

        x = sa_step(x, betaN, f, m);
        y = yNext;

        if (x.minCoeff() < boxLo - escapeTol || x.maxCoeff() > boxHi + escapeTol)
            throw IterateEscaped(n);

        maybeSnapshot(n + 1);
        if (n + 1 <= recording.fullResSteps + 1 && recording.fullResSteps > 0)
            traj.fullRes.push_back(x);
    }
    traj.finalIterate = x;
    traj.finalNoiseState = y;
    return traj;
}

Eigen::VectorXd stationary_average_f(const SaSystem& system, const ControlValue& ctrl,
                                     const Eigen::VectorXd& w, const Eigen::VectorXd& x) {
    const Kernel k = system.kernel_at(ctrl, w);
    const StationaryDistribution mu = stationary_distribution(k);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(system.iterate_dimension());
    for (int i = 0; i < system.noise_state_count(); ++i)
        acc += mu.probs(i) * system.update_map(x, i);
    return acc;
}

std::vector<Eigen::VectorXd> averaged_process(const SaTrajectory& traj,
                                              const SaSystem& system, long upTo) {
    if (upTo < 0 || upTo > traj.steps)
        throw WindowTooLarge("averaged_process window exceeds trajectory length");
    if (static_cast<long>(traj.fullRes.size()) < upTo)
        throw WindowTooLarge("trajectory lacks full-resolution iterates for the window");
    std::vector<Eigen::VectorXd> z;
    z.reserve(upTo + 1);
    z.push_back(traj.fullRes.empty() ? system.initial_iterate() : traj.fullRes.front());
    for (long n = 1; n <= upTo; ++n) {
        const auto& rec = traj.records[n - 1];
        const Eigen::VectorXd& xn = traj.fullRes[n - 1];
        const Eigen::VectorXd fbar = stationary_average_f(system, rec.ctrl, xn, xn);
        z.push_back(z.back() + rec.beta * (fbar - z.back()));
    }
    return z;
}

namespace {

struct PoissonAt {
    Kernel kernel;
    Eigen::MatrixXd h;  // |Y| x d
};

PoissonAt poisson_at(const SaSystem& system, const ControlValue& ctrl,
                     const Eigen::VectorXd& kernelIterate, const Eigen::VectorXd& fIterate,
                     int iStar) {
    PoissonAt out;
    out.kernel = system.kernel_at(ctrl, kernelIterate);
    const StationaryDistribution mu = stationary_distribution(out.kernel);
    const int ny = system.noise_state_count();
    Eigen::MatrixXd fValues(ny, system.iterate_dimension());
    for (int i = 0; i < ny; ++i) fValues.row(i) = system.update_map(fIterate, i).transpose();
    out.h = solve_poisson(out.kernel, fValues, mu, iStar).h;
    return out;
}

}  // namespace

DecompositionReport noise_decomposition(const SaTrajectory& traj, const SaSystem& system,
                                        int iStar, long windowLo, long windowHi,
                                        long maxWindow) {
    if (windowLo < 2 || windowHi < windowLo || windowHi > traj.steps)
        throw WindowTooLarge("decomposition window out of range");
    if (windowHi > maxWindow)
        throw WindowTooLarge("decomposition window exceeds per-step solve budget");
    if (static_cast<long>(traj.fullRes.size()) < windowHi)
        throw WindowTooLarge("trajectory lacks full-resolution iterates for the window");
    if (static_cast<long>(traj.noise.size()) < windowHi - 1)
        throw WindowTooLarge("trajectory lacks recorded martingale noise for the window");

    const std::vector<Eigen::VectorXd> z = averaged_process(traj, system, windowHi - 1);
    const int d = system.iterate_dimension();

    // Running sums valid at iterate index n, updated by
    //   S <- (1 - beta_{n-1}) S + beta_{n-1} v_{n-1},
    // the exact unrolling of the coupled x/z recursions (the weight of v_i in
    // the sum at n is beta_i prod_{j=i+1}^{n-1} (1 - beta_j)).
    Eigen::VectorXd sMart = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd sT1 = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd sT2 = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd sT3 = Eigen::VectorXd::Zero(d);

    DecompositionReport report;
    PoissonAt cur = poisson_at(system, traj.records[0].ctrl, traj.fullRes[0],
                               traj.fullRes[0], iStar);

    for (long n = 2; n <= windowHi; ++n) {
        const long i = n - 1;  // step feeding iterate index n
        const auto& rec = traj.records[i - 1];
        const int yi = rec.y;
        const int yiNext = traj.records[i].y;  // y_{i+1}; i+1 <= windowHi <= steps

        const ControlValue ctrlNext = traj.records[i].ctrl;
        PoissonAt next = poisson_at(system, ctrlNext, traj.fullRes[i], traj.fullRes[i], iStar);
        PoissonAt cross = poisson_at(system, ctrlNext, traj.fullRes[i - 1],
                                     traj.fullRes[i - 1], iStar);

        const Eigen::VectorXd mPrime =
            cur.h.row(yiNext).transpose() -
            (cur.kernel.row(yi) * cur.h).transpose();
        const Eigen::VectorXd vMart = traj.noise[i - 1] + mPrime;
        const Eigen::VectorXd vT1 =
            cur.h.row(yi).transpose() - next.h.row(yiNext).transpose();
        const Eigen::VectorXd vT2 =
            next.h.row(yiNext).transpose() - cross.h.row(yiNext).transpose();
        const Eigen::VectorXd vT3 =
            cross.h.row(yiNext).transpose() - cur.h.row(yiNext).transpose();

        const double b = rec.beta;
        sMart = (1.0 - b) * sMart + b * vMart;
        sT1 = (1.0 - b) * sT1 + b * vT1;
        sT2 = (1.0 - b) * sT2 + b * vT2;
        sT3 = (1.0 - b) * sT3 + b * vT3;

        if (n >= windowLo) {
            DecompositionRow row;
            row.n = n;
            const Eigen::VectorXd diff = traj.fullRes[n - 1] - z[n - 1];
            row.xMinusZ = diff.cwiseAbs().maxCoeff();
            row.martingale = sMart.cwiseAbs().maxCoeff();
            row.t1 = sT1.cwiseAbs().maxCoeff();
            row.t2 = sT2.cwiseAbs().maxCoeff();
            row.t3 = sT3.cwiseAbs().maxCoeff();
            row.residual = (diff - (sMart + sT1 + sT2 + sT3)).cwiseAbs().maxCoeff();
            report.maxResidual = std::max(report.maxResidual, row.residual);
            report.rows.push_back(row);
        }
        cur = std::move(next);
    }
    return report;
}

double chi(long m, long n, const Schedule& stepsize) {
    if (m > n) return 1.0;
    double acc = 0.0;
    for (long j = m; j <= n; ++j) {
        const double beta = eval_schedule(stepsize, j);
        if (beta >= 1.0) throw StepsizeTooLarge(j, beta);
        acc += std::log1p(-beta);
    }
    return std::exp(acc);
}

}  // namespace qlab
