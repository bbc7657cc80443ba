#include "qlab/qlearn.hpp"

#include <algorithm>
#include <cmath>

namespace qlab {

Eigen::VectorXd flatten_q(const QTable& q) {
    const int S = static_cast<int>(q.rows());
    const int A = static_cast<int>(q.cols());
    Eigen::VectorXd v(S * A);
    for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) v(s * A + a) = q(s, a);
    return v;
}

QTable unflatten_q(const Eigen::VectorXd& v, int numStates, int numActions) {
    if (v.size() != static_cast<Eigen::Index>(numStates) * numActions)
        throw DimensionMismatch("flattened Q has wrong length");
    QTable q(numStates, numActions);
    for (int s = 0; s < numStates; ++s)
        for (int a = 0; a < numActions; ++a) q(s, a) = v(s * numActions + a);
    return q;
}

QTable q_update(const QTable& q, int s, int a, double r, int sNext, double betaN,
                double gamma) {
    QTable out = q;
    const double target = r + gamma * q.row(sNext).maxCoeff();
    out(s, a) = q(s, a) + betaN * (target - q(s, a));
    return out;
}

Eigen::VectorXd f_map(const QTable& q, int s, int a, const Mdp& mdp) {
    Eigen::VectorXd out = flatten_q(q);
    const Eigen::VectorXd maxQ = q.rowwise().maxCoeff();
    const double* row = mdp.transition_row(s, a);
    double acc = 0.0;
    for (int s2 = 0; s2 < mdp.num_states(); ++s2) acc += row[s2] * maxQ(s2);
    out(mdp.pair_index(s, a)) = mdp.reward(s, a) + mdp.gamma() * acc;
    return out;
}

Eigen::VectorXd martingale_noise(const QTable& q, int s, int a, int sNext, const Mdp& mdp) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mdp.num_states() * mdp.num_actions());
    const Eigen::VectorXd maxQ = q.rowwise().maxCoeff();
    const double* row = mdp.transition_row(s, a);
    double acc = 0.0;
    for (int s2 = 0; s2 < mdp.num_states(); ++s2) acc += row[s2] * maxQ(s2);
    out(mdp.pair_index(s, a)) = mdp.gamma() * (maxQ(sNext) - acc);
    return out;
}

namespace {

Eigen::VectorXd behavior_row(const QTable& q, int s, const ControlValue& ctrl,
                             const QlearnConfig& config) {
    const Eigen::VectorXd row = q.row(s).transpose();
    return config.algo == AlgoKind::seg ? seg_policy(row, ctrl, config.tieTol)
                                        : softmax_policy(row, ctrl.lambda, config.tieTol);
}

struct LoopState {
    QTable q;
    int state = 0;
    int action = 0;
    RngPair rng;
    double cumulativeReward = 0.0;
};

CheckpointSnapshot snapshot_of(long n, const LoopState& ls, const ControlValue& ctrl) {
    CheckpointSnapshot snap;
    snap.n = n;
    snap.q = ls.q;
    snap.state = ls.state;
    snap.pendingAction = ls.action;
    snap.ctrl = ctrl;
    snap.scheduleCursor = n;
    snap.actionRngState = ls.rng.action.state();
    snap.stateRngState = ls.rng.state.state();
    snap.cumulativeReward = ls.cumulativeReward;
    return snap;
}

/// Shared online loop: iterate indices run from startN; the action for the
/// next state is drawn with the current step's (ctrl, Q) so that the run
/// coincides with the SA embedding under Assumption-style sampling.
RunResult run_core(const Mdp& mdp, const QlearnConfig& config, LoopState ls, long startN,
                   long steps, const RecordingOptions& recording) {
    RunResult result;
    result.config = config;
    SaTrajectory& traj = result.trajectory;
    traj.seed = config.seed;
    traj.steps = steps;
    traj.records.reserve(steps);

    std::vector<long> grid = recording.checkpoints;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::size_t gridPos = 0;
    while (gridPos < grid.size() && grid[gridPos] < startN) ++gridPos;

    const long endN = startN + steps;  // final iterate index
    for (long n = startN; n <= endN; ++n) {
        const ControlValue ctrl = config.control_at(n);
        while (gridPos < grid.size() && grid[gridPos] == n) {
            result.checkpoints.push_back(snapshot_of(n, ls, ctrl));
            traj.snapshots.emplace_back(n, flatten_q(ls.q));
            traj.snapshotNoiseStates.push_back(mdp.pair_index(ls.state, ls.action));
            ++gridPos;
        }
        if (n - startN + 1 <= recording.fullResSteps + 1 && recording.fullResSteps > 0)
            traj.fullRes.push_back(flatten_q(ls.q));
        if (n == endN) break;

        const double betaN = eval_schedule(config.stepsize, n);
        const int s = ls.state;
        const int a = ls.action;
        const double r = mdp.reward(s, a);
        ls.cumulativeReward += r;

        const double uState = ls.rng.state.uniform01();
        const int sNext = sample_index(
            std::span<const double>(mdp.transition_row(s, a), mdp.num_states()), uState);
        const Eigen::VectorXd nextRow = behavior_row(ls.q, sNext, ctrl, config);
        const double uAction = ls.rng.action.uniform01();
        const int aNext = sample_index(
            std::span<const double>(nextRow.data(), nextRow.size()), uAction);

        traj.records.push_back(SaStepRecord{mdp.pair_index(s, a), ctrl, betaN});
        if (recording.recordNoise)
            traj.noise.push_back(martingale_noise(ls.q, s, a, sNext, mdp));

        ls.q = q_update(ls.q, s, a, r, sNext, betaN, mdp.gamma());
        ls.state = sNext;
        ls.action = aNext;
    }
    traj.finalIterate = flatten_q(ls.q);
    traj.finalNoiseState = mdp.pair_index(ls.state, ls.action);
    return result;
}

RunResult run_online(const Mdp& mdp, const QlearnConfig& config,
                     const RecordingOptions& recording) {
    if (config.steps < 1) throw NonPositiveValue("steps must be >= 1");
    if (config.initialState < 0 || config.initialState >= mdp.num_states())
        throw DimensionMismatch("initial state out of range");
    if (config.algo == AlgoKind::seg && !config.epsilonSchedule)
        throw MissingParameter("epsilonSchedule");

    LoopState ls;
    ls.q = config.q0.size() == 0 ? QTable::Zero(mdp.num_states(), mdp.num_actions())
                                 : config.q0;
    if (ls.q.rows() != mdp.num_states() || ls.q.cols() != mdp.num_actions())
        throw DimensionMismatch("q0 shape does not match MDP");
    if (ls.q.minCoeff() < 0.0 || ls.q.maxCoeff() > mdp.vmax())
        throw NonPositiveValue("q0 outside the admissible box [0, rmax/(1-gamma)]");
    ls.state = config.initialState;
    ls.rng = RngPair::for_trajectory(config.seed);
    const Eigen::VectorXd firstRow = behavior_row(ls.q, ls.state, config.control_at(1), config);
    ls.action = sample_index(std::span<const double>(firstRow.data(), firstRow.size()),
                             ls.rng.action.uniform01());

    RunResult result = run_core(mdp, config, std::move(ls), 1, config.steps, recording);

    if (config.conditions != ConditionPolicy::skip) {
        // Conditions are defined for the canonical schedule kinds only.
        const bool canonical =
            config.stepsize.kind == ScheduleKind::power &&
            ((config.algo == AlgoKind::boltzmann &&
              config.temperature.kind == ScheduleKind::inverseLog) ||
             (config.algo == AlgoKind::seg &&
              config.temperature.kind == ScheduleKind::power && config.epsilonSchedule &&
              config.epsilonSchedule->kind == ScheduleKind::power));
        if (!canonical) {
            result.conditionWarnings.push_back(
                "conditions not evaluated: non-canonical schedule kinds");
        } else {
            AlgoExtras extras = config.conditionExtras.value_or(AlgoExtras{});
            extras.rmax = mdp.rmax();
            extras.gamma = mdp.gamma();
            extras.numActions = mdp.num_actions();
            BoundSpec spec;
            spec.a = 1.0 - config.stepsize.exponent;
            spec.beta = config.stepsize.scale;
            spec.n0 = config.stepsize.n0;
            if (config.algo == AlgoKind::boltzmann) {
                extras.b = config.temperature.scale;
                spec.kappa1 = extras.b * mdp.rmax() / (1.0 - mdp.gamma());
            } else {
                extras.dExp = config.epsilonSchedule->exponent;
                extras.eExp = config.temperature.exponent;
                spec.kappa1 = extras.dExp;
                spec.kappa2 = spec.kappa3 = extras.eExp;
            }
            std::vector<std::string> failures;
            try {
                ConditionReport rep = check_conditions(spec, config.algo, extras);
                for (const auto& c : rep.checks)
                    if (!c.satisfied) failures.push_back(c.id);
            } catch (const MissingParameter& e) {
                if (config.conditions == ConditionPolicy::strict) throw;
                result.conditionWarnings.push_back(
                    std::string("conditions not fully evaluable: ") + e.what());
            }
            if (!failures.empty()) {
                std::string joined;
                for (const auto& f : failures) joined += (joined.empty() ? "" : ",") + f;
                if (config.conditions == ConditionPolicy::strict)
                    throw ConditionViolated(joined);
                result.conditionWarnings.push_back("conditions violated: " + joined);
            }
        }
    }
    return result;
}

}  // namespace

RunResult run_boltzmann(const Mdp& mdp, const QlearnConfig& config,
                        const RecordingOptions& recording) {
    if (config.algo != AlgoKind::boltzmann)
        throw PreconditionUnmet("run_boltzmann requires algo = boltzmann");
    return run_online(mdp, config, recording);
}

RunResult run_seg(const Mdp& mdp, const QlearnConfig& config,
                  const RecordingOptions& recording) {
    if (config.algo != AlgoKind::seg) throw PreconditionUnmet("run_seg requires algo = seg");
    return run_online(mdp, config, recording);
}

RunResult resume_run(const Mdp& mdp, const QlearnConfig& config,
                     const CheckpointSnapshot& snap, long extraSteps,
                     const RecordingOptions& recording) {
    if (extraSteps < 1) throw NonPositiveValue("extraSteps must be >= 1");
    LoopState ls;
    ls.q = snap.q;
    ls.state = snap.state;
    ls.action = snap.pendingAction;
    ls.rng = RngPair{Xoshiro256pp(snap.actionRngState), Xoshiro256pp(snap.stateRngState)};
    ls.cumulativeReward = snap.cumulativeReward;
    return run_core(mdp, config, std::move(ls), snap.n, extraSteps, recording);
}

std::vector<std::pair<long, double>> error_series(const RunResult& run, const QTable& qStar) {
    const Eigen::VectorXd ref = flatten_q(qStar);
    std::vector<std::pair<long, double>> series;
    series.reserve(run.trajectory.snapshots.size());
    for (const auto& [n, x] : run.trajectory.snapshots) {
        if (x.size() != ref.size()) throw DimensionMismatch("snapshot/reference size mismatch");
        series.emplace_back(n, (x - ref).cwiseAbs().maxCoeff());
    }
    return series;
}

QlearnSaSystem::QlearnSaSystem(const Mdp& mdp, QlearnConfig config)
    : mdp_(mdp), config_(std::move(config)), dim_(mdp.num_states() * mdp.num_actions()) {
    if (config_.algo == AlgoKind::seg && !config_.epsilonSchedule)
        throw MissingParameter("epsilonSchedule");
}

Eigen::VectorXd QlearnSaSystem::policy_row(const QTable& q, int s,
                                           const ControlValue& ctrl) const {
    const Eigen::VectorXd row = q.row(s).transpose();
    return config_.algo == AlgoKind::seg ? seg_policy(row, ctrl, config_.tieTol)
                                         : softmax_policy(row, ctrl.lambda, config_.tieTol);
}

Kernel QlearnSaSystem::kernel_at(const ControlValue& ctrl, const Eigen::VectorXd& x) const {
    const QTable q = unflatten_q(x, mdp_.num_states(), mdp_.num_actions());
    const Eigen::MatrixXd pi = policy_matrix(q, ctrl, config_.algo == AlgoKind::seg,
                                             config_.tieTol);
    return induced_kernel(mdp_, pi);
}

Eigen::VectorXd QlearnSaSystem::update_map(const Eigen::VectorXd& x, int y) const {
    const QTable q = unflatten_q(x, mdp_.num_states(), mdp_.num_actions());
    return f_map(q, y / mdp_.num_actions(), y % mdp_.num_actions(), mdp_);
}

Eigen::VectorXd QlearnSaSystem::martingale_sample(const Eigen::VectorXd& x, int y,
                                                  int yNext) const {
    const QTable q = unflatten_q(x, mdp_.num_states(), mdp_.num_actions());
    return martingale_noise(q, y / mdp_.num_actions(), y % mdp_.num_actions(),
                            yNext / mdp_.num_actions(), mdp_);
}

Eigen::VectorXd QlearnSaSystem::initial_iterate() const {
    return config_.q0.size() == 0
               ? Eigen::VectorXd::Zero(dim_)
               : flatten_q(config_.q0);
}

int QlearnSaSystem::initial_noise_state(RngPair& rng) const {
    const QTable q = unflatten_q(initial_iterate(), mdp_.num_states(), mdp_.num_actions());
    const Eigen::VectorXd row = policy_row(q, config_.initialState, config_.control_at(1));
    const int a = sample_index(std::span<const double>(row.data(), row.size()),
                               rng.action.uniform01());
    return mdp_.pair_index(config_.initialState, a);
}

int QlearnSaSystem::sample_next(const ControlValue& ctrl, const Eigen::VectorXd& x, int y,
                                RngPair& rng) const {
    const int s = y / mdp_.num_actions();
    const int a = y % mdp_.num_actions();
    const double uState = rng.state.uniform01();
    const int sNext = sample_index(
        std::span<const double>(mdp_.transition_row(s, a), mdp_.num_states()), uState);
    const QTable q = unflatten_q(x, mdp_.num_states(), mdp_.num_actions());
    const Eigen::VectorXd row = policy_row(q, sNext, ctrl);
    const double uAction = rng.action.uniform01();
    const int aNext =
        sample_index(std::span<const double>(row.data(), row.size()), uAction);
    return mdp_.pair_index(sNext, aNext);
}

}  // namespace qlab
