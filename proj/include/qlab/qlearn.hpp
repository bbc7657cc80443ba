#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qlab/bounds.hpp"
#include "qlab/mdp.hpp"
#include "qlab/policies.hpp"
#include "qlab/sa.hpp"
#include "qlab/schedule.hpp"

namespace qlab {

enum class ConditionPolicy { skip, warn, strict };

struct QlearnConfig {
    AlgoKind algo = AlgoKind::boltzmann;
    Schedule stepsize;                        // beta_n
    Schedule temperature;                     // lambda_n
    std::optional<Schedule> epsilonSchedule;  // epsilon_n (seg only)
    long steps = 1000;
    std::uint64_t seed = 0;
    QTable q0;                                // defaults to zeros when empty
    int initialState = 0;
    ConditionPolicy conditions = ConditionPolicy::skip;
    /// Instance constants (muMinS, gap, ...) for the condition check; filled
    /// by the harness, optional for ad-hoc runs.
    std::optional<AlgoExtras> conditionExtras;
    double tieTol = 1e-9;

    ControlValue control_at(long n) const {
        ControlValue c;
        c.lambda = eval_schedule(temperature, n);
        if (algo == AlgoKind::seg && epsilonSchedule) c.epsilon = eval_schedule(*epsilonSchedule, n);
        return c;
    }
};

/// Everything needed to resume a run exactly at iterate index n: the table,
/// the current state, the action already drawn for it, and both random
/// substream states.
struct CheckpointSnapshot {
    long n = 0;
    QTable q;
    int state = 0;
    int pendingAction = 0;
    ControlValue ctrl;           // control value of the upcoming step
    long scheduleCursor = 0;     // equals n; schedules are stateless in it
    std::array<std::uint64_t, 4> actionRngState{};
    std::array<std::uint64_t, 4> stateRngState{};
    double cumulativeReward = 0.0;
};

struct RunResult {
    SaTrajectory trajectory;                   // iterates stored flattened
    std::vector<CheckpointSnapshot> checkpoints;
    QlearnConfig config;
    std::vector<std::string> conditionWarnings;
};

/// Flatten/restore with index s * numActions + a (shared with the noise space).
Eigen::VectorXd flatten_q(const QTable& q);
QTable unflatten_q(const Eigen::VectorXd& v, int numStates, int numActions);

/// Asynchronous Q update; only entry (s, a) changes.
QTable q_update(const QTable& q, int s, int a, double r, int sNext, double betaN,
                double gamma);

/// Update direction of the SA embedding: the Bellman-sample direction at
/// (s, a) and the identity elsewhere.
Eigen::VectorXd f_map(const QTable& q, int s, int a, const Mdp& mdp);

/// Martingale part of the sampled Bellman update; nonzero only at (s, a) and
/// conditionally mean-zero over sNext ~ p(s, a, .).
Eigen::VectorXd martingale_noise(const QTable& q, int s, int a, int sNext, const Mdp& mdp);

RunResult run_boltzmann(const Mdp& mdp, const QlearnConfig& config,
                        const RecordingOptions& recording = {});
RunResult run_seg(const Mdp& mdp, const QlearnConfig& config,
                  const RecordingOptions& recording = {});

/// Continues a run from a snapshot for `extraSteps` steps; bit-identical to
/// the never-paused run over the same index range.
RunResult resume_run(const Mdp& mdp, const QlearnConfig& config,
                     const CheckpointSnapshot& snap, long extraSteps,
                     const RecordingOptions& recording = {});

/// Sup-norm error against a reference table at every snapshot index.
std::vector<std::pair<long, double>> error_series(const RunResult& run, const QTable& qStar);

/// The Markovian SA embedding of online Q-learning; running run_sa with it
/// and the same seed reproduces the direct loops.
class QlearnSaSystem final : public SaSystem {
  public:
    QlearnSaSystem(const Mdp& mdp, QlearnConfig config);

    int noise_state_count() const override { return dim_; }
    int iterate_dimension() const override { return dim_; }
    Kernel kernel_at(const ControlValue& ctrl, const Eigen::VectorXd& x) const override;
    Eigen::VectorXd update_map(const Eigen::VectorXd& x, int y) const override;
    Eigen::VectorXd martingale_sample(const Eigen::VectorXd& x, int y,
                                      int yNext) const override;
    ControlValue control_at(long n) const override { return config_.control_at(n); }
    Schedule stepsize() const override { return config_.stepsize; }
    std::pair<double, double> iterate_box() const override { return {0.0, mdp_.vmax()}; }
    Eigen::VectorXd initial_iterate() const override;
    int initial_noise_state(RngPair& rng) const override;
    int sample_next(const ControlValue& ctrl, const Eigen::VectorXd& x, int y,
                    RngPair& rng) const override;

  private:
    Eigen::VectorXd policy_row(const QTable& q, int s, const ControlValue& ctrl) const;
    const Mdp& mdp_;
    QlearnConfig config_;
    int dim_;
};

}  // namespace qlab
