#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "qlab/markov.hpp"
#include "qlab/policies.hpp"
#include "qlab/rng.hpp"
#include "qlab/schedule.hpp"

namespace qlab {

/// Contractive Markovian stochastic-approximation system
///   x_{n+1} = x_n + beta_n (F(x_n, y_n) - x_n + M_{n+1}),
/// where y_{n+1} is drawn from a kernel controlled by (ctrl_n, x_n).
class SaSystem {
  public:
    virtual ~SaSystem() = default;

    virtual int noise_state_count() const = 0;
    virtual int iterate_dimension() const = 0;

    /// Transition kernel of the noise process at (ctrl, x).
    virtual Kernel kernel_at(const ControlValue& ctrl, const Eigen::VectorXd& x) const = 0;

    /// Update direction F(x, y).
    virtual Eigen::VectorXd update_map(const Eigen::VectorXd& x, int y) const = 0;

    /// Martingale-difference term M_{n+1} given the realized transition
    /// y -> yNext; conditionally mean-zero over yNext by construction.
    virtual Eigen::VectorXd martingale_sample(const Eigen::VectorXd& x, int y,
                                              int yNext) const = 0;

    virtual ControlValue control_at(long n) const = 0;
    virtual Schedule stepsize() const = 0;

    /// Axis-aligned box [lo, hi] containing the iterates.
    virtual std::pair<double, double> iterate_box() const = 0;
    virtual Eigen::VectorXd initial_iterate() const = 0;

    /// Initial noise state; may consume randomness (e.g. drawing the first
    /// action) so that direct and embedded runs stay stream-aligned.
    virtual int initial_noise_state(RngPair& rng) const = 0;

    /// Draw y_{n+1} from the kernel row.  The default walks the full row with
    /// one state-stream uniform; systems with product-structured kernels
    /// override it to match the direct algorithm's draw order.
    virtual int sample_next(const ControlValue& ctrl, const Eigen::VectorXd& x, int y,
                            RngPair& rng) const;
};

struct SaStepRecord {
    int y = 0;               // noise state y_n before the step
    ControlValue ctrl;       // ctrl_n
    double beta = 0.0;       // beta_n
};

struct RecordingOptions {
    std::vector<long> checkpoints;  // iterate indices to snapshot (1 = initial)
    long fullResSteps = 0;          // record x_1 .. x_{fullResSteps+1} densely
    bool recordNoise = false;       // keep every M_{n+1}
};

/// Recorded run of an SaSystem.  Step n covers the transition from iterate
/// index n to n+1; indices run from 1 (initial) to steps+1 (final).
struct SaTrajectory {
    std::uint64_t seed = 0;
    long steps = 0;
    std::vector<SaStepRecord> records;              // records[n-1] describes step n
    std::vector<Eigen::VectorXd> noise;             // M_{n+1} per step when recorded
    std::vector<std::pair<long, Eigen::VectorXd>> snapshots;  // (index, x_index)
    std::vector<int> snapshotNoiseStates;           // y at each snapshot index
    std::vector<Eigen::VectorXd> fullRes;           // x_1 .. x_{fullResSteps+1}
    Eigen::VectorXd finalIterate;
    int finalNoiseState = 0;
};

/// Combines one SA step; shared so replays reconstruct identical bits.
inline Eigen::VectorXd sa_step(const Eigen::VectorXd& x, double beta,
                               const Eigen::VectorXd& f, const Eigen::VectorXd& m) {
    return x + beta * (f - x + m);
}

SaTrajectory run_sa(const SaSystem& system, long steps, std::uint64_t seed,
                    const RecordingOptions& recording);

/// Averaged process z: z_{n+1} = z_n + beta_n (Fbar^{(ctrl_n, x_n)}(x_n) - z_n)
/// with z_1 = x_1, using exact stationary distributions at every step.
/// Requires the trajectory to carry full-resolution iterates up to `upTo`.
/// Returns z_1 .. z_{upTo+1}.
std::vector<Eigen::VectorXd> averaged_process(const SaTrajectory& traj,
                                              const SaSystem& system, long upTo);

/// Stationary average of F at (ctrl, w) applied to x.
Eigen::VectorXd stationary_average_f(const SaSystem& system, const ControlValue& ctrl,
                                     const Eigen::VectorXd& w, const Eigen::VectorXd& x);

struct DecompositionRow {
    long n = 0;
    double xMinusZ = 0.0;      // || x_n - z_n ||_inf
    double martingale = 0.0;   // || sum beta_i chi(i+1,n) (M_{i+1} + M'_{i+1}) ||_inf
    double t1 = 0.0, t2 = 0.0, t3 = 0.0;
    double residual = 0.0;     // || (x_n - z_n) - (martingale + T1 + T2 + T3) ||_inf
};

struct DecompositionReport {
    std::vector<DecompositionRow> rows;
    double maxResidual = 0.0;
};

/// Per-step Poisson-equation decomposition of x_n - z_n into the martingale
/// part and the three kernel-drift sums, evaluated for n in [windowLo,
/// windowHi].  Needs full-resolution iterates and recorded noise.
DecompositionReport noise_decomposition(const SaTrajectory& traj, const SaSystem& system,
                                        int iStar, long windowLo, long windowHi,
                                        long maxWindow = 5000);

/// chi(m, n) = prod_{j=m}^{n} (1 - beta_j), computed in log space; 1 when the
/// range is empty.  Throws StepsizeTooLarge if some beta_j >= 1.
double chi(long m, long n, const Schedule& stepsize);

}  // namespace qlab
