#include <cmath>

#include "doctest.h"
#include "qlab/benchmarks.hpp"
#include "qlab/qlearn.hpp"
#include "qlab/sa.hpp"
#include "testutil.hpp"

using namespace qlab;

namespace {

QlearnConfig boltzmann_config(double beta, double a, long n0, double b, long steps,
                              std::uint64_t seed) {
    QlearnConfig cfg;
    cfg.algo = AlgoKind::boltzmann;
    cfg.stepsize = Schedule::stepsize(beta, a, n0);
    cfg.temperature = Schedule::inverse_log(b, n0);
    cfg.steps = steps;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("q_update") {
    SUBCASE("single entry closed form") {
        const Mdp m = Mdp::validated(1, 1, {1.0}, {1.0}, 0.5, 1.0);
        QTable q = QTable::Zero(1, 1);
        const QTable next = q_update(q, 0, 0, 1.0, 0, 1.0, m.gamma());
        CHECK(next(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("zero stepsize is the identity") {
        Xoshiro256pp rng(41);
        const Mdp m = testutil::random_mdp(3, 2, 0.7, 1.0, rng);
        const QTable q = testutil::random_q(m, rng);
        const QTable next = q_update(q, 1, 1, m.reward(1, 1), 2, 0.0, m.gamma());
        CHECK((next - q).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("only the visited entry changes, matching a hand recomputation") {
        Xoshiro256pp rng(42);
        for (int rep = 0; rep < 50; ++rep) {
            const Mdp m = testutil::random_mdp(4, 3, 0.8, 1.0, rng);
            const QTable q = testutil::random_q(m, rng);
            const int s = static_cast<int>(rng.next() % 4);
            const int a = static_cast<int>(rng.next() % 3);
            const int sNext = static_cast<int>(rng.next() % 4);
            const double beta = rng.uniform01();
            const QTable next = q_update(q, s, a, m.reward(s, a), sNext, beta, m.gamma());
            double best = q(sNext, 0);
            for (int a2 = 1; a2 < 3; ++a2) best = std::max(best, q(sNext, a2));
            const double byHand =
                q(s, a) + beta * (m.reward(s, a) + m.gamma() * best - q(s, a));
            CHECK(next(s, a) == doctest::Approx(byHand).epsilon(1e-15));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 3; ++j)
                    if (i != s || j != a) CHECK(next(i, j) == q(i, j));
        }
    }
}

TEST_CASE("f_map") {
    Xoshiro256pp rng(43);
    const Mdp m = testutil::random_mdp(3, 2, 0.6, 1.0, rng);
    SUBCASE("identity away from the visited pair") {
        const QTable q = testutil::random_q(m, rng);
        const Eigen::VectorXd f = f_map(q, 1, 0, m);
        for (int s = 0; s < 3; ++s)
            for (int a = 0; a < 2; ++a)
                if (s != 1 || a != 0) CHECK(f(m.pair_index(s, a)) == q(s, a));
    }
    SUBCASE("Bellman fixed point at the visited pair") {
        const SolveResult solve = solve_optimal(m);
        const Eigen::VectorXd f = f_map(solve.qStar, 2, 1, m);
        CHECK(f(m.pair_index(2, 1)) ==
              doctest::Approx(solve.qStar(2, 1)).epsilon(1e-9));
    }
    SUBCASE("stationary average has the mu-mixed closed form") {
        QlearnConfig cfg = boltzmann_config(2.0, 0.0, 10, 0.5, 10, 1);
        cfg.temperature = Schedule::constant(0.9);
        const QlearnSaSystem system(m, cfg);
        const ControlValue ctrl{0.0, 0.9};
        const QTable q = testutil::random_q(m, rng);
        const Eigen::VectorXd x = flatten_q(q);
        const Kernel k = system.kernel_at(ctrl, x);
        const auto mu = stationary_distribution(k);
        const Eigen::VectorXd fbar = stationary_average_f(system, ctrl, x, x);
        const QTable bell = bellman_update(q, m);
        for (int s = 0; s < 3; ++s)
            for (int a = 0; a < 2; ++a) {
                const int i = m.pair_index(s, a);
                const double expected =
                    mu.probs(i) * bell(s, a) + (1.0 - mu.probs(i)) * q(s, a);
                CHECK(fbar(i) == doctest::Approx(expected).epsilon(1e-10));
            }
    }
}

TEST_CASE("martingale_noise") {
    Xoshiro256pp rng(44);
    SUBCASE("deterministic transition row gives zero noise") {
        const Mdp m = Mdp::validated(2, 1, {0.0, 1.0, 1.0, 0.0}, {0.5, 0.5}, 0.5, 1.0);
        const QTable q = testutil::random_q(m, rng);
        CHECK(martingale_noise(q, 0, 0, 1, m).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("conditional mean is zero by direct summation") {
        for (int rep = 0; rep < 20; ++rep) {
            const Mdp m = testutil::random_mdp(4, 2, 0.7, 1.0, rng);
            const QTable q = testutil::random_q(m, rng);
            Eigen::VectorXd mean = Eigen::VectorXd::Zero(8);
            for (int s2 = 0; s2 < 4; ++s2)
                mean += m.transition(1, 0, s2) * martingale_noise(q, 1, 0, s2, m);
            CHECK(mean.cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
    SUBCASE("bounded by gamma rmax / (1 - gamma)") {
        for (int rep = 0; rep < 1000; ++rep) {
            const Mdp m = testutil::random_mdp(3, 2, 0.6, 1.0, rng);
            const QTable q = testutil::random_q(m, rng);
            const int sNext = static_cast<int>(rng.next() % 3);
            const double bound = m.gamma() * m.rmax() / (1.0 - m.gamma());
            CHECK(martingale_noise(q, 0, 1, sNext, m).cwiseAbs().maxCoeff() <=
                  bound + 1e-12);
        }
    }
}

TEST_CASE("run_boltzmann basics") {
    const Mdp m = make_bench2x2();
    SUBCASE("huge temperature behaves uniformly") {
        QlearnConfig cfg = boltzmann_config(2.0, 0.0, 10, 1e-9, 100000, 3);
        const RunResult run = run_boltzmann(m, cfg);
        // action frequencies across visited steps
        long count0 = 0;
        for (const auto& rec : run.trajectory.records)
            if (rec.y % m.num_actions() == 0) ++count0;
        const double freq = static_cast<double>(count0) / cfg.steps;
        CHECK(std::abs(freq - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(cfg.steps)));
    }
    SUBCASE("same seed reproduces the run exactly") {
        QlearnConfig cfg = boltzmann_config(2.0, 0.0, 10, 0.5, 2000, 17);
        const RunResult a = run_boltzmann(m, cfg);
        const RunResult b = run_boltzmann(m, cfg);
        CHECK(a.trajectory.finalIterate == b.trajectory.finalIterate);
        for (std::size_t i = 0; i < a.trajectory.records.size(); ++i)
            CHECK(a.trajectory.records[i].y == b.trajectory.records[i].y);
    }
    SUBCASE("errors shrink from n = 1e3 to n = 1e5 for most seeds") {
        const SolveResult solve = solve_optimal(m);
        int improved = 0;
        const int seeds = 30;
        for (int k = 0; k < seeds; ++k) {
            QlearnConfig cfg = boltzmann_config(8.0, 0.0, 10, 0.05, 100000,
                                                RngPair::derive(99, k));
            RecordingOptions rec;
            rec.checkpoints = {1000, 100001};
            const RunResult run = run_boltzmann(m, cfg, rec);
            const auto errs = error_series(run, solve.qStar);
            REQUIRE(errs.size() == 2);
            if (errs[1].second < errs[0].second) ++improved;
        }
        CHECK(improved >= 28);
    }
}

TEST_CASE("run_seg basics") {
    const Mdp m = make_bench2x2();
    SUBCASE("pure uniform behavior matches the exact stationary occupancy") {
        QlearnConfig cfg;
        cfg.algo = AlgoKind::seg;
        cfg.stepsize = Schedule::stepsize(2.0, 0.0, 10);
        cfg.temperature = Schedule::power(1.0, 0.0, 10);
        cfg.epsilonSchedule = Schedule::power(1.0, 0.0, 10);  // epsilon = 1 always
        cfg.steps = 1000000;
        cfg.seed = 5;
        const RunResult run = run_seg(m, cfg);
        Eigen::VectorXd counts = Eigen::VectorXd::Zero(4);
        for (const auto& rec : run.trajectory.records) counts(rec.y) += 1.0;
        counts /= static_cast<double>(cfg.steps);
        const Eigen::MatrixXd uniform = Eigen::MatrixXd::Constant(2, 2, 0.5);
        const auto mu = stationary_distribution(induced_kernel(m, uniform));
        CHECK(0.5 * (counts - mu.probs).cwiseAbs().sum() <= 1e-2);
    }
    SUBCASE("epsilon scale zero reduces to Boltzmann seed-for-seed") {
        QlearnConfig segCfg;
        segCfg.algo = AlgoKind::seg;
        segCfg.stepsize = Schedule::stepsize(2.0, 0.0, 10);
        segCfg.temperature = Schedule::inverse_log(0.4, 10);
        segCfg.epsilonSchedule = Schedule::constant(0.0);
        segCfg.steps = 3000;
        segCfg.seed = 21;
        const RunResult segRun = run_seg(m, segCfg);

        QlearnConfig bCfg = segCfg;
        bCfg.algo = AlgoKind::boltzmann;
        bCfg.epsilonSchedule.reset();
        const RunResult bRun = run_boltzmann(m, bCfg);
        CHECK(segRun.trajectory.finalIterate == bRun.trajectory.finalIterate);
        for (std::size_t i = 0; i < segRun.trajectory.records.size(); ++i)
            CHECK(segRun.trajectory.records[i].y == bRun.trajectory.records[i].y);
    }
}

TEST_CASE("SA-embedding equivalence over 200 steps") {
    const Mdp m = make_bench2x2();
    for (auto algo : {AlgoKind::boltzmann, AlgoKind::seg}) {
        QlearnConfig cfg;
        cfg.algo = algo;
        cfg.stepsize = Schedule::stepsize(2.0, 0.0, 10);
        if (algo == AlgoKind::boltzmann) {
            cfg.temperature = Schedule::inverse_log(0.5, 10);
        } else {
            cfg.temperature = Schedule::power(1.0, 0.05, 10);
            cfg.epsilonSchedule = Schedule::power(1.0, 0.1, 10);
        }
        cfg.steps = 200;
        cfg.seed = 31;
        RecordingOptions rec;
        rec.fullResSteps = 200;
        const RunResult direct = algo == AlgoKind::boltzmann ? run_boltzmann(m, cfg, rec)
                                                             : run_seg(m, cfg, rec);
        const QlearnSaSystem system(m, cfg);
        const SaTrajectory embedded = run_sa(system, 200, cfg.seed, rec);

        REQUIRE(direct.trajectory.fullRes.size() == embedded.fullRes.size());
        for (std::size_t i = 0; i < embedded.fullRes.size(); ++i)
            CHECK((direct.trajectory.fullRes[i] - embedded.fullRes[i])
                      .cwiseAbs()
                      .maxCoeff() <= 1e-14);
        for (std::size_t i = 0; i < embedded.records.size(); ++i)
            CHECK(direct.trajectory.records[i].y == embedded.records[i].y);
        CHECK(direct.trajectory.finalNoiseState == embedded.finalNoiseState);
    }
}

TEST_CASE("recorded steps reconstruct the SA identity exactly") {
    const Mdp m = make_bench2x2();
    QlearnConfig cfg = boltzmann_config(2.0, 0.0, 10, 0.5, 150, 8);
    const QlearnSaSystem system(m, cfg);
    RecordingOptions rec;
    rec.fullResSteps = 150;
    rec.recordNoise = true;
    const SaTrajectory traj = run_sa(system, 150, cfg.seed, rec);
    for (long n = 1; n <= 150; ++n) {
        const auto& r = traj.records[n - 1];
        const Eigen::VectorXd& x = traj.fullRes[n - 1];
        const Eigen::VectorXd expected =
            sa_step(x, r.beta, system.update_map(x, r.y), traj.noise[n - 1]);
        CHECK((traj.fullRes[n] - expected).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("iterates stay inside the admissible box along runs") {
    const Mdp m = make_bench4x2();
    QlearnConfig cfg;
    cfg.algo = AlgoKind::seg;
    cfg.stepsize = Schedule::stepsize(10.0, 0.0, 15);
    cfg.temperature = Schedule::power(1.0, 0.0, 15);
    cfg.epsilonSchedule = Schedule::power(1.0, 0.0, 15);
    cfg.steps = 20000;
    cfg.seed = 77;
    RecordingOptions rec;
    rec.checkpoints = {1, 100, 2000, 20001};
    const RunResult run = run_seg(m, cfg, rec);
    for (const auto& [n, x] : run.trajectory.snapshots) {
        CHECK(x.minCoeff() >= 0.0);
        CHECK(x.maxCoeff() <= m.vmax() + 1e-12);
    }
    SUBCASE("exactly one entry changes per step") {
        RecordingOptions full;
        full.fullResSteps = 500;
        QlearnConfig c2 = cfg;
        c2.steps = 500;
        const RunResult r2 = run_seg(m, c2, full);
        for (long n = 1; n <= 500; ++n) {
            int changed = 0;
            for (int i = 0; i < 8; ++i)
                if (r2.trajectory.fullRes[n](i) != r2.trajectory.fullRes[n - 1](i))
                    ++changed;
            CHECK(changed <= 1);
            const int y = r2.trajectory.records[n - 1].y;
            for (int i = 0; i < 8; ++i)
                if (i != y)
                    CHECK(r2.trajectory.fullRes[n](i) == r2.trajectory.fullRes[n - 1](i));
        }
    }
}

TEST_CASE("error_series") {
    const Mdp m = make_bench2x2();
    const SolveResult solve = solve_optimal(m);
    SUBCASE("frozen optimal start stays at zero error") {
        QlearnConfig cfg = boltzmann_config(0.0, 0.0, 10, 0.5, 100, 2);
        cfg.stepsize = Schedule::constant(0.0);
        cfg.q0 = solve.qStar;
        RecordingOptions rec;
        rec.checkpoints = {1, 50, 101};
        const RunResult run = run_boltzmann(m, cfg, rec);
        for (const auto& [n, err] : error_series(run, solve.qStar)) CHECK(err <= 1e-12);
    }
    SUBCASE("first checkpoint reports the initial distance") {
        QlearnConfig cfg = boltzmann_config(2.0, 0.0, 10, 0.5, 50, 2);
        RecordingOptions rec;
        rec.checkpoints = {1};
        const RunResult run = run_boltzmann(m, cfg, rec);
        const auto errs = error_series(run, solve.qStar);
        CHECK(errs[0].second ==
              doctest::Approx(solve.qStar.cwiseAbs().maxCoeff()).epsilon(1e-12));
    }
    SUBCASE("spot value equals an independent recomputation") {
        QlearnConfig cfg = boltzmann_config(2.0, 0.0, 10, 0.5, 200, 2);
        RecordingOptions rec;
        rec.checkpoints = {150};
        const RunResult run = run_boltzmann(m, cfg, rec);
        const auto errs = error_series(run, solve.qStar);
        const QTable snap = unflatten_q(run.trajectory.snapshots[0].second, 2, 2);
        double maxAbs = 0.0;
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a)
                maxAbs = std::max(maxAbs, std::abs(snap(s, a) - solve.qStar(s, a)));
        CHECK(errs[0].second == doctest::Approx(maxAbs).epsilon(1e-15));
    }
}

TEST_CASE("strict condition enforcement") {
    const Mdp m = make_bench2x2();
    // kappa1 = b rmax/(1-gamma) = 1.6 violates every Boltzmann condition set.
    QlearnConfig cfg = boltzmann_config(2.0, 0.0, 10, 0.8, 50, 2);
    cfg.conditions = ConditionPolicy::strict;
    AlgoExtras extras;
    extras.muMinS = 0.4;
    cfg.conditionExtras = extras;
    CHECK_THROWS_AS(run_boltzmann(m, cfg), ConditionViolated);
    cfg.conditions = ConditionPolicy::warn;
    const RunResult run = run_boltzmann(m, cfg);
    CHECK_FALSE(run.conditionWarnings.empty());
}
