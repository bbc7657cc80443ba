#include "qlab/mdp.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace qlab {

Mdp Mdp::validated(int numStates, int numActions, std::vector<double> transition,
                   std::vector<double> reward, double gamma, double rmax, double rowTol) {
    if (numStates <= 0 || numActions <= 0)
        throw DimensionMismatch("numStates and numActions must be positive");
    const std::size_t nsa = static_cast<std::size_t>(numStates) * numActions;
    if (transition.size() != nsa * numStates)
        throw DimensionMismatch("transition tensor has wrong size");
    if (reward.size() != nsa) throw DimensionMismatch("reward matrix has wrong size");
    if (!(gamma > 0.0 && gamma < 1.0)) throw GammaOutOfRange(gamma);
    if (!(rmax > 0.0)) throw RewardOutOfRange(0, 0, rmax);

    for (int s = 0; s < numStates; ++s) {
        for (int a = 0; a < numActions; ++a) {
            double sum = 0.0;
            for (int s2 = 0; s2 < numStates; ++s2) {
                const double p = transition[(static_cast<std::size_t>(s) * numActions + a) *
                                                numStates + s2];
                if (p < 0.0) throw RowSumViolation(s, a, p);
                sum += p;
            }
            if (std::abs(sum - 1.0) > rowTol) throw RowSumViolation(s, a, sum);
            const double r = reward[static_cast<std::size_t>(s) * numActions + a];
            if (r < 0.0 || r > rmax) throw RewardOutOfRange(s, a, r);
        }
    }

    Mdp m;
    m.numStates_ = numStates;
    m.numActions_ = numActions;
    m.transition_ = std::move(transition);
    m.reward_ = std::move(reward);
    m.gamma_ = gamma;
    m.rmax_ = rmax;
    return m;
}

std::string Mdp::to_json_string() const {
    nlohmann::json j;
    j["num_states"] = numStates_;
    j["num_actions"] = numActions_;
    j["gamma"] = gamma_;
    j["rmax"] = rmax_;
    auto rewards = nlohmann::json::array();
    auto transitions = nlohmann::json::array();
    for (int s = 0; s < numStates_; ++s) {
        auto rRow = nlohmann::json::array();
        auto tRow = nlohmann::json::array();
        for (int a = 0; a < numActions_; ++a) {
            rRow.push_back(reward(s, a));
            auto dist = nlohmann::json::array();
            for (int s2 = 0; s2 < numStates_; ++s2) dist.push_back(transition(s, a, s2));
            tRow.push_back(dist);
        }
        rewards.push_back(rRow);
        transitions.push_back(tRow);
    }
    j["rewards"] = rewards;
    j["transitions"] = transitions;
    return j.dump(2);
}

Mdp Mdp::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
    try {
        const int ns = j.at("num_states").get<int>();
        const int na = j.at("num_actions").get<int>();
        const double gamma = j.at("gamma").get<double>();
        const double rmax = j.at("rmax").get<double>();
        const auto& rewards = j.at("rewards");
        const auto& transitions = j.at("transitions");
        if (static_cast<int>(rewards.size()) != ns || static_cast<int>(transitions.size()) != ns)
            throw DimensionMismatch("rewards/transitions outer size != num_states");
        std::vector<double> r, t;
        r.reserve(static_cast<std::size_t>(ns) * na);
        t.reserve(static_cast<std::size_t>(ns) * na * ns);
        for (int s = 0; s < ns; ++s) {
            if (static_cast<int>(rewards[s].size()) != na ||
                static_cast<int>(transitions[s].size()) != na)
                throw DimensionMismatch("rewards/transitions inner size != num_actions");
            for (int a = 0; a < na; ++a) {
                r.push_back(rewards[s][a].get<double>());
                if (static_cast<int>(transitions[s][a].size()) != ns)
                    throw DimensionMismatch("transition row size != num_states");
                for (int s2 = 0; s2 < ns; ++s2)
                    t.push_back(transitions[s][a][s2].get<double>());
            }
        }
        return validated(ns, na, std::move(t), std::move(r), gamma, rmax);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
}

Mdp Mdp::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_string(buf.str());
}

void Mdp::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw FileNotFound(path);
    out << to_json_string() << "\n";
}

QTable bellman_update(const QTable& q, const Mdp& mdp) {
    if (q.rows() != mdp.num_states() || q.cols() != mdp.num_actions())
        throw DimensionMismatch("QTable shape does not match MDP");
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    Eigen::VectorXd maxQ = q.rowwise().maxCoeff();
    QTable out(S, A);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            const double* row = mdp.transition_row(s, a);
            double acc = 0.0;
            for (int s2 = 0; s2 < S; ++s2) acc += row[s2] * maxQ(s2);
            out(s, a) = mdp.reward(s, a) + mdp.gamma() * acc;
        }
    }
    return out;
}

SolveResult solve_optimal(const Mdp& mdp, double tol, double tieTol, long maxIters) {
    if (!(tol > 0.0)) throw NonPositiveValue("solve_optimal tol must be > 0");
    const double gamma = mdp.gamma();
    const double stop = tol * (1.0 - gamma) / gamma;
    QTable q = QTable::Zero(mdp.num_states(), mdp.num_actions());
    QTable next = bellman_update(q, mdp);
    long iters = 0;
    while ((next - q).cwiseAbs().maxCoeff() > stop) {
        q = next;
        next = bellman_update(q, mdp);
        if (++iters > maxIters) throw NonConvergence(maxIters);
    }

    SolveResult res;
    res.qStar = next;
    res.vStar = next.rowwise().maxCoeff();
    res.residual = (bellman_update(next, mdp) - next).cwiseAbs().maxCoeff();
    res.optimalActions.resize(mdp.num_states());
    double gap = std::numeric_limits<double>::infinity();
    for (int s = 0; s < mdp.num_states(); ++s) {
        for (int a = 0; a < mdp.num_actions(); ++a) {
            if (res.qStar(s, a) >= res.vStar(s) - tieTol)
                res.optimalActions[s].push_back(a);
            else
                gap = std::min(gap, res.vStar(s) - res.qStar(s, a));
        }
    }
    res.gap = gap;
    return res;
}

Eigen::VectorXd policy_value(const Mdp& mdp, const Eigen::MatrixXd& policy, double rowTol) {
    const int S = mdp.num_states();
    const int A = mdp.num_actions();
    if (policy.rows() != S || policy.cols() != A)
        throw DimensionMismatch("policy shape does not match MDP");
    for (int s = 0; s < S; ++s) {
        double sum = 0.0;
        for (int a = 0; a < A; ++a) {
            if (policy(s, a) < 0.0) throw PolicyRowNotStochastic(s);
            sum += policy(s, a);
        }
        if (std::abs(sum - 1.0) > rowTol) throw PolicyRowNotStochastic(s);
    }

    Eigen::MatrixXd pPi = Eigen::MatrixXd::Zero(S, S);
    Eigen::VectorXd rPi = Eigen::VectorXd::Zero(S);
    for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
            const double w = policy(s, a);
            if (w == 0.0) continue;
            rPi(s) += w * mdp.reward(s, a);
            const double* row = mdp.transition_row(s, a);
            for (int s2 = 0; s2 < S; ++s2) pPi(s, s2) += w * row[s2];
        }
    }
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S) - mdp.gamma() * pPi;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd v = lu.solve(rPi);
    if (!v.allFinite()) throw SingularSystem("policy evaluation solve produced non-finite values");
    return v;
}

}  // namespace qlab
