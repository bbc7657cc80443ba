#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

/// Base class for all library errors. `code()` is a stable identifier used
/// by the CLI to map errors onto exit codes and machine-readable records.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg)
        : Error("DimensionMismatch", msg) {}
};

struct RowSumViolation : Error {
    RowSumViolation(int s, int a, double sum)
        : Error("RowSumViolation",
                "transition row (s=" + std::to_string(s) + ", a=" + std::to_string(a) +
                    ") sums to " + std::to_string(sum)),
          state(s), action(a), rowSum(sum) {}
    int state, action;
    double rowSum;
};

struct RewardOutOfRange : Error {
    RewardOutOfRange(int s, int a, double r)
        : Error("RewardOutOfRange",
                "reward(" + std::to_string(s) + ", " + std::to_string(a) + ") = " +
                    std::to_string(r) + " outside [0, rmax]"),
          state(s), action(a), value(r) {}
    int state, action;
    double value;
};

struct GammaOutOfRange : Error {
    explicit GammaOutOfRange(double g)
        : Error("GammaOutOfRange", "gamma = " + std::to_string(g) + " not in (0,1)") {}
};

struct NonConvergence : Error {
    explicit NonConvergence(long iters)
        : Error("NonConvergence", "iteration cap " + std::to_string(iters) + " reached") {}
};

struct PolicyRowNotStochastic : Error {
    explicit PolicyRowNotStochastic(int s)
        : Error("PolicyRowNotStochastic", "policy row " + std::to_string(s) +
                                              " is not a probability distribution") {}
};

struct SingularSystem : Error {
    explicit SingularSystem(const std::string& msg) : Error("SingularSystem", msg) {}
};

struct NotIrreducible : Error {
    explicit NotIrreducible(const std::string& msg = "kernel is not irreducible")
        : Error("NotIrreducible", msg) {}
};

struct Unreachable : Error {
    Unreachable(int from, int to)
        : Error("Unreachable", "state " + std::to_string(to) + " unreachable from " +
                                   std::to_string(from) + " under every policy"),
          fromState(from), toState(to) {}
    int fromState, toState;
};

struct InstanceTooLarge : Error {
    explicit InstanceTooLarge(const std::string& msg) : Error("InstanceTooLarge", msg) {}
};

struct NegativeLambda : Error {
    explicit NegativeLambda(double lambda)
        : Error("NegativeLambda", "lambda = " + std::to_string(lambda) + " < 0") {}
};

struct LambdaUnderflow : Error {
    explicit LambdaUnderflow(double lambda)
        : Error("LambdaUnderflow",
                "lambda = " + std::to_string(lambda) + " below derivative floor") {}
};

struct LogDomain : Error {
    explicit LogDomain(long n)
        : Error("LogDomain", "inverse-log schedule needs n + n0 >= 2, got " + std::to_string(n)) {}
};

struct StepsizeTooLarge : Error {
    explicit StepsizeTooLarge(long j, double beta)
        : Error("StepsizeTooLarge", "beta_" + std::to_string(j) + " = " +
                                        std::to_string(beta) + " >= 1"),
          index(j) {}
    long index;
};

struct IterateEscaped : Error {
    explicit IterateEscaped(long n)
        : Error("IterateEscaped", "iterate left the admissible box at step " + std::to_string(n)),
          step(n) {}
    long step;
};

struct WindowTooLarge : Error {
    explicit WindowTooLarge(const std::string& msg) : Error("WindowTooLarge", msg) {}
};

struct MissingParameter : Error {
    explicit MissingParameter(const std::string& name)
        : Error("MissingParameter", "missing parameter: " + name) {}
};

struct PreconditionUnmet : Error {
    explicit PreconditionUnmet(const std::string& msg) : Error("PreconditionUnmet", msg) {}
};

struct HorizonOverflow : Error {
    HorizonOverflow(long required, long cap)
        : Error("HorizonOverflow", "truncation horizon " + std::to_string(required) +
                                       " exceeds cap " + std::to_string(cap)),
          requiredHorizon(required) {}
    long requiredHorizon;
};

struct GridMismatch : Error {
    explicit GridMismatch(const std::string& msg) : Error("GridMismatch", msg) {}
};

struct NonPositiveValue : Error {
    explicit NonPositiveValue(const std::string& msg) : Error("NonPositiveValue", msg) {}
};

struct TooFewPoints : Error {
    explicit TooFewPoints(std::size_t got, std::size_t need)
        : Error("TooFewPoints", "fit needs " + std::to_string(need) + " points, got " +
                                    std::to_string(got)) {}
};

struct ConditionViolated : Error {
    explicit ConditionViolated(const std::string& which)
        : Error("ConditionViolated", "hyperparameter conditions violated: " + which) {}
};

struct FileNotFound : Error {
    explicit FileNotFound(const std::string& path)
        : Error("FileNotFound", "cannot open " + path) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("ParseError", msg) {}
};

}  // namespace qlab
