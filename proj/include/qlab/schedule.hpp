#pragma once

#include <cmath>
#include <string>

#include "qlab/errors.hpp"

namespace qlab {

enum class ScheduleKind { power, inverseLog, constant };

/// Parameterized decaying sequence.
///   power:      scale / (n + n0)^exponent
///   inverseLog: 1 / (scale * ln(n + n0))
///   constant:   scale
/// Stepsizes beta_n = beta/(n+n0)^(1-a) use kind=power with exponent = 1-a.
struct Schedule {
    ScheduleKind kind = ScheduleKind::constant;
    double scale = 0.0;
    double exponent = 0.0;
    long n0 = 1;

    static Schedule power(double scale, double exponent, long n0) {
        return Schedule{ScheduleKind::power, scale, exponent, n0};
    }
    static Schedule inverse_log(double scale, long n0) {
        return Schedule{ScheduleKind::inverseLog, scale, 0.0, n0};
    }
    static Schedule constant(double level) {
        return Schedule{ScheduleKind::constant, level, 0.0, 1};
    }
    /// beta_n = beta / (n + n0)^(1 - a)
    static Schedule stepsize(double beta, double a, long n0) {
        return Schedule{ScheduleKind::power, beta, 1.0 - a, n0};
    }
};

double eval_schedule(const Schedule& s, long n);

std::string to_string(ScheduleKind k);

}  // namespace qlab
