#include "qlab/schedule.hpp"

namespace qlab {

double eval_schedule(const Schedule& s, long n) {
    const double shifted = static_cast<double>(n + s.n0);
    switch (s.kind) {
        case ScheduleKind::power:
            return s.scale / std::pow(shifted, s.exponent);
        case ScheduleKind::inverseLog:
            if (n + s.n0 < 2) throw LogDomain(n + s.n0);
            return 1.0 / (s.scale * std::log(shifted));
        case ScheduleKind::constant:
            return s.scale;
    }
    throw Error("InternalError", "unknown schedule kind");
}

std::string to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::power: return "power";
        case ScheduleKind::inverseLog: return "inverseLog";
        case ScheduleKind::constant: return "constant";
    }
    return "?";
}

}  // namespace qlab
