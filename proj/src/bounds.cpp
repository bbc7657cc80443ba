#include "qlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_div(double num, double den) {
    if (den <= 0.0) return kInf;
    return num / den;
}

// n0 threshold value^(1/exponent); a nonpositive base means any n0 works.
double n0_threshold(double base, double invExponent) {
    if (base <= 0.0) return 0.0;
    if (invExponent <= 0.0) return kInf;
    return std::pow(base, 1.0 / invExponent);
}
}  // namespace

std::string to_string(AlgoKind k) {
    switch (k) {
        case AlgoKind::genericSA: return "genericSA";
        case AlgoKind::boltzmann: return "boltzmann";
        case AlgoKind::seg: return "seg";
    }
    return "?";
}

double BoundSpec::c(int idx) const {
    const std::string key = "c" + std::to_string(idx);
    auto it = constants.find(key);
    if (it == constants.end()) throw MissingParameter(key);
    return it->second;
}

GBundle bound_g(long n, const BoundSpec& spec) {
    if (n < 1) throw NonPositiveValue("bound_g needs n >= 1");
    const double shifted = static_cast<double>(n + spec.n0);
    GBundle out;
    out.g = std::sqrt(std::log(static_cast<double>(n) * n / spec.delta) /
                      std::pow(shifted, 1.0 - (spec.a + 2.0 * spec.kappa1)));
    out.g1 = std::log(shifted) /
             std::pow(shifted, 1.0 - (spec.a + 2.0 * spec.kappa1 + spec.kappa3));
    out.g2 = 1.0 / std::pow(shifted, 1.0 - (2.0 * spec.kappa1 + spec.kappa2));
    return out;
}

Theorem1Rate theorem1_rate(const BoundSpec& spec) {
    Theorem1Rate r;
    r.headline = -0.5 + 2.0 * spec.kappa1 +
                 std::max(spec.a + spec.kappa3, spec.kappa2);
    const double lift = 2.0 * spec.kappa1 + spec.kappa3;
    r.gTerm = -0.5 * (1.0 - (spec.a + 2.0 * spec.kappa1)) + lift;
    r.g1Term = -(1.0 - (spec.a + 2.0 * spec.kappa1 + spec.kappa3)) + lift;
    r.g2Term = -(1.0 - (2.0 * spec.kappa1 + spec.kappa2)) + lift;
    r.dominant = std::max({r.gTerm, r.g1Term, r.g2Term});
    return r;
}

DerivedConstants derive_constants(const BoundSpec& spec) {
    const double c1 = spec.c(1), c2 = spec.c(2), c3 = spec.c(3), c4 = spec.c(4),
                 c5 = spec.c(5), c7 = spec.c(7), c8 = spec.c(8), c9 = spec.c(9),
                 c10 = spec.c(10);
    DerivedConstants out;
    out.C1 = 16.0 * spec.d * std::sqrt(spec.beta) * c9 * c1 * c2;
    out.C2 = safe_div(4.0 * spec.beta * c1 * c2 * (c10 + 2.0 * c9 * c1) * c2 * c9 * c5 *
                          (c7 + c8 + c9),
                      2.0 * spec.a + 2.0 * spec.kappa1 + spec.kappa3);
    out.C3 = 2.0 * c2 * c2 * c1 * c9 * c4 * (c10 + 2.0 * c1);
    const double lever = safe_div(2.0 * c5 * c9 * c10 * c2, c3);
    out.C4 = lever * out.C1;
    out.C5 = lever * out.C2;
    out.C6 = lever * out.C3;
    return out;
}

namespace {

struct ConditionBuilder {
    ConditionReport report;

    void add(const std::string& id, double lhs, const std::string& rel, double rhs) {
        ConditionCheck c;
        c.id = id;
        c.lhs = lhs;
        c.rhs = rhs;
        c.relation = rel;
        if (rel == ">=") c.satisfied = lhs >= rhs;
        else if (rel == ">") c.satisfied = lhs > rhs;
        else if (rel == "<=") c.satisfied = lhs <= rhs;
        else c.satisfied = lhs < rhs;
        report.allSatisfied = report.allSatisfied && c.satisfied;
        report.checks.push_back(c);
    }
};

void generic_case_conditions(ConditionBuilder& b, const BoundSpec& s, double c3) {
    const double a = s.a, k1 = s.kappa1, k2 = s.kappa2, k3 = s.kappa3, beta = s.beta;
    if (a == 0.0) {
        b.report.caseLabel = "A";
        b.add("B1.A.i", beta, ">=", 2.0 * (1.0 - 2.0 * k1));
        b.add("B1.A.ii", 2.0 * k1 + k3, "<", 1.0);
    } else {
        b.report.caseLabel = "B";
        b.add("B1.B.i", a + 2.0 * k1, "<", 1.0);
        b.add("B1.B.ii", 2.0 * k1 + k3, "<", 1.0 + a);
        b.add("B1.B.n0.1", static_cast<double>(s.n0), ">=",
              n0_threshold(2.0 * ((1.0 - a) - 2.0 * k1) / beta, a));
        b.add("B1.B.n0.2", static_cast<double>(s.n0), ">=",
              n0_threshold(2.0 * (1.0 - a - k1) / beta, a));
        b.add("B1.B.n0.3", static_cast<double>(s.n0), ">=",
              n0_threshold(2.0 * (1.0 - (a + 2.0 * k1 + k3)) / beta, a));
        b.add("B1.B.n0.4", static_cast<double>(s.n0), ">=",
              n0_threshold((1.0 - (2.0 * k1 + k2)) / beta, a));
        if (a == k1) {
            b.report.caseLabel += "+C";
            b.add("B1.C.i.exp", 3.0 * a + 4.0 * k1 + 2.0 * k3, "<", 1.0);
            b.add("B1.C.i.beta", beta * c3, ">=", 1.0 - (3.0 * a + 4.0 * k1 + 2.0 * k3));
            b.add("B1.C.ii", beta * c3, ">=", 2.0 - (4.0 * a + 6.0 * k1 + 4.0 * k3));
            b.add("B1.C.iii.exp", a + 3.0 * k1 + k2 + k3, "<", 1.0);
            b.add("B1.C.iii.beta", beta * c3, ">=",
                  2.0 - (2.0 * a + 6.0 * k1 + 2.0 * k2 + 2.0 * k3));
        } else if (a > k1) {
            b.report.caseLabel += "+D";
            b.add("B1.D.i", a + 6.0 * k1 + 2.0 * k3, "<", 1.0);
            b.add("B1.D.ii", 4.0 * k1 + k2 + k3, "<", 1.0);
            b.add("B1.D.n0.1", static_cast<double>(s.n0), ">=",
                  n0_threshold((1.0 - (a + 6.0 * k1 + 2.0 * k3)) / (beta * c3), a - k1));
            b.add("B1.D.n0.2", static_cast<double>(s.n0), ">=",
                  n0_threshold(2.0 * (1.0 - (a + 4.0 * k1 + 2.0 * k3)) / (beta * c3), a - k1));
            b.add("B1.D.n0.3", static_cast<double>(s.n0), ">=",
                  n0_threshold(2.0 * (1.0 - (4.0 * k1 + k2 + k3)) / (beta * c3), a - k1));
        }
    }
}

void boltzmann_conditions(ConditionBuilder& b, const BoundSpec& s, const AlgoExtras& x) {
    const double k1 = x.b * x.rmax / (1.0 - x.gamma);
    const double c3 = (1.0 - x.gamma) * x.muMinS / x.numActions;
    const double a = s.a, beta = s.beta;

    b.add("F2.range.a", a, "<=", 1.0);
    b.add("F2.range.k1", k1, "<=", 1.0);
    b.add("F2.global", 2.0 * a + 6.0 * k1, "<", 1.0);
    if (a == 0.0) {
        b.report.caseLabel = "A";
        b.add("F2.A.beta1", beta, ">=", 2.0 * (1.0 - 2.0 * k1));
        b.add("F2.A.beta2", beta, ">=", 2.0 * (1.0 - (a + 2.0 * k1)));
        b.add("F2.A.k1", 2.0 * k1, "<", 1.0);
    } else {
        b.report.caseLabel = "B";
        b.add("F2.B.i", a + k1, "<", 1.0);
        b.add("F2.B.ii", 2.0 * k1, "<", 1.0 + a);
        b.add("F2.B.n0.1", static_cast<double>(s.n0), ">=",
              n0_threshold(2.0 * ((1.0 - a) - 2.0 * k1) / beta, a));
        b.add("F2.B.n0.2", static_cast<double>(s.n0), ">=",
              n0_threshold(2.0 * (1.0 - a - k1) / beta, a));
        b.add("F2.B.n0.3", static_cast<double>(s.n0), ">=",
              n0_threshold(2.0 * (1.0 - (a + 2.0 * k1)) / beta, a));
        b.add("F2.B.n0.4", static_cast<double>(s.n0), ">=",
              n0_threshold((1.0 - 2.0 * k1) / beta, a));
        if (a == k1) {
            b.report.caseLabel += "+C";
            b.add("F2.C.exp", 7.0 * a, "<", 1.0);
            b.add("F2.C.beta1", beta * c3, ">=", 1.0 - 7.0 * a);
            b.add("F2.C.beta2", beta * c3, ">=", 2.0 - 8.0 * a);
        } else if (a > k1) {
            b.report.caseLabel += "+D";
            b.add("F2.D.i", a + 6.0 * k1, "<", 1.0);
            b.add("F2.D.n0.1", static_cast<double>(s.n0), ">=",
                  n0_threshold((1.0 - (a + 6.0 * k1)) / (beta * c3), a - k1));
            b.add("F2.D.n0.2", static_cast<double>(s.n0), ">=",
                  n0_threshold(2.0 * (1.0 - (a + 4.0 * k1)) / (beta * c3), a - k1));
            b.add("F2.D.n0.3", static_cast<double>(s.n0), ">=",
                  n0_threshold(2.0 * (1.0 - 4.0 * k1) / (beta * c3), a - k1));
        }
    }
    // Concentration conditions.
    b.add("F3.global1", a + 3.0 * k1, "<", 0.5);
    b.add("F3.global2", a + 6.0 * k1, "<", 1.0);
    if (a == 0.0) {
        b.add("F3.A.k1", k1, "<", 0.5);
        b.add("F3.A.beta", beta, ">=", 2.0 * (1.0 - 2.0 * k1));
    } else {
        b.add("F3.B", a + 2.0 * k1, "<", 1.0);
    }
    // Regret condition.
    b.add("F4.regret", k1, "<=", a);
}

void seg_conditions(ConditionBuilder& b, const BoundSpec& s, const AlgoExtras& x) {
    const double a = s.a, d = x.dExp, e = x.eExp, beta = s.beta;

    b.add("H1.1", 2.0 * a + 6.0 * d + 3.0 * e, "<", 1.0);
    b.add("H1.2", a + 6.0 * d + 3.0 * e, "<", 1.0);
    b.add("H1.3", 2.0 * d + e, "<", 1.0 + a);
    b.add("H1.4", a + d, "<", 1.0);
    b.add("H1.5", 2.0 * d + e, "<", 1.0);
    if (a == 0.0) {
        b.report.caseLabel = "A";
        b.add("H1.A.beta", beta, ">=", 2.0 * (1.0 - 2.0 * d));
    } else if (a == d) {
        b.report.caseLabel = "B";
        b.add("H1.B.exp", 3.0 * a + 4.0 * d + 2.0 * e, "<", 1.0);
        const double lead = safe_div(static_cast<double>(x.numActions),
                                     2.0 * (1.0 - x.gamma) * x.muMinS);
        const double need = lead * std::max({1.0 - (3.0 * a + 4.0 * d + 2.0 * e),
                                             2.0 - (4.0 * a + 6.0 * d + 4.0 * e),
                                             2.0 - (2.0 * a + 6.0 * d + 4.0 * e)});
        b.add("H1.B.beta", beta, ">=", need);
    } else {
        b.report.caseLabel = "-";
    }
    // Concentration conditions.
    b.add("H2.range", std::max({a, d, e}), "<=", 1.0);
    b.add("H2.1", 2.0 * a + 6.0 * d + 3.0 * e, "<", 1.0);
    b.add("H2.2", a + 3.0 * d + e, "<", 0.5);
    if (a == 0.0) {
        b.add("H2.A.d", d, "<", 0.5);
        b.add("H2.A.beta", beta, ">=", 2.0 * (1.0 - 2.0 * d));
    } else {
        b.add("H2.B", a + 2.0 * d, "<", 1.0);
    }
    // Regret conditions; e = 0 is admitted (the optimal choice uses it).
    b.add("H3.1", 2.0 * a + 6.0 * d + 4.0 * e, "<", 1.0);
    b.add("H3.2", e, "<", d);
    b.add("H3.3", a - e, "<", 1.0);
    b.add("H3.4", d, "<=", a);
    b.add("H3.5", e, ">=", 0.0);
}

}  // namespace

ConditionReport check_conditions(const BoundSpec& spec, AlgoKind algo,
                                 const AlgoExtras& extras) {
    ConditionBuilder b;
    switch (algo) {
        case AlgoKind::genericSA: {
            b.add("B1.1", 2.0 * spec.a + 6.0 * spec.kappa1 + 3.0 * spec.kappa3, "<", 1.0);
            b.add("B1.2",
                  spec.a + 6.0 * spec.kappa1 + spec.kappa2 + 2.0 * spec.kappa3, "<", 1.0);
            double c3 = 0.0;
            if (spec.a > 0.0 && spec.a >= spec.kappa1) {
                auto it = spec.constants.find("c3");
                if (it == spec.constants.end()) throw MissingParameter("c3");
                c3 = it->second;
            }
            generic_case_conditions(b, spec, c3);
            break;
        }
        case AlgoKind::boltzmann:
            if (extras.muMinS <= 0.0) throw MissingParameter("muMinS");
            boltzmann_conditions(b, spec, extras);
            break;
        case AlgoKind::seg:
            if (spec.a == extras.dExp && spec.a > 0.0 && extras.muMinS <= 0.0)
                throw MissingParameter("muMinS");
            seg_conditions(b, spec, extras);
            break;
    }
    return b.report;
}

std::vector<long> default_n0_grid(long maxN) {
    std::vector<long> grid{0, 1};
    long v = 2;
    while (v <= maxN) {
        grid.push_back(v);
        v *= 2;
    }
    return grid;
}

namespace {

struct N0Builder {
    const BoundSpec& spec;
    const std::vector<long>& grid;
    N0Report report;

    // lhs/rhs as functions of n; relation ">" or "<"; skipZero skips n = 0
    // (needed where g(n, delta) appears).
    template <typename L, typename R>
    void add(const std::string& id, L lhs, R rhs, const std::string& rel,
             double lhsExp, double rhsExp, bool skipZero = false) {
        N0Check c;
        c.id = id;
        c.satisfiedOnGrid = true;
        c.lhsExponent = lhsExp;
        c.rhsExponent = rhsExp;
        c.lhsDecaysFaster = lhsExp < rhsExp;
        for (long n : grid) {
            if (skipZero && n == 0) continue;
            const double l = lhs(n), r = rhs(n);
            const bool ok = rel == ">" ? l > r : l < r;
            if (!ok) {
                c.satisfiedOnGrid = false;
                c.witnessN = n;
                break;
            }
        }
        report.allSatisfied = report.allSatisfied && c.satisfiedOnGrid;
        report.checks.push_back(c);
    }
};

}  // namespace

N0Report check_n0(const BoundSpec& spec, AlgoKind algo, const AlgoExtras& extras,
                  const std::vector<long>& grid) {
    const double a = spec.a, k1 = spec.kappa1, k2 = spec.kappa2, k3 = spec.kappa3;
    const double beta = spec.beta;
    const double n0 = static_cast<double>(spec.n0);
    const double c1 = spec.c(1), c2 = spec.c(2), c3 = spec.c(3), c5 = spec.c(5),
                 c6 = spec.c(6), c7 = spec.c(7), c8 = spec.c(8), c9 = spec.c(9),
                 c10 = spec.c(10);
    const DerivedConstants dc = derive_constants(spec);

    N0Builder b{spec, grid, {}};
    auto shifted = [&](long n) { return static_cast<double>(n) + n0; };

    // n0-I: 2 c9 c1 c2 n0^k1 > c1  (n-independent)
    b.add("n0-I",
          [&](long) { return 2.0 * c9 * c1 * c2 * std::pow(n0, k1); },
          [&](long) { return c1; }, ">", 0.0, 0.0);

    // n0-II: T2-style bound dominates the T1 bound for all n.
    b.add("n0-II",
          [&](long n) {
              return safe_div(2.0 * beta * c1 * c2 * (c10 + 2.0 * c9 * c1) * c2 * c9 * c5 *
                                  (c7 + c8 + c9) * std::log(shifted(n)),
                              (2.0 * a + 2.0 * k1 + k3) *
                                  std::pow(shifted(n), 1.0 - (a + 2.0 * k1 + k3)));
          },
          [&](long n) {
              return safe_div(8.0 * c9 * c1 * c2,
                              (2.0 * a + k1) * std::pow(shifted(n), 1.0 - (a + k1)));
          },
          ">", -(1.0 - (a + 2.0 * k1 + k3)), -(1.0 - (a + k1)));

    // n0-III
    b.add("n0-III",
          [&](long n) {
              return c5 * c9 * c10 * c2 * std::pow(shifted(n), k1 + k3) *
                     std::log(shifted(n));
          },
          [&](long) { return 1.0; }, ">", k1 + k3, 0.0);

    // n0-IV
    b.add("n0-IV",
          [&](long n) {
              return safe_div(4.0 * c9 * c1 * c2,
                              (2.0 * a + k1) * std::pow(shifted(n), 1.0 - 2.0 * a - k1));
          },
          [&](long n) {
              return std::pow(n0, a) * 2.0 * c9 * c1 * c2 /
                         std::pow(shifted(n), 1.0 - k1) +
                     2.0 * c9 * c1 * c2 / std::pow(shifted(n), 1.0 - a - k1);
          },
          ">", -(1.0 - 2.0 * a - k1), -(1.0 - a - k1));

    // n0-V
    b.add("n0-V",
          [&](long n) {
              return (c10 + 2.0 * c1) * c9 * c2 * c5 * std::log(shifted(n)) *
                     std::pow(shifted(n), k1 + k3);
          },
          [&](long) { return 2.0 * c6; }, ">", k1 + k3, 0.0);

    if (algo == AlgoKind::boltzmann) {
        if (!(extras.gap > 0.0)) throw MissingParameter("gap");
        // n0-VI: C5 g1 > C6 g2
        b.add("n0-VI",
              [&](long n) { return dc.C5 * bound_g(std::max(n, 1L), spec).g1; },
              [&](long n) { return dc.C6 * bound_g(std::max(n, 1L), spec).g2; }, ">",
              -(1.0 - (a + 2.0 * k1 + k3)), -(1.0 - (2.0 * k1 + k2)), true);
        // n0-VII: gap/2 > 2 * bound(l, delta)
        b.add("n0-VII",
              [&](long) { return extras.gap / 2.0; },
              [&](long n) {
                  const GBundle g = bound_g(n, spec);
                  const double bound = 2.0 * std::log(shifted(n)) *
                                       std::pow(shifted(n), 2.0 * k1) / c3 *
                                       (dc.C4 * g.g + dc.C5 * g.g1 + dc.C6 * g.g2);
                  return 2.0 * bound;
              },
              ">", 0.0,
              std::max({-(0.5 - (a / 2.0 + 3.0 * k1)), -(1.0 - (a + 4.0 * k1 + k3)),
                        -(1.0 - (4.0 * k1 + k2))}),
              true);
    }

    if (algo == AlgoKind::seg) {
        if (!(extras.gap > 0.0)) throw MissingParameter("gap");
        const double dE = extras.dExp, eE = extras.eExp;
        const double qNorm = extras.qOneNorm > 0.0
                                 ? extras.qOneNorm
                                 : extras.numActions * extras.rmax / (1.0 - extras.gamma);
        // n0-VIII: epsilon drift dominated by the temperature drift term.
        b.add("n0-VIII",
              [&](long n) { return dE / std::pow(shifted(n), 1.0 + dE); },
              [&](long n) { return qNorm / std::pow(shifted(n), 1.0 - eE); }, "<",
              -(1.0 + dE), -(1.0 - eE));
        // n0-IX (two parts)
        b.add("n0-IXa",
              [&](long n) { return dc.C6 * bound_g(std::max(n, 1L), spec).g2; },
              [&](long n) { return dc.C5 * bound_g(std::max(n, 1L), spec).g1; }, "<",
              -(1.0 - (2.0 * k1 + k2)), -(1.0 - (a + 2.0 * k1 + k3)), true);
        b.add("n0-IXb",
              [&](long n) { return 1.0 / std::pow(shifted(n), dE); },
              [&](long n) {
                  return extras.numActions *
                         std::exp(-std::pow(shifted(n), eE) * extras.gap);
              },
              ">", -dE, eE > 0.0 ? -kInf : 0.0);
        // n0-X: gap margin against the concentration envelope.
        b.add("n0-X",
              [&](long) { return extras.gap / 2.0; },
              [&](long n) {
                  const GBundle g = bound_g(n, spec);
                  return 4.0 * std::log(shifted(n)) *
                         std::pow(shifted(n), 2.0 * k1 + k3) / c3 *
                         (dc.C4 * g.g + dc.C5 * g.g1 + dc.C6 * g.g2);
              },
              ">", 0.0,
              std::max({-(0.5 - (a / 2.0 + 3.0 * k1 + k3)),
                        -(1.0 - (a + 4.0 * k1 + 2.0 * k3)),
                        -(1.0 - (4.0 * k1 + k2 + k3))}),
              true);
        // n0-XI
        b.add("n0-XI",
              [&](long n) {
                  return std::exp(-(extras.gap / 2.0) * std::pow(shifted(n), eE));
              },
              [&](long n) { return 1.0 / std::pow(shifted(n), dE); }, "<",
              eE > 0.0 ? -kInf : 0.0, -dE);
        // n0-XII
        b.add("n0-XII",
              [&](long n) {
                  return 1.0 / std::pow(shifted(n), dE) +
                         extras.numActions * (c7 + c8 + c9) /
                             std::pow(shifted(n), 1.0 + dE - a);
              },
              [&](long n) {
                  return extras.numActions * (1.0 + eE) / std::pow(shifted(n), dE - eE);
              },
              "<", -dE, -(dE - eE));
    }
    return b.report;
}

RecursionBoundResult recursion_bound_check(double a, double b, double rho,
                                           double rhoPrime, long n0, long n) {
    RecursionBoundResult res;
    const bool part1 = rho == 1.0 && rhoPrime > 1.0 && rhoPrime <= 2.0 &&
                       a >= 2.0 * (rhoPrime - 1.0);
    const bool part2 = rho < 1.0 && rhoPrime > rho &&
                       static_cast<double>(n0) >=
                           std::pow(2.0 * (rhoPrime - rho) / a, 1.0 / (1.0 - rho));
    if (!part1 && !part2)
        throw PreconditionUnmet("neither part of the recursion bound applies");
    res.part = part1 ? 1 : 2;

    auto aAt = [&](long i) { return a / std::pow(static_cast<double>(i + n0), rho); };
    auto bAt = [&](long i) { return b / std::pow(static_cast<double>(i + n0), rhoPrime); };
    double prod = 1.0;  // prod over j = i+1 .. n-1 of (1 - a_j), built backwards
    double s = 0.0;
    for (long i = n - 1; i >= 0; --i) {
        s += bAt(i) * prod;
        prod *= 1.0 - aAt(i);
    }
    res.Sn = s;
    res.bound = 2.0 * bAt(n) / aAt(n);
    res.ok = res.Sn <= res.bound;
    return res;
}

namespace {

BoundSpec base_spec(const Mdp& mdp, double a, double beta, long n0, double delta,
                    double muMinS, double diameter) {
    BoundSpec s;
    s.a = a;
    s.beta = beta;
    s.n0 = n0;
    s.delta = delta;
    s.d = mdp.num_states() * mdp.num_actions();
    const double vmax = mdp.vmax();
    s.constants["c1"] = diameter;
    s.constants["c2"] = 1.0 - mdp.gamma();
    s.constants["c6"] = 1.0 + mdp.gamma();
    s.constants["c7"] = vmax;
    s.constants["c8"] = vmax;
    s.constants["c9"] = vmax;
    s.constants["c10"] = muMinS * diameter / mdp.num_actions();
    return s;
}

}  // namespace

BoundSpec make_boltzmann_spec(const Mdp& mdp, double b, double a, double beta, long n0,
                              double delta, double muMinS, double diameter) {
    BoundSpec s = base_spec(mdp, a, beta, n0, delta, muMinS, diameter);
    const double oneMinusGamma = 1.0 - mdp.gamma();
    s.kappa1 = b * mdp.rmax() / oneMinusGamma;
    s.kappa2 = 0.0;
    s.kappa3 = 0.0;
    s.constants["c3"] = oneMinusGamma * muMinS / mdp.num_actions();
    s.constants["c4"] = b * mdp.num_actions() * mdp.rmax() / oneMinusGamma;
    s.constants["c5"] = static_cast<double>(mdp.num_states()) * mdp.num_states() *
                        mdp.num_actions() * mdp.num_actions() * b;
    return s;
}

BoundSpec make_seg_spec(const Mdp& mdp, double dExp, double eExp, double a, double beta,
                        long n0, double delta, double muMinS, double diameter) {
    BoundSpec s = base_spec(mdp, a, beta, n0, delta, muMinS, diameter);
    const double oneMinusGamma = 1.0 - mdp.gamma();
    s.kappa1 = dExp;
    s.kappa2 = eExp;
    s.kappa3 = eExp;
    s.constants["c3"] = 2.0 * oneMinusGamma * muMinS / mdp.num_actions();
    s.constants["c4"] = 2.0 * mdp.rmax() / oneMinusGamma;
    s.constants["c5"] = 1.0;
    return s;
}

}  // namespace qlab
