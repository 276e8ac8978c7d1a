#include "hamcert/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace hamcert {

void RadiiLadder::validate() const {
    auto positive = [](const std::array<double, 2>& level) {
        return level[0] > 0.0 && level[1] > 0.0;
    };
    if (!positive(rho) || !positive(r))
        throw ValidationError("ladder: rho and r levels must be positive");
    if (s && !positive(*s)) throw ValidationError("ladder: s level must be positive");
    if (sigma && !positive(*sigma)) throw ValidationError("ladder: sigma level must be positive");
    if (sigma && !s) throw ValidationError("ladder: sigma requires s");
}

namespace {

struct Axis {
    double lo, hi;
    int points; // 1 when collapsed
};

Axis make_axis(Interval range, int density, bool used) {
    if (!used || range.lo == range.hi) return {range.lo, range.hi, 1};
    return {range.lo, range.hi, density + 1};
}

double axis_at(const Axis& a, int i) {
    if (a.points == 1) return a.lo;
    return a.lo + (a.hi - a.lo) * i / (a.points - 1);
}

// deterministic tensor scan of fn over three axes; fn(t,u,v) -> value;
// strict improvement keeps the earliest point
template <typename Fn, typename Better>
BoxExtremum scan3(const Fn& fn, const Axis& at, const Axis& au, const Axis& av,
                  const Better& better) {
    BoxExtremum best;
    bool first = true;
    for (int i = 0; i < at.points; ++i) {
        const double t = axis_at(at, i);
        for (int j = 0; j < au.points; ++j) {
            const double u = axis_at(au, j);
            for (int k = 0; k < av.points; ++k) {
                const double v = axis_at(av, k);
                const double val = fn(t, u, v);
                if (first || better(val, best.value)) {
                    best = {val, {t, u, v}};
                    first = false;
                }
            }
        }
    }
    return best;
}

Axis shrink_around(const Axis& a, double center, int density) {
    if (a.points == 1) return a;
    const double step = (a.hi - a.lo) / (a.points - 1);
    const double lo = std::max(a.lo, center - step);
    const double hi = std::min(a.hi, center + step);
    return {lo, hi, density + 1};
}

} // namespace

BoxExtremum box_extremum(const Expression& f, Interval t_range, Interval u_range,
                         Interval v_range, ExtremeMode mode, int density) {
    if (density < 8) throw ValidationError("box_extremum: density must be >= 8");
    auto fn = [&](double t, double u, double v) {
        ExprEnv env;
        env.t = t;
        env.u = u;
        env.v = v;
        const double val = f.eval(env);
        if (val < 0.0)
            throw ValidationError("nonnegativity violated: f(" + std::to_string(t) + ", " +
                                  std::to_string(u) + ", " + std::to_string(v) + ") = " +
                                  std::to_string(val));
        return val;
    };
    const bool maximize = mode == ExtremeMode::Sup;
    auto better = [maximize](double a, double b) { return maximize ? a > b : a < b; };

    const Axis at = make_axis(t_range, density, f.uses('t'));
    const Axis au = make_axis(u_range, density, f.uses('u'));
    const Axis av = make_axis(v_range, density, f.uses('v'));
    BoxExtremum best = scan3(fn, at, au, av, better);

    // one refinement pass around the best cell
    const BoxExtremum refined =
        scan3(fn, shrink_around(at, best.point[0], density),
              shrink_around(au, best.point[1], density),
              shrink_around(av, best.point[2], density), better);
    if (better(refined.value, best.value)) best = refined;
    return best;
}

namespace {

ConditionRecord sup_record(const ProblemSpec& p, int component, const std::string& id,
                           Interval tr, Interval ur, Interval vr, double rho,
                           double threshold, const CheckOptions& opts) {
    const Expression& f = component == 1 ? p.f1 : p.f2;
    const BoxExtremum ext = box_extremum(f, tr, ur, vr, ExtremeMode::Sup, opts.density);
    ConditionRecord rec;
    rec.id = id;
    rec.computed = ext.value / rho;
    rec.threshold = threshold;
    rec.margin = threshold - rec.computed;
    rec.density = opts.density;
    rec.verdict = rec.margin >= opts.strictness;
    rec.witness = ext.point;
    return rec;
}

ConditionRecord inf_record(const ProblemSpec& p, int component, const std::string& id,
                           Interval tr, Interval ur, Interval vr, double rho,
                           double threshold, const CheckOptions& opts) {
    const Expression& f = component == 1 ? p.f1 : p.f2;
    const BoxExtremum ext = box_extremum(f, tr, ur, vr, ExtremeMode::Inf, opts.density);
    ConditionRecord rec;
    rec.id = id;
    rec.computed = ext.value / rho;
    rec.threshold = threshold;
    rec.margin = rec.computed - threshold;
    rec.density = opts.density;
    rec.verdict = rec.margin >= opts.strictness;
    rec.witness = ext.point;
    return rec;
}

std::string tagged(const std::string& base, const std::string& label) {
    return label.empty() ? base : base + "@" + label;
}

} // namespace

ConditionOutcome check_I1(const ProblemSpec& p, double rho1, double rho2, double m1,
                          double m2, const CheckOptions& opts, const std::string& label) {
    ConditionOutcome out;
    out.id = tagged("I1", label);
    out.records.push_back(sup_record(p, 1, tagged("I1(f1)", label), {0.0, 1.0},
                                     {-rho1, rho1}, {-rho2, rho2}, rho1, m1, opts));
    out.records.push_back(sup_record(p, 2, tagged("I1(f2)", label), {0.0, 1.0},
                                     {-rho1, rho1}, {-rho2, rho2}, rho2, m2, opts));
    out.verdict = out.records[0].verdict && out.records[1].verdict;
    return out;
}

ConditionOutcome check_I0(const ProblemSpec& p, double rho1, double rho2, double M1,
                          double M2, const CheckOptions& opts, const std::string& label) {
    const auto [c1, c2] = p.cone_c();
    ConditionOutcome out;
    out.id = tagged("I0", label);
    out.records.push_back(inf_record(p, 1, tagged("I0(f1)", label), p.k1.interval(),
                                     {rho1, rho1 / c1}, {-rho2 / c2, rho2 / c2}, rho1, M1,
                                     opts));
    out.records.push_back(inf_record(p, 2, tagged("I0(f2)", label), p.k2.interval(),
                                     {-rho1 / c1, rho1 / c1}, {rho2, rho2 / c2}, rho2, M2,
                                     opts));
    out.verdict = out.records[0].verdict && out.records[1].verdict;
    return out;
}

ConditionOutcome check_I0_star(const ProblemSpec& p, double rho1, double rho2, double M1,
                               double M2, const CheckOptions& opts, const std::string& label) {
    const auto [c1, c2] = p.cone_c();
    ConditionOutcome out;
    out.id = tagged("I0*", label);
    out.records.push_back(inf_record(p, 1, tagged("I0*(f1)", label), p.k1.interval(),
                                     {0.0, rho1 / c1}, {-rho2 / c2, rho2 / c2}, rho1, M1,
                                     opts));
    out.records.push_back(inf_record(p, 2, tagged("I0*(f2)", label), p.k2.interval(),
                                     {-rho1 / c1, rho1 / c1}, {0.0, rho2 / c2}, rho2, M2,
                                     opts));
    out.verdict = out.records[0].verdict || out.records[1].verdict;
    return out;
}

ConditionOutcome check_I0_underline(const ProblemSpec& p, double rho1, double rho2,
                                    double M1, double M2, bool star,
                                    const CheckOptions& opts, const std::string& label) {
    if (!same_interval(p.k1.interval(), p.k2.interval(), 1e-12))
        throw ValidationError("underlined conditions: intervals differ");
    const Interval ab = p.k1.interval();
    const auto [c1, c2] = p.cone_c();
    ConditionOutcome out;
    out.id = tagged(star ? "I0_*" : "I0_", label);
    if (star) {
        out.records.push_back(inf_record(p, 1, tagged("I0_*(f1)", label), ab,
                                         {0.0, rho1 / c1}, {0.0, rho2 / c2}, rho1, M1, opts));
        out.records.push_back(inf_record(p, 2, tagged("I0_*(f2)", label), ab,
                                         {0.0, rho1 / c1}, {0.0, rho2 / c2}, rho2, M2, opts));
        out.verdict = out.records[0].verdict || out.records[1].verdict;
    } else {
        out.records.push_back(inf_record(p, 1, tagged("I0_(f1)", label), ab,
                                         {rho1, rho1 / c1}, {0.0, rho2 / c2}, rho1, M1, opts));
        out.records.push_back(inf_record(p, 2, tagged("I0_(f2)", label), ab,
                                         {0.0, rho1 / c1}, {rho2, rho2 / c2}, rho2, M2, opts));
        out.verdict = out.records[0].verdict && out.records[1].verdict;
    }
    return out;
}

namespace {

// min over the sampled box of fn(t,u,v); the skip predicate masks samples
// the condition does not quantify over
template <typename Fn, typename Skip>
std::pair<double, std::array<double, 3>> masked_min(const Fn& fn, const Skip& skip,
                                                    const Axis& at, const Axis& au,
                                                    const Axis& av) {
    double best = std::numeric_limits<double>::infinity();
    std::array<double, 3> where{at.lo, au.lo, av.lo};
    for (int i = 0; i < at.points; ++i) {
        const double t = axis_at(at, i);
        for (int j = 0; j < au.points; ++j) {
            const double u = axis_at(au, j);
            for (int k = 0; k < av.points; ++k) {
                const double v = axis_at(av, k);
                if (skip(t, u, v)) continue;
                const double val = fn(t, u, v);
                if (val < best) {
                    best = val;
                    where = {t, u, v};
                }
            }
        }
    }
    return {best, where};
}

double eval_f(const Expression& f, double t, double u, double v) {
    ExprEnv env;
    env.t = t;
    env.u = u;
    env.v = v;
    return f.eval(env);
}

} // namespace

NonexistenceResult check_nonexistence(const ProblemSpec& p, double m1, double m2, double M1,
                                      double M2, double cap, const CheckOptions& opts) {
    if (cap <= 0.0) throw ValidationError("check_nonexistence: cap must be positive");
    NonexistenceResult res;
    res.cap = cap;
    const Axis full_t{0.0, 1.0, opts.density + 1};
    const Axis box{-cap, cap, opts.density + 1};
    const std::string cap_note = "sampled on |u_i| <= " + std::to_string(cap);

    bool cond1[3] = {false, false, false};
    bool cond2[3] = {false, false, false};
    for (int i = 1; i <= 2; ++i) {
        const Expression& f = i == 1 ? p.f1 : p.f2;
        const double m = i == 1 ? m1 : m2;
        const double M = i == 1 ? M1 : M2;
        const Interval ab = i == 1 ? p.k1.interval() : p.k2.interval();

        // (1): f_i < m_i |u_i| for every t and u_i != 0
        auto margin1 = [&](double t, double u, double v) {
            const double ui = i == 1 ? u : v;
            return m * std::abs(ui) - eval_f(f, t, u, v);
        };
        auto skip1 = [&](double, double u, double v) { return (i == 1 ? u : v) == 0.0; };
        auto [min1, w1] = masked_min(margin1, skip1, full_t, box, box);
        ConditionRecord r1;
        r1.id = "NE1(f" + std::to_string(i) + ")";
        r1.computed = min1;
        r1.threshold = 0.0;
        r1.margin = min1;
        r1.density = opts.density;
        r1.verdict = min1 >= opts.strictness;
        r1.witness = w1;
        r1.note = cap_note;
        cond1[i] = r1.verdict;
        res.records.push_back(std::move(r1));

        // (2): f_i > M_i u_i for t in [a_i,b_i] and u_i > 0
        const Axis ab_t{ab.lo, ab.hi, opts.density + 1};
        const Axis upos{0.0, cap, opts.density + 1};
        auto margin2 = [&](double t, double u, double v) {
            const double ui = i == 1 ? u : v;
            return eval_f(f, t, u, v) - M * ui;
        };
        auto skip2 = [&](double, double u, double v) { return (i == 1 ? u : v) <= 0.0; };
        auto [min2, w2] = masked_min(margin2, skip2, ab_t, i == 1 ? upos : box,
                                     i == 1 ? box : upos);
        ConditionRecord r2;
        r2.id = "NE2(f" + std::to_string(i) + ")";
        r2.computed = min2;
        r2.threshold = 0.0;
        r2.margin = min2;
        r2.density = opts.density;
        r2.verdict = min2 >= opts.strictness;
        r2.witness = w2;
        r2.note = cap_note;
        cond2[i] = r2.verdict;
        res.records.push_back(std::move(r2));
    }

    if (cond1[1] && cond1[2])
        res.verdict = NonexistenceVerdict::Cond1;
    else if (cond2[1] && cond2[2])
        res.verdict = NonexistenceVerdict::Cond2;
    else if ((cond1[1] && cond2[2]) || (cond1[2] && cond2[1]))
        res.verdict = NonexistenceVerdict::Mixed;
    else
        res.verdict = NonexistenceVerdict::None;
    return res;
}

namespace {

struct EigenBox {
    Axis t, u, v;
    bool part_is_u; // which component enters the right-hand side mu * (.)
};

// largest admissible epsilon and the signed margin for one component of an
// eigenvalue condition; lower==true means f >= (mu+eps)*part (I0 flavor)
ConditionRecord eigen_component(const Expression& f, const std::string& id, double mu,
                                double eps_user, bool lower, bool abs_part,
                                const std::vector<EigenBox>& boxes,
                                const CheckOptions& opts, const std::string& note) {
    double eps_max = std::numeric_limits<double>::infinity();
    double worst_zero = std::numeric_limits<double>::infinity(); // min over part==0 samples
    bool any = false;
    std::array<double, 3> witness{};
    for (const EigenBox& b : boxes) {
        for (int i = 0; i < b.t.points; ++i) {
            const double t = axis_at(b.t, i);
            for (int j = 0; j < b.u.points; ++j) {
                const double u = axis_at(b.u, j);
                for (int k = 0; k < b.v.points; ++k) {
                    const double v = axis_at(b.v, k);
                    double part = b.part_is_u ? u : v;
                    if (abs_part) part = std::abs(part);
                    const double fv = eval_f(f, t, u, v);
                    const double gap = lower ? fv - mu * part : mu * part - fv;
                    if (part > 1e-14) {
                        const double eps_here = gap / part;
                        if (!any || eps_here < eps_max) {
                            eps_max = eps_here;
                            witness = {t, u, v};
                        }
                        any = true;
                    } else {
                        worst_zero = std::min(worst_zero, gap);
                    }
                }
            }
        }
    }
    if (!any) throw ValidationError("eigen condition: sampled box is degenerate");

    ConditionRecord rec;
    rec.id = id;
    rec.threshold = mu;
    rec.density = opts.density;
    rec.witness = witness;
    const double eps_used = eps_user > 0.0 ? eps_user : std::max(eps_max, 0.0) / 2.0;
    rec.computed = eps_max; // largest admissible epsilon on the samples
    rec.margin = eps_max - eps_used;
    const bool zero_ok =
        worst_zero == std::numeric_limits<double>::infinity() || worst_zero >= -1e-15;
    rec.verdict = zero_ok && eps_used > 0.0 && eps_max - eps_used >= 0.0 &&
                  eps_max >= opts.strictness;
    rec.note = note + "; eps=" + std::to_string(eps_used);
    return rec;
}

} // namespace

ConditionOutcome check_eigen_condition(const ProblemSpec& p, EigenCondition which,
                                       double mu1, double mu2, double eps,
                                       double rho0_or_R1, double cap,
                                       const CheckOptions& opts) {
    if (rho0_or_R1 <= 0.0)
        throw ValidationError("eigen condition: rho0/R1 must be positive");
    const auto [c1, c2] = p.cone_c();
    const int d = opts.density;
    auto ax = [&](double lo, double hi) { return Axis{lo, hi, d + 1}; };
    const Interval ab1 = p.k1.interval(), ab2 = p.k2.interval();

    ConditionOutcome out;
    std::vector<EigenBox> b1, b2;
    bool lower = true, abs_part = false, disjunction = false;
    std::string note;
    const double rho0 = rho0_or_R1, R1 = rho0_or_R1;
    switch (which) {
    case EigenCondition::I0_0plus:
        out.id = "I0(0+)";
        b1 = {{ax(ab1.lo, ab1.hi), ax(0.0, rho0), ax(-rho0, rho0), true}};
        b2 = {{ax(ab2.lo, ab2.hi), ax(-rho0, rho0), ax(0.0, rho0), false}};
        disjunction = true;
        note = "rho0=" + std::to_string(rho0);
        break;
    case EigenCondition::I0_inf:
        out.id = "I0(inf)";
        if (cap <= R1) throw ValidationError("eigen condition: cap must exceed R1");
        b1 = {{ax(ab1.lo, ab1.hi), ax(c1 * R1, cap), ax(-cap, cap), true}};
        b2 = {{ax(ab2.lo, ab2.hi), ax(-cap, cap), ax(c2 * R1, cap), false}};
        note = "R1=" + std::to_string(R1) + ", sampled up to cap=" + std::to_string(cap);
        break;
    case EigenCondition::I1_0plus:
        out.id = "I1(0+)";
        lower = false;
        abs_part = true;
        b1 = {{ax(0.0, 1.0), ax(-rho0, rho0), ax(-rho0, rho0), true}};
        b2 = {{ax(0.0, 1.0), ax(-rho0, rho0), ax(-rho0, rho0), false}};
        note = "rho0=" + std::to_string(rho0);
        break;
    case EigenCondition::I1_inf: {
        out.id = "I1(inf)";
        lower = false;
        abs_part = true;
        if (cap <= R1) throw ValidationError("eigen condition: cap must exceed R1");
        const Axis pos = ax(R1, cap), neg = ax(-cap, -R1);
        for (const Axis& ua : {neg, pos})
            for (const Axis& va : {neg, pos}) {
                b1.push_back({ax(0.0, 1.0), ua, va, true});
                b2.push_back({ax(0.0, 1.0), ua, va, false});
            }
        note = "R1=" + std::to_string(R1) + ", sampled up to cap=" + std::to_string(cap);
        break;
    }
    }
    out.records.push_back(
        eigen_component(p.f1, out.id + "(f1)", mu1, eps, lower, abs_part, b1, opts, note));
    out.records.push_back(
        eigen_component(p.f2, out.id + "(f2)", mu2, eps, lower, abs_part, b2, opts, note));
    out.verdict = disjunction ? (out.records[0].verdict || out.records[1].verdict)
                              : (out.records[0].verdict && out.records[1].verdict);
    return out;
}

namespace {

void collect(const std::optional<ConditionOutcome>& o, std::vector<ConditionRecord>& into) {
    if (!o) return;
    for (const ConditionRecord& r : o->records) into.push_back(r);
}

std::string fmt_radii(const std::array<double, 2>& radii) {
    return std::to_string(radii[0]) + "," + std::to_string(radii[1]);
}

ShellRegion shell(const std::string& outer_kind, const std::array<double, 2>& outer,
                  const std::string& inner_kind, const std::array<double, 2>& inner) {
    ShellRegion s;
    s.outer_kind = outer_kind;
    s.inner_kind = inner_kind;
    s.outer_radii = outer;
    s.inner_radii = inner;
    s.text = outer_kind + "(" + fmt_radii(outer) + ") \\ closure(" + inner_kind + "(" +
             fmt_radii(inner) + "))";
    return s;
}

} // namespace

CertificateReport conclude(const ProblemSpec& p, const RadiiLadder& ladder,
                           const LadderChecks& checks) {
    ladder.validate();
    const auto [c1, c2] = p.cone_c();
    const std::array<double, 2> c{c1, c2};

    CertificateReport report;
    collect(checks.rho.i1, report.records);
    collect(checks.rho.i0, report.records);
    collect(checks.rho.i0_star, report.records);
    collect(checks.rho.i0_u, report.records);
    collect(checks.rho.i0_u_star, report.records);
    collect(checks.r.i1, report.records);
    collect(checks.r.i0, report.records);
    collect(checks.r.i0_u, report.records);
    collect(checks.s.i1, report.records);
    collect(checks.s.i0, report.records);
    collect(checks.s.i0_u, report.records);
    collect(checks.sigma.i1, report.records);
    collect(checks.sigma.i0, report.records);
    collect(checks.sigma.i0_u, report.records);

    // index-0 slot at a level; the star variants are admissible at the rho
    // position only
    auto idx0_at = [](const LevelChecks& lc, bool allow_star) -> std::optional<std::string> {
        if (lc.i0 && lc.i0->verdict) return lc.i0->id;
        if (lc.i0_u && lc.i0_u->verdict) return lc.i0_u->id;
        if (allow_star) {
            if (lc.i0_star && lc.i0_star->verdict) return lc.i0_star->id;
            if (lc.i0_u_star && lc.i0_u_star->verdict) return lc.i0_u_star->id;
        }
        return std::nullopt;
    };
    auto idx1_at = [](const LevelChecks& lc) -> std::optional<std::string> {
        if (lc.i1 && lc.i1->verdict) return lc.i1->id;
        return std::nullopt;
    };
    auto ordered = [&](const std::array<double, 2>& lo, const std::array<double, 2>& hi,
                       bool over_c, std::string& why) {
        for (int i = 0; i < 2; ++i) {
            const double lhs = over_c ? lo[i] / c[i] : lo[i];
            if (!(lhs < hi[i])) {
                why = "component " + std::to_string(i + 1) + ": " + std::to_string(lhs) +
                      " < " + std::to_string(hi[i]) + " fails";
                return false;
            }
        }
        return true;
    };

    struct Slot {
        bool index0;      // the slot wants an index-0 condition
        bool allow_star;  // star variants admissible (rho position)
        const LevelChecks* level;
        const std::array<double, 2>* radii;
    };
    struct Case {
        std::string id;
        int solutions;
        std::vector<Slot> slots;
        // consecutive orderings: (from, to, over_c)
        std::vector<std::tuple<int, int, bool>> orderings;
    };

    const std::array<double, 2>*ssp = ladder.s ? &*ladder.s : nullptr,
                              *gsp = ladder.sigma ? &*ladder.sigma : nullptr;
    std::vector<Case> cases;
    if (ssp && gsp) {
        cases.push_back({"S5", 3,
                         {{true, true, &checks.rho, &ladder.rho},
                          {false, false, &checks.r, &ladder.r},
                          {true, false, &checks.s, ssp},
                          {false, false, &checks.sigma, gsp}},
                         {{0, 1, true}, {1, 2, false}, {2, 3, true}}});
        cases.push_back({"S6", 3,
                         {{false, false, &checks.rho, &ladder.rho},
                          {true, false, &checks.r, &ladder.r},
                          {false, false, &checks.s, ssp},
                          {true, false, &checks.sigma, gsp}},
                         {{0, 1, false}, {1, 2, true}, {2, 3, false}}});
    }
    if (ssp) {
        cases.push_back({"S3", 2,
                         {{true, true, &checks.rho, &ladder.rho},
                          {false, false, &checks.r, &ladder.r},
                          {true, false, &checks.s, ssp}},
                         {{0, 1, true}, {1, 2, false}}});
        cases.push_back({"S4", 2,
                         {{false, false, &checks.rho, &ladder.rho},
                          {true, false, &checks.r, &ladder.r},
                          {false, false, &checks.s, ssp}},
                         {{0, 1, false}, {1, 2, true}}});
    }
    cases.push_back({"S1", 1,
                     {{true, true, &checks.rho, &ladder.rho},
                      {false, false, &checks.r, &ladder.r}},
                     {{0, 1, true}}});
    cases.push_back({"S2", 1,
                     {{false, false, &checks.rho, &ladder.rho},
                      {true, false, &checks.r, &ladder.r}},
                     {{0, 1, false}}});

    for (const Case& cs : cases) {
        std::vector<std::string> used;
        bool conditions_ok = true;
        for (const Slot& slot : cs.slots) {
            const std::optional<std::string> got =
                slot.index0 ? idx0_at(*slot.level, slot.allow_star) : idx1_at(*slot.level);
            if (!got) {
                conditions_ok = false;
                break;
            }
            used.push_back(*got);
        }
        if (!conditions_ok) continue;

        bool ordering_ok = true;
        std::string why;
        for (const auto& [from, to, over_c] : cs.orderings) {
            if (!ordered(*cs.slots[from].radii, *cs.slots[to].radii, over_c, why)) {
                ordering_ok = false;
                break;
            }
        }
        if (!ordering_ok) {
            report.conclusion.diagnostics.push_back(
                cs.id + ": conditions satisfied but radii ordering violated (" + why + ")");
            continue;
        }

        report.conclusion.case_id = cs.id;
        report.conclusion.solutions = cs.solutions;
        report.conclusion.satisfied_by = used;
        // one solution strictly between each consecutive index pair
        for (std::size_t k = 0; k + 1 < cs.slots.size(); ++k) {
            const bool inner_is_V = cs.slots[k].index0; // index 0 certified on V
            const bool outer_is_V = cs.slots[k + 1].index0;
            report.conclusion.shells.push_back(shell(outer_is_V ? "V" : "K",
                                                     *cs.slots[k + 1].radii,
                                                     inner_is_V ? "V" : "K",
                                                     *cs.slots[k].radii));
        }
        return report;
    }
    report.conclusion.case_id = "inconclusive";
    report.conclusion.solutions = 0;
    return report;
}

} // namespace hamcert
