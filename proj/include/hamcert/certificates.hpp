#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hamcert/expression.hpp"
#include "hamcert/kernels.hpp"
#include "hamcert/quadrature.hpp"

namespace hamcert {

/// The full two-component system: kernels with their cone data, weights and
/// nonnegative nonlinearities f_i(t,u,v).
struct ProblemSpec {
    KernelSpec k1, k2;
    WeightFunction g1, g2;
    Expression f1, f2;

    std::array<double, 2> cone_c() const { return {k1.cone_c(), k2.cone_c()}; }
};

/// Radii levels rho < r < s < sigma (the orderings actually required depend
/// on the case being invoked and are checked there).
struct RadiiLadder {
    std::array<double, 2> rho{0.0, 0.0};
    std::array<double, 2> r{0.0, 0.0};
    std::optional<std::array<double, 2>> s;
    std::optional<std::array<double, 2>> sigma;

    void validate() const;
};

/// One sampled inequality: extremum vs threshold with its margin.
struct ConditionRecord {
    std::string id;
    double computed = 0.0;
    double threshold = 0.0;
    double margin = 0.0;
    int density = 0;
    bool verdict = false;
    std::array<double, 3> witness{0.0, 0.0, 0.0};
    std::string note;
};

/// A named condition built from one or two component records.
struct ConditionOutcome {
    std::string id;
    bool verdict = false;
    std::vector<ConditionRecord> records;
};

struct CheckOptions {
    int density = 64;          // grid subintervals per axis (density+1 points)
    double strictness = 1e-12; // minimum margin for a true verdict
};

struct BoxExtremum {
    double value = 0.0;
    std::array<double, 3> point{0.0, 0.0, 0.0};
};

/// Deterministic tensor-grid extremum of f over the box, with one local
/// refinement pass around the best cell. Axes the expression does not read
/// are collapsed to their left endpoint. Throws ValidationError if f
/// evaluates negative anywhere sampled.
BoxExtremum box_extremum(const Expression& f, Interval t_range, Interval u_range,
                         Interval v_range, ExtremeMode mode, int density);

/// sup f_i / rho_i < m_i on [0,1] x [-rho1,rho1] x [-rho2,rho2], both i.
ConditionOutcome check_I1(const ProblemSpec& p, double rho1, double rho2, double m1,
                          double m2, const CheckOptions& opts = {},
                          const std::string& label = {});

/// inf f_i / rho_i > M_i with the own-component range starting at rho_i, both i.
ConditionOutcome check_I0(const ProblemSpec& p, double rho1, double rho2, double M1,
                          double M2, const CheckOptions& opts = {},
                          const std::string& label = {});

/// Starred variant: enlarged boxes (u from 0), some i suffices.
ConditionOutcome check_I0_star(const ProblemSpec& p, double rho1, double rho2, double M1,
                               double M2, const CheckOptions& opts = {},
                               const std::string& label = {});

/// Underlined variants, requiring [a1,b1] = [a2,b2]: the off-component range
/// starts at 0. star=false: both i; star=true: some i.
ConditionOutcome check_I0_underline(const ProblemSpec& p, double rho1, double rho2,
                                    double M1, double M2, bool star,
                                    const CheckOptions& opts = {},
                                    const std::string& label = {});

enum class NonexistenceVerdict { Cond1, Cond2, Mixed, None };

struct NonexistenceResult {
    NonexistenceVerdict verdict = NonexistenceVerdict::None;
    std::vector<ConditionRecord> records;
    double cap = 0.0;
};

/// Classifies which sublinear/superlinear non-existence condition holds on
/// the sampled box |u_i| <= cap; a bounded-region certificate only.
NonexistenceResult check_nonexistence(const ProblemSpec& p, double m1, double m2, double M1,
                                      double M2, double cap, const CheckOptions& opts = {});

enum class EigenCondition { I0_0plus, I0_inf, I1_0plus, I1_inf };

/// Eigenvalue comparison conditions against the principal characteristic
/// values mu_i (of L_i^+ for the I0 variants, of L_i for the I1 variants).
/// eps <= 0 requests the automatic choice: half the largest admissible
/// epsilon observed on the samples. For the _inf variants the unbounded
/// range is sampled up to cap and the cap is recorded.
ConditionOutcome check_eigen_condition(const ProblemSpec& p, EigenCondition which,
                                       double mu1, double mu2, double eps,
                                       double rho0_or_R1, double cap,
                                       const CheckOptions& opts = {});

/// Per-level outcomes available to the concluder.
struct LevelChecks {
    std::optional<ConditionOutcome> i1, i0, i0_star, i0_u, i0_u_star;
};

struct LadderChecks {
    LevelChecks rho, r, s, sigma;
};

struct ShellRegion {
    std::string text; // e.g. "K(r1,r2) \ closure(V(rho1,rho2))"
    std::string outer_kind, inner_kind;
    std::array<double, 2> outer_radii{}, inner_radii{};
};

struct Conclusion {
    std::string case_id = "inconclusive"; // S1..S6, nonexistence, inconclusive
    int solutions = 0;
    std::vector<ShellRegion> shells;
    std::vector<std::string> satisfied_by; // which outcome filled each slot
    std::vector<std::string> diagnostics;
};

struct CertificateReport {
    std::vector<ConditionRecord> records;
    Conclusion conclusion;
};

/// Matches the available condition outcomes and the radii orderings against
/// the multiplicity cases (three, two, then one solution), never concluding
/// without every required verdict and strict ordering. Cases whose
/// conditions hold but whose ordering fails are reported in diagnostics.
CertificateReport conclude(const ProblemSpec& p, const RadiiLadder& ladder,
                           const LadderChecks& checks);

} // namespace hamcert
