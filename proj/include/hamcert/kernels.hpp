#pragma once

#include <optional>
#include <vector>

#include "hamcert/common.hpp"
#include "hamcert/expression.hpp"

namespace hamcert {

/// The two Green's functions handled by this library, both on [0,1]^2 with
/// upper bound Phi(s) = 1 - s:
///
///   ThreePoint (u'(0)=0, alpha*u(eta)=u(1), alpha < 0):
///     k(t,s) = (1-s)/(1-alpha) - alpha/(1-alpha)*(eta-s)*[s<=eta] - (t-s)*[s<=t]
///
///   DerivativeFlux (v'(0)=0, v(1)=alpha*v'(xi), 0 < alpha < 1-xi):
///     k(t,s) = (1-s) - alpha*[s<=xi] - (t-s)*[s<=t]
///
/// Both change sign on [0,1]^2 but satisfy |k| <= Phi everywhere and
/// k >= c*Phi for t in the stored interval [a,b] (contained in [0,eta] or
/// [0,xi] respectively). The branch convention at a kink is closed on the
/// left: s <= t and s <= eta/xi.
class KernelSpec {
public:
    enum class Family { ThreePoint, DerivativeFlux };

    /// alpha1 < 0, eta in (0,1). Interval defaults to the optimal [0,b] for
    /// the unit weight.
    static KernelSpec three_point(double alpha1, double eta,
                                  std::optional<Interval> interval = std::nullopt);

    /// 0 < alpha2 < 1 - xi, xi in (0,1). Interval defaults likewise.
    static KernelSpec derivative_flux(double alpha2, double xi,
                                      std::optional<Interval> interval = std::nullopt);

    double eval(double t, double s) const;

    /// Upper bound Phi(s) = 1 - s with |k(t,s)| <= Phi(s) on [0,1]^2.
    double phi_upper(double s) const { return 1.0 - s; }

    /// Interior kink abscissae of s -> k(t,s): the fixed kink (eta or xi)
    /// and s = t, sorted and deduplicated, endpoints excluded.
    std::vector<double> breakpoints(double t) const;

    /// t-independent part: k(t,s) = base(s) - (t-s)*[s<=t].
    double base(double s) const;

    Family family() const { return family_; }
    double alpha() const { return alpha_; }
    /// Position of the fixed kink (eta for ThreePoint, xi for DerivativeFlux).
    double kink() const { return kink_; }
    double cone_c() const { return c_; }
    const Interval& interval() const { return interval_; }
    /// Largest admissible right endpoint for [a,b] (eta or xi).
    double positivity_limit() const { return kink_; }

    /// Copy with a different [a,b] (revalidated).
    KernelSpec with_interval(Interval ab) const;

private:
    KernelSpec(Family family, double alpha, double kink, Interval interval);

    Family family_;
    double alpha_;
    double kink_;
    double c_;
    Interval interval_;
};

/// Closed-form optimal right endpoint of [0,b] for the unit weight; used for
/// the constructor default. The bounds module recomputes this together with
/// the M value.
double default_interval_b(KernelSpec::Family family, double alpha, double kink);

/// A nonnegative weight g(t) on [0,1], stored as an expression over t.
/// Construction samples the expression and rejects negative values.
class WeightFunction {
public:
    static WeightFunction from_expression(Expression expr, int check_samples = 1024);
    static WeightFunction parse(std::string_view src, int check_samples = 1024);
    static WeightFunction one();

    double operator()(double t) const {
        ExprEnv env;
        env.t = t;
        return expr_.eval(env);
    }

    bool is_one() const { return expr_.is_constant_one(); }
    const Expression& expression() const { return expr_; }

private:
    explicit WeightFunction(Expression expr) : expr_(std::move(expr)) {}
    Expression expr_;
};

} // namespace hamcert
