#include "hamcert/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace hamcert {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

} // namespace

double default_interval_b(KernelSpec::Family family, double alpha, double kink) {
    if (family == KernelSpec::Family::ThreePoint)
        return std::min((1.0 - alpha * kink) / (2.0 * (1.0 - alpha)), kink);
    return std::min((1.0 - alpha) / 2.0, kink);
}

KernelSpec::KernelSpec(Family family, double alpha, double kink, Interval interval)
    : family_(family), alpha_(alpha), kink_(kink), interval_(interval) {
    require(kink_ > 0.0 && kink_ < 1.0,
            family_ == Family::ThreePoint ? "kernel k1: eta must lie in (0,1)"
                                          : "kernel k2: xi must lie in (0,1)");
    if (family_ == Family::ThreePoint) {
        require(alpha_ < 0.0, "kernel k1: alpha1 < 0 is required");
        c_ = (1.0 - kink_) / (1.0 - alpha_);
    } else {
        require(alpha_ > 0.0 && alpha_ < 1.0 - kink_,
                "kernel k2: 0 < alpha2 < 1 - xi is required");
        c_ = 1.0 - alpha_ - kink_;
    }
    require(c_ > 0.0 && c_ <= 1.0, "kernel: cone constant c must lie in (0,1]");
    require(interval_.lo >= 0.0 && interval_.lo < interval_.hi,
            "kernel: interval requires 0 <= a < b");
    require(interval_.hi <= kink_ + 1e-15,
            family_ == Family::ThreePoint ? "kernel k1: [a,b] must lie within [0,eta]"
                                          : "kernel k2: [a,b] must lie within [0,xi]");
}

KernelSpec KernelSpec::three_point(double alpha1, double eta,
                                   std::optional<Interval> interval) {
    const Interval ab = interval.value_or(
        Interval{0.0, default_interval_b(Family::ThreePoint, alpha1, eta)});
    return KernelSpec(Family::ThreePoint, alpha1, eta, ab);
}

KernelSpec KernelSpec::derivative_flux(double alpha2, double xi,
                                       std::optional<Interval> interval) {
    const Interval ab = interval.value_or(
        Interval{0.0, default_interval_b(Family::DerivativeFlux, alpha2, xi)});
    return KernelSpec(Family::DerivativeFlux, alpha2, xi, ab);
}

KernelSpec KernelSpec::with_interval(Interval ab) const {
    return KernelSpec(family_, alpha_, kink_, ab);
}

double KernelSpec::base(double s) const {
    if (family_ == Family::ThreePoint) {
        double value = (1.0 - s) / (1.0 - alpha_);
        if (s <= kink_) value -= alpha_ / (1.0 - alpha_) * (kink_ - s);
        return value;
    }
    double value = 1.0 - s;
    if (s <= kink_) value -= alpha_;
    return value;
}

double KernelSpec::eval(double t, double s) const {
    double value = base(s);
    if (s <= t) value -= (t - s);
    return value;
}

std::vector<double> KernelSpec::breakpoints(double t) const {
    std::vector<double> out;
    if (t > 0.0 && t < 1.0) out.push_back(t);
    if (kink_ != t) out.push_back(kink_);
    std::sort(out.begin(), out.end());
    return out;
}

WeightFunction WeightFunction::from_expression(Expression expr, int check_samples) {
    if (expr.uses('u') || expr.uses('v') || expr.uses('r'))
        throw ValidationError("weight: only the variable t is allowed");
    WeightFunction w(std::move(expr));
    for (int i = 0; i <= check_samples; ++i) {
        const double t = static_cast<double>(i) / check_samples;
        if (w(t) < 0.0)
            throw ValidationError("weight: negative value at sampled t = " + std::to_string(t));
    }
    return w;
}

WeightFunction WeightFunction::parse(std::string_view src, int check_samples) {
    return from_expression(Expression::parse(src), check_samples);
}

WeightFunction WeightFunction::one() { return WeightFunction(Expression::constant(1.0)); }

} // namespace hamcert
