#include "hamcert/radial.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "hamcert/interp.hpp"

namespace hamcert {

namespace {

std::string fmt(double x) {
    std::array<char, 48> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

} // namespace

void AnnulusSpec::validate() const {
    if (n < 2) throw ValidationError("annulus: space dimension n must be >= 2");
    if (!(R1 > 0.0 && R1 < R0)) throw ValidationError("annulus: requires 0 < R1 < R0");
    if (!(R_eta > R1 && R_eta < R0))
        throw ValidationError("annulus: R_eta must lie in (R1, R0)");
    if (!(R_xi > R1 && R_xi < R0))
        throw ValidationError("annulus: R_xi must lie in (R1, R0)");
    if (!(alpha1 < 0.0)) throw ValidationError("annulus: alpha1 < 0 is required");
    if (h1.uses('t') || h1.uses('u') || h1.uses('v') || h2.uses('t') || h2.uses('u') ||
        h2.uses('v'))
        throw ValidationError("annulus: h_i may only use the variable r");
}

RadialSubstitution::RadialSubstitution(int n, double R1, double R0, PhiMode mode)
    : n_(n), R1_(R1), R0_(R0), mode_(mode) {
    if (n < 2) throw ValidationError("radial substitution: n must be >= 2");
    if (!(R1 > 0.0 && R1 < R0))
        throw ValidationError("radial substitution: requires 0 < R1 < R0");
    if (n_ >= 3) {
        gamma_ = std::pow(R0_, -(n_ - 2.0));
        beta_ = std::pow(R1_, -(n_ - 2.0));
    }
}

double RadialSubstitution::r(double t) const {
    if (n_ == 2) return std::pow(R0_, 1.0 - t) * std::pow(R1_, t);
    return std::pow(gamma_ + (beta_ - gamma_) * t, -1.0 / (n_ - 2.0));
}

double RadialSubstitution::phi(double t) const {
    if (n_ == 2) {
        const double L = std::log(R0_ / R1_);
        if (mode_ == PhiMode::PaperPrinted) {
            const double rt = R0_ * (1.0 - t) * L;
            return rt * rt;
        }
        const double rt = r(t);
        return L * L * rt * rt;
    }
    const double c = (beta_ - gamma_) / (n_ - 2.0);
    return c * c * std::pow(gamma_ + (beta_ - gamma_) * t, -2.0 * (n_ - 1.0) / (n_ - 2.0));
}

double RadialSubstitution::t_of_r(double radius) const {
    if (radius >= R0_) return 0.0;
    if (radius <= R1_) return 1.0;
    double lo = 0.0, hi = 1.0; // r is strictly decreasing: r(lo) >= radius >= r(hi)
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        if (r(mid) >= radius)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Expression RadialSubstitution::r_expression() const {
    if (n_ == 2)
        return Expression::parse(fmt(R0_) + "^(1 - t)*" + fmt(R1_) + "^t");
    return Expression::parse("(" + fmt(gamma_) + " + " + fmt(beta_ - gamma_) + "*t)^(" +
                             fmt(-1.0 / (n_ - 2.0)) + ")");
}

Expression RadialSubstitution::phi_expression() const {
    if (n_ == 2) {
        const double L = std::log(R0_ / R1_);
        if (mode_ == PhiMode::PaperPrinted)
            return Expression::parse(fmt(R0_ * R0_ * L * L) + "*(1 - t)^2");
        return Expression::parse(fmt(L * L) + "*(" + r_expression().str() + ")^2");
    }
    const double c = (beta_ - gamma_) / (n_ - 2.0);
    return Expression::parse(fmt(c * c) + "*(" + fmt(gamma_) + " + " + fmt(beta_ - gamma_) +
                             "*t)^(" + fmt(-2.0 * (n_ - 1.0) / (n_ - 2.0)) + ")");
}

ReducedWeights build_weights(const AnnulusSpec& annulus, PhiMode mode) {
    annulus.validate();
    const RadialSubstitution sub(annulus.n, annulus.R1, annulus.R0, mode);
    const Expression r_expr = sub.r_expression();
    const Expression phi_expr = sub.phi_expression();
    auto weight_for = [&](const Expression& h) {
        const Expression h_of_t = h.substitute('r', r_expr);
        return WeightFunction::from_expression(
            Expression::parse("(" + phi_expr.str() + ")*(" + h_of_t.str() + ")"));
    };
    ReducedWeights out{weight_for(annulus.h1), weight_for(annulus.h2)};
    out.eta = sub.t_of_r(annulus.R_eta);
    out.xi = sub.t_of_r(annulus.R_xi);
    out.alpha1 = annulus.alpha1;
    out.alpha2 = annulus.alpha2;
    return out;
}

std::vector<std::pair<double, double>> pull_back(std::span<const double> nodes,
                                                 std::span<const double> values,
                                                 const RadialSubstitution& sub, int samples) {
    if (samples < 2) throw ValidationError("pull_back: samples must be >= 2");
    if (nodes.size() != values.size() || nodes.empty())
        throw ValidationError("pull_back: inconsistent grid function");
    const double R1 = sub.r(1.0), R0 = sub.r(0.0);
    std::vector<std::pair<double, double>> table;
    table.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        const double radius = R1 + (R0 - R1) * k / (samples - 1);
        const double t = sub.t_of_r(radius);
        table.emplace_back(radius, cubic_interp(nodes, values, t));
    }
    return table;
}

} // namespace hamcert
