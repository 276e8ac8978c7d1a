#include "hamcert/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace hamcert {

namespace {

constexpr double kDegenerate = 1e-300;

// segment endpoints of [lo,hi] split at the kernel kinks and at the exact
// zero crossings of the affine branches of k(t,.)
std::vector<double> sign_resolved_cuts(const KernelSpec& kernel, double t, double lo,
                                       double hi) {
    std::vector<double> cuts{lo, hi};
    for (double x : kernel.breakpoints(t))
        if (x > lo && x < hi) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double kl = kernel.eval(t, cuts[i]);
        const double kh = kernel.eval(t, cuts[i + 1]);
        if (kl * kh < 0.0) {
            // branch is affine in s, so the crossing is exact
            roots.push_back(cuts[i] + kl * (cuts[i + 1] - cuts[i]) / (kl - kh));
        }
    }
    cuts.insert(cuts.end(), roots.begin(), roots.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

} // namespace

double kernel_row_integral(const KernelSpec& kernel, const WeightFunction& g, double t,
                           RowMode mode, double lo, double hi, double tol) {
    if (!(lo <= hi)) throw ValidationError("kernel_row_integral: requires lo <= hi");
    if (lo == hi) return 0.0;
    const std::vector<double> cuts = sign_resolved_cuts(kernel, t, lo, hi);
    const double seg_tol = tol / static_cast<double>(cuts.size());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double sign = kernel.eval(t, 0.5 * (a + b)) < 0.0 ? -1.0 : 1.0;
        double factor = 1.0;
        switch (mode) {
        case RowMode::Plain: factor = 1.0; break;
        case RowMode::Abs: factor = sign; break;
        case RowMode::PositivePart: factor = sign > 0.0 ? 1.0 : 0.0; break;
        case RowMode::NegativePart: factor = sign < 0.0 ? -1.0 : 0.0; break;
        }
        if (factor == 0.0) continue;
        total += integrate([&](double s) { return factor * kernel.eval(t, s) * g(s); }, a, b,
                           {}, seg_tol);
    }
    return total;
}

namespace {

BoundResult invert_scan(const Extremum& ext, double tol) {
    BoundResult r;
    r.value = 1.0 / ext.value;
    r.witness_t = ext.t;
    r.method = BoundResult::Method::Numeric;
    r.estimated_error = tol / (ext.value * ext.value); // first-order propagation
    return r;
}

} // namespace

BoundResult compute_m(const KernelSpec& kernel, const WeightFunction& g, double tol,
                      int grid_n) {
    const Extremum sup = extremize(
        [&](double t) { return kernel_row_integral(kernel, g, t, RowMode::Abs, 0.0, 1.0, tol); },
        ExtremeMode::Sup, 0.0, 1.0, grid_n);
    if (sup.value <= kDegenerate)
        throw NumericError("compute_m: zero denominator (degenerate weight)");
    return invert_scan(sup, tol);
}

BoundResult compute_m_refined(const KernelSpec& kernel, const WeightFunction& g, double tol,
                              int grid_n) {
    const Extremum sup = extremize(
        [&](double t) {
            const double pos =
                kernel_row_integral(kernel, g, t, RowMode::PositivePart, 0.0, 1.0, tol);
            const double neg =
                kernel_row_integral(kernel, g, t, RowMode::NegativePart, 0.0, 1.0, tol);
            return std::max(pos, neg);
        },
        ExtremeMode::Sup, 0.0, 1.0, grid_n);
    if (sup.value <= kDegenerate)
        throw NumericError("compute_m_refined: zero denominator (degenerate weight)");
    return invert_scan(sup, tol);
}

BoundResult compute_M(const KernelSpec& kernel, const WeightFunction& g, double a, double b,
                      double tol, int grid_n) {
    if (!(a >= 0.0 && a < b && b <= kernel.positivity_limit() + 1e-15))
        throw ValidationError("compute_M: [a,b] outside the kernel's positivity interval");
    const Extremum inf = extremize(
        [&](double t) { return kernel_row_integral(kernel, g, t, RowMode::Plain, a, b, tol); },
        ExtremeMode::Inf, a, b, grid_n);
    if (inf.value <= kDegenerate)
        throw NumericError("compute_M: kernel not positive on interval (non-positive infimum)");
    return invert_scan(inf, tol);
}

BoundResult closed_form_m(const KernelSpec& kernel) {
    const double alpha = kernel.alpha();
    BoundResult r;
    r.method = BoundResult::Method::ClosedForm;
    r.estimated_error = 0.0;
    if (kernel.family() == KernelSpec::Family::ThreePoint) {
        const double eta = kernel.kink();
        const double test = -2.0 * alpha * eta * eta + alpha + 1.0;
        double inv_m;
        if (test >= 0.0) {
            inv_m = (eta * eta / 2.0 - alpha * eta * eta + 0.5) / (1.0 - alpha) -
                    eta * eta / 2.0;
            r.witness_t = 0.0;
        } else {
            inv_m = (-alpha + 2.0) / (-2.0 * alpha) + 2.0 / alpha +
                    (-alpha - alpha * alpha * eta * eta + 2.0) / (-2.0 * alpha * (1.0 - alpha));
            r.witness_t = 1.0;
        }
        r.value = 1.0 / inv_m;
    } else {
        const double xi = kernel.kink();
        r.value = 1.0 / (-alpha * xi + 0.5);
        r.witness_t = 0.0;
    }
    return r;
}

OptimalInterval optimal_interval(const KernelSpec& kernel) {
    const double alpha = kernel.alpha();
    const double kink = kernel.kink();
    OptimalInterval out;
    out.method = BoundResult::Method::ClosedForm;
    double b, inv_M;
    if (kernel.family() == KernelSpec::Family::ThreePoint) {
        b = std::min((1.0 - alpha * kink) / (2.0 * (1.0 - alpha)), kink);
        inv_M = ((1.0 - alpha * kink) / (1.0 - alpha) - b) * b;
    } else {
        b = std::min((1.0 - alpha) / 2.0, kink);
        inv_M = (1.0 - alpha) * b - b * b;
    }
    out.ab = {0.0, b};
    out.M = 1.0 / inv_M;
    return out;
}

OptimalInterval optimal_interval_numeric(const KernelSpec& kernel, const WeightFunction& g,
                                         double tol, int grid_n, bool scan_a) {
    // 1/M(a,b), or 0 where the infimum is not positive (such [a,b] cannot win)
    auto inv_M_of = [&](double a, double b) {
        if (b - a <= 0.0) return 0.0;
        const Extremum inf = extremize(
            [&](double t) {
                return kernel_row_integral(kernel, g, t, RowMode::Plain, a, b, tol);
            },
            ExtremeMode::Inf, a, b, grid_n);
        return std::max(inf.value, 0.0);
    };
    const double limit = kernel.positivity_limit();
    double best_a = 0.0;
    Extremum best = extremize([&](double b) { return inv_M_of(0.0, b); }, ExtremeMode::Sup,
                              0.0, limit, grid_n, 1e-8);
    if (scan_a) {
        // coarse oracle over left endpoints; a = 0 is expected to win
        for (int i = 1; i < grid_n; ++i) {
            const double a = limit * i / grid_n;
            const Extremum cand = extremize([&](double b) { return inv_M_of(a, b); },
                                            ExtremeMode::Sup, a, limit, grid_n, 1e-8);
            if (cand.value > best.value) {
                best = cand;
                best_a = a;
            }
        }
    }
    if (best.value <= kDegenerate)
        throw NumericError("optimal_interval_numeric: no interval with positive infimum");
    OptimalInterval out;
    out.ab = {best_a, best.t};
    out.M = 1.0 / best.value;
    out.method = BoundResult::Method::Numeric;
    return out;
}

} // namespace hamcert
