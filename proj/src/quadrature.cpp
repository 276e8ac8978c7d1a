#include "hamcert/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hamcert {

PanelRule PanelRule::build(double a, double b, std::span<const double> breakpoints,
                           int depth) {
    if (!(a <= b)) throw ValidationError("PanelRule: requires a <= b");
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double x : breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    PanelRule rule;
    rule.depth = depth;
    const int pieces = 1 << depth;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double h = (hi - lo) / pieces;
        for (int p = 0; p < pieces; ++p)
            rule.panels.push_back({lo + p * h, (p + 1 == pieces) ? hi : lo + (p + 1) * h});
    }
    return rule;
}

double PanelRule::apply(const std::function<double(double)>& f) const {
    double total = 0.0;
    for (const Interval& p : panels) {
        const double mid = 0.5 * (p.lo + p.hi);
        const double half = 0.5 * (p.hi - p.lo);
        double acc = 0.0;
        for (int q = 0; q < 8; ++q) acc += gl8::weights[q] * f(mid + half * gl8::nodes[q]);
        total += half * acc;
    }
    return total;
}

void PanelRule::nodes_weights(std::vector<double>& nodes, std::vector<double>& weights) const {
    nodes.clear();
    weights.clear();
    for (const Interval& p : panels) {
        const double mid = 0.5 * (p.lo + p.hi);
        const double half = 0.5 * (p.hi - p.lo);
        for (int q = 0; q < 8; ++q) {
            nodes.push_back(mid + half * gl8::nodes[q]);
            weights.push_back(half * gl8::weights[q]);
        }
    }
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints, double tol, int max_depth) {
    if (!(a <= b)) throw ValidationError("integrate: requires a <= b");
    if (a == b) return 0.0;
    double prev = PanelRule::build(a, b, breakpoints, 0).apply(f);
    for (int depth = 1; depth <= max_depth; ++depth) {
        const double cur = PanelRule::build(a, b, breakpoints, depth).apply(f);
        const double err = std::abs(cur - prev);
        if (err <= tol) return cur;
        prev = cur;
    }
    throw QuadratureError("integrate: refinement did not converge", prev, tol);
}

namespace {

// golden-section step inside [lo, hi]; better(a, b) is a strict comparison
void golden_refine(const std::function<double(double)>& g, bool maximize, double lo,
                   double hi, double refine_tol, Extremum& best) {
    constexpr double invphi = 0.6180339887498949;
    auto better = [&](double a, double b) { return maximize ? a > b : a < b; };
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    while (hi - lo > refine_tol) {
        if (better(f1, f2)) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = g(x2);
        }
        const double xc = better(f1, f2) ? x1 : x2;
        const double fc = better(f1, f2) ? f1 : f2;
        if (better(fc, best.value)) best = {xc, fc};
    }
}

} // namespace

Extremum extremize(const std::function<double(double)>& g, ExtremeMode mode, double a,
                   double b, int grid_n, double refine_tol) {
    if (!(a <= b)) throw ValidationError("extremize: requires a <= b");
    if (grid_n < 16) throw ValidationError("extremize: grid_n must be >= 16");
    const bool maximize = (mode == ExtremeMode::Sup);
    auto better = [&](double x, double y) { return maximize ? x > y : x < y; };

    Extremum best{a, g(a)};
    int best_idx = 0;
    for (int i = 1; i <= grid_n; ++i) {
        const double x = a + (b - a) * i / grid_n;
        const double fx = g(x);
        if (better(fx, best.value)) {
            best = {x, fx};
            best_idx = i;
        }
    }
    if (a == b) return best;
    const double lo = a + (b - a) * std::max(0, best_idx - 1) / grid_n;
    const double hi = a + (b - a) * std::min(grid_n, best_idx + 1) / grid_n;
    golden_refine(g, maximize, lo, hi, refine_tol, best);
    return best;
}

} // namespace hamcert
