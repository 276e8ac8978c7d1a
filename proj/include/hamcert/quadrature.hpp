#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "hamcert/common.hpp"

namespace hamcert {

/// Non-convergence of the panel refinement, carrying the best estimate.
class QuadratureError : public NumericError {
public:
    QuadratureError(const std::string& msg, double best, double achieved)
        : NumericError(msg), best_estimate(best), achieved_error(achieved) {}
    double best_estimate;
    double achieved_error;
};

namespace gl8 {
// 8-point Gauss-Legendre on [-1, 1]; exact through degree 15.
inline constexpr std::array<double, 8> nodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
inline constexpr std::array<double, 8> weights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
} // namespace gl8

/// Composite Gauss-Legendre rule: the base panels tile [a, b] exactly and are
/// split at the supplied breakpoints; `depth` halves every panel that many
/// times.
struct PanelRule {
    std::vector<Interval> panels;
    int depth = 0;

    static PanelRule build(double a, double b, std::span<const double> breakpoints,
                           int depth = 0);

    /// Applies the rule to f. Deterministic left-to-right summation.
    double apply(const std::function<double(double)>& f) const;

    /// Materialized nodes/weights of the rule, panel by panel.
    void nodes_weights(std::vector<double>& nodes, std::vector<double>& weights) const;
};

/// Integral of f over [a, b] with panels split at the breakpoints, refined by
/// depth doubling until two successive refinements differ by at most tol.
/// Throws QuadratureError when max_depth is reached without convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breakpoints = {}, double tol = 1e-10,
                 int max_depth = 14);

enum class ExtremeMode { Sup, Inf };

struct Extremum {
    double t = 0.0;
    double value = 0.0;
};

/// Coarse grid scan (grid_n intervals, endpoints included) followed by
/// golden-section refinement around the best bracket. Ties break to the
/// leftmost point; deterministic for fixed inputs.
Extremum extremize(const std::function<double(double)>& g, ExtremeMode mode, double a,
                   double b, int grid_n = 128, double refine_tol = 1e-9);

} // namespace hamcert
