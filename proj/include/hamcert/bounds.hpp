#pragma once

#include "hamcert/kernels.hpp"
#include "hamcert/quadrature.hpp"

namespace hamcert {

/// Integrand selector for a single kernel row s -> k(t,s)g(s) on [lo,hi].
enum class RowMode { Plain, Abs, PositivePart, NegativePart };

/// Integral of the selected row function, split at the kernel kinks and at
/// the zero crossings of k(t,.), which are solved exactly per affine branch.
double kernel_row_integral(const KernelSpec& kernel, const WeightFunction& g, double t,
                           RowMode mode, double lo, double hi, double tol = 1e-10);

struct BoundResult {
    enum class Method { ClosedForm, Numeric };
    double value = 0.0;       // the bound itself (m or M), always > 0
    double witness_t = 0.0;   // extremizer of the underlying scan
    Method method = Method::Numeric;
    double estimated_error = 0.0;
};

/// m with 1/m = sup_{t in [0,1]} int_0^1 |k(t,s)| g(s) ds.
/// Throws NumericError("zero denominator") for degenerate weights.
BoundResult compute_m(const KernelSpec& kernel, const WeightFunction& g,
                      double tol = 1e-10, int grid_n = 128);

/// Refined variant: 1/m = sup_t max{ int k^+ g, int k^- g }; never below
/// compute_m's value.
BoundResult compute_m_refined(const KernelSpec& kernel, const WeightFunction& g,
                              double tol = 1e-10, int grid_n = 128);

/// M with 1/M = inf_{t in [a,b]} int_a^b k(t,s) g(s) ds.
/// Throws NumericError("kernel not positive on interval") when the infimum
/// is not strictly positive.
BoundResult compute_M(const KernelSpec& kernel, const WeightFunction& g, double a,
                      double b, double tol = 1e-10, int grid_n = 128);

/// Closed-form 1/m for the unit weight (theta-polynomial route).
BoundResult closed_form_m(const KernelSpec& kernel);

struct OptimalInterval {
    Interval ab;
    double M = 0.0;
    BoundResult::Method method = BoundResult::Method::ClosedForm;
};

/// Closed-form optimal [0,b] minimizing M for the unit weight.
OptimalInterval optimal_interval(const KernelSpec& kernel);

/// Numeric optimal [0,b] for a general weight: scans b over (0, kink],
/// maximizing 1/M(0,b). The left endpoint stays pinned at 0; scan_a = true
/// additionally brute-scans left endpoints a > 0 (a coarse oracle, off by
/// default since a = 0 is optimal for both kernel families).
OptimalInterval optimal_interval_numeric(const KernelSpec& kernel, const WeightFunction& g,
                                         double tol = 1e-10, int grid_n = 64,
                                         bool scan_a = false);

} // namespace hamcert
