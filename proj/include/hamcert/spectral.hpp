#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hamcert/bounds.hpp"
#include "hamcert/kernels.hpp"

namespace hamcert {

enum class KernelMode { Abs, PositivePart };

/// Quadrature discretization of a linear integral operator with nonnegative
/// kernel: A[i][j] = kappa(t_i, t_j) * w_j on composite Gauss-Legendre nodes
/// split at the kernel's fixed kinks.
///
/// The matrix alone converges slowly for kernels with a kink along s = t, so
/// each row also carries its consistency defect
///
///     d_i = int kappa(t_i, s) ds  -  sum_j A[i][j],
///
/// the row integrals being computed by breakpoint-and-crossing-exact
/// quadrature. apply_operator() evaluates A*x + d.*x, which integrates
/// constants exactly and restores fast spectral convergence; apply() is the
/// bare matrix product.
class NystromMatrix {
public:
    /// kappa already includes the weight: |k|*g or k^+*g.
    static NystromMatrix build(const KernelSpec& kernel, const WeightFunction& g,
                               KernelMode mode, Interval domain, int n_requested,
                               double row_tol = 1e-12);

    /// Generic builder for test kernels; `row_integral`, when supplied,
    /// provides the exact row integrals for the consistency defects
    /// (otherwise they are computed by adaptive quadrature split at s = t_i
    /// and the given breakpoints).
    static NystromMatrix build_generic(
        const std::function<double(double, double)>& kappa, Interval domain, int n_requested,
        std::span<const double> breakpoints = {},
        const std::function<double(double)>& row_integral = nullptr, double row_tol = 1e-10);

    /// Bare matrix from raw data (no consistency defects).
    static NystromMatrix from_raw(std::vector<double> nodes, std::vector<double> weights,
                                  std::vector<double> matrix_row_major);

    int size() const { return n_; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    std::span<const double> row_defects() const { return defects_; }
    double entry(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Interval& domain() const { return domain_; }

    /// y = A * x.
    void apply(std::span<const double> x, std::span<double> y) const;
    /// y = A * x + d .* x (the consistency-corrected operator application).
    void apply_operator(std::span<const double> x, std::span<double> y) const;

private:
    int n_ = 0;
    std::vector<double> nodes_, weights_, a_, defects_;
    Interval domain_{0.0, 1.0};
};

struct SpectralResult {
    double r = 0.0;              // spectral radius estimate
    double mu = 0.0;             // principal characteristic value 1/r
    bool mu_defined = false;     // false when r collapsed to 0
    std::vector<double> eigvec;  // sup-norm normalized
    int iterations = 0;
    int n = 0;
};

/// Power iteration from the all-ones vector with sup-norm normalization,
/// applied to the consistency-corrected operator. Converges when successive
/// quotients and the eigen-residual drop below tol. r below 1e-14 is
/// reported as 0 with mu undefined.
SpectralResult spectral_radius(const NystromMatrix& A, double tol = 1e-12,
                               int max_iter = 5000);

/// Collatz-Wielandt certificate: true iff lambda*w >= (operator apply of w)
/// componentwise within tol, for w >= 0, w != 0. True certifies that the
/// discrete operator's spectral radius is at most lambda.
bool collatz_upper_bound(const NystromMatrix& A, std::span<const double> w, double lambda,
                         double tol = 1e-12);

struct ResolventComponent {
    const NystromMatrix* A = nullptr;
    double mu = 0.0; // principal characteristic value of A
    double C = 0.0;  // constant right-hand side
};

/// R0 = max_i || (I - (mu_i - eps) A_i)^{-1} (C_i * ones) ||_inf via direct
/// solve. Requires (mu_i - eps) r(A_i) < 1; the solutions are checked to be
/// nonnegative (resolvent positivity).
double resolvent_bound_r0(const std::vector<ResolventComponent>& components, double eps);

/// C = int Phi(s) g(s) phi_cap(s) ds evaluated with the matrix's own rule;
/// phi_cap holds node values.
double caratheodory_constant(const NystromMatrix& A, const KernelSpec& kernel,
                             const WeightFunction& g, std::span<const double> phi_cap);

} // namespace hamcert
