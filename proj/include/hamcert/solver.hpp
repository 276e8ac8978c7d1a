#pragma once

#include <span>
#include <string>
#include <vector>

#include "hamcert/certificates.hpp"

namespace hamcert {

/// A pair (u, v) sampled on a shared node grid on [0,1].
struct GridFunctionPair {
    std::vector<double> nodes;
    std::vector<double> u, v;

    double sup_u() const;
    double sup_v() const;
    /// sup-norm distance max(||u-u'||, ||v-v'||); grids must match.
    double distance(const GridFunctionPair& other) const;
};

/// Nystrom collocation of the integral operator T on a uniform node grid.
///
/// Both kernels have the form k(t,s) = base(s) - (t-s)[s<=t], so
///   (T_i x)(t) = int base_i F_i  -  t int_0^t F_i  +  int_0^t s F_i(s) ds,
/// with F_i(s) = g_i(s) f_i(s, u(s), v(s)). The cumulative integrals are
/// accumulated per node interval with Gauss-Legendre panels split at the
/// kernel kinks and at the sign changes of the current iterate (where the
/// nonlinearities may lose smoothness); u and v are interpolated at the
/// quadrature points by a piecewise-cubic rule.
class HammersteinOperator {
public:
    HammersteinOperator(ProblemSpec p, int n_nodes = 65);

    const ProblemSpec& problem() const { return problem_; }
    std::span<const double> nodes() const { return nodes_; }
    int size() const { return static_cast<int>(nodes_.size()); }

    GridFunctionPair constant(double cu, double cv) const;

    /// T applied to x. Expression domain failures are rethrown with the
    /// offending quadrature abscissa.
    GridFunctionPair apply(const GridFunctionPair& x) const;

    /// || x - T x ||_inf over both components.
    double residual_sup(const GridFunctionPair& x) const;

    /// Residual of x re-discretized on a grid of doubled resolution.
    double residual_on_refined(const GridFunctionPair& x) const;

private:
    ProblemSpec problem_;
    std::vector<double> nodes_;
};

struct PicardOptions {
    double damping = 1.0; // in (0, 1]
    double tol = 1e-12;
    int max_iter = 400;
};

struct PicardOutcome {
    GridFunctionPair x;
    int iterations = 0;
    bool converged = false;
    double last_step = 0.0;
    double residual = 0.0;
};

/// x <- (1-damping) x + damping T(x) until the sup-norm step drops below tol.
PicardOutcome solve_picard(const HammersteinOperator& T, GridFunctionPair x0,
                           const PicardOptions& opts = {});

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 40;
    double fd_step = 1e-7; // scaled by 1 + ||x||
};

struct NewtonOutcome {
    GridFunctionPair x;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
    std::string failure; // set when not converged
};

/// Newton on x - T(x) = 0 with a forward finite-difference Jacobian.
/// Fails on a singular Jacobian or five steps without residual decrease.
NewtonOutcome solve_newton(const HammersteinOperator& T, GridFunctionPair x0,
                           const NewtonOptions& opts = {});

struct MultistartOptions {
    int starts_per_shell = 3;
    double dedupe_tol = 1e-4;         // relative to the larger norm
    double residual_threshold = 1e-8; // acceptance for a returned solution
    double trivial_tol = 1e-8;        // sup-norm below this counts as trivial
    PicardOptions picard{1.0, 1e-12, 200};
    NewtonOptions newton{};
};

struct MultistartResult {
    std::vector<GridFunctionPair> solutions; // distinct nontrivial, sorted by norm
    bool trivial_found = false;
    int starts = 0;
};

/// Constant-pair seeds at shell-informed magnitudes, each run through Picard
/// followed by Newton (and Newton from the raw seed, which reaches fixed
/// points that repel the Picard iteration), deduplicated by sup-norm
/// distance.
MultistartResult multistart(const HammersteinOperator& T, const RadiiLadder& ladder,
                            const MultistartOptions& opts = {});

struct ShellMembership {
    std::string level;  // "rho", "r", "s", "sigma"
    bool in_K = false;  // ||u|| < rho1 and ||v|| < rho2
    bool in_V = false;  // min_[a1,b1] u < rho1 and min_[a2,b2] v < rho2
    bool on_V_boundary = false;
};

struct Localization {
    double norm_u = 0.0, norm_v = 0.0;
    double min_u_ab = 0.0, min_v_ab = 0.0;
    double cone_slack_u = 0.0, cone_slack_v = 0.0; // min - c * norm
    bool u_changes_sign = false, v_changes_sign = false;
    std::vector<ShellMembership> shells;
    std::string label; // innermost region description
};

/// Norms, interval minima, cone slacks and ladder-shell membership of a
/// solved pair. Cone constants and intervals are passed explicitly.
Localization localize(const GridFunctionPair& x, const RadiiLadder& ladder,
                      const std::array<double, 2>& cone_c, const Interval& ab1,
                      const Interval& ab2, double boundary_tol = 1e-9);

} // namespace hamcert
