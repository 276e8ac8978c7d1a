#include "hamcert/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

#include "hamcert/interp.hpp"
#include "hamcert/quadrature.hpp"

namespace hamcert {

double GridFunctionPair::sup_u() const {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
}

double GridFunctionPair::sup_v() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double GridFunctionPair::distance(const GridFunctionPair& other) const {
    if (nodes.size() != other.nodes.size())
        throw ValidationError("GridFunctionPair::distance: grid mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        d = std::max(d, std::abs(u[i] - other.u[i]));
        d = std::max(d, std::abs(v[i] - other.v[i]));
    }
    return d;
}

HammersteinOperator::HammersteinOperator(ProblemSpec p, int n_nodes)
    : problem_(std::move(p)) {
    if (n_nodes < 5) throw ValidationError("HammersteinOperator: need at least 5 nodes");
    nodes_.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) nodes_[i] = static_cast<double>(i) / (n_nodes - 1);
}

GridFunctionPair HammersteinOperator::constant(double cu, double cv) const {
    GridFunctionPair x;
    x.nodes = nodes_;
    x.u.assign(nodes_.size(), cu);
    x.v.assign(nodes_.size(), cv);
    return x;
}

namespace {

// sign-change abscissae of the piecewise-cubic interpolant, located by
// bisection between nodes of opposite sign
std::vector<double> sign_crossings(std::span<const double> nodes,
                                   std::span<const double> vals) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (vals[i] == 0.0 || vals[i] * vals[i + 1] >= 0.0) continue;
        double lo = nodes[i], hi = nodes[i + 1];
        double flo = vals[i];
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = cubic_interp(nodes, vals, mid);
            if (flo * fm <= 0.0)
                hi = mid;
            else {
                lo = mid;
                flo = fm;
            }
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;
}

} // namespace

GridFunctionPair HammersteinOperator::apply(const GridFunctionPair& x) const {
    const ProblemSpec& p = problem_;
    const int n = size();
    if (static_cast<int>(x.nodes.size()) != n)
        throw ValidationError("apply_T: iterate is not on the solver grid");

    // shared panel splits: kernel kinks plus sign changes of the iterate
    std::set<double> splits{p.k1.kink(), p.k2.kink()};
    for (double z : sign_crossings(x.nodes, x.u)) splits.insert(z);
    for (double z : sign_crossings(x.nodes, x.v)) splits.insert(z);

    std::vector<double> IF1(n - 1, 0.0), Is1(n - 1, 0.0), IF2(n - 1, 0.0), Is2(n - 1, 0.0);
    double IA1 = 0.0, IA2 = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        std::vector<double> cuts{nodes_[i], nodes_[i + 1]};
        for (double z : splits)
            if (z > nodes_[i] && z < nodes_[i + 1]) cuts.push_back(z);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
            const double half = 0.5 * (cuts[c + 1] - cuts[c]);
            for (int q = 0; q < 8; ++q) {
                const double s = mid + half * gl8::nodes[q];
                const double w = half * gl8::weights[q];
                ExprEnv env;
                env.t = s;
                env.u = cubic_interp(x.nodes, x.u, s);
                env.v = cubic_interp(x.nodes, x.v, s);
                double F1, F2;
                try {
                    F1 = p.g1(s) * p.f1.eval(env);
                    F2 = p.g2(s) * p.f2.eval(env);
                } catch (const ExprDomainError& e) {
                    throw NumericError(std::string("apply_T: nonlinearity failed at s = ") +
                                       std::to_string(s) + ": " + e.what());
                }
                IF1[i] += w * F1;
                Is1[i] += w * s * F1;
                IF2[i] += w * F2;
                Is2[i] += w * s * F2;
                IA1 += w * p.k1.base(s) * F1;
                IA2 += w * p.k2.base(s) * F2;
            }
        }
    }

    GridFunctionPair out;
    out.nodes = nodes_;
    out.u.resize(n);
    out.v.resize(n);
    double G1 = 0.0, H1 = 0.0, G2 = 0.0, H2 = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i > 0) {
            G1 += IF1[i - 1];
            H1 += Is1[i - 1];
            G2 += IF2[i - 1];
            H2 += Is2[i - 1];
        }
        out.u[i] = IA1 - nodes_[i] * G1 + H1;
        out.v[i] = IA2 - nodes_[i] * G2 + H2;
    }
    return out;
}

double HammersteinOperator::residual_sup(const GridFunctionPair& x) const {
    const GridFunctionPair tx = apply(x);
    double r = 0.0;
    for (std::size_t i = 0; i < x.u.size(); ++i) {
        r = std::max(r, std::abs(x.u[i] - tx.u[i]));
        r = std::max(r, std::abs(x.v[i] - tx.v[i]));
    }
    return r;
}

double HammersteinOperator::residual_on_refined(const GridFunctionPair& x) const {
    const int fine_n = 2 * size() - 1;
    HammersteinOperator fine(problem_, fine_n);
    GridFunctionPair xf;
    xf.nodes.assign(fine.nodes().begin(), fine.nodes().end());
    xf.u.resize(fine_n);
    xf.v.resize(fine_n);
    for (int i = 0; i < fine_n; ++i) {
        xf.u[i] = cubic_interp(x.nodes, x.u, xf.nodes[i]);
        xf.v[i] = cubic_interp(x.nodes, x.v, xf.nodes[i]);
    }
    return fine.residual_sup(xf);
}

PicardOutcome solve_picard(const HammersteinOperator& T, GridFunctionPair x0,
                           const PicardOptions& opts) {
    if (!(opts.damping > 0.0 && opts.damping <= 1.0))
        throw ValidationError("solve_picard: damping must lie in (0,1]");
    PicardOutcome out;
    out.x = std::move(x0);
    const int n = T.size();
    for (int it = 1; it <= opts.max_iter; ++it) {
        GridFunctionPair tx = T.apply(out.x);
        double step = 0.0;
        for (int i = 0; i < n; ++i) {
            const double nu = (1.0 - opts.damping) * out.x.u[i] + opts.damping * tx.u[i];
            const double nv = (1.0 - opts.damping) * out.x.v[i] + opts.damping * tx.v[i];
            step = std::max(step, std::abs(nu - out.x.u[i]));
            step = std::max(step, std::abs(nv - out.x.v[i]));
            out.x.u[i] = nu;
            out.x.v[i] = nv;
        }
        out.iterations = it;
        out.last_step = step;
        if (!std::isfinite(step)) break; // diverged
        if (step <= opts.tol) {
            out.converged = true;
            break;
        }
    }
    out.residual = std::isfinite(out.last_step) ? T.residual_sup(out.x)
                                                : std::numeric_limits<double>::infinity();
    return out;
}

NewtonOutcome solve_newton(const HammersteinOperator& T, GridFunctionPair x0,
                           const NewtonOptions& opts) {
    NewtonOutcome out;
    out.x = std::move(x0);
    const int n = T.size();
    const int dim = 2 * n;
    Eigen::VectorXd x(dim);
    for (int i = 0; i < n; ++i) {
        x(i) = out.x.u[i];
        x(n + i) = out.x.v[i];
    }
    auto to_pair = [&](const Eigen::VectorXd& vec) {
        GridFunctionPair gp;
        gp.nodes.assign(T.nodes().begin(), T.nodes().end());
        gp.u.assign(vec.data(), vec.data() + n);
        gp.v.assign(vec.data() + n, vec.data() + dim);
        return gp;
    };
    auto res_of = [&](const Eigen::VectorXd& vec) -> Eigen::VectorXd {
        const GridFunctionPair tx = T.apply(to_pair(vec));
        Eigen::VectorXd r(dim);
        for (int i = 0; i < n; ++i) {
            r(i) = vec(i) - tx.u[i];
            r(n + i) = vec(n + i) - tx.v[i];
        }
        return r;
    };

    int bad_steps = 0;
    double prev_norm = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts.max_iter; ++it) {
        Eigen::VectorXd R = res_of(x);
        const double rnorm = R.lpNorm<Eigen::Infinity>();
        out.iterations = it;
        out.residual = rnorm;
        if (!std::isfinite(rnorm)) {
            out.failure = "residual not finite";
            out.x = to_pair(x);
            return out;
        }
        if (rnorm <= opts.tol) {
            out.converged = true;
            out.x = to_pair(x);
            return out;
        }
        if (rnorm >= prev_norm) {
            if (++bad_steps >= 5) {
                out.failure = "residual not decreasing over 5 steps";
                out.x = to_pair(x);
                return out;
            }
        } else {
            bad_steps = 0;
        }
        prev_norm = rnorm;

        const double h = opts.fd_step * (1.0 + x.lpNorm<Eigen::Infinity>());
        Eigen::MatrixXd J(dim, dim);
        for (int j = 0; j < dim; ++j) {
            Eigen::VectorXd xp = x;
            xp(j) += h;
            J.col(j) = (res_of(xp) - R) / h;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible()) {
            out.failure = "singular Jacobian (rcond ~ " +
                          std::to_string(lu.rcond()) + ")";
            out.x = to_pair(x);
            return out;
        }
        const Eigen::VectorXd dx = lu.solve(R);
        if (!dx.allFinite() || dx.lpNorm<Eigen::Infinity>() > 1e8) {
            out.failure = "step not finite";
            out.x = to_pair(x);
            return out;
        }
        x -= dx;
    }
    out.failure = "max_iter reached";
    out.x = to_pair(x);
    return out;
}

namespace {

std::vector<double> shell_magnitudes(double lo, double hi, int count) {
    // magnitudes strictly inside (lo, hi); if the gap is inverted, probe the
    // sorted midrange instead
    if (hi < lo) std::swap(lo, hi);
    std::vector<double> out;
    for (int k = 1; k <= count; ++k)
        out.push_back(lo + (hi - lo) * k / (count + 1));
    return out;
}

} // namespace

MultistartResult multistart(const HammersteinOperator& T, const RadiiLadder& ladder,
                            const MultistartOptions& opts) {
    ladder.validate();
    const ProblemSpec& p = T.problem();
    const auto [c1, c2] = p.cone_c();

    std::vector<std::array<double, 2>> seeds;
    seeds.push_back({0.5 * ladder.rho[0], 0.5 * ladder.rho[1]});
    auto add_gap = [&](const std::array<double, 2>& inner_over_c,
                       const std::array<double, 2>& outer) {
        const auto mags1 = shell_magnitudes(inner_over_c[0], outer[0], opts.starts_per_shell);
        const auto mags2 = shell_magnitudes(inner_over_c[1], outer[1], opts.starts_per_shell);
        for (std::size_t k = 0; k < mags1.size(); ++k) seeds.push_back({mags1[k], mags2[k]});
    };
    add_gap({ladder.rho[0] / c1, ladder.rho[1] / c2}, ladder.r);
    if (ladder.s) add_gap(ladder.r, *ladder.s);
    if (ladder.sigma) add_gap(*ladder.s, *ladder.sigma);

    MultistartResult result;
    std::vector<GridFunctionPair> found;
    auto consider = [&](const GridFunctionPair& x) {
        if (T.residual_sup(x) > opts.residual_threshold) return;
        const double norm = std::max(x.sup_u(), x.sup_v());
        if (norm <= opts.trivial_tol) {
            result.trivial_found = true;
            return;
        }
        for (const GridFunctionPair& other : found)
            if (x.distance(other) < opts.dedupe_tol * std::max(1.0, norm)) return;
        found.push_back(x);
    };

    for (const auto& seed : seeds) {
        ++result.starts;
        const GridFunctionPair x0 = T.constant(seed[0], seed[1]);
        const PicardOutcome pic = solve_picard(T, x0, opts.picard);
        if (std::isfinite(pic.residual)) {
            const NewtonOutcome polished = solve_newton(T, pic.x, opts.newton);
            if (polished.converged) consider(polished.x);
            else if (pic.converged) consider(pic.x);
        }
        const NewtonOutcome direct = solve_newton(T, x0, opts.newton);
        if (direct.converged) consider(direct.x);
    }

    std::sort(found.begin(), found.end(), [](const GridFunctionPair& a, const GridFunctionPair& b) {
        return std::max(a.sup_u(), a.sup_v()) < std::max(b.sup_u(), b.sup_v());
    });
    result.solutions = std::move(found);
    return result;
}

namespace {

double dense_extreme(std::span<const double> nodes, std::span<const double> vals, Interval on,
                     bool want_min, int samples = 1024) {
    double best = want_min ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        const double t = on.lo + (on.hi - on.lo) * i / samples;
        const double val = cubic_interp(nodes, vals, t);
        best = want_min ? std::min(best, val) : std::max(best, val);
    }
    return best;
}

} // namespace

Localization localize(const GridFunctionPair& x, const RadiiLadder& ladder,
                      const std::array<double, 2>& cone_c, const Interval& ab1,
                      const Interval& ab2, double boundary_tol) {
    Localization loc;
    loc.norm_u = std::max(dense_extreme(x.nodes, x.u, {0.0, 1.0}, false),
                          -dense_extreme(x.nodes, x.u, {0.0, 1.0}, true));
    loc.norm_v = std::max(dense_extreme(x.nodes, x.v, {0.0, 1.0}, false),
                          -dense_extreme(x.nodes, x.v, {0.0, 1.0}, true));
    loc.min_u_ab = dense_extreme(x.nodes, x.u, ab1, true);
    loc.min_v_ab = dense_extreme(x.nodes, x.v, ab2, true);
    loc.cone_slack_u = loc.min_u_ab - cone_c[0] * loc.norm_u;
    loc.cone_slack_v = loc.min_v_ab - cone_c[1] * loc.norm_v;
    loc.u_changes_sign = dense_extreme(x.nodes, x.u, {0.0, 1.0}, true) < 0.0 &&
                         dense_extreme(x.nodes, x.u, {0.0, 1.0}, false) > 0.0;
    loc.v_changes_sign = dense_extreme(x.nodes, x.v, {0.0, 1.0}, true) < 0.0 &&
                         dense_extreme(x.nodes, x.v, {0.0, 1.0}, false) > 0.0;

    auto add_level = [&](const std::string& name, const std::array<double, 2>& radii) {
        ShellMembership m;
        m.level = name;
        // open-set membership with a guard band so roundoff on the boundary
        // lands in on_V_boundary instead
        m.in_K = loc.norm_u < radii[0] - boundary_tol && loc.norm_v < radii[1] - boundary_tol;
        m.in_V =
            loc.min_u_ab < radii[0] - boundary_tol && loc.min_v_ab < radii[1] - boundary_tol;
        m.on_V_boundary = (std::abs(loc.min_u_ab - radii[0]) <= boundary_tol &&
                           loc.min_v_ab <= radii[1] + boundary_tol) ||
                          (std::abs(loc.min_v_ab - radii[1]) <= boundary_tol &&
                           loc.min_u_ab <= radii[0] + boundary_tol);
        loc.shells.push_back(m);
    };
    add_level("rho", ladder.rho);
    add_level("r", ladder.r);
    if (ladder.s) add_level("s", *ladder.s);
    if (ladder.sigma) add_level("sigma", *ladder.sigma);

    loc.label = "outside all ladder shells";
    for (auto it = loc.shells.rbegin(); it != loc.shells.rend(); ++it) {
        if (it->in_K)
            loc.label = "inside K(" + it->level + ")";
        else if (it->in_V)
            loc.label = "inside V(" + it->level + ")";
    }
    return loc;
}

} // namespace hamcert
