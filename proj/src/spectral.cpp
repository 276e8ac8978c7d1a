#include "hamcert/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "hamcert/quadrature.hpp"

namespace hamcert {

namespace {

// composite GL-8 grid on `domain` split at the interior breakpoints; panel
// counts per segment proportional to length, n_requested nodes in total
// (rounded to full panels, at least one per segment)
void grid_for(Interval domain, std::span<const double> inner, int n_requested,
              std::vector<double>& nodes, std::vector<double>& weights) {
    if (n_requested < 8) throw ValidationError("NystromMatrix: N must be >= 8");
    std::vector<double> cuts{domain.lo, domain.hi};
    for (double x : inner)
        if (x > domain.lo && x < domain.hi) cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const int total_panels = std::max<int>(1, (n_requested + 7) / 8);
    nodes.clear();
    weights.clear();
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        int panels = std::max<int>(
            1, static_cast<int>(std::lround(total_panels * (hi - lo) / domain.length())));
        const double h = (hi - lo) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * h;
            for (int q = 0; q < 8; ++q) {
                nodes.push_back(mid + 0.5 * h * gl8::nodes[q]);
                weights.push_back(0.5 * h * gl8::weights[q]);
            }
        }
    }
}

} // namespace

NystromMatrix NystromMatrix::build(const KernelSpec& kernel, const WeightFunction& g,
                                   KernelMode mode, Interval domain, int n_requested,
                                   double row_tol) {
    if (mode == KernelMode::PositivePart && domain.hi > kernel.positivity_limit() + 1e-15 &&
        !(domain.lo == 0.0 && domain.hi == 1.0))
        throw ValidationError(
            "NystromMatrix: positive_part domain must lie in the positivity interval "
            "(or be the full [0,1] for the unrestricted k^+)");
    if (domain.lo < 0.0 || domain.hi > 1.0 || !(domain.lo < domain.hi))
        throw ValidationError("NystromMatrix: invalid domain");

    NystromMatrix M;
    M.domain_ = domain;
    const double kink = kernel.kink();
    grid_for(domain, std::span(&kink, 1), n_requested, M.nodes_, M.weights_);
    M.n_ = static_cast<int>(M.nodes_.size());
    M.a_.resize(static_cast<std::size_t>(M.n_) * M.n_);

    auto kappa = [&](double t, double s) {
        const double k = kernel.eval(t, s);
        const double val = mode == KernelMode::Abs ? std::abs(k) : std::max(k, 0.0);
        return val * g(s);
    };
    for (int i = 0; i < M.n_; ++i)
        for (int j = 0; j < M.n_; ++j)
            M.a_[static_cast<std::size_t>(i) * M.n_ + j] =
                kappa(M.nodes_[i], M.nodes_[j]) * M.weights_[j];

    const RowMode rm = mode == KernelMode::Abs ? RowMode::Abs : RowMode::PositivePart;
    M.defects_.resize(M.n_);
    for (int i = 0; i < M.n_; ++i) {
        const double exact =
            kernel_row_integral(kernel, g, M.nodes_[i], rm, domain.lo, domain.hi, row_tol);
        double rowsum = 0.0;
        for (int j = 0; j < M.n_; ++j) rowsum += M.a_[static_cast<std::size_t>(i) * M.n_ + j];
        M.defects_[i] = exact - rowsum;
    }
    return M;
}

NystromMatrix NystromMatrix::build_generic(
    const std::function<double(double, double)>& kappa, Interval domain, int n_requested,
    std::span<const double> breakpoints, const std::function<double(double)>& row_integral,
    double row_tol) {
    NystromMatrix M;
    M.domain_ = domain;
    grid_for(domain, breakpoints, n_requested, M.nodes_, M.weights_);
    M.n_ = static_cast<int>(M.nodes_.size());
    M.a_.resize(static_cast<std::size_t>(M.n_) * M.n_);
    for (int i = 0; i < M.n_; ++i)
        for (int j = 0; j < M.n_; ++j)
            M.a_[static_cast<std::size_t>(i) * M.n_ + j] =
                kappa(M.nodes_[i], M.nodes_[j]) * M.weights_[j];

    M.defects_.resize(M.n_);
    for (int i = 0; i < M.n_; ++i) {
        const double t = M.nodes_[i];
        double exact;
        if (row_integral) {
            exact = row_integral(t);
        } else {
            std::vector<double> splits(breakpoints.begin(), breakpoints.end());
            splits.push_back(t);
            exact = integrate([&](double s) { return kappa(t, s); }, domain.lo, domain.hi,
                              splits, row_tol);
        }
        double rowsum = 0.0;
        for (int j = 0; j < M.n_; ++j) rowsum += M.a_[static_cast<std::size_t>(i) * M.n_ + j];
        M.defects_[i] = exact - rowsum;
    }
    return M;
}

NystromMatrix NystromMatrix::from_raw(std::vector<double> nodes, std::vector<double> weights,
                                      std::vector<double> matrix_row_major) {
    NystromMatrix M;
    M.n_ = static_cast<int>(nodes.size());
    if (weights.size() != nodes.size() ||
        matrix_row_major.size() != nodes.size() * nodes.size())
        throw ValidationError("NystromMatrix::from_raw: inconsistent sizes");
    M.nodes_ = std::move(nodes);
    M.weights_ = std::move(weights);
    M.a_ = std::move(matrix_row_major);
    return M;
}

void NystromMatrix::apply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        const double* row = a_.data() + static_cast<std::size_t>(i) * n_;
        for (int j = 0; j < n_; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void NystromMatrix::apply_operator(std::span<const double> x, std::span<double> y) const {
    apply(x, y);
    if (!defects_.empty())
        for (int i = 0; i < n_; ++i) y[i] += defects_[i] * x[i];
}

SpectralResult spectral_radius(const NystromMatrix& A, double tol, int max_iter) {
    const int n = A.size();
    SpectralResult res;
    res.n = n;
    std::vector<double> x(n, 1.0), y(n);
    double lambda = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        A.apply_operator(x, y);
        double norm = 0.0;
        for (double v : y) norm = std::max(norm, std::abs(v));
        if (norm < 1e-300 || (it > 1 && norm < 1e-14)) {
            res.r = 0.0;
            res.mu_defined = false;
            res.eigvec.assign(n, 0.0);
            res.iterations = it;
            return res;
        }
        double resid = 0.0;
        for (int i = 0; i < n; ++i) resid = std::max(resid, std::abs(y[i] - norm * x[i]));
        for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
        const bool quotient_ok = std::abs(norm - lambda) <= tol * std::max(1.0, norm);
        const bool residual_ok = resid <= 10.0 * tol * std::max(1.0, norm);
        lambda = norm;
        if (it > 1 && quotient_ok && residual_ok) {
            if (lambda < 1e-14) {
                res.r = 0.0;
                res.mu_defined = false;
            } else {
                res.r = lambda;
                res.mu = 1.0 / lambda;
                res.mu_defined = true;
            }
            res.eigvec = std::move(x);
            res.iterations = it;
            return res;
        }
    }
    throw NumericError("spectral_radius: power iteration did not converge in " +
                       std::to_string(max_iter) + " iterations (last estimate " +
                       std::to_string(lambda) + ")");
}

bool collatz_upper_bound(const NystromMatrix& A, std::span<const double> w, double lambda,
                         double tol) {
    const int n = A.size();
    double wmax = 0.0;
    bool nonneg = true;
    for (double x : w) {
        wmax = std::max(wmax, std::abs(x));
        nonneg = nonneg && x >= 0.0;
    }
    if (!nonneg || wmax == 0.0)
        throw ValidationError("collatz_upper_bound: w must be nonnegative and nonzero");
    std::vector<double> y(n);
    A.apply_operator(w, y);
    const double slack = tol * std::max(1.0, std::abs(lambda) * wmax);
    for (int i = 0; i < n; ++i)
        if (y[i] > lambda * w[i] + slack) return false;
    return true;
}

double resolvent_bound_r0(const std::vector<ResolventComponent>& components, double eps) {
    double r0 = 0.0;
    for (const ResolventComponent& comp : components) {
        if (comp.A == nullptr) throw ValidationError("resolvent_bound_r0: null matrix");
        const int n = comp.A->size();
        const double factor = comp.mu - eps;
        const SpectralResult sr = spectral_radius(*comp.A);
        if (factor * sr.r >= 1.0 - 1e-12)
            throw NumericError("resolvent_bound_r0: Neumann series divergent "
                               "((mu - eps) * r >= 1)");
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) M(i, j) -= factor * comp.A->entry(i, j);
            if (!comp.A->row_defects().empty()) M(i, i) -= factor * comp.A->row_defects()[i];
        }
        const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, comp.C);
        const Eigen::VectorXd x = M.partialPivLu().solve(rhs);
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            if (x(i) < -1e-10 * std::max(1.0, std::abs(comp.C)))
                throw NumericError("resolvent_bound_r0: resolvent positivity violated");
            norm = std::max(norm, std::abs(x(i)));
        }
        r0 = std::max(r0, norm);
    }
    return r0;
}

double caratheodory_constant(const NystromMatrix& A, const KernelSpec& kernel,
                             const WeightFunction& g, std::span<const double> phi_cap) {
    if (phi_cap.size() != static_cast<std::size_t>(A.size()))
        throw ValidationError("caratheodory_constant: phi_cap size mismatch");
    double acc = 0.0;
    for (int j = 0; j < A.size(); ++j) {
        const double s = A.nodes()[j];
        acc += A.weights()[j] * kernel.phi_upper(s) * g(s) * phi_cap[j];
    }
    return acc;
}

} // namespace hamcert
