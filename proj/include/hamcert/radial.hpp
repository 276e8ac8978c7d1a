#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hamcert/expression.hpp"
#include "hamcert/kernels.hpp"

namespace hamcert {

/// Annular system in R^n on [R1, R0] with Neumann conditions at the outer
/// boundary and nonlocal conditions tied to the interior radii R_eta, R_xi.
struct AnnulusSpec {
    int n = 2;
    double R1 = 0.0, R0 = 0.0;
    Expression h1 = Expression::constant(1.0); // over r
    Expression h2 = Expression::constant(1.0);
    double alpha1 = 0.0, alpha2 = 0.0;
    double R_eta = 0.0, R_xi = 0.0;

    void validate() const;
};

/// phi(t) variants for the planar (n = 2) case:
///   Derived      - the chain-rule form (log(R0/R1))^2 * r(t)^2, the default;
///   PaperPrinted - (R0*(1-t)*log(R0/R1))^2, kept as a compatibility mode for
///                  reproducing published worked numbers.
/// For n >= 3 both modes coincide with (r'(t))^2.
enum class PhiMode { Derived, PaperPrinted };

/// The change of variables flattening the radial Laplacian on [R1,R0] onto
/// [0,1]: r(0) = R0, r(1) = R1, strictly decreasing.
class RadialSubstitution {
public:
    RadialSubstitution(int n, double R1, double R0, PhiMode mode = PhiMode::Derived);

    double r(double t) const;
    double phi(double t) const;
    /// Monotone inversion of r by bisection to 1e-14.
    double t_of_r(double radius) const;

    /// r(t) as an expression over t (exact parameters baked in).
    Expression r_expression() const;
    /// phi(t) as an expression over t, honoring the mode.
    Expression phi_expression() const;

    int n() const { return n_; }
    PhiMode mode() const { return mode_; }

private:
    int n_;
    double R1_, R0_;
    double gamma_ = 0.0, beta_ = 0.0; // n >= 3 parameters
    PhiMode mode_;
};

struct ReducedWeights {
    WeightFunction g1, g2;
    double eta = 0.0, xi = 0.0;
    double alpha1 = 0.0, alpha2 = 0.0;
};

/// g_i(t) = phi(t) * h_i(r(t)); eta and xi solved from R_eta = r(eta),
/// R_xi = r(xi). The alpha parameters pass through at the flattened level.
ReducedWeights build_weights(const AnnulusSpec& annulus, PhiMode mode = PhiMode::Derived);

/// Samples a grid function (values at nodes on [0,1]) back onto a monotone
/// radius grid from R1 to R0; endpoints map to u(1) and u(0) exactly.
std::vector<std::pair<double, double>> pull_back(std::span<const double> nodes,
                                                 std::span<const double> values,
                                                 const RadialSubstitution& sub, int samples);

} // namespace hamcert
