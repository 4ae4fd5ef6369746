#pragma once

#include "serrinlab/geometry.hpp"

namespace serrinlab {

/// Solution of Delta u = N in Omega, u = 0 on Gamma, with exact first and
/// second derivatives. Ellipsoids use the closed form
/// u = c (sum x_i^2/a_i^2 - 1); 2D Fourier domains split u = |x|^2/2 + psi
/// with psi harmonic, fitted by least-squares collocation in the basis
/// {1, r^k cos k theta, r^k sin k theta}.
class TorsionField {
public:
    static TorsionField solve_ellipsoid(const Domain& domain);
    static TorsionField solve_fourier2d(const Domain& domain, int degree);

    struct Eval {
        double u;
        Vec grad;
        Mat hess;
    };

    /// Full evaluation; throws OutsideDomain for x outside the closure.
    Eval eval(const Vec& x) const;

    /// Evaluation without the containment check, for quadrature nodes and
    /// boundary points known to lie in the closure.
    Eval eval_unchecked(const Vec& x) const;

    double u(const Vec& x) const;
    Vec grad(const Vec& x) const;
    Mat hess(const Vec& x) const;

    const Domain& domain() const { return domain_; }
    int dim() const { return domain_.dim(); }
    bool closed_form() const { return closed_form_; }
    /// max |u| over the collocation nodes (0 for closed-form fields).
    double boundary_residual() const { return boundary_residual_; }
    int degree() const { return degree_; }

private:
    explicit TorsionField(Domain d) : domain_(std::move(d)) {}

    Domain domain_;
    bool closed_form_ = true;
    // closed form: u = c (sum x_i^2 / a_i^2 - 1)
    double coeff_c_ = 0.0;
    // harmonic split: psi(x) = L^2 phi(x/L), phi in the harmonic basis
    double scale_L_ = 1.0;
    Vec alpha_;  // cos coefficients, alpha_[0] is the constant term
    Vec beta_;   // sin coefficients, beta_[k-1] pairs with r^k sin k theta
    int degree_ = 0;
    double boundary_residual_ = 0.0;
};

struct GradientBound {
    double M = 0.0;
    Eigen::Index node = 0;  // boundary node attaining (or nearest) the max
};

/// M = max over the closure of |grad u| = max over Gamma of u_nu,
/// refined by local optimization in the boundary parameters.
GradientBound gradient_bound(const TorsionField& field, const BoundaryGrid& bgrid);

} // namespace serrinlab
