#pragma once

#include "serrinlab/torsion.hpp"

namespace serrinlab {

struct CenterStrategy {
    enum class Kind { ArgminU, Centroid, Feldman };
    Kind kind = Kind::ArgminU;
    Vec feldman_x0;

    static CenterStrategy argmin_u() { return {Kind::ArgminU, {}}; }
    static CenterStrategy centroid() { return {Kind::Centroid, {}}; }
    static CenterStrategy feldman(Vec x0) { return {Kind::Feldman, std::move(x0)}; }
};

Vec select_center(const TorsionField& field, const CenterStrategy& strategy,
                  const VolumeGrid& vgrid);

/// The harmonic deviation h = q - u with q(x) = (|x - z|^2 - a)/2.
/// trace(hess h) = 0 identically since trace(hess q) = N = Delta u.
class Deviation {
public:
    Deviation(const TorsionField& field, Vec z, double a = 0.0);

    double h(const Vec& x) const;
    Vec grad_h(const Vec& x) const;
    Mat hess_h(const Vec& x) const;

    struct Eval {
        double h;
        Vec grad;
        Mat hess;
        double u;      // torsion value at the same point
        Vec grad_u;
    };
    Eval eval(const Vec& x) const;

    const Vec& center() const { return z_; }
    double offset() const { return a_; }
    const TorsionField& field() const { return *field_; }
    int dim() const { return field_->dim(); }

private:
    const TorsionField* field_;
    Vec z_;
    double a_;
};

struct NormReport {
    double p = 2.0;
    double h_mean = 0.0;            // h_Omega
    double lp_deviation = 0.0;      // ||h - h_Omega||_{p,Omega}
    double hess_l2 = 0.0;           // ||hess h||_{2,Omega}
    double hess_dist_weighted = 0.0; // ||delta^{1/2} hess h||_{2,Omega}
    double torsion_weighted = 0.0;  // int (-u) |hess h|^2 dx
    double boundary_osc = 0.0;      // max_Gamma h - min_Gamma h
};

struct OscillationRecord {
    double osc = 0.0;
    double rho_i = 0.0, rho_e = 0.0;
    double quadratic_form = 0.0;   // (rho_e^2 - rho_i^2)/2, equals osc
    double lower_bound = 0.0;      // (r_i/2)(rho_e - rho_i) <= osc
};

struct OscillationBoundRecord {
    double p = 2.0;
    double G = 0.0;                 // gradient bound used
    double lp_deviation = 0.0;
    double osc = 0.0;
    double smallness_rhs = 0.0;     // alpha_{N,p} r_i^{(N+p)/p} G
    bool smallness_holds = false;
    double bound_rhs = 0.0;         // a_{N,p} G^{N/(N+p)} ||...||^{p/(N+p)}
    bool bound_holds = false;
    double gap = 0.0;               // rho_e - rho_i
    double lemma_constant = 0.0;    // the unconditional max-constant
    double lemma_rhs = 0.0;
    bool lemma_holds = false;
};

struct RayleighEstimate {
    double mu = 0.0;       // subspace estimate; an UPPER bound on the true mu
    double r = 2, p = 2, alpha = 0;
    int degree = 0;
    bool zero_mean = false;  // barred constant (v_Omega = 0) vs v(z) = 0
};

NormReport norms(const Deviation& dev, const VolumeGrid& vgrid,
                 const BoundaryGrid& bgrid, double p);

OscillationRecord boundary_oscillation(const Deviation& dev,
                                       const BoundaryGrid& bgrid,
                                       double r_interior);

/// Weighted r-mean: the minimizer over lambda of ||v - lambda||_r.
double r_mean(const Vec& values, const Vec& weights, double r);

/// Checks the Lp oscillation lemma (with gradient bound G) and the
/// h-specialized unconditional bound with its explicit max-constant.
OscillationBoundRecord oscillation_bound_check(const Deviation& dev,
                                               const VolumeGrid& vgrid,
                                               const BoundaryGrid& bgrid,
                                               const GeometrySummary& summary,
                                               double p, double G, double M);

/// Validates the (r, p, alpha) admissibility conditions for the
/// Hardy-Poincare inequalities; throws ConditionViolated otherwise.
void check_hardy_poincare_condition(int N, double r, double p, double alpha);

/// Subspace Rayleigh estimate of mu_{r,p,alpha}(Omega, z) (or the barred
/// mean-zero variant) over harmonic polynomials up to the given degree.
/// The restriction shrinks the feasible set, so the result is an upper
/// bound on mu and must not be used to certify inequalities.
RayleighEstimate rayleigh_estimate(const Domain& domain, const VolumeGrid& vgrid,
                                   const Vec& z, double r, double p, double alpha,
                                   int degree, bool zero_mean = false);

} // namespace serrinlab
