#pragma once

#include "serrinlab/deviation.hpp"

#include <json.hpp>
#include <string>
#include <vector>

namespace serrinlab {

/// Reference constants and the deficits they control. Entries involving
/// 1/H are only meaningful when the boundary is mean-convex; they are
/// left at 0 with mean_convex = false otherwise.
struct DeficitReport {
    double R = 0.0;    // N|Omega|/|Gamma|
    double H0 = 0.0;   // |Gamma|/(N|Omega|)
    double serrin_l1 = 0.0;        // ||u_nu - R||_{1,Gamma}
    double serrin_l2 = 0.0;        // ||u_nu - R||_{2,Gamma}
    double sbt_l2 = 0.0;           // ||H0 - H||_{2,Gamma}
    double sbt_pos_part = 0.0;     // int (H0 - H)^+ dS
    double sbt_neg_weighted = 0.0; // int (H0 - H)^- u_nu^2 dS
    bool mean_convex = true;
    double hk = 0.0;               // int dS/H - N|Omega|
    double one_over_h = 0.0;       // int (1/H - u_nu) dS

    nlohmann::json to_json() const;
};

struct IdentityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;
    double scale = 0.0;  // characteristic magnitude behind the residual floor
    long boundary_nodes = 0;
    long volume_nodes = 0;

    nlohmann::json to_json() const;
};

struct PointwiseViolation {
    std::string check;
    Eigen::Index node = 0;
    double value = 0.0;
    double bound = 0.0;
};

/// Both-sided evaluation of the stability inequalities, with the
/// Hardy-Poincare constant supplied twice: the subspace Rayleigh estimate
/// (sharp but an upper bound on mu, so not a certificate) and the analytic
/// C^2-domain bound carrying the placeholder factor k = 1.
struct StabilityChecks {
    double mu_rayleigh = 0.0;
    double mu_placeholder = 0.0;
    bool placeholder_k = true;

    // (a)  ||h_nu||_2 <= ((M+R)/r_i)(1 + N/(r_i mu^2)) ||u_nu - R||_2
    double hnu_l2 = 0.0;
    double serrin_l2 = 0.0;
    double feldman_factor_rayleigh = 0.0;
    double feldman_factor_placeholder = 0.0;
    bool feldman_holds_rayleigh = false;
    bool feldman_holds_placeholder = false;

    // (b)  ||u_nu - R||_2 <= R { d + M(M+R)/r_i (1 + N/(r_i mu^2)) } ||H0 - H||_2
    double sbt_l2 = 0.0;
    double sbt_factor_rayleigh = 0.0;
    double sbt_factor_placeholder = 0.0;
    bool sbt_holds_rayleigh = false;
    bool sbt_holds_placeholder = false;

    // (c)  (1/(N-1)) ||hess h||^2 + int (H0-H)^- u_nu^2 <= int (H0-H)^+ u_nu^2
    double c_lhs = 0.0;
    double c_rhs = 0.0;
    bool c_holds = false;
    // (c) rearranged against the fundamental identity:
    // rhs - lhs must equal (1/R) int (u_nu - R)^2
    double c_cross_residual = 0.0;

    nlohmann::json to_json() const;
};

DeficitReport deficits(const TorsionField& field, const BoundaryGrid& bgrid,
                       const GeometrySummary& summary);

/// Eq. pair: int (-u)|hess h|^2 = (1/2) int (R^2 - u_nu^2) h_nu
/// reported in the h-form and in the original (u_nu^2 - R^2)(u_nu - q_nu)
/// form; the two right-hand sides are identical since u_nu - q_nu = -h_nu.
std::vector<IdentityReport> verify_idwps(const Deviation& dev,
                                         const VolumeGrid& vgrid,
                                         const BoundaryGrid& bgrid);

/// (1/(N-1)) int |hess h|^2 + (1/R) int (u_nu - R)^2 = int (H0 - H) u_nu^2,
/// plus the split right-hand side
/// -int (H0-H) h_nu u_nu + int (H0-H)(u_nu - R) q_nu.
std::vector<IdentityReport> verify_h_fundamental(const Deviation& dev,
                                                 const VolumeGrid& vgrid,
                                                 const BoundaryGrid& bgrid);

/// (1/(N-1)) int |hess h|^2 + int (1 - H u_nu)^2 / H = int dS/H - N|Omega|.
/// Throws NonPositiveCurvature unless H > 0 at every boundary node.
IdentityReport verify_hk(const Deviation& dev, const VolumeGrid& vgrid,
                         const BoundaryGrid& bgrid);

/// int u_nu dS = N|Omega| and the Minkowski-type int H q_nu dS = |Gamma|.
std::vector<IdentityReport> verify_flux(const TorsionField& field,
                                        const BoundaryGrid& bgrid,
                                        const GeometrySummary& summary,
                                        const Vec& z);

/// int_Gamma v^2 u_nu dS = N int v^2 dx + 2 int (-u) |grad v|^2 dx
/// for a harmonic v given by value/gradient callables.
IdentityReport verify_harmonic_flux(const TorsionField& field,
                                    const std::function<double(const Vec&)>& v,
                                    const std::function<Vec(const Vec&)>& grad_v,
                                    const VolumeGrid& vgrid,
                                    const BoundaryGrid& bgrid,
                                    const std::string& name = "harmonic_flux");

/// Summed version with v = each component of grad h:
/// int_Gamma |grad h|^2 u_nu = N int |grad h|^2 + 2 int (-u) |hess h|^2.
IdentityReport verify_harmonic_flux_gradh(const Deviation& dev,
                                          const VolumeGrid& vgrid,
                                          const BoundaryGrid& bgrid);

/// Nodewise inequality suite: Newton (Delta u)^2 <= N |hess u|^2,
/// -u >= (r_i/2) delta_Gamma, Hopf u_nu >= r_i, and the gradient bound
/// M <= c_N d (d + r_e)/r_e (convex branch when r_e = inf). Returns the
/// violations beyond the slack; empty means all hold.
std::vector<PointwiseViolation> check_pointwise(const TorsionField& field,
                                                const VolumeGrid& vgrid,
                                                const BoundaryGrid& bgrid,
                                                const GeometrySummary& summary,
                                                double slack = 1e-9);

StabilityChecks check_stability_inequalities(const Deviation& dev,
                                             const VolumeGrid& vgrid,
                                             const BoundaryGrid& bgrid,
                                             const GeometrySummary& summary,
                                             double M, double mu_rayleigh,
                                             double mu_placeholder);

} // namespace serrinlab
