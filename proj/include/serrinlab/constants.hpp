#pragma once

#include "serrinlab/geometry.hpp"

#include <json.hpp>

namespace serrinlab {

enum class StabilityProblem { Serrin, SBT, HK, OneOverH };

/// c_N in the gradient bound M <= c_N d (d + r_e)/r_e.
double c_gradient_bound(int N);

/// a_{N,p} and alpha_{N,p} from the oscillation lemma:
///   a_{N,p}     = 2(N+p) / (N^{N/(N+p)} p^{p/(N+p)} |B|^{1/(N+p)})
///   alpha_{N,p} = (p/N) |B|^{1/p}
double osc_constant_a(int N, double p);
double osc_constant_alpha(int N, double p);

/// Unconditional constant of the h-oscillation lemma,
///   C = max{2 a_{N,p}, alpha_{N,p}^{-p/(N+p)}} d^{N/(N+p)} / r_i
///       * (1 + M/d)^{N/(N+p)}.
double lemma_oscillation_constant(int N, double p, double diameter,
                                  double r_interior, double M);

/// Stability exponent tau_N; theta is the gap for the "arbitrarily close
/// to one" cases (N=3 Serrin, N=4 for the others).
double tau(int N, StabilityProblem problem, double theta = 0.1);

/// Every explicit constant and constant-bound evaluated in closed form.
/// mu bounds carry the unspecified dimensionless factor k as 1 and are
/// flagged: they are not certified values.
struct ConstantLedger {
    int N = 2;
    double p = 2.0;
    double theta = 0.1;

    double R = 0.0;   // N|Omega|/|Gamma|
    double H0 = 0.0;  // 1/R

    double c_N = 0.0;
    double M_bound = 0.0;         // c_N d (d + r_e)/r_e  (= convex value if r_e = inf)
    double M_bound_convex = 0.0;  // c_N d
    bool mean_convex_unverified_constant = true;  // changed c_N unspecified

    double a_Np = 0.0;
    double alpha_Np = 0.0;

    double b0_bound = 0.0;  // d/r_i
    double L0_bound = 0.0;  // d/min(r_i, delta_Gamma(z))

    // Hardy-Poincare inverse bounds, C^2-domain branch, with k := 1.
    bool placeholder_k = true;
    double mu_bar_inv_hs = 0.0;   // (r,p,alpha) = (2,2,1/2) regime
    double mu_inv_hs = 0.0;
    double mu_bar_inv_pp0 = 0.0;  // (p,p,0) regime for the ledger's p
    double mu_inv_pp0 = 0.0;

    double delta_z_lower = 0.0;   // r_i^2 / (2M)
    double trace_factor = 0.0;    // (2/r_i)(1 + N/(r_i mu^2)), mu from mu_inv_hs
    double feldman_factor = 0.0;  // ((M+R)/r_i)(1 + N/(r_i mu^2))
    double sbt_factor = 0.0;      // R { d + M(M+R)/r_i (1 + N/(r_i mu^2)) }
    double lemma_osc_constant = 0.0;

    double tau_serrin = 0.0;
    double tau_sbt = 0.0;

    nlohmann::json to_json() const;
};

ConstantLedger ledger(const GeometrySummary& summary, int N, double p,
                      double delta_z, double M, double theta = 0.1);

} // namespace serrinlab
