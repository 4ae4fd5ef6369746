#include "serrinlab/constants.hpp"

#include <cmath>

#include <json.hpp>

namespace serrinlab {

double c_gradient_bound(int N) {
    if (N < 2) throw InvalidDimension("N must be >= 2");
    return N == 2 ? 1.5 : 0.5 * N;
}

double osc_constant_a(int N, double p) {
    if (N < 2) throw InvalidDimension("N must be >= 2");
    if (p < 1.0) throw Error("p must be >= 1");
    const double B = unit_ball_volume(N);
    const double np = N + p;
    return 2.0 * np /
           (std::pow(double(N), N / np) * std::pow(p, p / np) * std::pow(B, 1.0 / np));
}

double osc_constant_alpha(int N, double p) {
    if (N < 2) throw InvalidDimension("N must be >= 2");
    if (p < 1.0) throw Error("p must be >= 1");
    return (p / N) * std::pow(unit_ball_volume(N), 1.0 / p);
}

double lemma_oscillation_constant(int N, double p, double diameter,
                                  double r_interior, double M) {
    const double np = N + p;
    const double a = osc_constant_a(N, p);
    const double al = osc_constant_alpha(N, p);
    const double lead = std::max(2.0 * a, std::pow(al, -p / np));
    return lead * std::pow(diameter, N / np) / r_interior *
           std::pow(1.0 + M / diameter, N / np);
}

double tau(int N, StabilityProblem problem, double theta) {
    if (N < 2) throw InvalidDimension("N must be >= 2");
    if (problem == StabilityProblem::Serrin) {
        if (N == 2) return 1.0;
        if (N == 3) return 1.0 - theta;
        return 2.0 / (N - 1);
    }
    // SBT, HK, and the u_nu = 1/H overdetermination share one table
    if (N <= 3) return 1.0;
    if (N == 4) return 1.0 - theta;
    return 2.0 / (N - 2);
}

ConstantLedger ledger(const GeometrySummary& summary, int N, double p,
                      double delta_z, double M, double theta) {
    if (N < 2) throw InvalidDimension("N must be >= 2");
    if (p < 1.0) throw Error("p must be >= 1");
    ConstantLedger L;
    L.N = N;
    L.p = p;
    L.theta = theta;

    const double d = summary.diameter;
    const double ri = summary.r_interior;
    const double re = summary.r_exterior;
    const double vol = summary.volume;

    L.R = N * summary.volume / summary.surface;
    L.H0 = 1.0 / L.R;

    L.c_N = c_gradient_bound(N);
    L.M_bound_convex = L.c_N * d;
    L.M_bound = std::isinf(re) ? L.M_bound_convex : L.c_N * d * (d + re) / re;

    L.a_Np = osc_constant_a(N, p);
    L.alpha_Np = osc_constant_alpha(N, p);

    L.b0_bound = d / ri;
    L.L0_bound = d / std::min(ri, delta_z);

    // (2,2,1/2) regime: |Omega| exponent (1-alpha)/N + 1/r - 1/p = 1/(2N)
    const double vol_hs = std::pow(vol, 1.0 / (2.0 * N));
    L.mu_bar_inv_hs = std::pow(d / ri, double(N)) * vol_hs;
    L.mu_inv_hs = std::pow(d / std::min(ri, delta_z), double(N)) * vol_hs;

    // (p,p,0) regime
    const double e = 3.0 * N * (1.0 + N / p);
    L.mu_bar_inv_pp0 = std::pow(d, e + 1.0) / std::pow(ri, e);
    L.mu_inv_pp0 = std::pow(d, e + 1.0) / std::pow(std::min(ri, delta_z), e);

    L.delta_z_lower = ri * ri / (2.0 * M);

    const double mu = 1.0 / L.mu_inv_hs;
    const double john = 1.0 + N / (ri * mu * mu);
    L.trace_factor = 2.0 / ri * john;
    L.feldman_factor = (M + L.R) / ri * john;
    L.sbt_factor = L.R * (d + M * (M + L.R) / ri * john);

    L.lemma_osc_constant = lemma_oscillation_constant(N, p, d, ri, M);

    L.tau_serrin = tau(N, StabilityProblem::Serrin, theta);
    L.tau_sbt = tau(N, StabilityProblem::SBT, theta);
    return L;
}

nlohmann::json ConstantLedger::to_json() const {
    nlohmann::json j;
    j["N"] = N;
    j["p"] = p;
    j["theta"] = theta;
    j["R"] = R;
    j["H0"] = H0;
    j["c_N"] = c_N;
    j["M_bound"] = M_bound;
    j["M_bound_convex"] = M_bound_convex;
    j["mean_convex_unverified_constant"] = mean_convex_unverified_constant;
    j["a_Np"] = a_Np;
    j["alpha_Np"] = alpha_Np;
    j["b0_bound"] = b0_bound;
    j["L0_bound"] = L0_bound;
    j["placeholder_k"] = placeholder_k;
    j["mu_bar_inv_hs"] = mu_bar_inv_hs;
    j["mu_inv_hs"] = mu_inv_hs;
    j["mu_bar_inv_pp0"] = mu_bar_inv_pp0;
    j["mu_inv_pp0"] = mu_inv_pp0;
    j["delta_z_lower"] = delta_z_lower;
    j["trace_factor"] = trace_factor;
    j["feldman_factor"] = feldman_factor;
    j["sbt_factor"] = sbt_factor;
    j["lemma_osc_constant"] = lemma_osc_constant;
    j["tau_serrin"] = tau_serrin;
    j["tau_sbt"] = tau_sbt;
    return j;
}

} // namespace serrinlab
