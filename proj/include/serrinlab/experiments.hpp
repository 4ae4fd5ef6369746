#pragma once

#include "serrinlab/identities.hpp"

#include <optional>
#include <string>
#include <vector>

namespace serrinlab {

enum class DeficitSelector { SerrinL2, SerrinL1, SbtL2, SbtPosPart, HK, OneOverH };

std::string deficit_name(DeficitSelector s);
DeficitSelector deficit_from_name(const std::string& name);
double deficit_value(const DeficitReport& rep, DeficitSelector s);

/// A one-parameter family of domains shrinking to a ball as eps -> 0.
/// EllipsoidEccentric: semi-axes a_1 = s(1+eps), a_2..a_N = s(1+eps)^{-1/(N-1)}
/// (volume-normalized, s = base_radius). FourierPerturb: boundary radius
/// R(theta) = base_radius + eps cos(mode theta).
struct FamilySpec {
    enum class Kind { EllipsoidEccentric, FourierPerturb };
    Kind kind = Kind::EllipsoidEccentric;
    int dim = 2;
    double base_radius = 1.0;
    int mode = 2;
    std::vector<double> eps;  // strictly decreasing positive, >= 4 entries
    CenterStrategy center = CenterStrategy::argmin_u();
    int boundary_order = 0;  // 0 picks the dimension default
    int radial_order = 0;
    int angular_order = 0;
    int degree = 40;         // collocation degree for FourierPerturb
    DeficitSelector deficit = DeficitSelector::SerrinL2;
};

struct FitRow {
    double eps = 0.0;
    double deficit = 0.0;
    double gap = 0.0;  // rho_e - rho_i
    double residual_idwps = 0.0;
    double residual_hfund = 0.0;
    double residual_hk = 0.0;
    std::vector<double> axes;  // semi-axes, or {c_0, eps} for FourierPerturb
    bool used = false;
    std::string note;  // exclusion reason when not used
};

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;  // in log coordinates
    double r2 = 0.0;
    int points = 0;
};

struct ExponentFit {
    std::vector<FitRow> rows;  // sorted by descending eps
    PowerLawFit fit;
    DeficitSelector deficit = DeficitSelector::SerrinL2;
};

/// Ordinary least squares of log(y) against log(x).
PowerLawFit fit_power_law(const std::vector<double>& x,
                          const std::vector<double>& y);

Domain family_domain(const FamilySpec& spec, double eps);

/// Sweep the family, collect (deficit, gap) pairs, and fit the slope of
/// log(gap) vs log(deficit). Rows whose identity residuals exceed 1e-5,
/// or whose deficit sits within 10x of the residual noise floor, are
/// excluded from the fit but still reported. Throws TooFewPoints when
/// fewer than 4 rows survive.
ExponentFit run_family(const FamilySpec& spec, int jobs = 1);

/// Fixed, versioned CSV rendering of a family sweep (one row per eps).
std::string family_csv(const ExponentFit& fit);

struct ReportOptions {
    int boundary_order = 0;
    int radial_order = 0;
    int angular_order = 0;
    int degree = 40;
    CenterStrategy center = CenterStrategy::argmin_u();
    double p = 2.0;
    double theta = 0.1;
};

/// Full per-domain record: geometry, gap, all deficits, gap/deficit^tau
/// ratios, identity residuals, pointwise checks, and the constant ledger.
nlohmann::json stability_report(const Domain& domain, const ReportOptions& opt);

} // namespace serrinlab
