#include "serrinlab/experiments.hpp"

#include "serrinlab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>

#include <json.hpp>

namespace serrinlab {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

TorsionField solve_any(const Domain& domain, int degree) {
    return domain.is_ellipsoid() ? TorsionField::solve_ellipsoid(domain)
                                 : TorsionField::solve_fourier2d(domain, degree);
}

int pick(int requested, int fallback) {
    return requested > 0 ? requested : fallback;
}

} // namespace

std::string deficit_name(DeficitSelector s) {
    switch (s) {
        case DeficitSelector::SerrinL2: return "serrin-l2";
        case DeficitSelector::SerrinL1: return "serrin-l1";
        case DeficitSelector::SbtL2: return "sbt-l2";
        case DeficitSelector::SbtPosPart: return "sbt-pos-part";
        case DeficitSelector::HK: return "hk";
        case DeficitSelector::OneOverH: return "one-over-h";
    }
    throw Error("unknown deficit selector");
}

DeficitSelector deficit_from_name(const std::string& name) {
    if (name == "serrin-l2") return DeficitSelector::SerrinL2;
    if (name == "serrin-l1") return DeficitSelector::SerrinL1;
    if (name == "sbt-l2") return DeficitSelector::SbtL2;
    if (name == "sbt-pos-part") return DeficitSelector::SbtPosPart;
    if (name == "hk") return DeficitSelector::HK;
    if (name == "one-over-h") return DeficitSelector::OneOverH;
    throw Error("unknown deficit name: " + name);
}

double deficit_value(const DeficitReport& rep, DeficitSelector s) {
    switch (s) {
        case DeficitSelector::SerrinL2: return rep.serrin_l2;
        case DeficitSelector::SerrinL1: return rep.serrin_l1;
        case DeficitSelector::SbtL2: return rep.sbt_l2;
        case DeficitSelector::SbtPosPart: return rep.sbt_pos_part;
        case DeficitSelector::HK: return rep.hk;
        case DeficitSelector::OneOverH: return rep.one_over_h;
    }
    throw Error("unknown deficit selector");
}

PowerLawFit fit_power_law(const std::vector<double>& x,
                          const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error("fit inputs have unequal length");
    if (x.size() < 4) throw TooFewPoints("need at least 4 points for a fit");
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0)
            throw Error("power-law fit requires positive data");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx; sy += ly;
        sxx += lx * lx; sxy += lx * ly; syy += ly * ly;
    }
    PowerLawFit f;
    f.points = n;
    const double det = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (int i = 0; i < n; ++i) {
        const double ly = std::log(y[i]);
        const double fit = f.intercept + f.slope * std::log(x[i]);
        ss_res += (ly - fit) * (ly - fit);
        ss_tot += (ly - ybar) * (ly - ybar);
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

Domain family_domain(const FamilySpec& spec, double eps) {
    if (spec.kind == FamilySpec::Kind::EllipsoidEccentric) {
        std::vector<double> axes(spec.dim,
            spec.base_radius * std::pow(1.0 + eps, -1.0 / (spec.dim - 1)));
        axes[0] = spec.base_radius * (1.0 + eps);
        return Domain::ellipsoid(std::move(axes));
    }
    std::vector<double> c(spec.mode + 1, 0.0);
    c[0] = spec.base_radius;
    c[spec.mode] = eps;
    return Domain::fourier2d(std::move(c), {});
}

namespace {

FitRow run_row(const FamilySpec& spec, double eps) {
    FitRow row;
    row.eps = eps;
    try {
        const Domain domain = family_domain(spec, eps);
        if (domain.is_ellipsoid()) row.axes = domain.semi_axes();
        else row.axes = {spec.base_radius, eps};

        const int bo = pick(spec.boundary_order, default_boundary_order(spec.dim));
        const int ro = pick(spec.radial_order, default_radial_order(spec.dim));
        const int ao = pick(spec.angular_order, default_angular_order(spec.dim));

        const TorsionField field = solve_any(domain, spec.degree);
        const GeometrySummary summary = geometric_summary(domain);
        const BoundaryGrid bgrid = boundary_grid(domain, bo);
        const VolumeGrid vgrid = volume_grid(domain, ro, ao);

        const Vec z = select_center(field, spec.center, vgrid);
        const Deviation dev(field, z);
        const auto [rho_i, rho_e] = radii_about(domain, z);
        row.gap = rho_e - rho_i;

        const DeficitReport rep = deficits(field, bgrid, summary);
        row.deficit = deficit_value(rep, spec.deficit);

        const auto idwps = verify_idwps(dev, vgrid, bgrid);
        const auto hfund = verify_h_fundamental(dev, vgrid, bgrid);
        row.residual_idwps = idwps[0].abs_residual;
        row.residual_hfund = hfund[0].abs_residual;
        double rel = std::max(idwps[0].rel_residual, hfund[0].rel_residual);
        if (rep.mean_convex) {
            const IdentityReport hk = verify_hk(dev, vgrid, bgrid);
            row.residual_hk = hk.abs_residual;
            rel = std::max(rel, hk.rel_residual);
        }

        if (rel > 1e-5) {
            row.note = "identity residual above 1e-5";
            return row;
        }
        const double floor = std::max({row.residual_idwps, row.residual_hfund,
                                       row.residual_hk});
        if (!(row.deficit > 10.0 * floor)) {
            row.note = "deficit at quadrature noise floor";
            return row;
        }
        if (row.gap <= 0.0 || row.deficit <= 0.0) {
            row.note = "degenerate row (nonpositive gap or deficit)";
            return row;
        }
        row.used = true;
    } catch (const std::exception& e) {
        row.note = std::string("solver failure: ") + e.what();
    }
    return row;
}

} // namespace

ExponentFit run_family(const FamilySpec& spec, int jobs) {
    if (spec.eps.size() < 4)
        throw TooFewPoints("family needs at least 4 eps values");
    for (size_t i = 0; i < spec.eps.size(); ++i) {
        if (spec.eps[i] <= 0.0) throw Error("eps values must be positive");
        if (i > 0 && spec.eps[i] >= spec.eps[i - 1])
            throw Error("eps values must be strictly decreasing");
    }

    ExponentFit out;
    out.deficit = spec.deficit;
    out.rows.resize(spec.eps.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < spec.eps.size(); ++i)
            out.rows[i] = run_row(spec, spec.eps[i]);
    } else {
        for (size_t start = 0; start < spec.eps.size();
             start += static_cast<size_t>(jobs)) {
            const size_t stop =
                std::min(start + static_cast<size_t>(jobs), spec.eps.size());
            std::vector<std::future<FitRow>> batch;
            for (size_t i = start; i < stop; ++i)
                batch.push_back(std::async(std::launch::async, run_row, spec,
                                           spec.eps[i]));
            for (size_t i = start; i < stop; ++i)
                out.rows[i] = batch[i - start].get();
        }
    }

    std::vector<double> xs, ys;
    for (const FitRow& r : out.rows)
        if (r.used) {
            xs.push_back(r.deficit);
            ys.push_back(r.gap);
        }
    if (xs.size() < 4) throw TooFewPoints("fewer than 4 usable family rows");
    out.fit = fit_power_law(xs, ys);
    return out;
}

std::string family_csv(const ExponentFit& fit) {
    std::string s = "# serrinlab family sweep, format v1\n";
    s += "epsilon,axes,deficit_name,deficit,gap,log_deficit,log_gap,"
         "residual_idwps,residual_hfund,residual_hk,used,note\n";
    const std::string name = deficit_name(fit.deficit);
    for (const FitRow& r : fit.rows) {
        std::string axes;
        for (size_t i = 0; i < r.axes.size(); ++i) {
            if (i) axes += ';';
            axes += fmt17(r.axes[i]);
        }
        s += fmt17(r.eps) + "," + axes + "," + name + "," + fmt17(r.deficit) +
             "," + fmt17(r.gap) + "," +
             (r.deficit > 0 ? fmt17(std::log(r.deficit)) : "nan") + "," +
             (r.gap > 0 ? fmt17(std::log(r.gap)) : "nan") + "," +
             fmt17(r.residual_idwps) + "," + fmt17(r.residual_hfund) + "," +
             fmt17(r.residual_hk) + "," + (r.used ? "1" : "0") + "," + r.note +
             "\n";
    }
    return s;
}

nlohmann::json stability_report(const Domain& domain, const ReportOptions& opt) {
    const int N = domain.dim();
    const int bo = pick(opt.boundary_order, default_boundary_order(N));
    const int ro = pick(opt.radial_order, default_radial_order(N));
    const int ao = pick(opt.angular_order, default_angular_order(N));

    const TorsionField field = solve_any(domain, opt.degree);
    const GeometrySummary summary = geometric_summary(domain);
    const BoundaryGrid bgrid = boundary_grid(domain, bo);
    const VolumeGrid vgrid = volume_grid(domain, ro, ao);

    const Vec z = select_center(field, opt.center, vgrid);
    const Deviation dev(field, z);
    const auto [rho_i, rho_e] = radii_about(domain, z);
    const double gap = rho_e - rho_i;

    const DeficitReport rep = deficits(field, bgrid, summary);
    const GradientBound gb = gradient_bound(field, bgrid);
    const double delta_z = distance_to_boundary(domain, z);
    const ConstantLedger led =
        ledger(summary, N, opt.p, delta_z, gb.M, opt.theta);

    nlohmann::json j;
    j["domain"] = domain.to_json();
    j["geometry"] = summary.to_json();
    j["center"] = std::vector<double>(z.data(), z.data() + z.size());
    j["rho_i"] = rho_i;
    j["rho_e"] = rho_e;
    j["gap"] = gap;
    j["M"] = gb.M;
    j["deficits"] = rep.to_json();

    nlohmann::json ratios;
    const std::pair<DeficitSelector, StabilityProblem> map[] = {
        {DeficitSelector::SerrinL2, StabilityProblem::Serrin},
        {DeficitSelector::SerrinL1, StabilityProblem::Serrin},
        {DeficitSelector::SbtL2, StabilityProblem::SBT},
        {DeficitSelector::SbtPosPart, StabilityProblem::SBT},
        {DeficitSelector::HK, StabilityProblem::HK},
        {DeficitSelector::OneOverH, StabilityProblem::OneOverH},
    };
    for (const auto& [sel, prob] : map) {
        if ((sel == DeficitSelector::HK || sel == DeficitSelector::OneOverH) &&
            !rep.mean_convex)
            continue;
        const double def = deficit_value(rep, sel);
        const double t = tau(N, prob, opt.theta);
        nlohmann::json entry;
        entry["deficit"] = def;
        entry["tau"] = t;
        if (def > 1e-10)
            entry["ratio"] = gap / std::pow(def, t);
        else
            entry["ratio"] = nullptr;  // ball-like: ratio not applicable
        ratios[deficit_name(sel)] = entry;
    }
    j["ratios"] = ratios;

    nlohmann::json ids = nlohmann::json::array();
    for (const auto& r : verify_idwps(dev, vgrid, bgrid)) ids.push_back(r.to_json());
    for (const auto& r : verify_h_fundamental(dev, vgrid, bgrid))
        ids.push_back(r.to_json());
    for (const auto& r : verify_flux(field, bgrid, summary, z))
        ids.push_back(r.to_json());
    ids.push_back(verify_harmonic_flux_gradh(dev, vgrid, bgrid).to_json());
    if (rep.mean_convex && (bgrid.mean_curvature.array() > 0.0).all())
        ids.push_back(verify_hk(dev, vgrid, bgrid).to_json());
    j["identities"] = ids;

    const auto violations = check_pointwise(field, vgrid, bgrid, summary);
    j["pointwise_violations"] = violations.size();

    const int ray_degree = N == 2 ? 6 : 2;
    const RayleighEstimate ray =
        rayleigh_estimate(domain, vgrid, z, 2.0, 2.0, 0.5, ray_degree);
    const StabilityChecks checks = check_stability_inequalities(
        dev, vgrid, bgrid, summary, gb.M, ray.mu, 1.0 / led.mu_inv_hs);
    j["stability"] = checks.to_json();
    j["constants"] = led.to_json();
    return j;
}

} // namespace serrinlab
