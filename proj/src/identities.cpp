#include "serrinlab/identities.hpp"

#include <cmath>

#include <json.hpp>

namespace serrinlab {

namespace {

struct BoundaryTabs {
    Vec u_nu, h_nu, q_nu, H;
};

BoundaryTabs tabulate(const Deviation& dev, const BoundaryGrid& bgrid) {
    const long n = bgrid.nodes.rows();
    BoundaryTabs t;
    t.u_nu.resize(n);
    t.h_nu.resize(n);
    t.q_nu.resize(n);
    t.H = bgrid.mean_curvature;
    for (long j = 0; j < n; ++j) {
        const Vec x = bgrid.nodes.row(j).transpose();
        const Vec nu = bgrid.normals.row(j).transpose();
        const auto e = dev.eval(x);
        t.u_nu[j] = e.grad_u.dot(nu);
        t.h_nu[j] = e.grad.dot(nu);
        t.q_nu[j] = (x - dev.center()).dot(nu);
    }
    return t;
}

IdentityReport make_report(std::string name, double lhs, double rhs,
                           double scale, const BoundaryGrid& bgrid,
                           const VolumeGrid* vgrid) {
    IdentityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_residual = std::abs(lhs - rhs);
    r.scale = scale;
    r.rel_residual =
        r.abs_residual / std::max({std::abs(lhs), std::abs(rhs), 1e-14 * scale});
    r.boundary_nodes = bgrid.nodes.rows();
    r.volume_nodes = vgrid ? vgrid->nodes.rows() : 0;
    return r;
}

// quadrature-level reference constants, internally consistent with the grids
void reference_constants(const BoundaryGrid& bgrid, const VolumeGrid& vgrid,
                         int N, double& R, double& H0) {
    R = N * vgrid.volume() / bgrid.area();
    H0 = 1.0 / R;
}

} // namespace

// ---------------------------------------------------------------------------

DeficitReport deficits(const TorsionField& field, const BoundaryGrid& bgrid,
                       const GeometrySummary& summary) {
    const int N = field.dim();
    DeficitReport rep;
    rep.R = N * summary.volume / summary.surface;
    rep.H0 = 1.0 / rep.R;

    auto accumulate = [&](const BoundaryGrid& g, DeficitReport& out,
                          bool pospart_only) {
        double l1 = 0, l2 = 0, sbt2 = 0, pos = 0, negw = 0, hk = 0, invh = 0;
        bool mc = true;
        for (long j = 0; j < g.nodes.rows(); ++j) {
            const Vec x = g.nodes.row(j).transpose();
            const double unu =
                field.eval_unchecked(x).grad.dot(g.normals.row(j).transpose());
            const double w = g.weights[j];
            const double du = unu - out.R;
            const double dH = out.H0 - g.mean_curvature[j];
            l1 += w * std::abs(du);
            l2 += w * du * du;
            sbt2 += w * dH * dH;
            pos += w * std::max(dH, 0.0);
            negw += w * std::max(-dH, 0.0) * unu * unu;
            if (g.mean_curvature[j] <= 0.0) mc = false;
            else {
                hk += w / g.mean_curvature[j];
                invh += w * (1.0 / g.mean_curvature[j] - unu);
            }
        }
        if (!pospart_only) {
            out.serrin_l1 = l1;
            out.serrin_l2 = std::sqrt(l2);
            out.sbt_l2 = std::sqrt(sbt2);
            out.mean_convex = mc;
            if (mc) {
                out.hk = hk - N * summary.volume;
                out.one_over_h = invh;
            }
        }
        out.sbt_pos_part = pos;
        out.sbt_neg_weighted = negw;
    };

    accumulate(bgrid, rep, false);

    // sign change of H0 - H makes the positive/negative parts only
    // piecewise smooth; recompute them on a doubled grid
    const Vec dH = rep.H0 - bgrid.mean_curvature.array();
    const double tol = 1e-12 * std::abs(rep.H0);
    if (dH.maxCoeff() > tol && dH.minCoeff() < -tol && bgrid.order > 0) {
        const BoundaryGrid fine = boundary_grid(field.domain(), 2 * bgrid.order);
        accumulate(fine, rep, true);
    }
    return rep;
}

std::vector<IdentityReport> verify_idwps(const Deviation& dev,
                                         const VolumeGrid& vgrid,
                                         const BoundaryGrid& bgrid) {
    const int N = dev.dim();
    double R, H0;
    reference_constants(bgrid, vgrid, N, R, H0);
    const BoundaryTabs t = tabulate(dev, bgrid);

    double lhs = 0.0, scale_v = 0.0;
    for (long m = 0; m < vgrid.nodes.rows(); ++m) {
        const auto e = dev.eval(vgrid.nodes.row(m).transpose());
        const double c = vgrid.weights[m] * (-e.u) * e.hess.squaredNorm();
        lhs += c;
        scale_v += std::abs(c);
    }

    double rhs_h = 0.0, rhs_orig = 0.0, scale_b = 0.0;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const double w = bgrid.weights[j];
        const double s = R * R - t.u_nu[j] * t.u_nu[j];
        rhs_h += 0.5 * w * s * t.h_nu[j];
        rhs_orig += 0.5 * w * (-s) * (t.u_nu[j] - t.q_nu[j]);
        scale_b += 0.5 * w * std::abs(s) * std::abs(t.h_nu[j]);
    }
    const double scale = std::max({scale_v, scale_b, R * R * bgrid.area()});

    std::vector<IdentityReport> out;
    out.push_back(make_report("idwps_h_form", lhs, rhs_h, scale, bgrid, &vgrid));
    out.push_back(make_report("idwps_1_8", lhs, rhs_orig, scale, bgrid, &vgrid));
    return out;
}

std::vector<IdentityReport> verify_h_fundamental(const Deviation& dev,
                                                 const VolumeGrid& vgrid,
                                                 const BoundaryGrid& bgrid) {
    const int N = dev.dim();
    double R, H0;
    reference_constants(bgrid, vgrid, N, R, H0);
    const BoundaryTabs t = tabulate(dev, bgrid);

    double hess2 = 0.0;
    for (long m = 0; m < vgrid.nodes.rows(); ++m)
        hess2 += vgrid.weights[m] *
                 dev.eval(vgrid.nodes.row(m).transpose()).hess.squaredNorm();

    double pohozaev = 0.0, rhs = 0.0, rhs_split = 0.0, scale_b = 0.0;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const double w = bgrid.weights[j];
        const double du = t.u_nu[j] - R;
        const double dH = H0 - t.H[j];
        pohozaev += w * du * du;
        rhs += w * dH * t.u_nu[j] * t.u_nu[j];
        rhs_split += w * dH * (-t.h_nu[j] * t.u_nu[j] + du * t.q_nu[j]);
        scale_b += w * std::abs(dH) * t.u_nu[j] * t.u_nu[j];
    }
    const double lhs = hess2 / (N - 1) + pohozaev / R;
    const double scale =
        std::max({hess2 / (N - 1) + pohozaev / R, scale_b, bgrid.area() * H0});

    std::vector<IdentityReport> out;
    out.push_back(make_report("h_fundamental", lhs, rhs, scale, bgrid, &vgrid));
    out.push_back(
        make_report("h_fundamental_split", lhs, rhs_split, scale, bgrid, &vgrid));
    return out;
}

IdentityReport verify_hk(const Deviation& dev, const VolumeGrid& vgrid,
                         const BoundaryGrid& bgrid) {
    const int N = dev.dim();
    if ((bgrid.mean_curvature.array() <= 0.0).any())
        throw NonPositiveCurvature("H must be positive on the whole boundary");
    const BoundaryTabs t = tabulate(dev, bgrid);

    double hess2 = 0.0;
    for (long m = 0; m < vgrid.nodes.rows(); ++m)
        hess2 += vgrid.weights[m] *
                 dev.eval(vgrid.nodes.row(m).transpose()).hess.squaredNorm();

    double pinch = 0.0, inv_h = 0.0;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const double w = bgrid.weights[j];
        const double s = 1.0 - t.H[j] * t.u_nu[j];
        pinch += w * s * s / t.H[j];
        inv_h += w / t.H[j];
    }
    const double lhs = hess2 / (N - 1) + pinch;
    const double rhs = inv_h - N * vgrid.volume();
    return make_report("heintze_karcher", lhs, rhs, inv_h, bgrid, &vgrid);
}

std::vector<IdentityReport> verify_flux(const TorsionField& field,
                                        const BoundaryGrid& bgrid,
                                        const GeometrySummary& summary,
                                        const Vec& z) {
    const int N = field.dim();
    double flux = 0.0, minkowski = 0.0;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const Vec x = bgrid.nodes.row(j).transpose();
        const Vec nu = bgrid.normals.row(j).transpose();
        const double w = bgrid.weights[j];
        flux += w * field.eval_unchecked(x).grad.dot(nu);
        minkowski += w * bgrid.mean_curvature[j] * (x - z).dot(nu);
    }
    std::vector<IdentityReport> out;
    out.push_back(make_report("flux_serrin", flux, N * summary.volume,
                              N * summary.volume, bgrid, nullptr));
    out.push_back(make_report("flux_minkowski", minkowski, summary.surface,
                              summary.surface, bgrid, nullptr));
    return out;
}

IdentityReport verify_harmonic_flux(const TorsionField& field,
                                    const std::function<double(const Vec&)>& v,
                                    const std::function<Vec(const Vec&)>& grad_v,
                                    const VolumeGrid& vgrid,
                                    const BoundaryGrid& bgrid,
                                    const std::string& name) {
    const int N = field.dim();
    double lhs = 0.0, flux = 0.0;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const Vec x = bgrid.nodes.row(j).transpose();
        const double vx = v(x);
        const double unu =
            field.eval_unchecked(x).grad.dot(bgrid.normals.row(j).transpose());
        lhs += bgrid.weights[j] * vx * vx * unu;
        flux += bgrid.weights[j] * unu;
    }
    double rhs = 0.0, scale = std::abs(lhs) + std::abs(flux);
    for (long m = 0; m < vgrid.nodes.rows(); ++m) {
        const Vec y = vgrid.nodes.row(m).transpose();
        const auto e = field.eval_unchecked(y);
        const double vy = v(y);
        const double c = vgrid.weights[m] *
                         (N * vy * vy + 2.0 * (-e.u) * grad_v(y).squaredNorm());
        rhs += c;
        scale += std::abs(c);
    }
    return make_report(name, lhs, rhs, scale, bgrid, &vgrid);
}

IdentityReport verify_harmonic_flux_gradh(const Deviation& dev,
                                          const VolumeGrid& vgrid,
                                          const BoundaryGrid& bgrid) {
    const int N = dev.dim();
    double lhs = 0.0, flux = 0.0;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const Vec x = bgrid.nodes.row(j).transpose();
        const auto e = dev.eval(x);
        const double unu = e.grad_u.dot(bgrid.normals.row(j).transpose());
        lhs += bgrid.weights[j] * e.grad.squaredNorm() * unu;
        flux += bgrid.weights[j] * unu;
    }
    // the v = 1 flux floors the scale so the ball case (0 = 0) stays finite
    double rhs = 0.0, scale = std::abs(lhs) + std::abs(flux);
    for (long m = 0; m < vgrid.nodes.rows(); ++m) {
        const auto e = dev.eval(vgrid.nodes.row(m).transpose());
        const double c =
            vgrid.weights[m] * (N * e.grad.squaredNorm() +
                                2.0 * (-e.u) * e.hess.squaredNorm());
        rhs += c;
        scale += std::abs(c);
    }
    return make_report("harmonic_flux_gradh", lhs, rhs, scale, bgrid, &vgrid);
}

std::vector<PointwiseViolation> check_pointwise(const TorsionField& field,
                                                const VolumeGrid& vgrid,
                                                const BoundaryGrid& bgrid,
                                                const GeometrySummary& summary,
                                                double slack) {
    const int N = field.dim();
    const double ri = summary.r_interior;
    std::vector<PointwiseViolation> v;

    for (long m = 0; m < vgrid.nodes.rows(); ++m) {
        const auto e = field.eval_unchecked(vgrid.nodes.row(m).transpose());
        const double lap = e.hess.trace();
        const double newton = N * e.hess.squaredNorm() - lap * lap;
        if (newton < -slack * N * N)
            v.push_back({"newton", m, newton, 0.0});
        const double lb = 0.5 * ri * vgrid.dist[m];
        if (-e.u < lb - slack * std::max(1.0, lb))
            v.push_back({"distance_lower_bound", m, -e.u, lb});
    }

    double M = 0.0;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const double unu =
            field.eval_unchecked(bgrid.nodes.row(j).transpose())
                .grad.dot(bgrid.normals.row(j).transpose());
        M = std::max(M, unu);
        if (unu < ri - slack * std::max(1.0, ri))
            v.push_back({"hopf", j, unu, ri});
    }

    const double d = summary.diameter;
    const double cN = N == 2 ? 1.5 : 0.5 * N;
    const double mbound = std::isinf(summary.r_exterior)
        ? cN * d
        : cN * d * (d + summary.r_exterior) / summary.r_exterior;
    if (M > mbound * (1.0 + slack))
        v.push_back({"gradient_bound", 0, M, mbound});
    return v;
}

StabilityChecks check_stability_inequalities(const Deviation& dev,
                                             const VolumeGrid& vgrid,
                                             const BoundaryGrid& bgrid,
                                             const GeometrySummary& summary,
                                             double M, double mu_rayleigh,
                                             double mu_placeholder) {
    const int N = dev.dim();
    double R, H0;
    reference_constants(bgrid, vgrid, N, R, H0);
    const BoundaryTabs t = tabulate(dev, bgrid);
    const double ri = summary.r_interior;

    StabilityChecks s;
    s.mu_rayleigh = mu_rayleigh;
    s.mu_placeholder = mu_placeholder;

    double hnu2 = 0.0, du2 = 0.0, dH2 = 0.0, pos = 0.0, negw = 0.0;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const double w = bgrid.weights[j];
        const double du = t.u_nu[j] - R;
        const double dH = H0 - t.H[j];
        hnu2 += w * t.h_nu[j] * t.h_nu[j];
        du2 += w * du * du;
        dH2 += w * dH * dH;
        pos += w * std::max(dH, 0.0) * t.u_nu[j] * t.u_nu[j];
        negw += w * std::max(-dH, 0.0) * t.u_nu[j] * t.u_nu[j];
    }
    s.hnu_l2 = std::sqrt(hnu2);
    s.serrin_l2 = std::sqrt(du2);
    s.sbt_l2 = std::sqrt(dH2);

    auto john = [&](double mu) { return 1.0 + N / (ri * mu * mu); };
    s.feldman_factor_rayleigh = (M + R) / ri * john(mu_rayleigh);
    s.feldman_factor_placeholder = (M + R) / ri * john(mu_placeholder);
    s.feldman_holds_rayleigh =
        s.hnu_l2 <= s.feldman_factor_rayleigh * s.serrin_l2;
    s.feldman_holds_placeholder =
        s.hnu_l2 <= s.feldman_factor_placeholder * s.serrin_l2;

    auto sbt_factor = [&](double mu) {
        return R * (summary.diameter + M * (M + R) / ri * john(mu));
    };
    s.sbt_factor_rayleigh = sbt_factor(mu_rayleigh);
    s.sbt_factor_placeholder = sbt_factor(mu_placeholder);
    s.sbt_holds_rayleigh = s.serrin_l2 <= s.sbt_factor_rayleigh * s.sbt_l2;
    s.sbt_holds_placeholder = s.serrin_l2 <= s.sbt_factor_placeholder * s.sbt_l2;

    double hess2 = 0.0;
    for (long m = 0; m < vgrid.nodes.rows(); ++m)
        hess2 += vgrid.weights[m] *
                 dev.eval(vgrid.nodes.row(m).transpose()).hess.squaredNorm();
    s.c_lhs = hess2 / (N - 1) + negw;
    s.c_rhs = pos;
    s.c_holds = s.c_lhs <= s.c_rhs + 1e-12 * std::max(1.0, s.c_rhs);
    s.c_cross_residual = (s.c_rhs - s.c_lhs) - du2 / R;
    return s;
}

// ---------------------------------------------------------------------------
// serialization

nlohmann::json DeficitReport::to_json() const {
    nlohmann::json j;
    j["R"] = R;
    j["H0"] = H0;
    j["serrin_l1"] = serrin_l1;
    j["serrin_l2"] = serrin_l2;
    j["sbt_l2"] = sbt_l2;
    j["sbt_pos_part"] = sbt_pos_part;
    j["sbt_neg_weighted"] = sbt_neg_weighted;
    j["mean_convex"] = mean_convex;
    if (mean_convex) {
        j["hk"] = hk;
        j["one_over_h"] = one_over_h;
    }
    return j;
}

nlohmann::json IdentityReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["abs_residual"] = abs_residual;
    j["rel_residual"] = rel_residual;
    j["scale"] = scale;
    j["boundary_nodes"] = boundary_nodes;
    j["volume_nodes"] = volume_nodes;
    return j;
}

nlohmann::json StabilityChecks::to_json() const {
    nlohmann::json j;
    j["mu_rayleigh"] = mu_rayleigh;
    j["mu_placeholder"] = mu_placeholder;
    j["placeholder_k"] = placeholder_k;
    j["hnu_l2"] = hnu_l2;
    j["serrin_l2"] = serrin_l2;
    j["sbt_l2"] = sbt_l2;
    j["feldman_factor_rayleigh"] = feldman_factor_rayleigh;
    j["feldman_factor_placeholder"] = feldman_factor_placeholder;
    j["feldman_holds_rayleigh"] = feldman_holds_rayleigh;
    j["feldman_holds_placeholder"] = feldman_holds_placeholder;
    j["sbt_factor_rayleigh"] = sbt_factor_rayleigh;
    j["sbt_factor_placeholder"] = sbt_factor_placeholder;
    j["sbt_holds_rayleigh"] = sbt_holds_rayleigh;
    j["sbt_holds_placeholder"] = sbt_holds_placeholder;
    j["c_lhs"] = c_lhs;
    j["c_rhs"] = c_rhs;
    j["c_holds"] = c_holds;
    j["c_cross_residual"] = c_cross_residual;
    return j;
}

} // namespace serrinlab
