#include "serrinlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace serrinlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Unit-sphere direction from N-1 angles: theta_1..theta_{N-2} polar, phi last.
Vec sphere_direction(const Vec& angles, int dim) {
    Vec omega(dim);
    double prefix = 1.0;
    for (int k = 0; k + 2 < dim; ++k) {
        omega[k] = prefix * std::cos(angles[k]);
        prefix *= std::sin(angles[k]);
    }
    const double phi = angles[angles.size() - 1];
    omega[dim - 2] = prefix * std::cos(phi);
    omega[dim - 1] = prefix * std::sin(phi);
    return omega;
}

struct AngularGrid {
    Mat params;   // n x (N-1)
    Mat dirs;     // n x N unit vectors
    Vec weights;  // unit-sphere surface measure
};

// Tensor rule on S^{N-1}: Gauss-Legendre in each polar angle, equispaced
// azimuth. Spectrally accurate for smooth integrands.
AngularGrid sphere_grid(int dim, int polar_order, int azimuth_order) {
    const int np = dim - 2;  // number of polar angles
    const int nphi = azimuth_order;
    Vec gl_nodes, gl_weights;
    if (np > 0) gauss_legendre(polar_order, 0.0, kPi, gl_nodes, gl_weights);

    long total = nphi;
    for (int k = 0; k < np; ++k) total *= polar_order;

    AngularGrid g;
    g.params.resize(total, dim - 1);
    g.dirs.resize(total, dim);
    g.weights.resize(total);

    const double dphi = 2.0 * kPi / nphi;
    std::vector<int> idx(np, 0);
    long row = 0;
    for (long outer = 0; outer < (np > 0 ? total / nphi : 1); ++outer) {
        Vec angles(dim - 1);
        double wpolar = 1.0;
        for (int k = 0; k < np; ++k) {
            const double th = gl_nodes[idx[k]];
            angles[k] = th;
            wpolar *= gl_weights[idx[k]] * std::pow(std::sin(th), dim - 2 - k);
        }
        for (int j = 0; j < nphi; ++j, ++row) {
            angles[dim - 2] = (j + 0.5) * dphi - kPi;
            g.params.row(row) = angles;
            g.dirs.row(row) = sphere_direction(angles, dim);
            g.weights[row] = wpolar * dphi;
        }
        // advance the polar multi-index
        for (int k = np - 1; k >= 0; --k) {
            if (++idx[k] < polar_order) break;
            idx[k] = 0;
        }
    }
    return g;
}

// Boundary curve of a 2D domain with derivatives in the parameter.
void curve2d(const Domain& d, double theta, Vec& c, Vec& cd, Vec& cdd) {
    c.resize(2); cd.resize(2); cdd.resize(2);
    const double ct = std::cos(theta), st = std::sin(theta);
    if (d.is_ellipsoid()) {
        const double a = d.semi_axes()[0], b = d.semi_axes()[1];
        c << a * ct, b * st;
        cd << -a * st, b * ct;
        cdd = -c;
    } else {
        const double R = d.radius(theta), Rd = d.radius_d(theta),
                     Rdd = d.radius_dd(theta);
        c << R * ct, R * st;
        cd << Rd * ct - R * st, Rd * st + R * ct;
        cdd << (Rdd - R) * ct - 2.0 * Rd * st, (Rdd - R) * st + 2.0 * Rd * ct;
    }
}

double curve2d_curvature(const Domain& d, double theta) {
    Vec c, cd, cdd;
    curve2d(d, theta, c, cd, cdd);
    const double sp = cd.norm();
    return (cd[0] * cdd[1] - cd[1] * cdd[0]) / (sp * sp * sp);
}

// Mean curvature of an ellipsoid boundary at x (H = 1/rho on a sphere).
double ellipsoid_mean_curvature(const std::vector<double>& a, const Vec& x) {
    const int n = static_cast<int>(a.size());
    double sumk = 0.0, gg = 0.0, gt = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a2 = a[i] * a[i];
        const double gi = x[i] / a2;
        const double ti = gi / a2;
        sumk += 1.0 / a2;
        gg += gi * gi;
        gt += gi * ti;
    }
    const double gn = std::sqrt(gg);
    const double div_nu = sumk / gn - gt / (gg * gn);
    return div_nu / (n - 1);
}

double ellipsoid_distance(const std::vector<double>& a, const Vec& x) {
    const int n = static_cast<int>(a.size());
    std::vector<double> a2(n);
    double b2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) { a2[i] = a[i] * a[i]; b2 = std::min(b2, a2[i]); }

    auto G = [&](double lam, double& deriv) {
        double g = 0.0; deriv = 0.0;
        for (int i = 0; i < n; ++i) {
            const double den = a2[i] + lam;
            const double t = a2[i] * x[i] * x[i] / (den * den);
            g += t;
            deriv += -2.0 * t / den;
        }
        return g;
    };

    double dummy;
    const double lam_lo = -b2 * (1.0 - 1e-12);
    if (G(lam_lo, dummy) < 1.0) {
        // Nearest point sits on the medial branch: components along the
        // shortest axes complete the boundary condition.
        double sreg = 0.0, dist2 = 0.0, xmin2 = 0.0;
        for (int i = 0; i < n; ++i) {
            if (a2[i] > b2 * (1.0 + 1e-13)) {
                const double yi = x[i] * a2[i] / (a2[i] - b2);
                sreg += yi * yi / a2[i];
                dist2 += (x[i] - yi) * (x[i] - yi);
            } else {
                xmin2 += x[i] * x[i];
            }
        }
        const double rm = std::sqrt(std::max(0.0, b2 * (1.0 - sreg)));
        const double dm = rm - std::sqrt(xmin2);
        return std::sqrt(dist2 + dm * dm);
    }

    // Safeguarded Newton for the monotone decreasing convex G(lambda) = 1.
    double lo = lam_lo, hi = 0.0, lam = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double deriv;
        const double g = G(lam, deriv) - 1.0;
        if (std::abs(g) < 1e-15) break;
        if (g > 0.0) lo = lam; else hi = lam;
        double step = (deriv != 0.0) ? lam - g / deriv : 0.5 * (lo + hi);
        lam = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
        if (hi - lo < 1e-17 * b2) break;
    }
    double dist2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double yi = a2[i] * x[i] / (a2[i] + lam);
        dist2 += (x[i] - yi) * (x[i] - yi);
    }
    return std::sqrt(dist2);
}

// Projection onto a Fourier2D boundary: Newton on the squared distance,
// seeded from the nearest sample among seed_thetas.
double fourier_distance(const Domain& d, const Vec& x, const Mat& seeds) {
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int j = 0; j < seeds.rows(); ++j) {
        const double dx = seeds(j, 1) - x[0], dy = seeds(j, 2) - x[1];
        const double d2 = dx * dx + dy * dy;
        if (d2 < best_d2) { best_d2 = d2; best = j; }
    }
    double theta = seeds(best, 0);
    const double scale = seeds.col(1).cwiseAbs().maxCoeff() +
                         seeds.col(2).cwiseAbs().maxCoeff();
    Vec c, cd, cdd;
    const double step_cap = 2.0 * kPi / seeds.rows() * 4.0;
    for (int it = 0; it < 100; ++it) {
        curve2d(d, theta, c, cd, cdd);
        const Vec r = c - x;
        const double g = r.dot(cd);
        const double gd = cd.squaredNorm() + r.dot(cdd);
        if (std::abs(g) < 1e-14 * scale * scale) return r.norm();
        double step = (gd > 0.0) ? -g / gd : -g / cd.squaredNorm();
        step = std::clamp(step, -step_cap, step_cap);
        theta += step;
        if (std::abs(step) < 1e-15) { curve2d(d, theta, c, cd, cdd); return (c - x).norm(); }
    }
    throw ProjectionDiverged("boundary projection failed to converge");
}

Mat fourier_seed_table(const Domain& d, int n) {
    Mat seeds(n, 3);
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * kPi * j / n;
        const double R = d.radius(th);
        seeds(j, 0) = th;
        seeds(j, 1) = R * std::cos(th);
        seeds(j, 2) = R * std::sin(th);
    }
    return seeds;
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain Domain::ellipsoid(std::vector<double> semi_axes) {
    if (semi_axes.size() < 2)
        throw InvalidDimension("ellipsoid needs at least 2 semi-axes");
    for (double a : semi_axes)
        if (!(a > 0.0)) throw NonPositiveAxis("semi-axis must be positive");
    Domain d;
    d.kind_ = DomainKind::Ellipsoid;
    d.dim_ = static_cast<int>(semi_axes.size());
    d.axes_ = std::move(semi_axes);
    return d;
}

Domain Domain::fourier2d(std::vector<double> cos_coeffs,
                         std::vector<double> sin_coeffs) {
    if (cos_coeffs.empty()) throw NonPositiveRadius("empty coefficient list");
    Domain d;
    d.kind_ = DomainKind::Fourier2D;
    d.dim_ = 2;
    d.cos_ = std::move(cos_coeffs);
    d.sin_ = std::move(sin_coeffs);
    // R(theta) > 0 checked on a dense sample
    const int ns = 4096;
    for (int j = 0; j < ns; ++j) {
        const double th = 2.0 * kPi * j / ns;
        if (!(d.radius(th) > 0.0))
            throw NonPositiveRadius("R(theta) <= 0 at theta=" + std::to_string(th));
    }
    return d;
}

double Domain::radius(double theta) const {
    double r = cos_[0];
    for (size_t k = 1; k < cos_.size(); ++k) r += cos_[k] * std::cos(k * theta);
    for (size_t k = 0; k < sin_.size(); ++k) r += sin_[k] * std::sin((k + 1) * theta);
    return r;
}

double Domain::radius_d(double theta) const {
    double r = 0.0;
    for (size_t k = 1; k < cos_.size(); ++k) r += -double(k) * cos_[k] * std::sin(k * theta);
    for (size_t k = 0; k < sin_.size(); ++k) r += double(k + 1) * sin_[k] * std::cos((k + 1) * theta);
    return r;
}

double Domain::radius_dd(double theta) const {
    double r = 0.0;
    for (size_t k = 1; k < cos_.size(); ++k) r += -double(k * k) * cos_[k] * std::cos(k * theta);
    for (size_t k = 0; k < sin_.size(); ++k) r += -double((k + 1) * (k + 1)) * sin_[k] * std::sin((k + 1) * theta);
    return r;
}

double Domain::boundary_radius(const Vec& omega) const {
    if (is_ellipsoid()) {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) {
            const double t = omega[i] / axes_[i];
            s += t * t;
        }
        return 1.0 / std::sqrt(s);
    }
    return radius(std::atan2(omega[1], omega[0]));
}

bool Domain::contains(const Vec& x, double tol) const {
    const double r = x.norm();
    if (r == 0.0) return true;
    return r <= boundary_radius(x / r) * (1.0 + tol);
}

Domain Domain::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ellipsoid")
        return ellipsoid(j.at("axes").get<std::vector<double>>());
    if (kind == "fourier2d")
        return fourier2d(j.at("cos").get<std::vector<double>>(),
                         j.value("sin", std::vector<double>{}));
    throw Error("unknown domain kind: " + kind);
}

nlohmann::json Domain::to_json() const {
    nlohmann::json j;
    if (is_ellipsoid()) {
        j["kind"] = "ellipsoid";
        j["axes"] = axes_;
    } else {
        j["kind"] = "fourier2d";
        j["cos"] = cos_;
        j["sin"] = sin_;
    }
    return j;
}

Domain build_domain(const nlohmann::json& spec) { return Domain::from_json(spec); }

nlohmann::json GeometrySummary::to_json() const {
    nlohmann::json j;
    j["volume"] = volume;
    j["surface"] = surface;
    j["diameter"] = diameter;
    j["r_interior"] = r_interior;
    if (std::isinf(r_exterior)) j["r_exterior"] = "inf";
    else j["r_exterior"] = r_exterior;
    j["mean_convex"] = mean_convex;
    j["convex"] = convex;
    j["radii_estimated"] = radii_estimated;
    j["dim"] = dim;
    return j;
}

// ---------------------------------------------------------------------------
// Quadrature primitives

void gauss_legendre(int n, double a, double b, Vec& nodes, Vec& weights) {
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration on Legendre polynomials, standard construction.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        nodes[i] = mid - half * nodes[i];
        weights[i] *= half;
    }
}

double unit_ball_volume(int dim) {
    return std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

int default_boundary_order(int dim) {
    switch (dim) {
        case 2: return 256;
        case 3: return 64;
        case 4: return 32;
        default: return 20;
    }
}

int default_radial_order(int dim) {
    switch (dim) {
        case 2: return 64;
        case 3: return 32;
        case 4: return 20;
        default: return 16;
    }
}

int default_angular_order(int dim) {
    switch (dim) {
        case 2: return 256;
        case 3: return 48;
        case 4: return 20;
        default: return 14;
    }
}

// ---------------------------------------------------------------------------
// Grids

BoundaryGrid boundary_grid(const Domain& domain, int order) {
    if (order < 8) throw Error("boundary order must be >= 8");
    const int n = domain.dim();
    BoundaryGrid g;
    g.order = order;

    if (n == 2) {
        const int m = order;
        g.nodes.resize(m, 2);
        g.weights.resize(m);
        g.normals.resize(m, 2);
        g.mean_curvature.resize(m);
        g.params.resize(m, 1);
        const double dth = 2.0 * kPi / m;
        Vec c, cd, cdd;
        for (int j = 0; j < m; ++j) {
            const double th = j * dth;
            curve2d(domain, th, c, cd, cdd);
            const double sp = cd.norm();
            g.nodes.row(j) = c;
            g.params(j, 0) = th;
            g.weights[j] = sp * dth;
            g.normals(j, 0) = cd[1] / sp;
            g.normals(j, 1) = -cd[0] / sp;
            g.mean_curvature[j] = (cd[0] * cdd[1] - cd[1] * cdd[0]) / (sp * sp * sp);
        }
        return g;
    }

    if (!domain.is_ellipsoid())
        throw UnsupportedDimension("Fourier2D domains are two-dimensional");

    const auto& a = domain.semi_axes();
    double det = 1.0;
    for (double ai : a) det *= ai;
    AngularGrid ag = sphere_grid(n, order, 2 * order);
    const long m = ag.dirs.rows();
    g.nodes.resize(m, n);
    g.weights.resize(m);
    g.normals.resize(m, n);
    g.mean_curvature.resize(m);
    g.params = ag.params;
    for (long j = 0; j < m; ++j) {
        Vec x(n), conormal(n);
        for (int i = 0; i < n; ++i) {
            x[i] = a[i] * ag.dirs(j, i);
            conormal[i] = ag.dirs(j, i) / a[i];  // A^{-T} omega
        }
        g.nodes.row(j) = x;
        g.weights[j] = det * conormal.norm() * ag.weights[j];
        g.normals.row(j) = conormal / conormal.norm();
        g.mean_curvature[j] = ellipsoid_mean_curvature(a, x);
    }
    return g;
}

VolumeGrid volume_grid(const Domain& domain, int radial_order, int angular_order) {
    if (radial_order < 8 || angular_order < 8)
        throw Error("volume grid orders must be >= 8");
    const int n = domain.dim();
    Vec rn, rw;
    gauss_legendre(radial_order, 0.0, 1.0, rn, rw);

    VolumeGrid g;
    if (n == 2 && !domain.is_ellipsoid()) {
        const int m = angular_order;
        const double dth = 2.0 * kPi / m;
        g.nodes.resize(long(m) * radial_order, 2);
        g.weights.resize(long(m) * radial_order);
        g.dist.resize(long(m) * radial_order);
        const Mat seeds = fourier_seed_table(domain, std::max(512, 2 * m));
        long row = 0;
        for (int j = 0; j < m; ++j) {
            const double th = j * dth;
            const double R = domain.radius(th);
            const double ct = std::cos(th), st = std::sin(th);
            for (int i = 0; i < radial_order; ++i, ++row) {
                const double r = rn[i];
                g.nodes(row, 0) = r * R * ct;
                g.nodes(row, 1) = r * R * st;
                g.weights[row] = rw[i] * r * R * R * dth;
                g.dist[row] = fourier_distance(domain, g.nodes.row(row).transpose(), seeds);
            }
        }
        return g;
    }

    // Ellipsoid of any dimension: image of the unit ball under the axis map,
    // so polynomial integrands are integrated exactly at modest orders.
    const auto& a = domain.semi_axes();
    double det = 1.0;
    for (double ai : a) det *= ai;
    AngularGrid ag = (n == 2)
        ? sphere_grid(2, 0, angular_order)
        : sphere_grid(n, angular_order, 2 * angular_order);
    const long na = ag.dirs.rows();
    g.nodes.resize(na * radial_order, n);
    g.weights.resize(na * radial_order);
    g.dist.resize(na * radial_order);
    long row = 0;
    for (long j = 0; j < na; ++j) {
        for (int i = 0; i < radial_order; ++i, ++row) {
            const double r = rn[i];
            for (int k = 0; k < n; ++k) g.nodes(row, k) = a[k] * r * ag.dirs(j, k);
            g.weights[row] = det * rw[i] * std::pow(r, n - 1) * ag.weights[j];
            g.dist[row] = ellipsoid_distance(a, g.nodes.row(row).transpose());
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Boundary parameter helpers

Vec boundary_point(const Domain& domain, const Vec& params) {
    const int n = domain.dim();
    if (n == 2) {
        Vec c, cd, cdd;
        curve2d(domain, params[0], c, cd, cdd);
        return c;
    }
    Vec omega = sphere_direction(params, n);
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = domain.semi_axes()[i] * omega[i];
    return x;
}

Vec boundary_normal(const Domain& domain, const Vec& params) {
    const int n = domain.dim();
    if (n == 2) {
        Vec c, cd, cdd;
        curve2d(domain, params[0], c, cd, cdd);
        Vec nu(2);
        nu << cd[1], -cd[0];
        return nu / nu.norm();
    }
    const Vec x = boundary_point(domain, params);
    Vec nu(n);
    for (int i = 0; i < n; ++i)
        nu[i] = x[i] / (domain.semi_axes()[i] * domain.semi_axes()[i]);
    return nu / nu.norm();
}

Vec refine_boundary_extremum(const std::function<double(const Vec&)>& f,
                             const Vec& p0, double window, bool maximize) {
    const double sign = maximize ? -1.0 : 1.0;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    Vec p = p0;
    double w = window;
    for (int sweep = 0; sweep < 80 && w > 1e-13; ++sweep) {
        for (int k = 0; k < p.size(); ++k) {
            double lo = p[k] - w, hi = p[k] + w;
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            Vec q = p;
            q[k] = x1; double f1 = sign * f(q);
            q[k] = x2; double f2 = sign * f(q);
            for (int it = 0; it < 40; ++it) {
                if (f1 < f2) {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    q[k] = x1; f1 = sign * f(q);
                } else {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    q[k] = x2; f2 = sign * f(q);
                }
            }
            p[k] = 0.5 * (lo + hi);
        }
        w *= 0.5;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Summary quantities

double distance_to_boundary(const Domain& domain, const Vec& x) {
    if (domain.is_ellipsoid()) return ellipsoid_distance(domain.semi_axes(), x);
    const Mat seeds = fourier_seed_table(domain, 512);
    return fourier_distance(domain, x, seeds);
}

namespace {

// First exit of the inward-normal ray from a Fourier2D boundary point;
// used to cap r_i estimates on nonconvex domains.
double inward_chord(const Domain& d, const Vec& x, const Vec& nu, double dmax) {
    auto inside = [&](double t) {
        Vec p = x - t * nu;
        const double r = p.norm();
        if (r < 1e-14) return true;
        return r < d.radius(std::atan2(p[1], p[0]));
    };
    const int ns = 1024;
    double t_prev = dmax * 1e-6;
    if (!inside(t_prev)) return 0.0;
    for (int i = 1; i <= ns; ++i) {
        const double t = dmax * i / ns;
        if (!inside(t)) {
            double lo = t_prev, hi = t;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (inside(mid)) lo = mid; else hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        t_prev = t;
    }
    return dmax;
}

}  // namespace

GeometrySummary geometric_summary(const Domain& domain) {
    const int n = domain.dim();
    GeometrySummary s;
    s.dim = n;
    if (domain.is_ellipsoid()) {
        const auto& a = domain.semi_axes();
        s.volume = unit_ball_volume(n);
        for (double ai : a) s.volume *= ai;
        // the boundary quadrature is spectrally accurate well below the
        // default orders; order 12 per angle already reaches ~1e-14
        const int order = std::min(default_boundary_order(n), n >= 4 ? 12 : 256);
        s.surface = boundary_grid(domain, order).area();
        const double amax = *std::max_element(a.begin(), a.end());
        const double amin = *std::min_element(a.begin(), a.end());
        s.diameter = 2.0 * amax;
        s.r_interior = amin * amin / amax;
        s.r_exterior = std::numeric_limits<double>::infinity();
        s.mean_convex = true;
        s.convex = true;
        return s;
    }

    s.volume =
        volume_grid(domain, default_radial_order(n), default_angular_order(n))
            .volume();
    s.surface = boundary_grid(domain, default_boundary_order(n)).area();

    // Fourier2D: dense boundary sample (4x the default grid).
    const int nd = 4 * default_boundary_order(2);
    Mat pts(nd, 2);
    Vec kappa(nd);
    for (int j = 0; j < nd; ++j) {
        const double th = 2.0 * kPi * j / nd;
        Vec c, cd, cdd;
        curve2d(domain, th, c, cd, cdd);
        pts.row(j) = c;
        kappa[j] = curve2d_curvature(domain, th);
    }
    double d2 = 0.0;
    for (int i = 0; i < nd; ++i)
        for (int j = i + 1; j < nd; ++j)
            d2 = std::max(d2, (pts.row(i) - pts.row(j)).squaredNorm());
    s.diameter = std::sqrt(d2);

    int jmax;
    const double kmax = kappa.maxCoeff(&jmax);
    int jmin;
    const double kmin = kappa.minCoeff(&jmin);
    auto kappa_of = [&](const Vec& p) { return curve2d_curvature(domain, p[0]); };
    Vec p0(1);
    p0[0] = 2.0 * kPi * jmax / nd;
    const double kmax_ref =
        kappa_of(refine_boundary_extremum(kappa_of, p0, 2.0 * kPi / nd, true));

    const double curv_scale = std::max(std::abs(kmax), std::abs(kmin));
    if (kmin >= -1e-12 * curv_scale) {
        s.convex = true;
        s.mean_convex = true;
        s.r_interior = 1.0 / kmax_ref;
        s.r_exterior = std::numeric_limits<double>::infinity();
    } else {
        s.convex = false;
        s.mean_convex = false;
        s.radii_estimated = true;
        // interior: min curvature radius capped by half the min normal chord
        double chord_min = s.diameter;
        const int nc = 256;
        for (int j = 0; j < nc; ++j) {
            const double th = 2.0 * kPi * j / nc;
            Vec c, cd, cdd;
            curve2d(domain, th, c, cd, cdd);
            Vec nu(2);
            nu << cd[1] / cd.norm(), -cd[0] / cd.norm();
            chord_min = std::min(chord_min, inward_chord(domain, c, nu, s.diameter));
        }
        s.r_interior = std::min(1.0 / kmax_ref, 0.5 * chord_min);
        p0[0] = 2.0 * kPi * jmin / nd;
        const double kmin_ref =
            kappa_of(refine_boundary_extremum(kappa_of, p0, 2.0 * kPi / nd, false));
        s.r_exterior = 1.0 / std::abs(kmin_ref);
    }
    return s;
}

std::pair<double, double> radii_about(const Domain& domain, const Vec& z) {
    if (!domain.contains(z, 1e-12))
        throw CenterOutsideDomain("radii_about requires z inside the domain");
    const int n = domain.dim();

    if (domain.is_ellipsoid()) {
        const auto& a = domain.semi_axes();
        const double amax = *std::max_element(a.begin(), a.end());
        const double amin = *std::min_element(a.begin(), a.end());
        if (z.norm() <= 1e-13 * amax) return {amin, amax};
    }

    const BoundaryGrid bg = boundary_grid(domain, default_boundary_order(n));
    auto dist = [&](const Vec& params) {
        return (boundary_point(domain, params) - z).norm();
    };
    int jmin = 0, jmax = 0;
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (long j = 0; j < bg.nodes.rows(); ++j) {
        const double d = (bg.nodes.row(j).transpose() - z).norm();
        if (d < dmin) { dmin = d; jmin = j; }
        if (d > dmax) { dmax = d; jmax = j; }
    }
    const double window = (n == 2) ? 2.0 * kPi / bg.nodes.rows()
                                   : kPi / default_boundary_order(n);
    const double rho_i =
        dist(refine_boundary_extremum(dist, bg.params.row(jmin).transpose(), window, false));
    const double rho_e =
        dist(refine_boundary_extremum(dist, bg.params.row(jmax).transpose(), window, true));
    return {std::min(rho_i, dmin), std::max(rho_e, dmax)};
}

} // namespace serrinlab
