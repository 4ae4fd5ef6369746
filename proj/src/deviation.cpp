#include "serrinlab/deviation.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "serrinlab/constants.hpp"

namespace serrinlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Center selection

Vec select_center(const TorsionField& field, const CenterStrategy& strategy,
                  const VolumeGrid& vgrid) {
    const int n = field.dim();
    const Domain& dom = field.domain();

    const Vec centroid =
        (vgrid.weights.transpose() * vgrid.nodes).transpose() / vgrid.weights.sum();

    switch (strategy.kind) {
        case CenterStrategy::Kind::Centroid: {
            if (!dom.contains(centroid, 1e-12))
                throw CenterLeftDomain("centroid fell outside the domain");
            return centroid;
        }
        case CenterStrategy::Kind::Feldman: {
            const Vec& x0 = strategy.feldman_x0;
            if (x0.size() != n) throw Error("Feldman point has wrong dimension");
            if (!dom.contains(x0, 0.0))
                throw CenterOutsideDomain("Feldman base point outside the domain");
            const Vec z = x0 - field.eval_unchecked(x0).grad;
            if (!dom.contains(z, 1e-12))
                throw CenterLeftDomain("Feldman center left the domain");
            return z;
        }
        case CenterStrategy::Kind::ArgminU: break;
    }

    // damped Newton on grad u, seeded from the centroid
    auto newton = [&](Vec x) -> std::pair<Vec, bool> {
        const double gscale = std::max(1.0, x.norm());
        for (int it = 0; it < 100; ++it) {
            const auto e = field.eval_unchecked(x);
            const double g = e.grad.norm();
            if (g < 1e-13 * gscale) return {x, true};
            Vec step = e.hess.ldlt().solve(-e.grad);
            double t = 1.0;
            for (int bt = 0; bt < 50; ++bt) {
                const Vec xn = x + t * step;
                if (dom.contains(xn, 0.0) &&
                    field.eval_unchecked(xn).grad.norm() < g) {
                    x = xn;
                    break;
                }
                t *= 0.5;
                if (bt == 49) return {x, false};
            }
        }
        return {x, false};
    };

    auto [z, ok] = newton(centroid);
    if (!ok) {
        // coarse fallback: best volume node, then Newton again
        Eigen::Index best = 0;
        double umin = std::numeric_limits<double>::infinity();
        for (Eigen::Index m = 0; m < vgrid.nodes.rows(); ++m) {
            const double u = field.eval_unchecked(vgrid.nodes.row(m).transpose()).u;
            if (u < umin) { umin = u; best = m; }
        }
        std::tie(z, ok) = newton(vgrid.nodes.row(best).transpose());
        if (!ok) throw NoConvergence("argmin of u did not converge");
    }
    return z;
}

// ---------------------------------------------------------------------------
// Deviation

Deviation::Deviation(const TorsionField& field, Vec z, double a)
    : field_(&field), z_(std::move(z)), a_(a) {
    if (!field.domain().contains(z_, 1e-12))
        throw CenterOutsideDomain("deviation center outside the domain");
}

Deviation::Eval Deviation::eval(const Vec& x) const {
    const auto e = field_->eval_unchecked(x);
    Eval d;
    const Vec dx = x - z_;
    d.h = 0.5 * (dx.squaredNorm() - a_) - e.u;
    d.grad = dx - e.grad;
    d.hess = Mat::Identity(x.size(), x.size()) - e.hess;
    d.u = e.u;
    d.grad_u = e.grad;
    return d;
}

double Deviation::h(const Vec& x) const { return eval(x).h; }
Vec Deviation::grad_h(const Vec& x) const { return eval(x).grad; }
Mat Deviation::hess_h(const Vec& x) const { return eval(x).hess; }

// ---------------------------------------------------------------------------
// Norms and oscillation

NormReport norms(const Deviation& dev, const VolumeGrid& vgrid,
                 const BoundaryGrid& bgrid, double p) {
    if (p < 1.0) throw Error("p must be >= 1");
    const long m = vgrid.nodes.rows();
    Vec hvals(m);
    double hess2 = 0.0, hess_dist = 0.0, tors = 0.0;
    for (long i = 0; i < m; ++i) {
        const auto e = dev.eval(vgrid.nodes.row(i).transpose());
        hvals[i] = e.h;
        const double h2 = e.hess.squaredNorm();
        const double w = vgrid.weights[i];
        hess2 += w * h2;
        hess_dist += w * vgrid.dist[i] * h2;
        tors += w * (-e.u) * h2;
    }
    NormReport r;
    r.p = p;
    r.h_mean = vgrid.weights.dot(hvals) / vgrid.weights.sum();
    double lp = 0.0;
    for (long i = 0; i < m; ++i)
        lp += vgrid.weights[i] * std::pow(std::abs(hvals[i] - r.h_mean), p);
    r.lp_deviation = std::pow(lp, 1.0 / p);
    r.hess_l2 = std::sqrt(hess2);
    r.hess_dist_weighted = std::sqrt(hess_dist);
    r.torsion_weighted = tors;

    double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const double h = dev.h(bgrid.nodes.row(j).transpose());
        hmin = std::min(hmin, h);
        hmax = std::max(hmax, h);
    }
    r.boundary_osc = hmax - hmin;
    return r;
}

OscillationRecord boundary_oscillation(const Deviation& dev,
                                       const BoundaryGrid& bgrid,
                                       double r_interior) {
    const Domain& dom = dev.field().domain();
    long jmin = 0, jmax = 0;
    double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
    for (long j = 0; j < bgrid.nodes.rows(); ++j) {
        const double h = dev.h(bgrid.nodes.row(j).transpose());
        if (h < hmin) { hmin = h; jmin = j; }
        if (h > hmax) { hmax = h; jmax = j; }
    }
    auto hof = [&](const Vec& params) {
        return dev.h(boundary_point(dom, params));
    };
    const double window = (dom.dim() == 2)
        ? 2.0 * kPi / bgrid.nodes.rows()
        : kPi / default_boundary_order(dom.dim());
    hmin = std::min(hmin,
        hof(refine_boundary_extremum(hof, bgrid.params.row(jmin).transpose(), window, false)));
    hmax = std::max(hmax,
        hof(refine_boundary_extremum(hof, bgrid.params.row(jmax).transpose(), window, true)));

    OscillationRecord rec;
    rec.osc = hmax - hmin;
    std::tie(rec.rho_i, rec.rho_e) = radii_about(dom, dev.center());
    rec.quadratic_form = 0.5 * (rec.rho_e * rec.rho_e - rec.rho_i * rec.rho_i);
    rec.lower_bound = 0.5 * r_interior * (rec.rho_e - rec.rho_i);
    return rec;
}

double r_mean(const Vec& values, const Vec& weights, double r) {
    if (r < 1.0) throw Error("r must be >= 1");
    if ((weights.array() <= 0.0).any()) throw Error("weights must be positive");
    if (r == 2.0) return weights.dot(values) / weights.sum();

    // d/dlambda sum w |v - lambda|^r is nondecreasing in lambda; bisect.
    auto slope = [&](double lam) {
        double s = 0.0;
        for (long i = 0; i < values.size(); ++i) {
            const double d = values[i] - lam;
            s -= weights[i] * r * std::pow(std::abs(d), r - 1.0) *
                 (d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0));
        }
        return s;
    };
    double lo = values.minCoeff(), hi = values.maxCoeff();
    if (lo == hi) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) < 0.0) lo = mid; else hi = mid;
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

OscillationBoundRecord oscillation_bound_check(const Deviation& dev,
                                               const VolumeGrid& vgrid,
                                               const BoundaryGrid& bgrid,
                                               const GeometrySummary& summary,
                                               double p, double G, double M) {
    const int N = dev.dim();
    const NormReport nr = norms(dev, vgrid, bgrid, p);
    const OscillationRecord osc = boundary_oscillation(dev, bgrid, summary.r_interior);

    OscillationBoundRecord rec;
    rec.p = p;
    rec.G = G;
    rec.lp_deviation = nr.lp_deviation;
    rec.osc = osc.osc;
    rec.gap = osc.rho_e - osc.rho_i;

    const double np = N + p;
    rec.smallness_rhs = osc_constant_alpha(N, p) *
                        std::pow(summary.r_interior, np / p) * G;
    rec.smallness_holds = rec.lp_deviation <= rec.smallness_rhs;
    rec.bound_rhs = osc_constant_a(N, p) * std::pow(G, N / np) *
                    std::pow(rec.lp_deviation, p / np);
    rec.bound_holds = rec.osc <= rec.bound_rhs;

    rec.lemma_constant =
        lemma_oscillation_constant(N, p, summary.diameter, summary.r_interior, M);
    rec.lemma_rhs = rec.lemma_constant * std::pow(rec.lp_deviation, p / np);
    rec.lemma_holds = rec.gap <= rec.lemma_rhs;
    return rec;
}

// ---------------------------------------------------------------------------
// Rayleigh estimates

void check_hardy_poincare_condition(int N, double r, double p, double alpha) {
    if (r == p && alpha == 0.0 && p >= 1.0) return;  // condition (r = p, alpha = 0)
    const bool ok = alpha >= 0.0 && alpha <= 1.0 && p >= 1.0 && p <= r &&
                    p * (1.0 - alpha) < N &&
                    r <= N * p / (N - p * (1.0 - alpha));
    if (!ok)
        throw ConditionViolated("(r, p, alpha) outside the admissible range");
}

namespace {

// Harmonic polynomial basis with values and gradients at a set of points.
// N = 2: real and imaginary parts of z^k up to the degree. N >= 3: linear
// and harmonic quadratic polynomials (degree capped at 2).
struct HarmonicBasis {
    std::vector<std::function<double(const Vec&)>> value;
    std::vector<std::function<Vec(const Vec&)>> grad;
};

HarmonicBasis harmonic_basis(int N, int degree) {
    HarmonicBasis b;
    if (N == 2) {
        for (int k = 1; k <= degree; ++k) {
            b.value.push_back([k](const Vec& x) {
                return std::pow(std::complex<double>(x[0], x[1]), k).real();
            });
            b.grad.push_back([k](const Vec& x) {
                const auto d = double(k) *
                    std::pow(std::complex<double>(x[0], x[1]), k - 1);
                Vec g(2);
                g << d.real(), -d.imag();
                return g;
            });
            b.value.push_back([k](const Vec& x) {
                return std::pow(std::complex<double>(x[0], x[1]), k).imag();
            });
            b.grad.push_back([k](const Vec& x) {
                const auto d = double(k) *
                    std::pow(std::complex<double>(x[0], x[1]), k - 1);
                Vec g(2);
                g << d.imag(), d.real();
                return g;
            });
        }
        return b;
    }
    if (degree > 2)
        throw Error("harmonic basis degree > 2 is only available for N = 2");
    for (int i = 0; i < N; ++i) {
        b.value.push_back([i](const Vec& x) { return x[i]; });
        b.grad.push_back([i, N](const Vec& x) {
            Vec g = Vec::Zero(N);
            g[i] = 1.0;
            return g;
        });
    }
    if (degree >= 2) {
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                b.value.push_back([i, j](const Vec& x) { return x[i] * x[j]; });
                b.grad.push_back([i, j, N](const Vec& x) {
                    Vec g = Vec::Zero(N);
                    g[i] = x[j];
                    g[j] = x[i];
                    return g;
                });
            }
        for (int i = 0; i + 1 < N; ++i) {
            b.value.push_back([i, N](const Vec& x) {
                return x[i] * x[i] - x[N - 1] * x[N - 1];
            });
            b.grad.push_back([i, N](const Vec& x) {
                Vec g = Vec::Zero(N);
                g[i] = 2.0 * x[i];
                g[N - 1] = -2.0 * x[N - 1];
                return g;
            });
        }
    }
    return b;
}

}  // namespace

RayleighEstimate rayleigh_estimate(const Domain& domain, const VolumeGrid& vgrid,
                                   const Vec& z, double r, double p, double alpha,
                                   int degree, bool zero_mean) {
    const int N = domain.dim();
    check_hardy_poincare_condition(N, r, p, alpha);
    if (!zero_mean && !domain.contains(z, 1e-12))
        throw CenterOutsideDomain("rayleigh center outside the domain");

    const HarmonicBasis basis = harmonic_basis(N, degree);
    const int nb = static_cast<int>(basis.value.size());
    const long m = vgrid.nodes.rows();
    const double vol = vgrid.weights.sum();

    // tabulate values (normalized to v(z)=0 or zero mean) and gradients
    Mat V(m, nb);
    std::vector<Mat> Gi(N, Mat(m, nb));
    for (int b = 0; b < nb; ++b) {
        for (long i = 0; i < m; ++i) {
            const Vec x = vgrid.nodes.row(i).transpose();
            V(i, b) = basis.value[b](x);
            const Vec g = basis.grad[b](x);
            for (int k = 0; k < N; ++k) Gi[k](i, b) = g[k];
        }
        if (zero_mean)
            V.col(b).array() -= vgrid.weights.dot(V.col(b)) / vol;
        else
            V.col(b).array() -= basis.value[b](z);
    }

    // (2,2,alpha) generalized eigenproblem supplies the start (and the
    // exact answer when r = p = 2)
    const Vec wal = vgrid.weights.array() *
                    vgrid.dist.array().pow(2.0 * alpha);
    Mat A = Mat::Zero(nb, nb), B = Mat::Zero(nb, nb);
    for (int k = 0; k < N; ++k)
        A += Gi[k].transpose() * wal.asDiagonal() * Gi[k];
    B = V.transpose() * vgrid.weights.asDiagonal() * V;
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(A, B);
    Vec c = es.eigenvectors().col(0);

    RayleighEstimate out;
    out.r = r;
    out.p = p;
    out.alpha = alpha;
    out.degree = degree;
    out.zero_mean = zero_mean;

    if (r == 2.0 && p == 2.0) {
        out.mu = std::sqrt(std::max(0.0, es.eigenvalues()[0]));
        return out;
    }

    auto ratio = [&](const Vec& cc) {
        const Vec v = V * cc;
        double num = 0.0;
        for (long i = 0; i < m; ++i) {
            double gp = 0.0;
            for (int k = 0; k < N; ++k)
                gp += std::pow(std::abs(Gi[k].row(i).dot(cc)), p);
            num += vgrid.weights[i] * std::pow(vgrid.dist[i], alpha * p) * gp;
        }
        double den = 0.0;
        for (long i = 0; i < m; ++i)
            den += vgrid.weights[i] * std::pow(std::abs(v[i]), r);
        return std::pow(num, 1.0 / p) / std::pow(den, 1.0 / r);
    };

    // Nelder-Mead refinement on the scale-invariant ratio
    const int d = nb;
    std::vector<Vec> simplex(d + 1, c);
    std::vector<double> fv(d + 1);
    for (int i = 1; i <= d; ++i) simplex[i][i - 1] += 0.1 * c.norm();
    for (int i = 0; i <= d; ++i) fv[i] = ratio(simplex[i]);
    for (int it = 0; it < 400 * d; ++it) {
        // order
        int hi = 0, lo = 0;
        for (int i = 1; i <= d; ++i) {
            if (fv[i] > fv[hi]) hi = i;
            if (fv[i] < fv[lo]) lo = i;
        }
        if (fv[hi] - fv[lo] < 1e-12 * std::abs(fv[lo])) break;
        Vec cen = Vec::Zero(d);
        for (int i = 0; i <= d; ++i)
            if (i != hi) cen += simplex[i];
        cen /= d;
        const Vec refl = cen + (cen - simplex[hi]);
        const double fr = ratio(refl);
        if (fr < fv[lo]) {
            const Vec exp2 = cen + 2.0 * (cen - simplex[hi]);
            const double fe = ratio(exp2);
            simplex[hi] = fe < fr ? exp2 : refl;
            fv[hi] = std::min(fe, fr);
        } else if (fr < fv[hi]) {
            simplex[hi] = refl;
            fv[hi] = fr;
        } else {
            const Vec con = cen + 0.5 * (simplex[hi] - cen);
            const double fc = ratio(con);
            if (fc < fv[hi]) {
                simplex[hi] = con;
                fv[hi] = fc;
            } else {
                for (int i = 0; i <= d; ++i)
                    if (i != lo) {
                        simplex[i] = simplex[lo] + 0.5 * (simplex[i] - simplex[lo]);
                        fv[i] = ratio(simplex[i]);
                    }
            }
        }
    }
    double best = fv[0];
    for (int i = 1; i <= d; ++i) best = std::min(best, fv[i]);
    out.mu = best;
    return out;
}

} // namespace serrinlab
