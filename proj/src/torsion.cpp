#include "serrinlab/torsion.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace serrinlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

TorsionField TorsionField::solve_ellipsoid(const Domain& domain) {
    if (!domain.is_ellipsoid())
        throw Error("solve_ellipsoid requires an ellipsoid domain");
    TorsionField f(domain);
    f.closed_form_ = true;
    double s = 0.0;
    for (double a : domain.semi_axes()) s += 1.0 / (a * a);
    f.coeff_c_ = domain.dim() / (2.0 * s);
    return f;
}

TorsionField TorsionField::solve_fourier2d(const Domain& domain, int degree) {
    if (domain.dim() != 2)
        throw UnsupportedDimension("collocation solver is two-dimensional");
    if (degree < 4) throw Error("collocation degree must be >= 4");

    TorsionField f(domain);
    f.closed_form_ = false;
    f.degree_ = degree;

    // Rescale so the collocation points satisfy |x|/L <= 1; keeps the
    // columns r^k of the design matrix O(1) at high degree.
    double rmax = 0.0;
    const int probe = 4096;
    for (int j = 0; j < probe; ++j)
        rmax = std::max(rmax, domain.radius(2.0 * kPi * j / probe));
    const double L = rmax;
    f.scale_L_ = L;

    const int K = degree;
    const int ncols = 2 * K + 1;
    const int m = 4 * ncols;  // oversampling factor 4
    Mat A(m, ncols);
    Vec rhs(m);
    Mat nodes(m, 2);
    for (int j = 0; j < m; ++j) {
        const double th = 2.0 * kPi * j / m;
        const double R = domain.radius(th) / L;
        const std::complex<double> zc = R * std::exp(std::complex<double>(0.0, th));
        nodes(j, 0) = zc.real();
        nodes(j, 1) = zc.imag();
        A(j, 0) = 1.0;
        std::complex<double> zk = 1.0;
        for (int k = 1; k <= K; ++k) {
            zk *= zc;
            A(j, k) = zk.real();
            A(j, K + k) = zk.imag();
        }
        rhs[j] = -0.5 * std::norm(zc);
    }

    Eigen::ColPivHouseholderQR<Mat> qr(A);
    const Vec rdiag = qr.matrixQR().diagonal().cwiseAbs();
    const double cond = rdiag.maxCoeff() / std::max(rdiag.minCoeff(), 1e-300);
    if (cond > 1e14)
        throw IllConditioned("collocation system condition estimate " +
                             std::to_string(cond));
    const Vec coef = qr.solve(rhs);
    f.alpha_ = Vec(K + 1);
    f.beta_ = Vec(K);
    f.alpha_[0] = coef[0];
    for (int k = 1; k <= K; ++k) {
        f.alpha_[k] = coef[k];
        f.beta_[k - 1] = coef[K + k];
    }

    double res = 0.0;
    for (int j = 0; j < m; ++j) {
        Vec x = L * nodes.row(j).transpose();
        res = std::max(res, std::abs(f.eval_unchecked(x).u));
    }
    f.boundary_residual_ = res;
    return f;
}

TorsionField::Eval TorsionField::eval_unchecked(const Vec& x) const {
    const int n = dim();
    Eval e;
    e.grad.resize(n);
    e.hess.resize(n, n);

    if (closed_form_) {
        const auto& a = domain_.semi_axes();
        double s = 0.0;
        e.hess.setZero();
        for (int i = 0; i < n; ++i) {
            const double a2 = a[i] * a[i];
            s += x[i] * x[i] / a2;
            e.grad[i] = 2.0 * coeff_c_ * x[i] / a2;
            e.hess(i, i) = 2.0 * coeff_c_ / a2;
        }
        e.u = coeff_c_ * (s - 1.0);
        return e;
    }

    // u = |x|^2/2 + L^2 Re f(x/L) with f(z) = sum_k (alpha_k - i beta_k) z^k
    const double L = scale_L_;
    const std::complex<double> zc(x[0] / L, x[1] / L);
    const int K = degree_;
    double phi = alpha_[0];
    std::complex<double> fp = 0.0, fpp = 0.0;
    std::complex<double> zkm2 = 0.0, zkm1 = 0.0, zk = 1.0;
    for (int k = 1; k <= K; ++k) {
        zkm2 = zkm1;
        zkm1 = zk;
        zk *= zc;
        const std::complex<double> ck(alpha_[k], -beta_[k - 1]);
        phi += (ck * zk).real();
        fp += ck * double(k) * zkm1;
        if (k >= 2) fpp += ck * double(k * (k - 1)) * zkm2;
    }

    e.u = 0.5 * x.squaredNorm() + L * L * phi;
    // d/dx Re f = Re f', d/dy Re f = -Im f'
    e.grad[0] = x[0] + L * fp.real();
    e.grad[1] = x[1] - L * fp.imag();
    e.hess(0, 0) = 1.0 + fpp.real();
    e.hess(0, 1) = -fpp.imag();
    e.hess(1, 0) = -fpp.imag();
    e.hess(1, 1) = 1.0 - fpp.real();
    return e;
}

TorsionField::Eval TorsionField::eval(const Vec& x) const {
    if (!domain_.contains(x, 1e-9))
        throw OutsideDomain("evaluation point outside the domain closure");
    return eval_unchecked(x);
}

double TorsionField::u(const Vec& x) const { return eval(x).u; }
Vec TorsionField::grad(const Vec& x) const { return eval(x).grad; }
Mat TorsionField::hess(const Vec& x) const { return eval(x).hess; }

GradientBound gradient_bound(const TorsionField& field, const BoundaryGrid& bgrid) {
    const Domain& dom = field.domain();

    if (field.closed_form()) {
        // grad u is parallel to nu on the boundary; |grad u| = 2c |A^{-T} omega|
        // is maximal at the end of the shortest axis, giving M = 2c / min a.
        const auto& a = dom.semi_axes();
        int imin = 0;
        for (size_t i = 1; i < a.size(); ++i)
            if (a[i] < a[imin]) imin = static_cast<int>(i);
        double s = 0.0;
        for (double ai : a) s += 1.0 / (ai * ai);
        const double c = dom.dim() / (2.0 * s);
        GradientBound gb;
        gb.M = 2.0 * c / a[imin];
        // report the boundary node closest to that axis end
        Eigen::Index best = 0;
        double best_val = -1.0;
        for (Eigen::Index j = 0; j < bgrid.nodes.rows(); ++j) {
            const double v = std::abs(bgrid.nodes(j, imin));
            if (v > best_val) { best_val = v; best = j; }
        }
        gb.node = best;
        return gb;
    }

    // grid scan + golden-section refinement in the parameter
    Eigen::Index best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < bgrid.nodes.rows(); ++j) {
        const double v = field.eval_unchecked(bgrid.nodes.row(j).transpose())
                             .grad.dot(bgrid.normals.row(j).transpose());
        if (v > best_val) { best_val = v; best = j; }
    }
    auto f = [&](const Vec& params) {
        const Vec x = boundary_point(dom, params);
        const Vec nu = boundary_normal(dom, params);
        return field.eval_unchecked(x).grad.dot(nu);
    };
    const double window = 2.0 * kPi / bgrid.nodes.rows();
    const Vec p = refine_boundary_extremum(f, bgrid.params.row(best).transpose(),
                                           window, true);
    GradientBound gb;
    gb.M = std::max(best_val, f(p));
    gb.node = best;
    return gb;
}

} // namespace serrinlab
