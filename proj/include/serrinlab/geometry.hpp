#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <vector>

#include "serrinlab/errors.hpp"

#include <json.hpp>

namespace serrinlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class DomainKind { Ellipsoid, Fourier2D };

/// A star-shaped C^2 domain, either an N-dimensional ellipsoid with given
/// semi-axes or a 2D region whose boundary radius R(theta) is a finite
/// Fourier series. Star-shapedness about the origin is required and checked.
class Domain {
public:
    static Domain ellipsoid(std::vector<double> semi_axes);
    /// cos_coeffs = {c_0, c_1, ...}, sin_coeffs = {s_1, s_2, ...}.
    static Domain fourier2d(std::vector<double> cos_coeffs,
                            std::vector<double> sin_coeffs);

    static Domain from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_ellipsoid() const { return kind_ == DomainKind::Ellipsoid; }

    const std::vector<double>& semi_axes() const { return axes_; }
    const std::vector<double>& cos_coeffs() const { return cos_; }
    const std::vector<double>& sin_coeffs() const { return sin_; }

    /// Boundary radius function of a Fourier2D domain and its derivatives.
    double radius(double theta) const;
    double radius_d(double theta) const;
    double radius_dd(double theta) const;

    /// Distance from the origin to the boundary along the unit direction.
    double boundary_radius(const Vec& omega) const;

    bool contains(const Vec& x, double tol = 0.0) const;

private:
    Domain() = default;
    DomainKind kind_ = DomainKind::Ellipsoid;
    int dim_ = 2;
    std::vector<double> axes_;
    std::vector<double> cos_, sin_;
};

/// Boundary quadrature grid with per-node normals and mean curvature.
/// H follows the sign convention H = 1/rho on a sphere of radius rho.
struct BoundaryGrid {
    Mat nodes;     // n x N
    Vec weights;   // surface measure
    Mat normals;   // unit outward, n x N
    Vec mean_curvature;
    Mat params;    // n x (N-1) parameter values
    int order = 0; // order the grid was built with
    double area() const { return weights.sum(); }
};

/// Interior quadrature grid carrying the distance to the boundary.
struct VolumeGrid {
    Mat nodes;    // m x N
    Vec weights;
    Vec dist;     // delta_Gamma at each node
    double volume() const { return weights.sum(); }
};

struct GeometrySummary {
    double volume = 0;
    double surface = 0;
    double diameter = 0;
    double r_interior = 0;                                   // r_i
    double r_exterior = std::numeric_limits<double>::infinity(); // r_e
    bool mean_convex = true;
    bool convex = true;
    bool radii_estimated = false;  // true when r_i/r_e are sampled estimates
    int dim = 2;

    nlohmann::json to_json() const;
};

Domain build_domain(const nlohmann::json& spec);

/// order: number of theta nodes in 2D; Gauss-Legendre points per polar
/// angle for N >= 3 (azimuth uses 2*order equispaced nodes).
BoundaryGrid boundary_grid(const Domain& domain, int order);

VolumeGrid volume_grid(const Domain& domain, int radial_order, int angular_order);

GeometrySummary geometric_summary(const Domain& domain);

/// (rho_i, rho_e) about z: extrema of |x - z| over the boundary, refined
/// from the best grid node by local optimization in the parameters.
std::pair<double, double> radii_about(const Domain& domain, const Vec& z);

/// Distance from an interior point to the boundary.
double distance_to_boundary(const Domain& domain, const Vec& x);

/// Point and outward unit normal at given boundary parameters.
Vec boundary_point(const Domain& domain, const Vec& params);
Vec boundary_normal(const Domain& domain, const Vec& params);

/// Local refinement of an extremum of f over boundary parameters, started
/// from p0 with the given initial search window per coordinate.
Vec refine_boundary_extremum(const std::function<double(const Vec&)>& f,
                             const Vec& p0, double window, bool maximize);

/// Dimension-aware default quadrature orders (per-dimension counts).
int default_boundary_order(int dim);
int default_radial_order(int dim);
int default_angular_order(int dim);

/// Gauss-Legendre rule on [a, b].
void gauss_legendre(int n, double a, double b, Vec& nodes, Vec& weights);

/// Volume of the N-dimensional unit ball.
double unit_ball_volume(int dim);

} // namespace serrinlab
