#pragma once

#include <array>
#include <vector>

#include "mds/mdspline.hpp"

namespace mds {

// Tensor product of a periodic s-space and a non-periodic t-space. Basis
// ordering: (i, j) occupies entry i + j*ns (0-based, s fastest).
struct TensorProductSpace {
    TensorProductSpace(MDSplineSpace s_space, MDSplineSpace t_space);

    MDSplineSpace s;
    MDSplineSpace t;

    int ns() const { return s.dim; }
    int nt() const { return t.dim; }
    int index(int i, int j) const { return i + j * ns(); }
};

// derivative orders (ds, dt) each in {0, 1}
std::vector<double> eval_tensor_basis(const TensorProductSpace& tp, double s, double t,
                                      int ds = 0, int dt = 0);

enum class PoleConfig { Bottom, Top, Both };
enum class PoleSide { Bottom, Top };

struct Triangle2 {
    std::array<std::array<double, 2>, 3> v;
};

// Standardized equilateral triangle enclosing the radius-rho2 circle:
// v1 = (2 rho2, 0), v2 = (-rho2, sqrt(3) rho2), v3 = (-rho2, -sqrt(3) rho2).
Triangle2 source_triangle(double rho2);

std::array<double, 3> barycentric(const Triangle2& tri, double u, double v);

// C1 polar spline space over a tensor-product space with one or two
// collapsed edges. E maps the tensor basis to the polar basis, N = E B.
struct PolarSplineSpace {
    TensorProductSpace tp;
    PoleConfig poles;
    SparseMatrix E;
    std::vector<double> theta;  // ring angles, size ns
    std::vector<double> rho;    // ring radii, size nt
    Triangle2 triangle;
    int dim;

    bool has_bottom() const { return poles != PoleConfig::Top; }
    bool has_top() const { return poles != PoleConfig::Bottom; }
};

PolarSplineSpace build_polar_extraction(TensorProductSpace tp, PoleConfig poles);

std::vector<double> eval_polar_basis(const PolarSplineSpace& space, double s, double t);

// The standardized disk map F(s,t) = sum c_ij B_ij(s,t) with
// c_ij = rho_j (cos theta_i, sin theta_i); F(s, 0) is the bottom pole (0,0).
std::array<double, 2> polar_map(const PolarSplineSpace& space, double s, double t);

struct PolarSurface {
    PolarSplineSpace space;
    PointSet control_points;

    PolarSurface(PolarSplineSpace sp, PointSet pts);
};

std::vector<double> eval_polar_surface(const PolarSurface& surface, double s, double t);

// Tensor-product control points g_ij = sum_l E_{l,(ij)} f_l.
PointSet tp_control_points(const PolarSurface& surface);

struct Plane {
    std::array<double, 3> point;
    std::array<double, 3> normal;  // unit length
};

// Plane through the three pole control points; the surface is tangent to it
// at the pole.
Plane pole_tangent_plane(const PolarSurface& surface, PoleSide side);

struct PoleSmoothness {
    double value_spread;        // spread of f(s, t_pole) over the s-samples
    double derivative_residual; // residual of the Hermite constraint fit
};

// C1-at-pole check for one scalar coefficient vector over the tensor basis
// (layout i + j*ns): the pole value must be constant in s and the pole
// t-derivative a fixed linear combination of the polar map's t-derivatives.
PoleSmoothness pole_hermite_residual(const PolarSplineSpace& space, PoleSide side,
                                     std::span<const double> tensor_coeffs, int n_samples);

// Worst case of the above over the surface's coordinate functions.
PoleSmoothness surface_pole_smoothness(const PolarSurface& surface, PoleSide side, int n_samples);

struct SeamMismatch {
    double value;
    double derivative;
};

// Periodicity across the s-seam: values and s-derivatives at s1 vs s2.
SeamMismatch seam_mismatch(const PolarSurface& surface, int n_samples);

// Max angle (radians) between the pole tangent plane normal and normals of
// triangles inscribed in the parameter ring t = eps (points 120 degrees
// apart in s).
double pole_normal_angle_fd(const PolarSurface& surface, PoleSide side, double eps,
                            int n_samples);

}  // namespace mds
