#include "mds/polar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mds {

namespace {

constexpr double kPi = std::numbers::pi;

std::array<double, 3> cross(std::span<const double> a, std::span<const double> b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm3(const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

}  // namespace

TensorProductSpace::TensorProductSpace(MDSplineSpace s_space, MDSplineSpace t_space)
    : s(std::move(s_space)), t(std::move(t_space)) {
    if (!s.config.periodic())
        throw std::invalid_argument("TensorProductSpace: s factor must be periodic");
    if (t.config.periodic())
        throw std::invalid_argument("TensorProductSpace: t factor must be non-periodic");
}

std::vector<double> eval_tensor_basis(const TensorProductSpace& tp, double s, double t, int ds,
                                      int dt) {
    std::vector<double> Bs = ds ? eval_basis_derivative(tp.s, s) : eval_basis(tp.s, s);
    std::vector<double> Bt = dt ? eval_basis_derivative(tp.t, t) : eval_basis(tp.t, t);
    std::vector<double> out(static_cast<size_t>(tp.ns()) * tp.nt());
    for (int j = 0; j < tp.nt(); ++j)
        for (int i = 0; i < tp.ns(); ++i) out[tp.index(i, j)] = Bs[i] * Bt[j];
    return out;
}

Triangle2 source_triangle(double rho2) {
    if (!(rho2 > 0.0)) throw std::invalid_argument("source_triangle: rho2 must be positive");
    const double s3 = std::sqrt(3.0);
    return {{{{2.0 * rho2, 0.0}, {-rho2, s3 * rho2}, {-rho2, -s3 * rho2}}}};
}

std::array<double, 3> barycentric(const Triangle2& tri, double u, double v) {
    const auto& a = tri.v[0];
    const auto& b = tri.v[1];
    const auto& c = tri.v[2];
    double m00 = a[0] - c[0], m01 = b[0] - c[0];
    double m10 = a[1] - c[1], m11 = b[1] - c[1];
    double det = m00 * m11 - m01 * m10;
    double scale = std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11), 1e-300});
    if (std::abs(det) < 1e-14 * scale * scale)
        throw std::invalid_argument("barycentric: degenerate triangle");
    double ru = u - c[0], rv = v - c[1];
    double l1 = (ru * m11 - rv * m01) / det;
    double l2 = (m00 * rv - m10 * ru) / det;
    return {l1, l2, 1.0 - l1 - l2};
}

PolarSplineSpace build_polar_extraction(TensorProductSpace tp, PoleConfig poles) {
    const int ns = tp.ns();
    const int nt = tp.nt();
    if (ns < 3)
        throw std::invalid_argument("build_polar_extraction: n^s must be >= 3");
    if (poles == PoleConfig::Both && nt < 4)
        throw std::invalid_argument(
            "build_polar_extraction: double pole needs n^t >= 4 (the two pole "
            "constraints must decouple)");
    if (nt < 3) throw std::invalid_argument("build_polar_extraction: n^t must be >= 3");

    std::vector<double> theta(ns), rho(nt);
    for (int i = 0; i < ns; ++i) theta[i] = 2.0 * kPi + (1.0 - 2.0 * (i + 1)) * kPi / ns;
    for (int j = 0; j < nt; ++j) rho[j] = static_cast<double>(j) / (nt - 1);
    Triangle2 tri = source_triangle(rho[1]);

    // Pole block Etilde (3 x 2ns): ring-0 columns are all 1/3, ring-1 column i
    // holds the barycentric coordinates of c_{i2} w.r.t. the triangle.
    std::vector<std::array<double, 3>> ring1(ns);
    for (int i = 0; i < ns; ++i)
        ring1[i] = barycentric(tri, rho[1] * std::cos(theta[i]), rho[1] * std::sin(theta[i]));

    std::vector<SparseMatrix::Triplet> t;
    auto emit_bottom_block = [&](int row0, int col0) {
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < ns; ++i) t.push_back({row0 + l, col0 + i, 1.0 / 3.0});
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < ns; ++i) t.push_back({row0 + l, col0 + ns + i, ring1[i][l]});
    };
    // Mirrored block J3 Etilde J_{2ns} occupying the last 2ns columns.
    auto emit_top_block = [&](int row0, int col0) {
        for (int l = 0; l < 3; ++l)
            for (int c = 0; c < 2 * ns; ++c) {
                double value = (2 * ns - 1 - c) < ns ? 1.0 / 3.0
                                                     : ring1[(2 * ns - 1 - c) - ns][2 - l];
                t.push_back({row0 + l, col0 + c, value});
            }
    };

    int dim;
    if (poles == PoleConfig::Bottom) {
        dim = ns * (nt - 2) + 3;
        emit_bottom_block(0, 0);
        for (int k = 0; k < ns * (nt - 2); ++k) t.push_back({3 + k, 2 * ns + k, 1.0});
    } else if (poles == PoleConfig::Top) {
        dim = ns * (nt - 2) + 3;
        for (int k = 0; k < ns * (nt - 2); ++k) t.push_back({k, k, 1.0});
        emit_top_block(dim - 3, ns * (nt - 2));
    } else {
        dim = ns * (nt - 4) + 6;
        emit_bottom_block(0, 0);
        for (int k = 0; k < ns * (nt - 4); ++k) t.push_back({3 + k, 2 * ns + k, 1.0});
        emit_top_block(dim - 3, ns * (nt - 2));
    }
    SparseMatrix E = SparseMatrix::from_triplets(dim, ns * nt, std::move(t));
    return {std::move(tp), poles, std::move(E), std::move(theta), std::move(rho), tri, dim};
}

std::vector<double> eval_polar_basis(const PolarSplineSpace& space, double s, double t) {
    return space.E.apply(eval_tensor_basis(space.tp, s, t));
}

std::array<double, 2> polar_map(const PolarSplineSpace& space, double s, double t) {
    std::vector<double> B = eval_tensor_basis(space.tp, s, t);
    double u = 0.0, v = 0.0;
    for (int j = 0; j < space.tp.nt(); ++j)
        for (int i = 0; i < space.tp.ns(); ++i) {
            double b = B[space.tp.index(i, j)];
            u += space.rho[j] * std::cos(space.theta[i]) * b;
            v += space.rho[j] * std::sin(space.theta[i]) * b;
        }
    return {u, v};
}

PolarSurface::PolarSurface(PolarSplineSpace sp, PointSet pts)
    : space(std::move(sp)), control_points(std::move(pts)) {
    if (control_points.count() != space.dim)
        throw std::invalid_argument("PolarSurface: control point count " +
                                    std::to_string(control_points.count()) +
                                    " does not match space dimension " + std::to_string(space.dim));
    if (control_points.dim() < 3)
        throw std::invalid_argument("PolarSurface: control points must have dimension >= 3");
}

std::vector<double> eval_polar_surface(const PolarSurface& surface, double s, double t) {
    std::vector<double> N = eval_polar_basis(surface.space, s, t);
    std::vector<double> out(surface.control_points.dim(), 0.0);
    for (int l = 0; l < surface.control_points.count(); ++l) {
        if (N[l] == 0.0) continue;
        auto f = surface.control_points[l];
        for (int d = 0; d < surface.control_points.dim(); ++d) out[d] += N[l] * f[d];
    }
    return out;
}

PointSet tp_control_points(const PolarSurface& surface) {
    const SparseMatrix& E = surface.space.E;
    PointSet g(surface.control_points.dim(), E.cols());
    for (int l = 0; l < E.rows(); ++l) {
        auto f = surface.control_points[l];
        for (const auto& e : E.row(l)) {
            auto gj = g[e.col];
            for (int d = 0; d < g.dim(); ++d) gj[d] += e.value * f[d];
        }
    }
    return g;
}

Plane pole_tangent_plane(const PolarSurface& surface, PoleSide side) {
    if (side == PoleSide::Bottom && !surface.space.has_bottom())
        throw std::invalid_argument("pole_tangent_plane: space has no bottom pole");
    if (side == PoleSide::Top && !surface.space.has_top())
        throw std::invalid_argument("pole_tangent_plane: space has no top pole");
    int base = side == PoleSide::Bottom ? 0 : surface.space.dim - 3;
    auto f1 = surface.control_points[base];
    auto f2 = surface.control_points[base + 1];
    auto f3 = surface.control_points[base + 2];
    std::array<double, 3> e1{}, e2{}, centroid{};
    for (int d = 0; d < 3; ++d) {
        e1[d] = f2[d] - f1[d];
        e2[d] = f3[d] - f1[d];
        centroid[d] = (f1[d] + f2[d] + f3[d]) / 3.0;
    }
    std::array<double, 3> n = cross(e1, e2);
    double len = norm3(n);
    double scale = std::max(norm3(e1), norm3(e2));
    if (len < 1e-12 * scale * scale)
        throw std::invalid_argument("pole_tangent_plane: pole control points are collinear");
    for (double& c : n) c /= len;
    return {centroid, n};
}

namespace {

struct PoleFrame {
    double t_pole;
    std::vector<double> bt_val;   // t-basis values at the pole
    std::vector<double> bt_der;   // t-basis derivatives at the pole
};

PoleFrame pole_frame(const PolarSplineSpace& space, PoleSide side) {
    const MDSplineSpace& tsp = space.tp.t;
    double tp = side == PoleSide::Bottom ? tsp.config.t1() : tsp.config.t2();
    return {tp, eval_basis(tsp, tp), eval_basis_derivative(tsp, tp)};
}

}  // namespace

PoleSmoothness pole_hermite_residual(const PolarSplineSpace& space, PoleSide side,
                                     std::span<const double> tensor_coeffs, int n_samples) {
    if (side == PoleSide::Bottom && !space.has_bottom())
        throw std::invalid_argument("pole_hermite_residual: space has no bottom pole");
    if (side == PoleSide::Top && !space.has_top())
        throw std::invalid_argument("pole_hermite_residual: space has no top pole");
    const int ns = space.tp.ns();
    const int nt = space.tp.nt();
    if (static_cast<int>(tensor_coeffs.size()) != ns * nt)
        throw std::invalid_argument("pole_hermite_residual: coefficient size mismatch");
    PoleFrame frame = pole_frame(space, side);

    const MDSplineSpace& ssp = space.tp.s;
    double s1 = ssp.config.t1(), s2 = ssp.config.t2();

    // For each sample: value v(s), t-derivative d(s), and the polar map's
    // t-derivative (mu, mv)(s). C1 at the pole means v is constant and
    // d = beta*mu + gamma*mv for fixed (beta, gamma); fit by least squares.
    double vmin = 0.0, vmax = 0.0;
    std::vector<double> dval(n_samples), mu(n_samples), mv(n_samples);
    for (int k = 0; k < n_samples; ++k) {
        double s = s1 + (s2 - s1) * k / n_samples;  // periodic: endpoint omitted
        std::vector<double> Bs = eval_basis(ssp, s);
        double v = 0.0, d = 0.0, pu = 0.0, pv = 0.0;
        for (int j = 0; j < nt; ++j) {
            if (frame.bt_val[j] == 0.0 && frame.bt_der[j] == 0.0) continue;
            for (int i = 0; i < ns; ++i) {
                double g = tensor_coeffs[i + j * ns];
                double cu = space.rho[j] * std::cos(space.theta[i]);
                double cv = space.rho[j] * std::sin(space.theta[i]);
                v += g * frame.bt_val[j] * Bs[i];
                d += g * frame.bt_der[j] * Bs[i];
                pu += cu * frame.bt_der[j] * Bs[i];
                pv += cv * frame.bt_der[j] * Bs[i];
            }
        }
        if (k == 0) vmin = vmax = v;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
        dval[k] = d;
        mu[k] = pu;
        mv[k] = pv;
    }
    // 2x2 normal equations for (beta, gamma)
    double a11 = 0, a12 = 0, a22 = 0, r1 = 0, r2 = 0;
    for (int k = 0; k < n_samples; ++k) {
        a11 += mu[k] * mu[k];
        a12 += mu[k] * mv[k];
        a22 += mv[k] * mv[k];
        r1 += mu[k] * dval[k];
        r2 += mv[k] * dval[k];
    }
    double det = a11 * a22 - a12 * a12;
    double beta = 0.0, gamma = 0.0;
    if (std::abs(det) > 1e-14 * std::max(a11 * a22, 1e-300)) {
        beta = (r1 * a22 - r2 * a12) / det;
        gamma = (a11 * r2 - a12 * r1) / det;
    }
    double resid = 0.0;
    for (int k = 0; k < n_samples; ++k)
        resid = std::max(resid, std::abs(dval[k] - beta * mu[k] - gamma * mv[k]));
    return {vmax - vmin, resid};
}

PoleSmoothness surface_pole_smoothness(const PolarSurface& surface, PoleSide side,
                                       int n_samples) {
    PointSet g = tp_control_points(surface);
    PoleSmoothness worst{0.0, 0.0};
    std::vector<double> coeffs(g.count());
    for (int d = 0; d < g.dim(); ++d) {
        for (int i = 0; i < g.count(); ++i) coeffs[i] = g[i][d];
        PoleSmoothness r = pole_hermite_residual(surface.space, side, coeffs, n_samples);
        worst.value_spread = std::max(worst.value_spread, r.value_spread);
        worst.derivative_residual = std::max(worst.derivative_residual, r.derivative_residual);
    }
    return worst;
}

SeamMismatch seam_mismatch(const PolarSurface& surface, int n_samples) {
    const MDSplineSpace& ssp = surface.space.tp.s;
    const MDSplineSpace& tsp = surface.space.tp.t;
    double s1 = ssp.config.t1(), s2 = ssp.config.t2();
    SeamMismatch out{0.0, 0.0};
    for (int k = 0; k <= n_samples; ++k) {
        double t = tsp.config.t1() + (tsp.config.t2() - tsp.config.t1()) * k / n_samples;
        std::vector<double> a = eval_polar_surface(surface, s1, t);
        std::vector<double> b = eval_polar_surface(surface, s2, t);
        // one-sided s-derivatives: right at s1, left at s2
        std::vector<double> Bs1 = eval_basis_derivative(ssp, s1);
        std::vector<double> Bs2 = eval_basis_derivative(ssp, s2);
        std::vector<double> Bt = eval_basis(tsp, t);
        const PointSet& f = surface.control_points;
        std::vector<double> da(f.dim(), 0.0), db(f.dim(), 0.0);
        const int ns = surface.space.tp.ns();
        const int nt = surface.space.tp.nt();
        std::vector<double> tens1(ns * nt), tens2(ns * nt);
        for (int j = 0; j < nt; ++j)
            for (int i = 0; i < ns; ++i) {
                tens1[i + j * ns] = Bs1[i] * Bt[j];
                tens2[i + j * ns] = Bs2[i] * Bt[j];
            }
        std::vector<double> N1 = surface.space.E.apply(tens1);
        std::vector<double> N2 = surface.space.E.apply(tens2);
        for (int l = 0; l < f.count(); ++l)
            for (int d = 0; d < f.dim(); ++d) {
                da[d] += N1[l] * f[l][d];
                db[d] += N2[l] * f[l][d];
            }
        for (int d = 0; d < f.dim(); ++d) {
            out.value = std::max(out.value, std::abs(a[d] - b[d]));
            out.derivative = std::max(out.derivative, std::abs(da[d] - db[d]));
        }
    }
    return out;
}

double pole_normal_angle_fd(const PolarSurface& surface, PoleSide side, double eps,
                            int n_samples) {
    Plane plane = pole_tangent_plane(surface, side);
    const MDSplineSpace& ssp = surface.space.tp.s;
    const MDSplineSpace& tsp = surface.space.tp.t;
    double s1 = ssp.config.t1(), L = ssp.config.t2() - ssp.config.t1();
    double t = side == PoleSide::Bottom ? tsp.config.t1() + eps : tsp.config.t2() - eps;
    double worst = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        double s = s1 + L * k / n_samples;
        std::vector<double> p1 = eval_polar_surface(surface, s, t);
        std::vector<double> p2 = eval_polar_surface(surface, s1 + std::fmod(s - s1 + L / 3.0, L), t);
        std::vector<double> p3 =
            eval_polar_surface(surface, s1 + std::fmod(s - s1 + 2.0 * L / 3.0, L), t);
        std::array<double, 3> e1{}, e2{};
        for (int d = 0; d < 3; ++d) {
            e1[d] = p2[d] - p1[d];
            e2[d] = p3[d] - p1[d];
        }
        std::array<double, 3> n = cross(e1, e2);
        double len = norm3(n);
        if (len == 0.0) continue;
        double dot = 0.0;
        for (int d = 0; d < 3; ++d) dot += n[d] * plane.normal[d] / len;
        double angle = std::acos(std::clamp(std::abs(dot), 0.0, 1.0));
        worst = std::max(worst, angle);
    }
    return worst;
}

}  // namespace mds
