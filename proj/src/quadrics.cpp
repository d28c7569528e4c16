#include "mds/quadrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mds {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt6 = std::sqrt(6.0);

NurbsSpace quadratic_arc_segment() {
    return NurbsSpace(KnotVector(2, {0, 0, 0, 1, 1, 1}), WeightVector({1.0, kSqrt2 / 2.0, 1.0}));
}

NurbsSpace cubic_arc_segment(double x2 = 1.0) {
    return NurbsSpace(KnotVector(3, {0, 0, 0, 0, x2, x2, x2, x2}),
                      WeightVector({1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0}));
}

MDSplineSpace circle_space(EllipseRecipe recipe) {
    std::vector<NurbsSpace> segments;
    switch (recipe) {
        case EllipseRecipe::Quadratic4:
            for (int i = 0; i < 4; ++i) segments.push_back(quadratic_arc_segment());
            break;
        case EllipseRecipe::Cubic2:
            for (int i = 0; i < 2; ++i) segments.push_back(cubic_arc_segment());
            break;
        case EllipseRecipe::MultiDegree322:
            segments.push_back(cubic_arc_segment(kSqrt2));
            segments.push_back(quadratic_arc_segment());
            segments.push_back(quadratic_arc_segment());
            break;
    }
    return build_extraction(SegmentConfiguration(std::move(segments), 0.0, true));
}

void check_positive(double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

std::vector<double> parameter_grid(const SegmentConfiguration& cfg, int count) {
    std::vector<double> g;
    g.reserve(count + cfg.segment_count() + 1);
    for (int k = 0; k < count; ++k)
        g.push_back(cfg.t1() + (cfg.t2() - cfg.t1()) * k / (count - 1));
    for (int i = 0; i <= cfg.segment_count(); ++i) g.push_back(cfg.tau(i));
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

}  // namespace

Curve make_ellipse(const EllipseSpec& spec) {
    check_positive(spec.ax, "ax");
    check_positive(spec.ay, "ay");
    MDSplineSpace space = circle_space(spec.recipe);
    PointSet f(2, 4);
    const double ax = spec.ax, ay = spec.ay;
    auto set = [&](int i, double x, double y) {
        f[i][0] = x;
        f[i][1] = y;
    };
    switch (spec.recipe) {
        case EllipseRecipe::Quadratic4:
            set(0, ax, ay), set(1, ax, -ay), set(2, -ax, -ay), set(3, -ax, ay);
            break;
        case EllipseRecipe::Cubic2:
            set(0, 2 * ax, ay), set(1, 2 * ax, -ay), set(2, -2 * ax, -ay), set(3, -2 * ax, ay);
            break;
        case EllipseRecipe::MultiDegree322:
            set(0, 2 * ax, ay), set(1, 2 * ax, -ay), set(2, -ax, -ay), set(3, -ax, ay);
            break;
    }
    return Curve(std::move(space), std::move(f));
}

namespace {

struct EllipsoidParts {
    MDSplineSpace s;
    MDSplineSpace t;
    double cx;  // scale of the in-plane control coordinates
    double cy;
};

EllipsoidParts ellipsoid_parts(EllipsoidRecipe recipe) {
    auto t_space = [](std::vector<NurbsSpace> segs) {
        return build_extraction(SegmentConfiguration(std::move(segs), 0.0, false));
    };
    switch (recipe) {
        case EllipsoidRecipe::Deg22:
            return {circle_space(EllipseRecipe::Quadratic4),
                    t_space({quadratic_arc_segment(), quadratic_arc_segment()}), kSqrt6, kSqrt2};
        case EllipsoidRecipe::Deg23:
            return {circle_space(EllipseRecipe::Quadratic4), t_space({cubic_arc_segment()}),
                    2.0 * kSqrt6, 2.0 * kSqrt2};
        case EllipsoidRecipe::Deg33:
            return {circle_space(EllipseRecipe::Cubic2), t_space({cubic_arc_segment()}),
                    4.0 * kSqrt6, 2.0 * kSqrt2};
    }
    throw std::invalid_argument("make_ellipsoid: unknown recipe");
}

}  // namespace

PolarSurface make_ellipsoid(const EllipsoidSpec& spec) {
    check_positive(spec.ax, "ax");
    check_positive(spec.ay, "ay");
    check_positive(spec.az, "az");
    EllipsoidParts parts = ellipsoid_parts(spec.recipe);
    const double cx = parts.cx, cy = parts.cy;
    PolarSplineSpace space = build_polar_extraction(
        TensorProductSpace(std::move(parts.s), std::move(parts.t)), PoleConfig::Both);
    const double ax = spec.ax, ay = spec.ay, az = spec.az;
    PointSet f(3, 6);
    auto set = [&](int l, double x, double y, double z) {
        f[l][0] = x;
        f[l][1] = y;
        f[l][2] = z;
    };
    set(0, 0.0, 2.0 * cy * ay, az);
    set(1, -cx * ax, -cy * ay, az);
    set(2, cx * ax, -cy * ay, az);
    set(3, -cx * ax, -cy * ay, -az);
    set(4, cx * ax, -cy * ay, -az);
    set(5, 0.0, 2.0 * cy * ay, -az);
    return PolarSurface(std::move(space), std::move(f));
}

double quadric_residual(const Curve& curve, const EllipseSpec& spec, int n_samples) {
    if (n_samples < 1) throw std::invalid_argument("quadric_residual: n_samples must be >= 1");
    double worst = 0.0;
    for (double t : parameter_grid(curve.space.config, std::max(n_samples, 2))) {
        std::vector<double> p = eval_curve(curve, t);
        double x = p[0] / spec.ax, y = p[1] / spec.ay;
        worst = std::max(worst, std::abs(x * x + y * y - 1.0));
    }
    return worst;
}

double quadric_residual(const PolarSurface& surface, const EllipsoidSpec& spec, int n_samples) {
    if (n_samples < 1) throw std::invalid_argument("quadric_residual: n_samples must be >= 1");
    int per_dir = std::max(2, static_cast<int>(std::ceil(std::sqrt(double(n_samples)))));
    std::vector<double> sg = parameter_grid(surface.space.tp.s.config, per_dir);
    std::vector<double> tg = parameter_grid(surface.space.tp.t.config, per_dir);
    double worst = 0.0;
    for (double s : sg)
        for (double t : tg) {
            std::vector<double> p = eval_polar_surface(surface, s, t);
            double x = p[0] / spec.ax, y = p[1] / spec.ay, z = p[2] / spec.az;
            worst = std::max(worst, std::abs(x * x + y * y + z * z - 1.0));
        }
    return worst;
}

void perturb_standard(Curve& curve, const EllipseSpec& spec) {
    curve.control_points[0][1] += spec.ay;
}

void perturb_standard(PolarSurface& surface, const EllipsoidSpec& spec) {
    surface.control_points[2][2] += 4.0 * spec.ax;
}

}  // namespace mds
