#pragma once

#include "mds/mdspline.hpp"
#include "mds/polar.hpp"

namespace mds {

enum class EllipseRecipe { Quadratic4, Cubic2, MultiDegree322 };

struct EllipseSpec {
    double ax;
    double ay;
    EllipseRecipe recipe;
};

enum class EllipsoidRecipe { Deg22, Deg23, Deg33 };

struct EllipsoidSpec {
    double ax;
    double ay;
    double az;
    EllipsoidRecipe recipe;
};

// Exact C1 ellipse centred at the origin with axis lengths (ax, ay);
// 4 control points over 4 / 2 / 3 rational pieces depending on the recipe.
Curve make_ellipse(const EllipseSpec& spec);

// Exact C1 ellipsoid with axis lengths (ax, ay, az); 6 control points over
// 8 / 4 / 2 rational pieces depending on the recipe.
PolarSurface make_ellipsoid(const EllipsoidSpec& spec);

// max |(x/ax)^2 + (y/ay)^2 - 1| over a uniform parameter grid of about
// n_samples points merged with all breakpoints.
double quadric_residual(const Curve& curve, const EllipseSpec& spec, int n_samples);

// max |(x/ax)^2 + (y/ay)^2 + (z/az)^2 - 1| over roughly sqrt(n) x sqrt(n)
// samples merged with breakpoints in both directions.
double quadric_residual(const PolarSurface& surface, const EllipsoidSpec& spec, int n_samples);

// The standard perturbations: f1 += (0, ay) for curves, f3 += (0, 0, 4 ax)
// for surfaces. The perturbed object stays C1.
void perturb_standard(Curve& curve, const EllipseSpec& spec);
void perturb_standard(PolarSurface& surface, const EllipsoidSpec& spec);

}  // namespace mds
