#pragma once

#include <vector>

#include "mds/mdspline.hpp"
#include "mds/polar.hpp"

namespace mds {

struct SegmentRefinement {
    std::vector<double> new_knots;
    int degree_raise = 0;
};

// Per-segment refinement instructions; an empty plan is a no-op. A non-empty
// plan must list one entry per segment.
struct RefinementPlan {
    std::vector<SegmentRefinement> segments;

    bool trivial() const;
};

// Convenience plans: the midpoint of every non-empty knot span, or a uniform
// degree raise, in every segment.
RefinementPlan midpoint_plan(const SegmentConfiguration& config);
RefinementPlan elevation_plan(const SegmentConfiguration& config, int degree_raise);

// Selection matrix G with H G = I (exact 0/1 entries).
SparseMatrix build_right_inverse(const MDSplineSpace& space);

struct SpaceRefinement {
    MDSplineSpace fine;
    SparseMatrix S;  // block-diagonal rational refinement, b = S btilde
};

SpaceRefinement refine_space(const MDSplineSpace& space, const RefinementPlan& plan);

// R = H S Gtilde; verifies the defining system R Htilde = H S.
SparseMatrix curve_refinement_matrix(const MDSplineSpace& coarse, const MDSplineSpace& fine,
                                     const SparseMatrix& S);

Curve refine_curve(const Curve& curve, const RefinementPlan& plan);

struct PolarRefinementPlan {
    RefinementPlan s;
    RefinementPlan t;
};

// Right inverse D with E D = I; the pole blocks come from the closed-form
// inverse of the 3x3 submatrix on angle columns iota, kappa chosen as close
// as possible to pi/2 apart (kappa = 1, iota = kappa + floor(ns/4 + 1/2)).
SparseMatrix build_polar_right_inverse(const PolarSplineSpace& space);

struct PolarRefinement {
    PolarSplineSpace fine;
    SparseMatrix S;  // tensor product of the univariate refinement matrices
};

PolarRefinement refine_polar_space(const PolarSplineSpace& space, const PolarRefinementPlan& plan);

// R = E S Dtilde; verifies R Etilde = E S and throws when the refinement
// does not preserve the polar spline space (the pole-constraint span changes
// under most s-direction refinements).
SparseMatrix polar_refinement_matrix(const PolarSplineSpace& coarse, const PolarSplineSpace& fine,
                                     const SparseMatrix& S);

PolarSurface refine_polar_surface(const PolarSurface& surface, const PolarRefinementPlan& plan);

}  // namespace mds
