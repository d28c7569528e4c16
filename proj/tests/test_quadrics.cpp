#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mds/quadrics.hpp"
#include "mds/refinement.hpp"
#include "test_util.hpp"

using namespace mds;

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt6 = std::sqrt(6.0);

}  // namespace

TEST_CASE("ellipse control points per recipe") {
    const double ax = 2.0, ay = 0.5;
    SUBCASE("Quadratic4") {
        Curve c = make_ellipse({ax, ay, EllipseRecipe::Quadratic4});
        const double expected[4][2] = {{ax, ay}, {ax, -ay}, {-ax, -ay}, {-ax, ay}};
        for (int i = 0; i < 4; ++i)
            for (int d = 0; d < 2; ++d)
                CHECK(c.control_points[i][d] == doctest::Approx(expected[i][d]));
        CHECK(c.space.config.segment(0).degree() == 2);
        CHECK(c.space.config.segment_count() == 4);
    }
    SUBCASE("Cubic2") {
        Curve c = make_ellipse({ax, ay, EllipseRecipe::Cubic2});
        const double expected[4][2] = {{2 * ax, ay}, {2 * ax, -ay}, {-2 * ax, -ay}, {-2 * ax, ay}};
        for (int i = 0; i < 4; ++i)
            for (int d = 0; d < 2; ++d)
                CHECK(c.control_points[i][d] == doctest::Approx(expected[i][d]));
        CHECK(c.space.config.segment_count() == 2);
    }
    SUBCASE("MultiDegree322") {
        Curve c = make_ellipse({ax, ay, EllipseRecipe::MultiDegree322});
        const double expected[4][2] = {{2 * ax, ay}, {2 * ax, -ay}, {-ax, -ay}, {-ax, ay}};
        for (int i = 0; i < 4; ++i)
            for (int d = 0; d < 2; ++d)
                CHECK(c.control_points[i][d] == doctest::Approx(expected[i][d]));
        CHECK(c.space.config.segment(0).degree() == 3);
        CHECK(c.space.config.segment(1).degree() == 2);
        CHECK(c.space.config.t2() == doctest::Approx(kSqrt2 + 2));
    }
    CHECK_THROWS_AS(make_ellipse({-1.0, 1.0, EllipseRecipe::Quadratic4}), std::invalid_argument);
}

TEST_CASE("ellipsoid control points per recipe") {
    const double ax = 1.0, ay = 2.0, az = 3.0;
    SUBCASE("Deg22") {
        PolarSurface s = make_ellipsoid({ax, ay, az, EllipsoidRecipe::Deg22});
        CHECK(s.control_points[0][0] == doctest::Approx(0.0));
        CHECK(s.control_points[0][1] == doctest::Approx(2 * kSqrt2 * ay));
        CHECK(s.control_points[0][2] == doctest::Approx(az));
        CHECK(s.control_points[1][0] == doctest::Approx(-kSqrt6 * ax));
        CHECK(s.control_points[1][1] == doctest::Approx(-kSqrt2 * ay));
        CHECK(s.control_points[2][0] == doctest::Approx(kSqrt6 * ax));
        // bottom three mirror in z
        for (int l = 0; l < 3; ++l) {
            CHECK(s.control_points[l][2] == doctest::Approx(az));
            CHECK(s.control_points[l + 3][2] == doctest::Approx(-az));
        }
        CHECK(s.control_points[5][1] == doctest::Approx(2 * kSqrt2 * ay));
    }
    SUBCASE("Deg23 doubles the in-plane coordinates") {
        PolarSurface s = make_ellipsoid({ax, ay, az, EllipsoidRecipe::Deg23});
        CHECK(s.control_points[0][1] == doctest::Approx(4 * kSqrt2 * ay));
        CHECK(s.control_points[1][0] == doctest::Approx(-2 * kSqrt6 * ax));
        CHECK(s.control_points[1][1] == doctest::Approx(-2 * kSqrt2 * ay));
    }
    SUBCASE("Deg33 quadruples x") {
        PolarSurface s = make_ellipsoid({ax, ay, az, EllipsoidRecipe::Deg33});
        CHECK(s.control_points[0][1] == doctest::Approx(4 * kSqrt2 * ay));
        CHECK(s.control_points[1][0] == doctest::Approx(-4 * kSqrt6 * ax));
        CHECK(s.control_points[1][1] == doctest::Approx(-2 * kSqrt2 * ay));
    }
}

TEST_CASE("exactness of all six recipes") {
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> axis(0.1, 10.0);
    for (auto recipe :
         {EllipseRecipe::Quadratic4, EllipseRecipe::Cubic2, EllipseRecipe::MultiDegree322}) {
        EllipseSpec unit{1.0, 1.0, recipe};
        CHECK(quadric_residual(make_ellipse(unit), unit, 10000) <= 1e-13);
        for (int k = 0; k < 5; ++k) {
            EllipseSpec spec{axis(rng), axis(rng), recipe};
            CHECK(quadric_residual(make_ellipse(spec), spec, 2000) <= 1e-12);
        }
    }
    for (auto recipe : {EllipsoidRecipe::Deg22, EllipsoidRecipe::Deg23, EllipsoidRecipe::Deg33}) {
        EllipsoidSpec unit{1.0, 1.0, 1.0, recipe};
        CHECK(quadric_residual(make_ellipsoid(unit), unit, 4000) <= 1e-12);
        for (int k = 0; k < 3; ++k) {
            EllipsoidSpec spec{axis(rng), axis(rng), axis(rng), recipe};
            CHECK(quadric_residual(make_ellipsoid(spec), spec, 2000) <= 1e-12);
        }
    }
}

TEST_CASE("Table 1 piece and DOF counts") {
    struct CurveRow {
        EllipseRecipe recipe;
        int pieces;
        int nurbs_dofs;
    };
    for (const auto& row : {CurveRow{EllipseRecipe::Quadratic4, 4, 12},
                            CurveRow{EllipseRecipe::Cubic2, 2, 8},
                            CurveRow{EllipseRecipe::MultiDegree322, 3, 10}}) {
        Curve c = make_ellipse({1.0, 1.0, row.recipe});
        CHECK(c.space.dim == 4);
        CHECK(c.space.config.piece_count() == row.pieces);
        CHECK(c.space.config.total_local_dim() == row.nurbs_dofs);
    }
    struct SurfaceRow {
        EllipsoidRecipe recipe;
        int pieces;
        int nurbs_dofs;
    };
    for (const auto& row : {SurfaceRow{EllipsoidRecipe::Deg22, 8, 72},
                            SurfaceRow{EllipsoidRecipe::Deg23, 4, 48},
                            SurfaceRow{EllipsoidRecipe::Deg33, 2, 32}}) {
        PolarSurface s = make_ellipsoid({1.0, 1.0, 1.0, row.recipe});
        CHECK(s.space.dim == 6);
        const auto& scfg = s.space.tp.s.config;
        const auto& tcfg = s.space.tp.t.config;
        CHECK(scfg.piece_count() * tcfg.piece_count() == row.pieces);
        CHECK(scfg.total_local_dim() * tcfg.total_local_dim() == row.nurbs_dofs);
    }
}

TEST_CASE("standard perturbations") {
    SUBCASE("curve: only the first control point moves") {
        EllipseSpec spec{1.5, 0.5, EllipseRecipe::Cubic2};
        Curve c = make_ellipse(spec);
        Curve p = c;
        perturb_standard(p, spec);
        CHECK(p.control_points[0][1] == doctest::Approx(c.control_points[0][1] + 0.5));
        CHECK(p.control_points[0][0] == c.control_points[0][0]);
        for (int i = 1; i < 4; ++i)
            for (int d = 0; d < 2; ++d) CHECK(p.control_points[i][d] == c.control_points[i][d]);
        SUBCASE("leaves the conic") {
            CHECK(quadric_residual(p, spec, 2000) > 1e-3);
        }
        SUBCASE("remains C1") {
            for (int join = 0; join < p.space.config.join_count(); ++join) {
                auto jump = derivative_jump(p.space, join);
                double curve_jump = 0.0;
                for (int d = 0; d < 2; ++d) {
                    double acc = 0.0;
                    for (int i = 0; i < 4; ++i) acc += jump[i] * p.control_points[i][d];
                    curve_jump = std::max(curve_jump, std::abs(acc));
                }
                CHECK(curve_jump <= 1e-11);
            }
        }
    }
    SUBCASE("surface: only the third control point moves") {
        EllipsoidSpec spec{0.7, 1.2, 2.0, EllipsoidRecipe::Deg33};
        PolarSurface s = make_ellipsoid(spec);
        PolarSurface p = s;
        perturb_standard(p, spec);
        CHECK(p.control_points[2][2] == doctest::Approx(s.control_points[2][2] + 4 * 0.7));
        for (int l = 0; l < 6; ++l)
            for (int d = 0; d < 3; ++d)
                if (!(l == 2 && d == 2))
                    CHECK(p.control_points[l][d] == s.control_points[l][d]);
        CHECK(quadric_residual(p, spec, 1000) > 1e-3);
        for (PoleSide side : {PoleSide::Bottom, PoleSide::Top}) {
            PoleSmoothness r = surface_pole_smoothness(p, side, 100);
            CHECK(r.value_spread <= 1e-10);
            CHECK(r.derivative_residual <= 1e-10);
        }
    }
}

TEST_CASE("affine consistency with the unit recipe") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> axis(0.1, 10.0);
    for (auto recipe :
         {EllipseRecipe::Quadratic4, EllipseRecipe::Cubic2, EllipseRecipe::MultiDegree322}) {
        double ax = axis(rng), ay = axis(rng);
        Curve scaled = make_ellipse({ax, ay, recipe});
        Curve unit = make_ellipse({1.0, 1.0, recipe});
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(scaled.control_points[i][0] - ax * unit.control_points[i][0]) <= 1e-13);
            CHECK(std::abs(scaled.control_points[i][1] - ay * unit.control_points[i][1]) <= 1e-13);
        }
    }
    for (auto recipe : {EllipsoidRecipe::Deg22, EllipsoidRecipe::Deg23, EllipsoidRecipe::Deg33}) {
        double ax = axis(rng), ay = axis(rng), az = axis(rng);
        PolarSurface scaled = make_ellipsoid({ax, ay, az, recipe});
        PolarSurface unit = make_ellipsoid({1.0, 1.0, 1.0, recipe});
        const double f[3] = {ax, ay, az};
        for (int l = 0; l < 6; ++l)
            for (int d = 0; d < 3; ++d)
                CHECK(std::abs(scaled.control_points[l][d] - f[d] * unit.control_points[l][d]) <=
                      1e-12);
    }
}
