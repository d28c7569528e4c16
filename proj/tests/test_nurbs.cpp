#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "mds/nurbs.hpp"
#include "test_util.hpp"

using namespace mds;

namespace {

const double kSqrt2 = std::sqrt(2.0);

KnotVector bezier2() { return KnotVector(2, {0, 0, 0, 1, 1, 1}); }

NurbsSpace circle_segment() {
    return NurbsSpace(bezier2(), WeightVector({1.0, kSqrt2 / 2.0, 1.0}));
}

}  // namespace

TEST_CASE("knot vector validation") {
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 1, 1}), std::invalid_argument);          // not open
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 1, 0.5, 1, 1}), std::invalid_argument);  // decreasing
    CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, .5, .5, 1, 1, 1}), std::invalid_argument);  // mult > p-1
    CHECK_THROWS_AS(KnotVector(0, {0, 1}), std::invalid_argument);
    CHECK_NOTHROW(KnotVector(3, {0, 0, 0, 0, .5, .5, 1, 1, 1, 1}));
    KnotVector kv(2, {0, 0, 0, .5, 1, 1, 1});
    CHECK(kv.dim() == 4);
    CHECK(kv.x1() == 0.0);
    CHECK(kv.x2() == 1.0);
}

TEST_CASE("bspline basis values") {
    KnotVector kv = bezier2();
    auto b0 = bspline_basis_all(kv, 0.0);
    CHECK(b0[0] == 1.0);
    CHECK(b0[1] == 0.0);
    CHECK(b0[2] == 0.0);
    auto b1 = bspline_basis_all(kv, 1.0);  // left continuity at the right end
    CHECK(b1[0] == 0.0);
    CHECK(b1[1] == 0.0);
    CHECK(b1[2] == 1.0);
    auto bh = bspline_basis_all(kv, 0.5);
    CHECK(bh[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(bh[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(bh[2] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(bspline_basis_all(kv, 1.5), std::domain_error);
    CHECK_THROWS_AS(bspline_basis_all(kv, -0.1), std::domain_error);
}

TEST_CASE("bspline derivatives") {
    KnotVector kv = bezier2();
    auto d0 = bspline_derivative_all(kv, 0.0, 1);
    CHECK(d0[0] == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(d0[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d0[2] == 0.0);
    auto d1 = bspline_derivative_all(kv, 1.0, 1);
    CHECK(d1[0] == 0.0);
    CHECK(d1[1] == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(d1[2] == doctest::Approx(2.0).epsilon(1e-15));
    SUBCASE("order zero equals the basis") {
        std::mt19937 rng(7);
        KnotVector rkv = test::random_knot_vector(rng);
        std::uniform_real_distribution<double> xs(0.0, 1.0);
        for (int k = 0; k < 20; ++k) {
            double x = xs(rng);
            auto a = bspline_derivative_all(rkv, x, 0);
            auto b = bspline_basis_all(rkv, x);
            for (int j = 0; j < rkv.dim(); ++j) CHECK(a[j] == b[j]);
        }
    }
    CHECK_THROWS_AS(bspline_derivative_all(kv, 0.5, 3), std::invalid_argument);
    SUBCASE("second derivative of the Bernstein basis") {
        auto dd = bspline_derivative_all(kv, 0.3, 2);
        CHECK(dd[0] == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(dd[1] == doctest::Approx(-4.0).epsilon(1e-13));
        CHECK(dd[2] == doctest::Approx(2.0).epsilon(1e-13));
    }
}

TEST_CASE("nurbs basis") {
    SUBCASE("equal weights reduce to the polynomial basis") {
        KnotVector kv(3, {0, 0, 0, 0, .4, 1, 1, 1, 1});
        NurbsSpace sp(kv, WeightVector({2, 2, 2, 2, 2}));
        for (double x : {0.0, 0.2, 0.4, 0.77, 1.0}) {
            auto r = nurbs_basis_all(sp, x);
            auto b = bspline_basis_all(kv, x);
            for (int j = 0; j < kv.dim(); ++j) CHECK(r[j] == doctest::Approx(b[j]).epsilon(1e-15));
        }
    }
    SUBCASE("circle segment at the midpoint") {
        auto r = nurbs_basis_all(circle_segment(), 0.5);
        double W = 0.5 + kSqrt2 / 4.0;
        CHECK(r[0] == doctest::Approx(0.25 / W).epsilon(1e-15));
        CHECK(r[1] == doctest::Approx(kSqrt2 / 4.0 / W).epsilon(1e-15));
        CHECK(r[2] == doctest::Approx(0.25 / W).epsilon(1e-15));
    }
    SUBCASE("endpoint interpolation") {
        std::mt19937 rng(11);
        for (int k = 0; k < 10; ++k) {
            NurbsSpace sp = test::random_nurbs_space(rng);
            auto r1 = nurbs_basis_all(sp, sp.kv.x1());
            auto r2 = nurbs_basis_all(sp, sp.kv.x2());
            CHECK(r1[0] == 1.0);
            CHECK(r2[sp.dim() - 1] == 1.0);
            for (int j = 1; j < sp.dim(); ++j) CHECK(r1[j] == 0.0);
            for (int j = 0; j + 1 < sp.dim(); ++j) CHECK(r2[j] == 0.0);
        }
    }
}

TEST_CASE("nurbs derivative") {
    std::mt19937 rng(13);
    SUBCASE("sums to zero") {
        for (int k = 0; k < 10; ++k) {
            NurbsSpace sp = test::random_nurbs_space(rng);
            std::uniform_real_distribution<double> xs(0.0, 1.0);
            for (int i = 0; i < 50; ++i) {
                auto d = nurbs_derivative_all(sp, xs(rng));
                double sum = 0.0;
                for (double v : d) sum += v;
                CHECK(std::abs(sum) <= 1e-12);
            }
        }
    }
    SUBCASE("equal weights at the left end") {
        NurbsSpace sp(bezier2(), WeightVector({3, 3, 3}));
        auto d = nurbs_derivative_all(sp, 0.0);
        CHECK(d[0] == doctest::Approx(-2.0).epsilon(1e-15));
        CHECK(d[1] == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(d[2] == 0.0);
    }
    SUBCASE("matches central differences at interior points") {
        for (int k = 0; k < 5; ++k) {
            NurbsSpace sp = test::random_nurbs_space(rng);
            std::uniform_real_distribution<double> xs(0.01, 0.99);
            const double h = 1e-6;
            for (int i = 0; i < 30; ++i) {
                double x = xs(rng);
                auto d = nurbs_derivative_all(sp, x);
                auto lo = nurbs_basis_all(sp, x - h);
                auto hi = nurbs_basis_all(sp, x + h);
                for (int j = 0; j < sp.dim(); ++j)
                    CHECK(std::abs(d[j] - (hi[j] - lo[j]) / (2 * h)) <= 1e-6);
            }
        }
    }
    SUBCASE("endpoint slope matches the endpoint coefficients") {
        for (int k = 0; k < 10; ++k) {
            NurbsSpace sp = test::random_nurbs_space(rng);
            auto [al, ar] = endpoint_coefficients(sp);
            auto d1 = nurbs_derivative_all(sp, sp.kv.x1());
            auto d2 = nurbs_derivative_all(sp, sp.kv.x2());
            int n = sp.dim();
            // df/dx(x1) = a_left (f2 - f1) for any coefficients f
            CHECK(d1[0] == doctest::Approx(-al).epsilon(1e-12));
            CHECK(d1[1] == doctest::Approx(al).epsilon(1e-12));
            for (int j = 2; j < n; ++j) CHECK(d1[j] == 0.0);
            CHECK(d2[n - 1] == doctest::Approx(ar).epsilon(1e-12));
            CHECK(d2[n - 2] == doctest::Approx(-ar).epsilon(1e-12));
            for (int j = 0; j + 2 < n; ++j) CHECK(d2[j] == 0.0);
        }
    }
}

TEST_CASE("endpoint coefficients") {
    auto [al, ar] = endpoint_coefficients(circle_segment());
    CHECK(al == doctest::Approx(kSqrt2).epsilon(1e-15));
    CHECK(ar == doctest::Approx(kSqrt2).epsilon(1e-15));
    NurbsSpace cubic(KnotVector(3, {0, 0, 0, 0, 1, 1, 1, 1}), WeightVector({1, 1, 1, 1}));
    auto [bl, br] = endpoint_coefficients(cubic);
    CHECK(bl == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(br == doctest::Approx(3.0).epsilon(1e-15));
    SUBCASE("invariant under weight scaling") {
        std::mt19937 rng(17);
        NurbsSpace sp = test::random_nurbs_space(rng);
        std::vector<double> w2 = sp.w.values();
        for (double& v : w2) v *= 7.5;
        NurbsSpace scaled(sp.kv, WeightVector(w2));
        auto a = endpoint_coefficients(sp);
        auto b = endpoint_coefficients(scaled);
        CHECK(a.first == doctest::Approx(b.first).epsilon(1e-15));
        CHECK(a.second == doctest::Approx(b.second).epsilon(1e-15));
    }
}

TEST_CASE("knot insertion matrix") {
    KnotVector kv = bezier2();
    SUBCASE("no knots gives the identity") {
        SparseMatrix A = knot_insertion_matrix(kv, {});
        CHECK(A.max_abs_diff(SparseMatrix::identity(3)) == 0.0);
    }
    SUBCASE("midpoint insertion on the Bezier segment") {
        SparseMatrix A = knot_insertion_matrix(kv, {0.5});
        double expected[3][4] = {{1, .5, 0, 0}, {0, .5, .5, 0}, {0, 0, .5, 1}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j) CHECK(A(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));
    }
    SUBCASE("multiplicity violation is rejected") {
        CHECK_THROWS_AS(knot_insertion_matrix(kv, {0.5, 0.5}), std::invalid_argument);
        CHECK_THROWS_AS(knot_insertion_matrix(kv, {0.0}), std::invalid_argument);
    }
    SUBCASE("pointwise identity on random spaces") {
        std::mt19937 rng(19);
        std::uniform_real_distribution<double> xs(0.0, 1.0);
        for (int k = 0; k < 10; ++k) {
            KnotVector rkv = test::random_knot_vector(rng);
            std::vector<double> nk{xs(rng) * 0.8 + 0.1, xs(rng) * 0.8 + 0.1};
            SparseMatrix A;
            KnotVector fine = rkv;
            try {
                A = knot_insertion_matrix(rkv, nk);
                fine = insert_knots(rkv, nk);
            } catch (const std::invalid_argument&) {
                continue;  // collided with an existing knot at the multiplicity bound
            }
            for (int i = 0; i < 100; ++i) {
                double x = xs(rng);
                auto b = bspline_basis_all(rkv, x);
                auto bt = bspline_basis_all(fine, x);
                auto rec = A.apply(bt);
                for (int j = 0; j < rkv.dim(); ++j) CHECK(std::abs(b[j] - rec[j]) <= 1e-13);
            }
        }
    }
}

TEST_CASE("degree elevation matrix") {
    KnotVector kv = bezier2();
    SUBCASE("Bernstein elevation p=2 to 3") {
        SparseMatrix A = degree_elevation_matrix(kv, 1);
        double e[3][4] = {{1, 1.0 / 3, 0, 0}, {0, 2.0 / 3, 2.0 / 3, 0}, {0, 0, 1.0 / 3, 1}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j) CHECK(A(i, j) == doctest::Approx(e[i][j]).epsilon(1e-15));
    }
    SUBCASE("r = 0 is a no-op") {
        SparseMatrix A = degree_elevation_matrix(kv, 0);
        CHECK(A.max_abs_diff(SparseMatrix::identity(3)) == 0.0);
    }
    SUBCASE("pointwise identity on random spaces") {
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> xs(0.0, 1.0);
        for (int k = 0; k < 10; ++k) {
            KnotVector rkv = test::random_knot_vector(rng);
            int r = 1 + (k % 2);
            SparseMatrix A = degree_elevation_matrix(rkv, r);
            KnotVector fine = elevate_degree(rkv, r);
            CHECK(A.rows() == rkv.dim());
            CHECK(A.cols() == fine.dim());
            for (int i = 0; i < 100; ++i) {
                double x = xs(rng);
                auto b = bspline_basis_all(rkv, x);
                auto bt = bspline_basis_all(fine, x);
                auto rec = A.apply(bt);
                for (int j = 0; j < rkv.dim(); ++j) CHECK(std::abs(b[j] - rec[j]) <= 1e-13);
            }
        }
    }
}

TEST_CASE("rational refinement matrix") {
    SUBCASE("equal weights give S = A") {
        KnotVector kv = bezier2();
        SparseMatrix A = knot_insertion_matrix(kv, {0.25});
        NurbsSpace coarse(kv, WeightVector({2, 2, 2}));
        std::vector<double> wf = A.apply_transpose(coarse.w.values());
        NurbsSpace fine(insert_knots(kv, {0.25}), WeightVector(wf));
        SparseMatrix S = nurbs_refinement_matrix(coarse, fine, A);
        CHECK(S.max_abs_diff(A) <= 1e-15);
    }
    SUBCASE("identity A gives identity S") {
        NurbsSpace sp = circle_segment();
        SparseMatrix S = nurbs_refinement_matrix(sp, sp, SparseMatrix::identity(3));
        CHECK(S.max_abs_diff(SparseMatrix::identity(3)) == 0.0);
    }
    SUBCASE("inconsistent fine weights are rejected") {
        NurbsSpace coarse = circle_segment();
        KnotVector fkv = insert_knots(coarse.kv, {0.5});
        SparseMatrix A = knot_insertion_matrix(coarse.kv, {0.5});
        NurbsSpace bad(fkv, WeightVector({1, 1, 1, 1}));
        CHECK_THROWS_AS(nurbs_refinement_matrix(coarse, bad, A), std::invalid_argument);
    }
    SUBCASE("circle segment reproduces pointwise") {
        NurbsSpace coarse = circle_segment();
        SparseMatrix A = knot_insertion_matrix(coarse.kv, {0.5});
        std::vector<double> wf = A.apply_transpose(coarse.w.values());
        NurbsSpace fine(insert_knots(coarse.kv, {0.5}), WeightVector(wf));
        SparseMatrix S = nurbs_refinement_matrix(coarse, fine, A);
        std::mt19937 rng(29);
        std::uniform_real_distribution<double> xs(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            double x = xs(rng);
            auto r = nurbs_basis_all(coarse, x);
            auto rt = nurbs_basis_all(fine, x);
            auto rec = S.apply(rt);
            for (int j = 0; j < coarse.dim(); ++j) CHECK(std::abs(r[j] - rec[j]) <= 1e-13);
        }
    }
    SUBCASE("refinement reproduction for random coefficients") {
        std::mt19937 rng(31);
        std::uniform_real_distribution<double> xs(0.0, 1.0);
        std::uniform_real_distribution<double> cs(-3.0, 3.0);
        for (int k = 0; k < 8; ++k) {
            NurbsSpace coarse = test::random_nurbs_space(rng);
            SegmentRefinementResult ref = refine_segment(coarse, {0.5}, k % 2);
            std::vector<double> f(coarse.dim());
            for (double& v : f) v = cs(rng);
            std::vector<double> ftilde = ref.S.apply_transpose(f);
            for (int i = 0; i < 100; ++i) {
                double x = xs(rng);
                auto r = nurbs_basis_all(coarse, x);
                auto rt = nurbs_basis_all(ref.fine, x);
                double a = 0.0, b = 0.0;
                for (int j = 0; j < coarse.dim(); ++j) a += f[j] * r[j];
                for (int j = 0; j < ref.fine.dim(); ++j) b += ftilde[j] * rt[j];
                CHECK(std::abs(a - b) <= 1e-12);
            }
        }
    }
}

TEST_CASE("partition of unity, non-negativity, local support") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> xs(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        NurbsSpace sp = test::random_nurbs_space(rng);
        const auto& knots = sp.kv.knots();
        for (int i = 0; i < 100; ++i) {
            double x = xs(rng);
            auto r = nurbs_basis_all(sp, x);
            double sum = 0.0;
            for (int j = 0; j < sp.dim(); ++j) {
                sum += r[j];
                CHECK(r[j] >= -1e-14);
                // local support: exact zero outside [xi_j, xi_{j+p+1}]
                if (x < knots[j] || x > knots[j + sp.degree() + 1]) CHECK(r[j] == 0.0);
            }
            CHECK(std::abs(sum - 1.0) <= 1e-13);
        }
    }
}
