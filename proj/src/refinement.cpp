#include "mds/refinement.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mds {

bool RefinementPlan::trivial() const {
    for (const auto& s : segments)
        if (!s.new_knots.empty() || s.degree_raise != 0) return false;
    return true;
}

RefinementPlan midpoint_plan(const SegmentConfiguration& config) {
    RefinementPlan plan;
    for (int i = 0; i < config.segment_count(); ++i) {
        SegmentRefinement sr;
        const auto& knots = config.segment(i).kv.knots();
        const int p = config.segment(i).degree();
        for (size_t k = p; k < knots.size() - p - 1; ++k)
            if (knots[k + 1] > knots[k]) sr.new_knots.push_back(0.5 * (knots[k] + knots[k + 1]));
        plan.segments.push_back(std::move(sr));
    }
    return plan;
}

RefinementPlan elevation_plan(const SegmentConfiguration& config, int degree_raise) {
    RefinementPlan plan;
    plan.segments.assign(config.segment_count(), SegmentRefinement{{}, degree_raise});
    return plan;
}

SparseMatrix build_right_inverse(const MDSplineSpace& space) {
    const SegmentConfiguration& cfg = space.config;
    const int m = cfg.segment_count();
    const int mu_m = cfg.mu(m);
    std::vector<SparseMatrix::Triplet> t;
    const int col0 = cfg.periodic() ? 0 : 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < cfg.segment(i).dim() - 2; ++j)
            t.push_back({1 + cfg.mu(i) + j, col0 + cfg.eta(i) + j, 1.0});
    if (!cfg.periodic()) {
        t.push_back({0, 0, 1.0});
        t.push_back({mu_m - 1, space.dim - 1, 1.0});
    }
    return SparseMatrix::from_triplets(mu_m, space.dim, std::move(t));
}

SpaceRefinement refine_space(const MDSplineSpace& space, const RefinementPlan& plan) {
    const SegmentConfiguration& cfg = space.config;
    const int m = cfg.segment_count();
    std::vector<SegmentRefinement> per_segment = plan.segments;
    if (per_segment.empty()) per_segment.resize(m);
    if (static_cast<int>(per_segment.size()) != m)
        throw std::invalid_argument("refine_space: plan must list one entry per segment (" +
                                    std::to_string(m) + ")");
    std::vector<NurbsSpace> fine_segments;
    std::vector<SparseMatrix::Triplet> st;
    int row0 = 0, col0 = 0;
    for (int i = 0; i < m; ++i) {
        SegmentRefinementResult r =
            refine_segment(cfg.segment(i), per_segment[i].new_knots, per_segment[i].degree_raise);
        for (int j = 0; j < r.S.rows(); ++j)
            for (const auto& e : r.S.row(j)) st.push_back({row0 + j, col0 + e.col, e.value});
        row0 += r.S.rows();
        col0 += r.S.cols();
        fine_segments.push_back(std::move(r.fine));
    }
    SegmentConfiguration fine_cfg(std::move(fine_segments), cfg.origin(), cfg.periodic(),
                                  cfg.gammas());
    SparseMatrix S = SparseMatrix::from_triplets(row0, col0, std::move(st));
    return {build_extraction(fine_cfg), std::move(S)};
}

SparseMatrix curve_refinement_matrix(const MDSplineSpace& coarse, const MDSplineSpace& fine,
                                     const SparseMatrix& S) {
    if (S.rows() != coarse.config.total_local_dim() ||
        S.cols() != fine.config.total_local_dim())
        throw std::invalid_argument("curve_refinement_matrix: S size mismatch");
    SparseMatrix HS = coarse.H.multiply(S);
    SparseMatrix R = HS.multiply(build_right_inverse(fine));
    double err = R.multiply(fine.H).max_abs_diff(HS);
    if (err > 1e-9)
        throw std::invalid_argument(
            "curve_refinement_matrix: R Htilde != H S (inconsistent spaces, error " +
            std::to_string(err) + ")");
    return R;
}

namespace {

PointSet apply_refinement(const PointSet& points, const SparseMatrix& R) {
    // Ftilde = F R with F as a row vector of points
    PointSet out(points.dim(), R.cols());
    for (int i = 0; i < R.rows(); ++i) {
        auto f = points[i];
        for (const auto& e : R.row(i)) {
            auto g = out[e.col];
            for (int d = 0; d < points.dim(); ++d) g[d] += e.value * f[d];
        }
    }
    return out;
}

}  // namespace

Curve refine_curve(const Curve& curve, const RefinementPlan& plan) {
    SpaceRefinement ref = refine_space(curve.space, plan);
    SparseMatrix R = curve_refinement_matrix(curve.space, ref.fine, ref.S);
    PointSet pts = apply_refinement(curve.control_points, R);
    return Curve(std::move(ref.fine), std::move(pts));
}

SparseMatrix build_polar_right_inverse(const PolarSplineSpace& space) {
    const int ns = space.tp.ns();
    const int nt = space.tp.nt();
    if (ns < 3) throw std::invalid_argument("build_polar_right_inverse: n^s must be >= 3");

    // Closed-form inverse of Mtilde = M [0 cos cos; 0 sin sin; 1 1 1] where the
    // angle columns are theta_iota and theta_kappa.
    const int kappa = 0;
    const int iota = kappa + static_cast<int>(std::floor(ns / 4.0 + 0.5));
    const double ti = space.theta[iota], tk = space.theta[kappa];
    const double sd = std::sin(tk - ti);
    if (std::abs(sd) < 1e-12)
        throw std::invalid_argument("build_polar_right_inverse: degenerate angle pair");
    const double s3 = std::sqrt(3.0);
    const double L[3][3] = {{std::sin(ti) - std::sin(tk), std::cos(tk) - std::cos(ti), sd},
                            {std::sin(tk), -std::cos(tk), 0.0},
                            {-std::sin(ti), std::cos(ti), 0.0}};
    const double Minv[3][3] = {{2.0, -1.0, -1.0}, {0.0, s3, -s3}, {1.0, 1.0, 1.0}};
    double MtInv[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += L[r][k] * Minv[k][c];
            MtInv[r][c] = acc / sd;
        }

    // Dtilde (2ns x 3): row 0 takes MtInv row 0, row ns+iota row 1, and row
    // ns+kappa row 2 (the unique assignment with Etilde Dtilde = I).
    std::vector<SparseMatrix::Triplet> dt;
    auto emit_bottom = [&](int row0, int col0) {
        for (int c = 0; c < 3; ++c) {
            dt.push_back({row0, col0 + c, MtInv[0][c]});
            dt.push_back({row0 + ns + iota, col0 + c, MtInv[1][c]});
            dt.push_back({row0 + ns + kappa, col0 + c, MtInv[2][c]});
        }
    };
    // Mirrored block J_{2ns} Dtilde J_3
    auto emit_top = [&](int row0, int col0) {
        for (int c = 0; c < 3; ++c) {
            dt.push_back({row0 + 2 * ns - 1, col0 + 2 - c, MtInv[0][c]});
            dt.push_back({row0 + 2 * ns - 1 - (ns + iota), col0 + 2 - c, MtInv[1][c]});
            dt.push_back({row0 + 2 * ns - 1 - (ns + kappa), col0 + 2 - c, MtInv[2][c]});
        }
    };

    std::vector<SparseMatrix::Triplet> t;
    auto append = [&]() {
        for (auto& tr : dt) t.push_back(tr);
        dt.clear();
    };
    if (space.poles == PoleConfig::Bottom) {
        emit_bottom(0, 0);
        append();
        for (int k = 0; k < ns * (nt - 2); ++k) t.push_back({2 * ns + k, 3 + k, 1.0});
    } else if (space.poles == PoleConfig::Top) {
        for (int k = 0; k < ns * (nt - 2); ++k) t.push_back({k, k, 1.0});
        emit_top(ns * (nt - 2), space.dim - 3);
        append();
    } else {
        emit_bottom(0, 0);
        append();
        for (int k = 0; k < ns * (nt - 4); ++k) t.push_back({2 * ns + k, 3 + k, 1.0});
        emit_top(ns * (nt - 2), space.dim - 3);
        append();
    }
    return SparseMatrix::from_triplets(ns * nt, space.dim, std::move(t));
}

PolarRefinement refine_polar_space(const PolarSplineSpace& space,
                                   const PolarRefinementPlan& plan) {
    SpaceRefinement rs = refine_space(space.tp.s, plan.s);
    SpaceRefinement rt = refine_space(space.tp.t, plan.t);
    SparseMatrix Rs = curve_refinement_matrix(space.tp.s, rs.fine, rs.S);
    SparseMatrix Rt = curve_refinement_matrix(space.tp.t, rt.fine, rt.S);
    // basis ordering is s-fastest, so the tensor operator is kron(Rt, Rs)
    SparseMatrix S = kron(Rt, Rs);
    TensorProductSpace fine_tp(std::move(rs.fine), std::move(rt.fine));
    PolarSplineSpace fine = build_polar_extraction(std::move(fine_tp), space.poles);
    return {std::move(fine), std::move(S)};
}

SparseMatrix polar_refinement_matrix(const PolarSplineSpace& coarse,
                                     const PolarSplineSpace& fine, const SparseMatrix& S) {
    if (S.rows() != coarse.tp.ns() * coarse.tp.nt() || S.cols() != fine.tp.ns() * fine.tp.nt())
        throw std::invalid_argument("polar_refinement_matrix: S size mismatch");
    if (coarse.poles != fine.poles)
        throw std::invalid_argument("polar_refinement_matrix: pole configurations differ");
    SparseMatrix ES = coarse.E.multiply(S);
    SparseMatrix R = ES.multiply(build_polar_right_inverse(fine));
    double err = R.multiply(fine.E).max_abs_diff(ES);
    if (err > 1e-9)
        throw std::invalid_argument(
            "polar_refinement_matrix: R Etilde != E S (the refinement does not preserve the "
            "polar spline space; s-direction plans generally do not, error " +
            std::to_string(err) + ")");
    return R;
}

PolarSurface refine_polar_surface(const PolarSurface& surface, const PolarRefinementPlan& plan) {
    PolarRefinement ref = refine_polar_space(surface.space, plan);
    SparseMatrix R = polar_refinement_matrix(surface.space, ref.fine, ref.S);
    PointSet pts = apply_refinement(surface.control_points, R);
    return PolarSurface(std::move(ref.fine), std::move(pts));
}

}  // namespace mds
