#pragma once

#include <vector>

#include "mds/nurbs.hpp"
#include "mds/point_set.hpp"
#include "mds/sparse_matrix.hpp"

namespace mds {

// An m-segment collection of NURBS spaces glued C1 (or G1 via per-join gamma
// factors). Segment indices, join indices and basis indices are 0-based.
class SegmentConfiguration {
public:
    SegmentConfiguration(std::vector<NurbsSpace> segments, double origin, bool periodic,
                         std::vector<double> gammas = {});

    int segment_count() const { return static_cast<int>(segments_.size()); }
    const NurbsSpace& segment(int i) const { return segments_[i]; }
    bool periodic() const { return periodic_; }
    double origin() const { return origin_; }
    const std::vector<double>& gammas() const { return gammas_; }

    // joins: m-1 interior joins, plus the seam join (index m-1) if periodic
    int join_count() const { return periodic_ ? segment_count() : segment_count() - 1; }

    int mu(int i) const { return mu_[i]; }    // cumulative local dimensions, mu(m) = total
    int eta(int i) const { return eta_[i]; }  // mu(i) - 2i
    double tau(int i) const { return tau_[i]; }  // breakpoints in the composed interval
    double t1() const { return tau_.front(); }
    double t2() const { return tau_.back(); }

    // Right endpoint coefficient of the segment left of join i / left endpoint
    // coefficient of the segment right of it (wrapping at the seam).
    double alpha(int join) const;
    double beta(int join) const;

    int total_local_dim() const { return mu_.back(); }
    // Number of non-empty rational pieces over all segments.
    int piece_count() const;

private:
    std::vector<NurbsSpace> segments_;
    double origin_;
    bool periodic_;
    std::vector<double> gammas_;
    std::vector<int> mu_, eta_;
    std::vector<double> tau_;
};

// Global parameter of a local coordinate: t = x - x1(i) + tau(i).
double phi_map(const SegmentConfiguration& config, int segment, double x);

struct SegmentLocation {
    int segment;
    double x;
};

// Inverse of phi_map; breakpoint ties resolve to the right segment except t2,
// which resolves to the last segment (left continuity).
SegmentLocation locate(const SegmentConfiguration& config, double t);

// C1 multi-degree spline space: the extraction matrix H maps the stacked
// segment-local NURBS onto the smooth basis, N_i = sum_j H_ij b_j.
struct MDSplineSpace {
    SegmentConfiguration config;
    SparseMatrix H;
    int dim;
};

MDSplineSpace build_extraction(const SegmentConfiguration& config);

std::vector<double> eval_basis(const MDSplineSpace& space, double t);
std::vector<double> eval_basis_derivative(const MDSplineSpace& space, double t);

// Difference of one-sided first derivatives of every basis function across
// join i (right minus left), from segment-local analytic derivatives.
std::vector<double> derivative_jump(const MDSplineSpace& space, int join);

struct Curve {
    MDSplineSpace space;
    PointSet control_points;

    Curve(MDSplineSpace s, PointSet pts);
};

std::vector<double> eval_curve(const Curve& curve, double t);
std::vector<double> eval_curve_derivative(const Curve& curve, double t);

// Segment-local NURBS control points g_j = sum_i H_ij f_i.
PointSet local_control_points(const Curve& curve);

}  // namespace mds
