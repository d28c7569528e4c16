#pragma once

#include <utility>
#include <vector>

#include "mds/sparse_matrix.hpp"

namespace mds {

// Open knot vector of degree p on a basic interval [x1, x2]: the first and
// last p+1 knots repeat, interior multiplicities stay within [1, p-1] so the
// spanned space is C1 inside the segment.
class KnotVector {
public:
    KnotVector(int degree, std::vector<double> knots);

    int degree() const { return degree_; }
    int dim() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
    const std::vector<double>& knots() const { return knots_; }
    double x1() const { return knots_[degree_]; }
    double x2() const { return knots_[dim()]; }

    // Index mu with knots[mu] <= x < knots[mu+1]; evaluation at x2 uses the
    // left limit, so the last non-empty span is returned there.
    int find_span(double x) const;

private:
    int degree_;
    std::vector<double> knots_;
};

class WeightVector {
public:
    explicit WeightVector(std::vector<double> weights);

    int size() const { return static_cast<int>(weights_.size()); }
    double operator[](int i) const { return weights_[i]; }
    const std::vector<double>& values() const { return weights_; }

private:
    std::vector<double> weights_;
};

// One rational segment space: knot vector plus positive weights.
struct NurbsSpace {
    NurbsSpace(KnotVector kv_, WeightVector w_);

    KnotVector kv;
    WeightVector w;

    int degree() const { return kv.degree(); }
    int dim() const { return kv.dim(); }
};

// Full-length basis vectors (all n entries; only p+1 are non-zero).
std::vector<double> bspline_basis_all(const KnotVector& kv, double x);
// order in {0, 1, 2}
std::vector<double> bspline_derivative_all(const KnotVector& kv, double x, int order);

std::vector<double> nurbs_basis_all(const NurbsSpace& space, double x);
std::vector<double> nurbs_derivative_all(const NurbsSpace& space, double x);

// (a_left, a_right) with df/dx(x1) = a_left (f2 - f1) and
// df/dx(x2) = a_right (fn - f_{n-1}) for rational coefficients f.
std::pair<double, double> endpoint_coefficients(const NurbsSpace& space);

// B_{j,p} = sum_k A_{jk} Btilde_{k,p} on the knot vector with new_knots
// inserted. new_knots must lie strictly inside (x1, x2) and keep interior
// multiplicities <= p-1.
SparseMatrix knot_insertion_matrix(const KnotVector& kv, const std::vector<double>& new_knots);
KnotVector insert_knots(const KnotVector& kv, const std::vector<double>& new_knots);

// Degree raise by r on the same breakpoints (interior multiplicities grow by
// r, preserving smoothness). r = 0 is a no-op.
SparseMatrix degree_elevation_matrix(const KnotVector& kv, int r);
KnotVector elevate_degree(const KnotVector& kv, int r);

// Rational refinement: given the polynomial matrix A between the knot
// vectors, the fine weights must equal A^T w (the unique choice keeping the
// denominator unchanged); then R_j = sum_k S_{jk} Rtilde_k with
// S_{jk} = w_j A_{jk} / wtilde_k.
SparseMatrix nurbs_refinement_matrix(const NurbsSpace& coarse, const NurbsSpace& fine,
                                     const SparseMatrix& A);

struct SegmentRefinementResult {
    NurbsSpace fine;
    SparseMatrix A;  // polynomial matrix
    SparseMatrix S;  // rational matrix
};

// Elevate by degree_raise, then insert new_knots; fine weights are A^T w.
SegmentRefinementResult refine_segment(const NurbsSpace& space,
                                       const std::vector<double>& new_knots, int degree_raise);

}  // namespace mds
