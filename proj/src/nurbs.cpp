#include "mds/nurbs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mds {

namespace {

void check_domain(const KnotVector& kv, double x) {
    if (x < kv.x1() || x > kv.x2())
        throw std::domain_error("parameter " + std::to_string(x) + " outside basic interval [" +
                                std::to_string(kv.x1()) + ", " + std::to_string(kv.x2()) + "]");
}

// Local non-zero basis values N_{mu-p..mu} at x (Cox-de Boor triangle).
void local_basis(int p, const std::vector<double>& knots, int mu, double x,
                 std::vector<double>& N) {
    N.assign(p + 1, 0.0);
    N[0] = 1.0;
    std::vector<double> left(p + 1), right(p + 1);
    for (int j = 1; j <= p; ++j) {
        left[j] = x - knots[mu + 1 - j];
        right[j] = knots[mu + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            double tmp = N[r] / (right[r + 1] + left[j - r]);
            N[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        N[j] = saved;
    }
}

// Local derivatives of order k at x (all orders up to k; returns order k row).
void local_ders(int p, const std::vector<double>& knots, int mu, double x, int order,
                std::vector<double>& out) {
    const int k = order;
    std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
    ndu[0][0] = 1.0;
    std::vector<double> left(p + 1), right(p + 1);
    for (int j = 1; j <= p; ++j) {
        left[j] = x - knots[mu + 1 - j];
        right[j] = knots[mu + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            double tmp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu[j][j] = saved;
    }
    std::vector<std::vector<double>> ders(k + 1, std::vector<double>(p + 1, 0.0));
    for (int r = 0; r <= p; ++r) ders[0][r] = ndu[r][p];
    std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0].assign(p + 1, 0.0);
        a[1].assign(p + 1, 0.0);
        a[0][0] = 1.0;
        for (int kk = 1; kk <= k; ++kk) {
            double d = 0.0;
            int rk = r - kk, pk = p - kk;
            if (r >= kk) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            int j1 = (rk >= -1) ? 1 : -rk;
            int j2 = (r - 1 <= pk) ? kk - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][kk] = -a[s1][kk - 1] / ndu[pk + 1][r];
                d += a[s2][kk] * ndu[r][pk];
            }
            ders[kk][r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = 1.0;
    for (int kk = 1; kk <= k; ++kk) factor *= (p - kk + 1);
    out.assign(p + 1, 0.0);
    for (int r = 0; r <= p; ++r) out[r] = ders[k][r] * factor;
}

// Single Boehm insertion on a raw knot vector. Returns the lambda sequence of
// the new basis (size n+1): b_j = lambda_j btilde_j + (1-lambda_{j+1}) btilde_{j+1}.
std::vector<double> raw_insert_once(int p, std::vector<double>& knots, double u) {
    int n = static_cast<int>(knots.size()) - p - 1;
    // find span (u strictly inside, so the plain search suffices)
    int mu = p;
    while (mu + 1 < n && knots[mu + 1] <= u) ++mu;
    std::vector<double> lambda(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
        if (k <= mu - p)
            lambda[k] = 1.0;
        else if (k >= mu + 1)
            lambda[k] = 0.0;
        else
            lambda[k] = (u - knots[k]) / (knots[k + p] - knots[k]);
    }
    knots.insert(knots.begin() + mu + 1, u);
    return lambda;
}

SparseMatrix lambda_to_matrix(const std::vector<double>& lambda) {
    int n = static_cast<int>(lambda.size()) - 1;
    std::vector<SparseMatrix::Triplet> t;
    for (int k = 0; k <= n; ++k) {
        if (k < n && lambda[k] != 0.0) t.push_back({k, k, lambda[k]});
        if (k > 0 && lambda[k] != 1.0) t.push_back({k - 1, k, 1.0 - lambda[k]});
    }
    return SparseMatrix::from_triplets(n, n + 1, std::move(t));
}

// Solve z . P = y for a single insertion factor P (exact knot removal). The
// forward and backward substitutions meet where lambda crosses 1/2, keeping
// every division away from small pivots.
std::vector<double> remove_once(const std::vector<double>& lambda, const std::vector<double>& y) {
    int n = static_cast<int>(y.size()) - 1;
    std::vector<double> z(n, 0.0);
    int split = -1;
    for (int k = 0; k < n && lambda[k] > 0.0; ++k)
        if (lambda[k] >= 0.5) split = k;
    for (int k = 0; k <= split; ++k) {
        double prev = k > 0 ? z[k - 1] : 0.0;
        z[k] = (y[k] - prev * (1.0 - lambda[k])) / lambda[k];
    }
    for (int j = n; j - 1 > split; --j) {
        double nxt = j < n ? z[j] : 0.0;
        z[j - 1] = (y[j] - nxt * lambda[j]) / (1.0 - lambda[j]);
    }
    return z;
}

struct Breakpoint {
    double value;
    int multiplicity;
};

std::vector<Breakpoint> interior_breakpoints(int p, const std::vector<double>& knots) {
    int n = static_cast<int>(knots.size()) - p - 1;
    std::vector<Breakpoint> out;
    int i = p + 1;
    while (i < n) {
        double u = knots[i];
        int m = 0;
        while (i < n && knots[i] == u) ++m, ++i;
        out.push_back({u, m});
    }
    return out;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
    if (degree_ < 1) throw std::invalid_argument("KnotVector: degree must be >= 1");
    int n = static_cast<int>(knots_.size()) - degree_ - 1;
    if (n < degree_ + 1)
        throw std::invalid_argument("KnotVector: too few knots (need n >= p+1)");
    for (size_t i = 0; i + 1 < knots_.size(); ++i)
        if (knots_[i + 1] < knots_[i])
            throw std::invalid_argument("KnotVector: knots must be non-decreasing");
    for (int i = 0; i <= degree_; ++i) {
        if (knots_[i] != knots_[0] || knots_[n + i] != knots_[n])
            throw std::invalid_argument("KnotVector: not open (boundary knots must repeat p+1 times)");
    }
    if (knots_[degree_ + 1] <= knots_[0] || knots_[n - 1] >= knots_[n])
        throw std::invalid_argument("KnotVector: boundary multiplicity exceeds p+1");
    for (const auto& bp : interior_breakpoints(degree_, knots_)) {
        if (bp.multiplicity > degree_ - 1)
            throw std::invalid_argument("KnotVector: interior multiplicity " +
                                        std::to_string(bp.multiplicity) + " exceeds p-1 at knot " +
                                        std::to_string(bp.value));
    }
}

int KnotVector::find_span(double x) const {
    check_domain(*this, x);
    int n = dim();
    if (x >= x2()) {
        int mu = n - 1;
        while (knots_[mu] == knots_[mu + 1]) --mu;
        return mu;
    }
    int lo = degree_, hi = n;
    while (true) {
        int mid = (lo + hi) / 2;
        if (x < knots_[mid])
            hi = mid;
        else if (x >= knots_[mid + 1])
            lo = mid + 1;
        else
            return mid;
    }
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    for (size_t i = 0; i < weights_.size(); ++i)
        if (!(weights_[i] > 0.0))
            throw std::invalid_argument("WeightVector: weight " + std::to_string(i + 1) +
                                        " is not positive");
}

NurbsSpace::NurbsSpace(KnotVector kv_, WeightVector w_) : kv(std::move(kv_)), w(std::move(w_)) {
    if (w.size() != kv.dim())
        throw std::invalid_argument("NurbsSpace: weight count " + std::to_string(w.size()) +
                                    " does not match dimension " + std::to_string(kv.dim()));
}

std::vector<double> bspline_basis_all(const KnotVector& kv, double x) {
    int p = kv.degree();
    int mu = kv.find_span(x);
    std::vector<double> local;
    local_basis(p, kv.knots(), mu, x, local);
    std::vector<double> out(kv.dim(), 0.0);
    for (int j = 0; j <= p; ++j) out[mu - p + j] = local[j];
    return out;
}

std::vector<double> bspline_derivative_all(const KnotVector& kv, double x, int order) {
    if (order < 0 || order > 2)
        throw std::invalid_argument("bspline_derivative_all: order must be in {0, 1, 2}");
    if (order == 0) return bspline_basis_all(kv, x);
    int p = kv.degree();
    int mu = kv.find_span(x);
    std::vector<double> local;
    local_ders(p, kv.knots(), mu, x, order, local);
    std::vector<double> out(kv.dim(), 0.0);
    for (int j = 0; j <= p; ++j) out[mu - p + j] = local[j];
    return out;
}

std::vector<double> nurbs_basis_all(const NurbsSpace& space, double x) {
    std::vector<double> B = bspline_basis_all(space.kv, x);
    double W = 0.0;
    for (int j = 0; j < space.dim(); ++j) W += space.w[j] * B[j];
    for (int j = 0; j < space.dim(); ++j) B[j] = space.w[j] * B[j] / W;
    return B;
}

std::vector<double> nurbs_derivative_all(const NurbsSpace& space, double x) {
    std::vector<double> B = bspline_basis_all(space.kv, x);
    std::vector<double> dB = bspline_derivative_all(space.kv, x, 1);
    double W = 0.0, dW = 0.0;
    for (int j = 0; j < space.dim(); ++j) {
        W += space.w[j] * B[j];
        dW += space.w[j] * dB[j];
    }
    std::vector<double> out(space.dim());
    for (int j = 0; j < space.dim(); ++j)
        out[j] = space.w[j] * (dB[j] * W - B[j] * dW) / (W * W);
    return out;
}

std::pair<double, double> endpoint_coefficients(const NurbsSpace& space) {
    int p = space.degree();
    int n = space.dim();
    const auto& xi = space.kv.knots();
    double a_left = p / (xi[p + 1] - space.kv.x1()) * space.w[1] / space.w[0];
    double a_right = p / (space.kv.x2() - xi[n - 1]) * space.w[n - 2] / space.w[n - 1];
    return {a_left, a_right};
}

SparseMatrix knot_insertion_matrix(const KnotVector& kv, const std::vector<double>& new_knots) {
    insert_knots(kv, new_knots);  // validates the result up front
    std::vector<double> sorted = new_knots;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> raw = kv.knots();
    SparseMatrix A = SparseMatrix::identity(kv.dim());
    for (double u : sorted) {
        auto lambda = raw_insert_once(kv.degree(), raw, u);
        A = A.multiply(lambda_to_matrix(lambda));
    }
    return A;
}

KnotVector insert_knots(const KnotVector& kv, const std::vector<double>& new_knots) {
    for (double u : new_knots)
        if (!(u > kv.x1() && u < kv.x2()))
            throw std::invalid_argument("insert_knots: new knot " + std::to_string(u) +
                                        " not strictly inside the basic interval");
    std::vector<double> merged = kv.knots();
    merged.insert(merged.end(), new_knots.begin(), new_knots.end());
    std::sort(merged.begin(), merged.end());
    // KnotVector constructor re-checks the multiplicity bound.
    return KnotVector(kv.degree(), std::move(merged));
}

SparseMatrix degree_elevation_matrix(const KnotVector& kv, int r) {
    if (r < 0) throw std::invalid_argument("degree_elevation_matrix: r must be >= 0");
    if (r == 0) return SparseMatrix::identity(kv.dim());
    const int p = kv.degree();
    const int q = p + r;
    const auto bps = interior_breakpoints(p, kv.knots());
    const int nseg = static_cast<int>(bps.size()) + 1;

    // Source basis on the C0 (full multiplicity p) knot vector.
    std::vector<double> raw = kv.knots();
    SparseMatrix to_c0 = SparseMatrix::identity(kv.dim());
    for (const auto& bp : bps)
        for (int k = 0; k < p - bp.multiplicity; ++k)
            to_c0 = to_c0.multiply(lambda_to_matrix(raw_insert_once(p, raw, bp.value)));

    // Per-piece Bernstein elevation glued C0; the shared corner coefficient
    // (value 1 on both sides) is emitted once.
    const int n0 = nseg * p + 1;
    const int n1 = nseg * q + 1;
    std::vector<SparseMatrix::Triplet> eg;
    for (int s = 0; s < nseg; ++s) {
        for (int i = 0; i <= p; ++i) {
            for (int j = i; j <= i + r; ++j) {
                if (s > 0 && i == 0 && j == 0) continue;
                eg.push_back({s * p + i, s * q + j,
                              binomial(p, i) * binomial(r, j - i) / binomial(q, j)});
            }
        }
    }
    SparseMatrix K = to_c0.multiply(SparseMatrix::from_triplets(n0, n1, std::move(eg)));

    // Target space (degree q, interior multiplicities m_i + r) inserted up to
    // the same C0 space; the factors are then removed exactly row by row.
    KnotVector target = elevate_degree(kv, r);
    std::vector<double> traw = target.knots();
    std::vector<std::vector<double>> factors;
    for (const auto& bp : bps)
        for (int k = 0; k < q - (bp.multiplicity + r); ++k)
            factors.push_back(raw_insert_once(q, traw, bp.value));

    std::vector<SparseMatrix::Triplet> out;
    for (int row = 0; row < kv.dim(); ++row) {
        std::vector<double> y(n1, 0.0);
        for (const auto& e : K.row(row)) y[e.col] = e.value;
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) y = remove_once(*it, y);
        for (size_t c = 0; c < y.size(); ++c)
            if (y[c] != 0.0) out.push_back({row, static_cast<int>(c), y[c]});
    }
    return SparseMatrix::from_triplets(kv.dim(), target.dim(), std::move(out));
}

KnotVector elevate_degree(const KnotVector& kv, int r) {
    if (r < 0) throw std::invalid_argument("elevate_degree: r must be >= 0");
    if (r == 0) return kv;
    const int p = kv.degree();
    std::vector<double> out;
    for (int i = 0; i <= p + r; ++i) out.push_back(kv.x1());
    for (const auto& bp : interior_breakpoints(p, kv.knots()))
        for (int k = 0; k < bp.multiplicity + r; ++k) out.push_back(bp.value);
    for (int i = 0; i <= p + r; ++i) out.push_back(kv.x2());
    return KnotVector(p + r, std::move(out));
}

SparseMatrix nurbs_refinement_matrix(const NurbsSpace& coarse, const NurbsSpace& fine,
                                     const SparseMatrix& A) {
    if (A.rows() != coarse.dim() || A.cols() != fine.dim())
        throw std::invalid_argument("nurbs_refinement_matrix: matrix size mismatch");
    std::vector<double> expected = A.apply_transpose(coarse.w.values());
    double scale = 0.0;
    for (double v : expected) scale = std::max(scale, std::abs(v));
    for (int k = 0; k < fine.dim(); ++k)
        if (std::abs(expected[k] - fine.w[k]) > 1e-12 * scale)
            throw std::invalid_argument(
                "nurbs_refinement_matrix: fine weights are not A^T w (non-nested rational spaces)");
    std::vector<SparseMatrix::Triplet> out;
    for (int j = 0; j < A.rows(); ++j)
        for (const auto& e : A.row(j))
            out.push_back({j, e.col, coarse.w[j] * e.value / fine.w[e.col]});
    return SparseMatrix::from_triplets(A.rows(), A.cols(), std::move(out));
}

SegmentRefinementResult refine_segment(const NurbsSpace& space,
                                       const std::vector<double>& new_knots, int degree_raise) {
    SparseMatrix Ae = degree_elevation_matrix(space.kv, degree_raise);
    KnotVector elevated = elevate_degree(space.kv, degree_raise);
    SparseMatrix Ai = knot_insertion_matrix(elevated, new_knots);
    KnotVector fine_kv = insert_knots(elevated, new_knots);
    SparseMatrix A = Ae.multiply(Ai);
    std::vector<double> wf = A.apply_transpose(space.w.values());
    NurbsSpace fine(fine_kv, WeightVector(wf));
    SparseMatrix S = nurbs_refinement_matrix(space, fine, A);
    return {std::move(fine), std::move(A), std::move(S)};
}

}  // namespace mds
