#include "mds/mdspline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mds {

SegmentConfiguration::SegmentConfiguration(std::vector<NurbsSpace> segments, double origin,
                                           bool periodic, std::vector<double> gammas)
    : segments_(std::move(segments)), origin_(origin), periodic_(periodic),
      gammas_(std::move(gammas)) {
    const int m = segment_count();
    if (m < 1) throw std::invalid_argument("SegmentConfiguration: needs at least one segment");
    if (periodic_ && m < 2)
        throw std::invalid_argument("SegmentConfiguration: periodic configurations need m >= 2");
    for (int i = 0; i < m; ++i)
        if (segments_[i].dim() < 3)
            throw std::invalid_argument("SegmentConfiguration: segment " + std::to_string(i + 1) +
                                        " has dimension < 3");
    const int joins = periodic_ ? m : m - 1;
    if (gammas_.empty()) gammas_.assign(joins, 1.0);
    if (static_cast<int>(gammas_.size()) != joins)
        throw std::invalid_argument("SegmentConfiguration: expected " + std::to_string(joins) +
                                    " gamma values");
    for (double g : gammas_)
        if (!(g > 0.0))
            throw std::invalid_argument("SegmentConfiguration: gamma values must be positive");

    mu_.assign(m + 1, 0);
    eta_.assign(m + 1, 0);
    tau_.assign(m + 1, origin_);
    for (int i = 0; i < m; ++i) {
        mu_[i + 1] = mu_[i] + segments_[i].dim();
        eta_[i + 1] = mu_[i + 1] - 2 * (i + 1);
        tau_[i + 1] = tau_[i] + (segments_[i].kv.x2() - segments_[i].kv.x1());
    }
}

double SegmentConfiguration::alpha(int join) const {
    return endpoint_coefficients(segments_[join]).second;
}

double SegmentConfiguration::beta(int join) const {
    return endpoint_coefficients(segments_[(join + 1) % segment_count()]).first;
}

int SegmentConfiguration::piece_count() const {
    int pieces = 0;
    for (const auto& seg : segments_) {
        const auto& knots = seg.kv.knots();
        for (size_t k = seg.degree(); k < knots.size() - seg.degree() - 1; ++k)
            if (knots[k + 1] > knots[k]) ++pieces;
    }
    return pieces;
}

double phi_map(const SegmentConfiguration& config, int segment, double x) {
    if (segment < 0 || segment >= config.segment_count())
        throw std::invalid_argument("phi_map: segment index out of range");
    const NurbsSpace& s = config.segment(segment);
    if (x < s.kv.x1() || x > s.kv.x2())
        throw std::domain_error("phi_map: parameter outside segment interval");
    return x - s.kv.x1() + config.tau(segment);
}

SegmentLocation locate(const SegmentConfiguration& config, double t) {
    const int m = config.segment_count();
    if (t < config.t1() || t > config.t2())
        throw std::domain_error("locate: parameter " + std::to_string(t) +
                                " outside composed interval");
    int i;
    if (t >= config.t2()) {
        i = m - 1;
    } else {
        i = 0;
        while (i + 1 < m && t >= config.tau(i + 1)) ++i;
    }
    const NurbsSpace& s = config.segment(i);
    double x = s.kv.x1() + (t - config.tau(i));
    x = std::clamp(x, s.kv.x1(), s.kv.x2());
    return {i, x};
}

MDSplineSpace build_extraction(const SegmentConfiguration& config) {
    const int m = config.segment_count();
    const int mu_m = config.mu(m);
    const int eta_m = config.eta(m);
    std::vector<SparseMatrix::Triplet> t;

    // Common block H^c in (row, col) coordinates of the full matrix: rows are
    // shifted by +1 in the non-periodic case, columns by +1 in both cases.
    const int row0 = config.periodic() ? 0 : 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < config.segment(i).dim() - 2; ++j)
            t.push_back({row0 + config.eta(i) + j, 1 + config.mu(i) + j, 1.0});
    for (int i = 0; i + 1 < m; ++i) {
        double a = config.alpha(i);
        double gb = config.gammas()[i] * config.beta(i);
        double top = a / (a + gb), bot = gb / (a + gb);
        int r = row0 + config.eta(i + 1) - 1;
        int c = config.mu(i + 1) - 1;  // (mu_{i+1} - 1)-th local basis, column shifted by +1
        t.push_back({r, c, top});
        t.push_back({r, c + 1, top});
        t.push_back({r + 1, c, bot});
        t.push_back({r + 1, c + 1, bot});
    }

    int dim;
    if (!config.periodic()) {
        dim = eta_m + 2;
        t.push_back({0, 0, 1.0});
        t.push_back({dim - 1, mu_m - 1, 1.0});
    } else {
        dim = eta_m;
        double a = config.alpha(m - 1);
        double gb = config.gammas()[m - 1] * config.beta(m - 1);
        double top = gb / (a + gb), bot = a / (a + gb);
        t.push_back({0, 0, top});
        t.push_back({0, mu_m - 1, top});
        t.push_back({dim - 1, 0, bot});
        t.push_back({dim - 1, mu_m - 1, bot});
    }
    return {config, SparseMatrix::from_triplets(dim, mu_m, std::move(t)), dim};
}

namespace {

// Stacked local NURBS vector b(t) (value or first derivative).
std::vector<double> local_vector(const SegmentConfiguration& config, int segment, double x,
                                 bool derivative) {
    std::vector<double> b(config.total_local_dim(), 0.0);
    const NurbsSpace& s = config.segment(segment);
    std::vector<double> v = derivative ? nurbs_derivative_all(s, x) : nurbs_basis_all(s, x);
    std::copy(v.begin(), v.end(), b.begin() + config.mu(segment));
    return b;
}

}  // namespace

std::vector<double> eval_basis(const MDSplineSpace& space, double t) {
    SegmentLocation loc = locate(space.config, t);
    return space.H.apply(local_vector(space.config, loc.segment, loc.x, false));
}

std::vector<double> eval_basis_derivative(const MDSplineSpace& space, double t) {
    SegmentLocation loc = locate(space.config, t);
    return space.H.apply(local_vector(space.config, loc.segment, loc.x, true));
}

std::vector<double> derivative_jump(const MDSplineSpace& space, int join) {
    const SegmentConfiguration& cfg = space.config;
    if (join < 0 || join >= cfg.join_count())
        throw std::invalid_argument("derivative_jump: join index out of range");
    int left = join;
    int right = (join + 1) % cfg.segment_count();
    std::vector<double> nl =
        space.H.apply(local_vector(cfg, left, cfg.segment(left).kv.x2(), true));
    std::vector<double> nr =
        space.H.apply(local_vector(cfg, right, cfg.segment(right).kv.x1(), true));
    for (int i = 0; i < space.dim; ++i) nr[i] -= nl[i];
    return nr;
}

Curve::Curve(MDSplineSpace s, PointSet pts) : space(std::move(s)), control_points(std::move(pts)) {
    if (control_points.count() != space.dim)
        throw std::invalid_argument("Curve: control point count " +
                                    std::to_string(control_points.count()) +
                                    " does not match space dimension " + std::to_string(space.dim));
    if (control_points.dim() < 2)
        throw std::invalid_argument("Curve: control points must have dimension >= 2");
}

namespace {

std::vector<double> combine(const PointSet& pts, const std::vector<double>& coeff) {
    std::vector<double> out(pts.dim(), 0.0);
    for (int i = 0; i < pts.count(); ++i) {
        if (coeff[i] == 0.0) continue;
        auto p = pts[i];
        for (int d = 0; d < pts.dim(); ++d) out[d] += coeff[i] * p[d];
    }
    return out;
}

}  // namespace

std::vector<double> eval_curve(const Curve& curve, double t) {
    return combine(curve.control_points, eval_basis(curve.space, t));
}

std::vector<double> eval_curve_derivative(const Curve& curve, double t) {
    return combine(curve.control_points, eval_basis_derivative(curve.space, t));
}

PointSet local_control_points(const Curve& curve) {
    const SparseMatrix& H = curve.space.H;
    PointSet g(curve.control_points.dim(), H.cols());
    for (int i = 0; i < H.rows(); ++i) {
        auto f = curve.control_points[i];
        for (const auto& e : H.row(i)) {
            auto gj = g[e.col];
            for (int d = 0; d < g.dim(); ++d) gj[d] += e.value * f[d];
        }
    }
    return g;
}

}  // namespace mds
