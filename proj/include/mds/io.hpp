#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mds/mdspline.hpp"
#include "mds/polar.hpp"
#include "mds/quadrics.hpp"

namespace mds {

// A deserialized model: exactly one of curve/surface is set, optionally
// tagged with the quadric recipe it was built from.
struct Model {
    std::optional<Curve> curve;
    std::optional<PolarSurface> surface;
    std::optional<EllipseSpec> ellipse;
    std::optional<EllipsoidSpec> ellipsoid;

    bool is_curve() const { return curve.has_value(); }
};

// JSON document <-> model. Parsing enforces all construction invariants and
// reports violations with the offending field path.
Model parse_description(const std::string& text);
std::string serialize_description(const Model& model);

Model load_model(const std::string& path);
void save_model(const Model& model, const std::string& path);

// count >= 2 uniform parameters over [t1, t2] with their curve points.
std::vector<std::pair<double, std::vector<double>>> sample_curve(const Curve& curve, int count);

std::string curve_csv(const Curve& curve, int count);

struct MeshOutput {
    std::vector<std::array<double, 3>> vertices;
    std::vector<std::vector<int>> faces;              // quads and triangles, CCW
    std::vector<std::array<double, 2>> params;        // (s, t) per vertex
};

// Grid tessellation with the periodic seam merged and pole rows collapsed to
// a single vertex each. n_u >= 3 columns around the seam, n_v >= 2 rows.
MeshOutput tessellate_surface(const PolarSurface& surface, int n_u, int n_v);

std::string to_obj(const MeshOutput& mesh);

// Topology helpers for watertightness checks: an edge is interior when shared
// by exactly two faces.
int mesh_euler_characteristic(const MeshOutput& mesh);
int mesh_boundary_loop_count(const MeshOutput& mesh);
bool mesh_is_manifold(const MeshOutput& mesh);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mds
