#include "mds/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mds {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw std::invalid_argument(path + ": " + message);
}

json require(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) fail(path + "." + key, "missing field");
    return j.at(key);
}

std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) fail(path, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

MDSplineSpace parse_space(const json& j, const std::string& path) {
    json jsegs = require(j, path, "segments");
    if (!jsegs.is_array() || jsegs.empty()) fail(path + ".segments", "expected a non-empty array");
    std::vector<NurbsSpace> segments;
    for (size_t i = 0; i < jsegs.size(); ++i) {
        std::string sp = path + ".segments[" + std::to_string(i) + "]";
        const json& js = jsegs[i];
        int degree = require(js, sp, "degree").get<int>();
        std::vector<double> knots = number_list(require(js, sp, "knots"), sp + ".knots");
        std::vector<double> weights = number_list(require(js, sp, "weights"), sp + ".weights");
        try {
            segments.emplace_back(KnotVector(degree, std::move(knots)),
                                  WeightVector(std::move(weights)));
        } catch (const std::exception& e) {
            fail(sp, e.what());
        }
    }
    double origin = j.value("origin", 0.0);
    bool periodic = require(j, path, "periodic").get<bool>();
    std::vector<double> gammas;
    if (j.contains("gammas")) gammas = number_list(j.at("gammas"), path + ".gammas");
    try {
        return build_extraction(
            SegmentConfiguration(std::move(segments), origin, periodic, std::move(gammas)));
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
}

PointSet parse_points(const json& j, const std::string& path, int expected_dim_min) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of points");
    int dim = -1;
    std::vector<double> coords;
    for (size_t i = 0; i < j.size(); ++i) {
        std::vector<double> p = number_list(j[i], path + "[" + std::to_string(i) + "]");
        if (dim < 0) dim = static_cast<int>(p.size());
        if (static_cast<int>(p.size()) != dim)
            fail(path + "[" + std::to_string(i) + "]", "inconsistent point dimension");
        coords.insert(coords.end(), p.begin(), p.end());
    }
    if (dim < expected_dim_min)
        fail(path, "points must have dimension >= " + std::to_string(expected_dim_min));
    return PointSet(dim, std::move(coords));
}

PoleConfig parse_poles(const json& j, const std::string& path) {
    std::string s = j.get<std::string>();
    if (s == "bottom") return PoleConfig::Bottom;
    if (s == "top") return PoleConfig::Top;
    if (s == "both") return PoleConfig::Both;
    fail(path, "expected one of \"bottom\", \"top\", \"both\"");
}

json space_to_json(const MDSplineSpace& space) {
    json j;
    j["origin"] = space.config.origin();
    j["periodic"] = space.config.periodic();
    j["gammas"] = space.config.gammas();
    json segs = json::array();
    for (int i = 0; i < space.config.segment_count(); ++i) {
        const NurbsSpace& s = space.config.segment(i);
        segs.push_back({{"degree", s.degree()},
                        {"knots", s.kv.knots()},
                        {"weights", s.w.values()}});
    }
    j["segments"] = segs;
    return j;
}

json points_to_json(const PointSet& pts) {
    json out = json::array();
    for (int i = 0; i < pts.count(); ++i) {
        json p = json::array();
        for (int d = 0; d < pts.dim(); ++d) p.push_back(pts[i][d]);
        out.push_back(p);
    }
    return out;
}

const char* recipe_name(EllipseRecipe r) {
    switch (r) {
        case EllipseRecipe::Quadratic4: return "ellipse-quadratic";
        case EllipseRecipe::Cubic2: return "ellipse-cubic";
        case EllipseRecipe::MultiDegree322: return "ellipse-322";
    }
    return "";
}

const char* recipe_name(EllipsoidRecipe r) {
    switch (r) {
        case EllipsoidRecipe::Deg22: return "ellipsoid-22";
        case EllipsoidRecipe::Deg23: return "ellipsoid-23";
        case EllipsoidRecipe::Deg33: return "ellipsoid-33";
    }
    return "";
}

}  // namespace

Model parse_description(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed document: ") + e.what());
    }
    std::string kind = require(j, "$", "kind").get<std::string>();
    Model model;
    if (kind == "curve") {
        MDSplineSpace space = parse_space(require(j, "$", "space"), "$.space");
        PointSet pts = parse_points(require(j, "$", "control_points"), "$.control_points", 2);
        try {
            model.curve.emplace(std::move(space), std::move(pts));
        } catch (const std::exception& e) {
            fail("$.control_points", e.what());
        }
    } else if (kind == "polar-surface") {
        MDSplineSpace s_space = parse_space(require(j, "$", "s_space"), "$.s_space");
        MDSplineSpace t_space = parse_space(require(j, "$", "t_space"), "$.t_space");
        PoleConfig poles = parse_poles(require(j, "$", "poles"), "$.poles");
        PointSet pts = parse_points(require(j, "$", "control_points"), "$.control_points", 3);
        try {
            PolarSplineSpace space = build_polar_extraction(
                TensorProductSpace(std::move(s_space), std::move(t_space)), poles);
            model.surface.emplace(std::move(space), std::move(pts));
        } catch (const std::exception& e) {
            fail("$", e.what());
        }
    } else {
        fail("$.kind", "expected \"curve\" or \"polar-surface\"");
    }
    if (j.contains("quadric")) {
        const json& q = j.at("quadric");
        std::string recipe = require(q, "$.quadric", "recipe").get<std::string>();
        double ax = require(q, "$.quadric", "ax").get<double>();
        double ay = require(q, "$.quadric", "ay").get<double>();
        if (recipe == "ellipse-quadratic")
            model.ellipse = EllipseSpec{ax, ay, EllipseRecipe::Quadratic4};
        else if (recipe == "ellipse-cubic")
            model.ellipse = EllipseSpec{ax, ay, EllipseRecipe::Cubic2};
        else if (recipe == "ellipse-322")
            model.ellipse = EllipseSpec{ax, ay, EllipseRecipe::MultiDegree322};
        else {
            double az = require(q, "$.quadric", "az").get<double>();
            if (recipe == "ellipsoid-22")
                model.ellipsoid = EllipsoidSpec{ax, ay, az, EllipsoidRecipe::Deg22};
            else if (recipe == "ellipsoid-23")
                model.ellipsoid = EllipsoidSpec{ax, ay, az, EllipsoidRecipe::Deg23};
            else if (recipe == "ellipsoid-33")
                model.ellipsoid = EllipsoidSpec{ax, ay, az, EllipsoidRecipe::Deg33};
            else
                fail("$.quadric.recipe", "unknown recipe " + recipe);
        }
        if (model.ellipse && !model.is_curve()) fail("$.quadric", "ellipse recipe on a surface");
        if (model.ellipsoid && model.is_curve()) fail("$.quadric", "ellipsoid recipe on a curve");
    }
    return model;
}

std::string serialize_description(const Model& model) {
    json j;
    if (model.is_curve()) {
        j["kind"] = "curve";
        j["space"] = space_to_json(model.curve->space);
        j["control_points"] = points_to_json(model.curve->control_points);
    } else if (model.surface) {
        j["kind"] = "polar-surface";
        j["s_space"] = space_to_json(model.surface->space.tp.s);
        j["t_space"] = space_to_json(model.surface->space.tp.t);
        switch (model.surface->space.poles) {
            case PoleConfig::Bottom: j["poles"] = "bottom"; break;
            case PoleConfig::Top: j["poles"] = "top"; break;
            case PoleConfig::Both: j["poles"] = "both"; break;
        }
        j["control_points"] = points_to_json(model.surface->control_points);
    } else {
        throw std::invalid_argument("serialize_description: empty model");
    }
    if (model.ellipse) {
        j["quadric"] = {{"recipe", recipe_name(model.ellipse->recipe)},
                        {"ax", model.ellipse->ax},
                        {"ay", model.ellipse->ay}};
    } else if (model.ellipsoid) {
        j["quadric"] = {{"recipe", recipe_name(model.ellipsoid->recipe)},
                        {"ax", model.ellipsoid->ax},
                        {"ay", model.ellipsoid->ay},
                        {"az", model.ellipsoid->az}};
    }
    return j.dump(2) + "\n";
}

Model load_model(const std::string& path) { return parse_description(read_file(path)); }

void save_model(const Model& model, const std::string& path) {
    write_file(path, serialize_description(model));
}

std::vector<std::pair<double, std::vector<double>>> sample_curve(const Curve& curve, int count) {
    if (count < 2) throw std::invalid_argument("sample_curve: count must be >= 2");
    std::vector<std::pair<double, std::vector<double>>> out;
    out.reserve(count);
    const SegmentConfiguration& cfg = curve.space.config;
    for (int k = 0; k < count; ++k) {
        double t = cfg.t1() + (cfg.t2() - cfg.t1()) * k / (count - 1);
        out.emplace_back(t, eval_curve(curve, t));
    }
    return out;
}

std::string curve_csv(const Curve& curve, int count) {
    std::ostringstream os;
    os.precision(17);
    os << (curve.control_points.dim() >= 3 ? "t,x,y,z" : "t,x,y") << "\n";
    for (const auto& [t, p] : sample_curve(curve, count)) {
        os << t;
        for (double c : p) os << "," << c;
        os << "\n";
    }
    return os.str();
}

MeshOutput tessellate_surface(const PolarSurface& surface, int n_u, int n_v) {
    if (n_u < 3) throw std::invalid_argument("tessellate_surface: n_u must be >= 3");
    if (n_v < 2) throw std::invalid_argument("tessellate_surface: n_v must be >= 2");
    const PolarSplineSpace& sp = surface.space;
    const double s1 = sp.tp.s.config.t1(), s2 = sp.tp.s.config.t2();
    const double t1 = sp.tp.t.config.t1(), t2 = sp.tp.t.config.t2();
    const bool bottom = sp.has_bottom();
    const bool top = sp.has_top();

    MeshOutput mesh;
    auto push_vertex = [&](double s, double t) {
        std::vector<double> p = eval_polar_surface(surface, s, t);
        mesh.vertices.push_back({p[0], p[1], p.size() > 2 ? p[2] : 0.0});
        mesh.params.push_back({s, t});
        return static_cast<int>(mesh.vertices.size()) - 1;
    };

    int bottom_vertex = bottom ? push_vertex(s1, t1) : -1;
    const int j_first = bottom ? 1 : 0;
    const int j_last = top ? n_v - 1 : n_v;
    // regular rows j_first..j_last, each with n_u vertices around the seam
    std::vector<std::vector<int>> rows;
    for (int j = j_first; j <= j_last; ++j) {
        std::vector<int> row;
        for (int k = 0; k < n_u; ++k)
            row.push_back(push_vertex(s1 + (s2 - s1) * k / n_u, t1 + (t2 - t1) * j / n_v));
        rows.push_back(std::move(row));
    }
    int top_vertex = top ? push_vertex(s1, t2) : -1;

    if (bottom) {
        const auto& r = rows.front();
        for (int k = 0; k < n_u; ++k)
            mesh.faces.push_back({bottom_vertex, r[(k + 1) % n_u], r[k]});
    }
    for (size_t j = 0; j + 1 < rows.size(); ++j) {
        for (int k = 0; k < n_u; ++k) {
            int k1 = (k + 1) % n_u;
            mesh.faces.push_back({rows[j][k], rows[j][k1], rows[j + 1][k1], rows[j + 1][k]});
        }
    }
    if (top) {
        const auto& r = rows.back();
        for (int k = 0; k < n_u; ++k)
            mesh.faces.push_back({top_vertex, r[k], r[(k + 1) % n_u]});
    }
    return mesh;
}

std::string to_obj(const MeshOutput& mesh) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& v : mesh.vertices) os << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
    for (const auto& p : mesh.params) os << "vt " << p[0] << " " << p[1] << "\n";
    const bool with_vt = !mesh.params.empty();
    for (const auto& f : mesh.faces) {
        os << "f";
        for (int idx : f) {
            os << " " << idx + 1;
            if (with_vt) os << "/" << idx + 1;
        }
        os << "\n";
    }
    return os.str();
}

namespace {

std::map<std::pair<int, int>, int> edge_use_counts(const MeshOutput& mesh) {
    std::map<std::pair<int, int>, int> counts;
    for (const auto& f : mesh.faces) {
        for (size_t i = 0; i < f.size(); ++i) {
            int a = f[i], b = f[(i + 1) % f.size()];
            counts[{std::min(a, b), std::max(a, b)}] += 1;
        }
    }
    return counts;
}

}  // namespace

int mesh_euler_characteristic(const MeshOutput& mesh) {
    auto edges = edge_use_counts(mesh);
    return static_cast<int>(mesh.vertices.size()) - static_cast<int>(edges.size()) +
           static_cast<int>(mesh.faces.size());
}

int mesh_boundary_loop_count(const MeshOutput& mesh) {
    auto edges = edge_use_counts(mesh);
    std::map<int, std::vector<int>> adjacency;
    for (const auto& [e, c] : edges) {
        if (c == 1) {
            adjacency[e.first].push_back(e.second);
            adjacency[e.second].push_back(e.first);
        }
    }
    std::set<int> seen;
    int loops = 0;
    for (const auto& [v, nbrs] : adjacency) {
        (void)nbrs;
        if (seen.count(v)) continue;
        ++loops;
        // walk the loop
        std::vector<int> stack{v};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (!seen.insert(u).second) continue;
            for (int w : adjacency[u])
                if (!seen.count(w)) stack.push_back(w);
        }
    }
    return loops;
}

bool mesh_is_manifold(const MeshOutput& mesh) {
    for (const auto& [e, c] : edge_use_counts(mesh)) {
        (void)e;
        if (c > 2) return false;
    }
    return true;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace mds
