#include "mds/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "mds/io.hpp"
#include "mds/refinement.hpp"

namespace mds {

namespace {

using nlohmann::json;

Model make_recipe(const std::string& recipe, double ax, double ay,
                  const std::optional<double>& az) {
    Model model;
    auto ellipse = [&](EllipseRecipe r) {
        model.ellipse = EllipseSpec{ax, ay, r};
        model.curve = make_ellipse(*model.ellipse);
    };
    auto ellipsoid = [&](EllipsoidRecipe r) {
        if (!az) throw std::invalid_argument("recipe " + recipe + " needs --az");
        model.ellipsoid = EllipsoidSpec{ax, ay, *az, r};
        model.surface = make_ellipsoid(*model.ellipsoid);
    };
    if (recipe == "ellipse-quadratic")
        ellipse(EllipseRecipe::Quadratic4);
    else if (recipe == "ellipse-cubic")
        ellipse(EllipseRecipe::Cubic2);
    else if (recipe == "ellipse-322")
        ellipse(EllipseRecipe::MultiDegree322);
    else if (recipe == "ellipsoid-22")
        ellipsoid(EllipsoidRecipe::Deg22);
    else if (recipe == "ellipsoid-23")
        ellipsoid(EllipsoidRecipe::Deg23);
    else if (recipe == "ellipsoid-33")
        ellipsoid(EllipsoidRecipe::Deg33);
    else
        throw std::invalid_argument(
            "unknown recipe " + recipe +
            " (expected ellipse-quadratic|ellipse-cubic|ellipse-322|"
            "ellipsoid-22|ellipsoid-23|ellipsoid-33)");
    return model;
}

RefinementPlan plan_from_json(const json& j, const SegmentConfiguration& cfg,
                              const std::string& path) {
    RefinementPlan plan;
    if (j.is_null()) return plan;
    if (!j.is_object() || (j.contains("segments") && !j.at("segments").is_array()))
        throw std::invalid_argument("malformed plan at " + path);
    if (!j.contains("segments")) return plan;
    const json& segs = j.at("segments");
    if (static_cast<int>(segs.size()) != cfg.segment_count())
        throw std::invalid_argument("plan at " + path + " must list " +
                                    std::to_string(cfg.segment_count()) + " segments");
    for (const auto& js : segs) {
        SegmentRefinement sr;
        if (js.contains("knots"))
            for (const auto& v : js.at("knots")) sr.new_knots.push_back(v.get<double>());
        sr.degree_raise = js.value("elevate", 0);
        if (sr.degree_raise < 0)
            throw std::invalid_argument("plan at " + path + ": elevate must be >= 0");
        plan.segments.push_back(std::move(sr));
    }
    return plan;
}

struct VerifyReport {
    double residual = -1.0;  // negative: no quadric metadata
    double smoothness = 0.0;
    bool pass(double tolerance) const {
        return (residual < 0.0 || residual <= tolerance) && smoothness <= tolerance;
    }
};

VerifyReport verify_model(const Model& model, int samples) {
    VerifyReport report;
    if (model.is_curve()) {
        const Curve& curve = *model.curve;
        if (model.ellipse) report.residual = quadric_residual(curve, *model.ellipse, samples);
        const SegmentConfiguration& cfg = curve.space.config;
        double jump = 0.0;
        for (int join = 0; join < cfg.join_count(); ++join) {
            std::vector<double> basis_jump = derivative_jump(curve.space, join);
            for (int d = 0; d < curve.control_points.dim(); ++d) {
                double acc = 0.0;
                for (int i = 0; i < curve.space.dim; ++i)
                    acc += basis_jump[i] * curve.control_points[i][d];
                jump = std::max(jump, std::abs(acc));
            }
        }
        report.smoothness = jump;
        std::printf("max-derivative-jump %.3e\n", jump);
        if (cfg.periodic()) {
            std::vector<double> a = eval_curve(curve, cfg.t1());
            std::vector<double> b = eval_curve(curve, cfg.t2());
            double closure = 0.0;
            for (size_t d = 0; d < a.size(); ++d)
                closure = std::max(closure, std::abs(a[d] - b[d]));
            std::printf("closure            %.3e\n", closure);
            report.smoothness = std::max(report.smoothness, closure);
        }
    } else {
        const PolarSurface& surface = *model.surface;
        if (model.ellipsoid)
            report.residual = quadric_residual(surface, *model.ellipsoid, samples);
        double worst = 0.0;
        if (surface.space.has_bottom()) {
            PoleSmoothness ps = surface_pole_smoothness(surface, PoleSide::Bottom, 100);
            std::printf("bottom-pole        value-spread %.3e hermite-residual %.3e\n",
                        ps.value_spread, ps.derivative_residual);
            worst = std::max({worst, ps.value_spread, ps.derivative_residual});
        }
        if (surface.space.has_top()) {
            PoleSmoothness ps = surface_pole_smoothness(surface, PoleSide::Top, 100);
            std::printf("top-pole           value-spread %.3e hermite-residual %.3e\n",
                        ps.value_spread, ps.derivative_residual);
            worst = std::max({worst, ps.value_spread, ps.derivative_residual});
        }
        SeamMismatch seam = seam_mismatch(surface, 64);
        std::printf("seam               value %.3e derivative %.3e\n", seam.value,
                    seam.derivative);
        worst = std::max({worst, seam.value, seam.derivative});
        report.smoothness = worst;
    }
    if (report.residual >= 0.0)
        std::printf("max-residual       %.3e\n", report.residual);
    else
        std::printf("max-residual       n/a (no quadric metadata)\n");
    return report;
}

double reproduction_error(const Model& coarse, const Model& fine) {
    double worst = 0.0;
    if (coarse.is_curve()) {
        const SegmentConfiguration& cfg = coarse.curve->space.config;
        for (int k = 0; k <= 512; ++k) {
            double t = cfg.t1() + (cfg.t2() - cfg.t1()) * k / 512;
            std::vector<double> a = eval_curve(*coarse.curve, t);
            std::vector<double> b = eval_curve(*fine.curve, t);
            for (size_t d = 0; d < a.size(); ++d)
                worst = std::max(worst, std::abs(a[d] - b[d]));
        }
    } else {
        const auto& scfg = coarse.surface->space.tp.s.config;
        const auto& tcfg = coarse.surface->space.tp.t.config;
        for (int i = 0; i <= 32; ++i)
            for (int j = 0; j <= 32; ++j) {
                double s = scfg.t1() + (scfg.t2() - scfg.t1()) * i / 32;
                double t = tcfg.t1() + (tcfg.t2() - tcfg.t1()) * j / 32;
                std::vector<double> a = eval_polar_surface(*coarse.surface, s, t);
                std::vector<double> b = eval_polar_surface(*fine.surface, s, t);
                for (size_t d = 0; d < a.size(); ++d)
                    worst = std::max(worst, std::abs(a[d] - b[d]));
            }
    }
    return worst;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"C1 rational multi-degree splines and polar splines"};
    app.require_subcommand(1);

    // make
    auto* make = app.add_subcommand("make", "construct a named quadric recipe");
    std::string recipe, out_path, in_path;
    double ax = 1.0, ay = 1.0;
    std::optional<double> az;
    make->add_option("--recipe", recipe, "recipe name")->required();
    make->add_option("--ax", ax, "x axis length")->required();
    make->add_option("--ay", ay, "y axis length")->required();
    make->add_option("--az", az, "z axis length (ellipsoids)");
    make->add_option("-o,--output", out_path, "output description file")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a model at a parameter");
    std::optional<double> eval_s, eval_t;
    eval->add_option("-i,--input", in_path, "model description file")->required();
    eval->add_option("--s", eval_s, "s parameter (surfaces)");
    eval->add_option("--t", eval_t, "t parameter")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "check residual and smoothness metrics");
    double tolerance = 1e-10;
    int samples = 10000;
    verify->add_option("-i,--input", in_path, "model description file")->required();
    verify->add_option("--tolerance", tolerance, "pass/fail tolerance (default 1e-10)");
    verify->add_option("--samples", samples, "number of residual samples");

    // refine
    auto* refine = app.add_subcommand("refine", "refine a model and report reproduction error");
    std::string plan_path;
    bool midpoints = false;
    int elevate = 0;
    refine->add_option("-i,--input", in_path, "model description file")->required();
    refine->add_option("-o,--output", out_path, "output description file")->required();
    refine->add_option("--plan", plan_path, "refinement plan JSON");
    refine->add_flag("--midpoints", midpoints,
                     "insert span midpoints (t direction for surfaces)");
    refine->add_option("--elevate", elevate,
                       "raise degree by r (t direction for surfaces)");

    // export
    auto* exp = app.add_subcommand("export", "export mesh (OBJ) or curve samples (CSV)");
    std::string obj_path, csv_path;
    int nu = 64, nv = 32, count = 256;
    exp->add_option("-i,--input", in_path, "model description file")->required();
    exp->add_option("--obj", obj_path, "OBJ output path (surfaces)");
    exp->add_option("--csv", csv_path, "CSV output path (curves)");
    exp->add_option("--nu", nu, "mesh columns around the seam");
    exp->add_option("--nv", nv, "mesh rows");
    exp->add_option("--count", count, "curve sample count");

    // perturb
    auto* perturb = app.add_subcommand("perturb", "apply the standard control point perturbation");
    perturb->add_option("-i,--input", in_path, "model description file")->required();
    perturb->add_option("-o,--output", out_path, "output description file")->required();

    std::vector<const char*> argv;
    argv.push_back("mds");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (make->parsed()) {
            Model model = make_recipe(recipe, ax, ay, az);
            save_model(model, out_path);
            std::printf("wrote %s\n", out_path.c_str());
            return 0;
        }
        if (eval->parsed()) {
            Model model = load_model(in_path);
            std::vector<double> p;
            if (model.is_curve()) {
                p = eval_curve(*model.curve, *eval_t);
            } else {
                if (!eval_s) throw std::invalid_argument("surfaces need --s and --t");
                p = eval_polar_surface(*model.surface, *eval_s, *eval_t);
            }
            for (size_t d = 0; d < p.size(); ++d)
                std::printf("%s%.17g", d ? " " : "", p[d]);
            std::printf("\n");
            return 0;
        }
        if (verify->parsed()) {
            Model model = load_model(in_path);
            VerifyReport report = verify_model(model, samples);
            bool ok = report.pass(tolerance);
            std::printf("%s (tolerance %.3e)\n", ok ? "PASS" : "FAIL", tolerance);
            return ok ? 0 : 1;
        }
        if (refine->parsed()) {
            Model model = load_model(in_path);
            json plan_json;
            if (!plan_path.empty()) plan_json = json::parse(read_file(plan_path));
            Model out = model;
            if (model.is_curve()) {
                const SegmentConfiguration& cfg = model.curve->space.config;
                RefinementPlan plan;
                if (!plan_path.empty())
                    plan = plan_from_json(plan_json, cfg, "$");
                if (midpoints) {
                    RefinementPlan mp = midpoint_plan(cfg);
                    if (plan.segments.empty()) plan = mp;
                    else
                        for (int i = 0; i < cfg.segment_count(); ++i)
                            plan.segments[i].new_knots.insert(plan.segments[i].new_knots.end(),
                                                              mp.segments[i].new_knots.begin(),
                                                              mp.segments[i].new_knots.end());
                }
                if (elevate > 0) {
                    if (plan.segments.empty()) plan.segments.resize(cfg.segment_count());
                    for (auto& s : plan.segments) s.degree_raise += elevate;
                }
                out.curve = refine_curve(*model.curve, plan);
            } else {
                const auto& scfg = model.surface->space.tp.s.config;
                const auto& tcfg = model.surface->space.tp.t.config;
                PolarRefinementPlan plan;
                if (!plan_path.empty()) {
                    plan.s = plan_from_json(plan_json.value("s", json()), scfg, "$.s");
                    plan.t = plan_from_json(plan_json.value("t", json()), tcfg, "$.t");
                }
                if (midpoints) {
                    RefinementPlan mp = midpoint_plan(tcfg);
                    if (plan.t.segments.empty()) plan.t = mp;
                    else
                        for (int i = 0; i < tcfg.segment_count(); ++i)
                            plan.t.segments[i].new_knots.insert(
                                plan.t.segments[i].new_knots.end(),
                                mp.segments[i].new_knots.begin(),
                                mp.segments[i].new_knots.end());
                }
                if (elevate > 0) {
                    if (plan.t.segments.empty()) plan.t.segments.resize(tcfg.segment_count());
                    for (auto& s : plan.t.segments) s.degree_raise += elevate;
                }
                out.surface = refine_polar_surface(*model.surface, plan);
            }
            double err = reproduction_error(model, out);
            std::printf("reproduction-error %.3e\n", err);
            save_model(out, out_path);
            std::printf("wrote %s\n", out_path.c_str());
            return 0;
        }
        if (exp->parsed()) {
            Model model = load_model(in_path);
            if (model.is_curve()) {
                if (csv_path.empty())
                    throw std::invalid_argument("curves export CSV; pass --csv PATH");
                write_file(csv_path, curve_csv(*model.curve, count));
                std::printf("wrote %s\n", csv_path.c_str());
            } else {
                if (obj_path.empty())
                    throw std::invalid_argument("surfaces export OBJ; pass --obj PATH");
                MeshOutput mesh = tessellate_surface(*model.surface, nu, nv);
                write_file(obj_path, to_obj(mesh));
                std::printf("wrote %s (%zu vertices, %zu faces)\n", obj_path.c_str(),
                            mesh.vertices.size(), mesh.faces.size());
            }
            return 0;
        }
        if (perturb->parsed()) {
            Model model = load_model(in_path);
            if (model.is_curve()) {
                if (!model.ellipse)
                    throw std::invalid_argument(
                        "perturb needs quadric metadata to scale the perturbation");
                perturb_standard(*model.curve, *model.ellipse);
            } else {
                if (!model.ellipsoid)
                    throw std::invalid_argument(
                        "perturb needs quadric metadata to scale the perturbation");
                perturb_standard(*model.surface, *model.ellipsoid);
            }
            // the perturbed object no longer lies on the quadric
            model.ellipse.reset();
            model.ellipsoid.reset();
            save_model(model, out_path);
            std::printf("wrote %s\n", out_path.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}

}  // namespace mds
