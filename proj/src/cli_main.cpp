// Command-line front door: loads JSON inputs, runs the library pipeline, and
// writes canonical JSON or text reports. Exit codes: 0 success, 2 validation
// error, 3 cap exceeded.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "katoskel/io.hpp"

namespace katoskel {
namespace {

struct Options {
    std::string input;
    std::string with;  // second factor for product
    std::vector<std::string> divisors;
    std::string action;
    int n = 1;
    bool circle = false;
    bool want_homology = false;
    bool want_classify = false;
    size_t cap_simplices = 500000;
    int cap_subdivisions = 3;
    std::string format = "json";
    std::string out;
    std::string plot;
};

std::string surface_name(const SurfaceClass& c) {
    switch (c.type) {
        case SurfaceType::sphere:
            return "sphere";
        case SurfaceType::torus:
            return "torus";
        case SurfaceType::klein_bottle:
            return "klein bottle";
        case SurfaceType::projective_plane:
            return "projective plane";
        case SurfaceType::orientable_genus:
            return "orientable genus " + std::to_string(c.genus);
        case SurfaceType::nonorientable_genus:
            return "non-orientable genus " + std::to_string(c.genus);
        case SurfaceType::not_a_surface:
            return "not a surface";
    }
    return "not a surface";
}

Json classification_to_json(const SurfaceClass& c) {
    Json j;
    j["type"] = surface_name(c);
    j["genus"] = c.genus;
    if (!c.witness.empty()) j["witness"] = c.witness;
    return j;
}

std::string homology_group_str(const HomologyGroup& g) {
    std::string s;
    if (g.betti == 1)
        s = "Z";
    else if (g.betti > 1)
        s = "Z^" + std::to_string(g.betti);
    for (const Int& t : g.torsion) {
        if (!s.empty()) s += " + ";
        s += "Z/" + t.str();
    }
    return s.empty() ? "0" : s;
}

KatoFan fan_from_input(const Json& j) {
    std::string kind = schema_of(j);
    if (kind == "model-v1") return fan_from_stratification(model_from_json(j));
    if (kind == "cone-v1") {
        ConeFile c = cone_from_json(j);
        return fan_of_cone(c.dim, c.rays, c.pi_dual);
    }
    throw IOError("SchemaError", "expected a model or cone document");
}

// Complexes come either directly from a complex document or from the bounded
// triangulation of a model's skeleton.
ComplexFile complex_from_input(const Json& j) {
    std::string kind = schema_of(j);
    if (kind == "complex-v1") return complex_from_json(j);
    if (kind == "model-v1" || kind == "cone-v1") {
        ComplexFile c;
        c.complex = triangulate_bounded(skeleton_of_fan(fan_from_input(j)));
        return c;
    }
    throw IOError("SchemaError", "expected a complex or model document");
}

Json counts_by_rank_json(const KatoFan& f) {
    std::map<size_t, size_t> counts;
    for (const FanPoint& p : f.points) ++counts[p.stalk.ambient_rank];
    Json j = Json::object();
    for (const auto& [r, c] : counts) j[std::to_string(r)] = c;
    return j;
}

Json counts_by_dim_json(const SimplicialComplex& k) {
    Json j = Json::array();
    for (const auto& level : k.all_simplices()) j.push_back(level.size());
    return j;
}

Json face_counts_json(const std::vector<size_t>& counts) {
    Json j = Json::array();
    for (size_t c : counts) j.push_back(c);
    return j;
}

void write_svg_plot(const SimplicialComplex& k, const std::string& path) {
    // deterministic circular layout for one- and two-dimensional complexes
    if (k.dimension() > 2)
        throw IOError("SchemaError",
                      "plots are limited to complexes of dimension at most 2");
    const double cx = 260, cy = 260, r = 230;
    std::vector<std::pair<double, double>> pos(k.num_vertices);
    for (size_t v = 0; v < k.num_vertices; ++v) {
        double a = 2.0 * 3.14159265358979 * double(v) /
                   double(std::max<size_t>(k.num_vertices, 1));
        pos[v] = {cx + r * std::cos(a), cy + r * std::sin(a)};
    }
    auto pt = [&](size_t v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f", pos[v].first,
                      pos[v].second);
        return std::string(buf);
    };
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" "
        "height=\"520\">\n";
    auto sims = k.all_simplices();
    if (sims.size() > 2)
        for (const auto& t : sims[2])
            svg += "  <polygon points=\"" + pt(t[0]) + " " + pt(t[1]) + " " +
                   pt(t[2]) + "\" fill=\"#9ecae1\" fill-opacity=\"0.35\" "
                              "stroke=\"none\"/>\n";
    if (sims.size() > 1)
        for (const auto& e : sims[1]) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" "
                          "y2=\"%.2f\" stroke=\"#3182bd\" "
                          "stroke-width=\"1.5\"/>\n",
                          pos[e[0]].first, pos[e[0]].second, pos[e[1]].first,
                          pos[e[1]].second);
            svg += buf;
        }
    for (size_t v = 0; v < k.num_vertices; ++v) {
        char buf[120];
        std::snprintf(buf, sizeof(buf),
                      "  <circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" "
                      "fill=\"#08519c\"/>\n",
                      pos[v].first, pos[v].second);
        svg += buf;
    }
    svg += "</svg>\n";
    write_text_file(path, svg);
}

GroupAction action_from_file(const ComplexFile& c, const std::string& name) {
    if (name.empty())
        throw IOError("SchemaError", "an action name is required");
    auto it = c.actions.find(name);
    if (it == c.actions.end())
        throw IOError("ReferenceError",
                      "the input has no action named " + name);
    return close_group(it->second);
}

LogDivisor one_divisor(const Options& opt) {
    if (opt.divisors.size() != 1)
        throw IOError("SchemaError", "exactly one --divisor is required");
    return divisor_from_json(load_json_file(opt.divisors[0]));
}

// ---- subcommand handlers: each returns the result JSON and a text view ----

Json run_fan(const Options& opt, std::string& text) {
    KatoFan f = fan_from_input(load_json_file(opt.input));
    Json j;
    j["schema"] = "katoskel/fan-result-v1";
    j["points"] = Json::array();
    for (const FanPoint& p : f.points) {
        Json pj;
        pj["id"] = p.id;
        pj["rank"] = p.stalk.ambient_rank;
        pj["vertical"] = p.vertical;
        Json pi = Json::array();
        for (const Int& x : p.pi) pi.push_back((long long)(x));
        pj["pi"] = pi;
        j["points"].push_back(pj);
    }
    j["counts_by_rank"] = counts_by_rank_json(f);
    j["semistable"] = is_semistable(f);
    if (f.realized_dim > 0) j["regular"] = is_regular(f);
    text = "fan with " + std::to_string(f.points.size()) + " points\n";
    text += "points by rank:";
    for (const auto& [r, c] : j["counts_by_rank"].items())
        text += " rank " + r + ": " + c.dump();
    text += "\nsemistable: ";
    text += (j["semistable"].get<bool>() ? "yes" : "no");
    text += "\n";
    for (const FanPoint& p : f.points)
        text += "  " + p.id + " (rank " +
                std::to_string(p.stalk.ambient_rank) +
                (p.vertical ? ", vertical)" : ", horizontal)") + "\n";
    return j;
}

Json run_skeleton(const Options& opt, std::string& text) {
    PolyhedralComplex sk = skeleton_of_fan(fan_from_input(load_json_file(opt.input)));
    Json j;
    j["schema"] = "katoskel/skeleton-result-v1";
    j["counts_by_dim"] = face_counts_json(sk.face_counts_by_dim());
    j["faces"] = Json::array();
    for (const SkeletonFace& f : sk.faces) {
        Json fj;
        fj["id"] = f.id;
        fj["dim"] = f.dim;
        fj["vertices"] = Json::array();
        for (const RVec& v : f.vertices) {
            Json vj = Json::array();
            for (const Rat& x : v) vj.push_back(rat_to_string(x));
            fj["vertices"].push_back(vj);
        }
        fj["rays"] = Json::array();
        for (const IVec& ray : f.rays) {
            Json rj = Json::array();
            for (const Int& x : ray) rj.push_back((long long)(x));
            fj["rays"].push_back(rj);
        }
        fj["bounded"] = f.bounded();
        j["faces"].push_back(fj);
    }
    text = "skeleton faces by dimension:";
    for (const Json& c : j["counts_by_dim"]) text += " " + c.dump();
    text += "\n";
    for (const SkeletonFace& f : sk.faces)
        text += "  " + f.id + "  dim " + std::to_string(f.dim) + "  " +
                std::to_string(f.vertices.size()) + " vertices, " +
                std::to_string(f.rays.size()) + " rays\n";
    if (!opt.plot.empty())
        write_svg_plot(triangulate_bounded(sk), opt.plot);
    return j;
}

Json run_product(const Options& opt, std::string& text) {
    KatoFan fx = fan_from_input(load_json_file(opt.input));
    KatoFan fy = opt.with.empty() ? fx
                                  : fan_from_input(load_json_file(opt.with));
    FanProduct p = fan_product(fx, fy);
    PolyhedralComplex skx = skeleton_of_fan(fx);
    PolyhedralComplex sky = skeleton_of_fan(fy);
    ProductSkeleton ps = product_skeleton(skx, sky, p);
    std::string witness;
    bool homeo = check_product_homeomorphism(ps, &witness);
    Json j;
    j["schema"] = "katoskel/product-result-v1";
    j["points"] = p.fan.points.size();
    j["counts_by_rank"] = counts_by_rank_json(p.fan);
    j["cells_by_dim"] = face_counts_json(ps.complex.face_counts_by_dim());
    j["semistable_factors"] =
        Json::array({is_semistable(fx), is_semistable(fy)});
    j["homeomorphism"] = homeo;
    if (!homeo) j["witness"] = witness;
    j["n_monotonic"] = n_monotonicity_check(p);
    text = "product fan with " + std::to_string(p.fan.points.size()) +
           " points\ncells by dimension:";
    for (const Json& c : j["cells_by_dim"]) text += " " + c.dump();
    text += "\nproduct map is a cellwise unimodular homeomorphism: ";
    text += homeo ? "yes" : ("no (" + witness + ")");
    text += "\n";
    return j;
}

Json run_weight(const Options& opt, std::string& text) {
    PolyhedralComplex sk =
        skeleton_of_fan(fan_from_input(load_json_file(opt.input)));
    LogDivisor d = one_divisor(opt);
    PLWeight w = weight_function(sk, d);
    MinimalityLocus l = minimality_locus(sk, w);
    Json j;
    j["schema"] = "katoskel/weight-result-v1";
    j["m"] = (long long)(w.m);
    j["faces"] = Json::array();
    for (size_t i = 0; i < sk.faces.size(); ++i) {
        Json fj;
        fj["id"] = sk.faces[i].id;
        fj["linear"] = Json::array();
        for (const Rat& x : w.linear[i])
            fj["linear"].push_back(rat_to_string(x));
        j["faces"].push_back(fj);
    }
    j["minus_infinity"] = l.minus_infinity;
    if (!l.minus_infinity) {
        j["min"] = rat_to_string(l.min_value);
        Json lj = Json::array();
        for (size_t f : l.faces) lj.push_back(sk.faces[f].id);
        j["locus"] = lj;
    }
    text = "weight function, m = " + std::to_string((long long)(w.m)) + "\n";
    for (size_t i = 0; i < sk.faces.size(); ++i) {
        text += "  " + sk.faces[i].id + "  linear (";
        for (size_t c = 0; c < w.linear[i].size(); ++c)
            text += (c ? ", " : "") + rat_to_string(w.linear[i][c]);
        text += ")\n";
    }
    if (l.minus_infinity)
        text += "minimum: unbounded below\n";
    else {
        text += "minimum " + rat_to_string(l.min_value) + " on " +
                std::to_string(l.faces.size()) + " faces\n";
    }
    return j;
}

Json locus_json(const PolyhedralComplex& sk, const std::vector<size_t>& faces,
                const char* schema, std::string& text) {
    Json j;
    j["schema"] = schema;
    Json fj = Json::array();
    std::vector<size_t> counts;
    for (size_t f : faces) {
        fj.push_back(sk.faces[f].id);
        if (sk.faces[f].dim >= counts.size())
            counts.resize(sk.faces[f].dim + 1, 0);
        ++counts[sk.faces[f].dim];
    }
    j["faces"] = fj;
    j["counts_by_dim"] = face_counts_json(counts);
    text = "subcomplex faces by dimension:";
    for (const Json& c : j["counts_by_dim"]) text += " " + c.dump();
    if (counts.empty()) text += " (empty)";
    text += "\n";
    for (size_t f : faces) text += "  " + sk.faces[f].id + "\n";
    return j;
}

Json run_ks(const Options& opt, std::string& text) {
    PolyhedralComplex sk =
        skeleton_of_fan(fan_from_input(load_json_file(opt.input)));
    LogDivisor d = one_divisor(opt);
    MinimalityLocus l = minimality_locus(sk, weight_function(sk, d));
    if (l.minus_infinity)
        throw WeightError("MinusInfinity",
                          "the weight is unbounded below; the locus is empty");
    return locus_json(sk, l.faces, "katoskel/ks-result-v1", text);
}

Json run_essential(const Options& opt, std::string& text) {
    PolyhedralComplex sk =
        skeleton_of_fan(fan_from_input(load_json_file(opt.input)));
    if (opt.divisors.empty())
        throw IOError("SchemaError", "at least one --divisor is required");
    std::vector<LogDivisor> forms;
    for (const std::string& path : opt.divisors)
        forms.push_back(divisor_from_json(load_json_file(path)));
    std::vector<size_t> faces = essential_skeleton(sk, forms);
    return locus_json(sk, faces, "katoskel/essential-result-v1", text);
}

Json quotient_report(const SimplicialComplex& q, const Options& opt,
                     std::string& text) {
    Json j;
    j["schema"] = "katoskel/quotient-result-v1";
    j["counts_by_dim"] = counts_by_dim_json(q);
    j["euler"] = euler_characteristic(q);
    j["complex"] = complex_to_json(ComplexFile{q, {}});
    text = "quotient cells by dimension:";
    for (const Json& c : j["counts_by_dim"]) text += " " + c.dump();
    text += "\neuler characteristic: " + std::to_string(euler_characteristic(q)) +
            "\n";
    if (opt.want_homology) {
        HomologyResult h = homology(q);
        j["homology"] = homology_to_json(h);
        for (size_t d = 0; d < h.size(); ++d)
            text += "H_" + std::to_string(d) + " = " +
                    homology_group_str(h[d]) + "\n";
    }
    if (opt.want_classify) {
        SurfaceClass c = classify_closed_surface(q);
        j["classification"] = classification_to_json(c);
        text += "classification: " + surface_name(c);
        if (!c.witness.empty()) text += " (" + c.witness + ")";
        text += "\n";
    }
    if (!opt.plot.empty()) write_svg_plot(q, opt.plot);
    return j;
}

Json run_quotient(const Options& opt, std::string& text) {
    ComplexFile c = complex_from_input(load_json_file(opt.input));
    GroupAction a = action_from_file(c, opt.action);
    SimplicialComplex q = group_quotient(c.complex, a, opt.cap_subdivisions,
                                         opt.cap_simplices);
    return quotient_report(q, opt, text);
}

Json run_sym(const Options& opt, std::string& text) {
    ComplexFile c = complex_from_input(load_json_file(opt.input));
    if (opt.n < 1)
        throw IOError("SchemaError", "--n must be positive");
    Json j;
    j["schema"] = "katoskel/sym-result-v1";
    j["n"] = opt.n;
    Int chi = symmetric_product_euler(c.complex, opt.n);
    j["chi"] = (long long)(chi);
    text = "symmetric product, n = " + std::to_string(opt.n) + "\n";
    text += "euler characteristic (Burnside): " + chi.str() + "\n";
    if (opt.want_homology) {
        HomologyResult h =
            symmetric_product_homology(c.complex, opt.n, opt.cap_simplices);
        j["homology"] = homology_to_json(h);
        for (size_t d = 0; d < h.size(); ++d)
            text += "H_" + std::to_string(d) + " = " +
                    homology_group_str(h[d]) + "\n";
    } else {
        SimplicialComplex q =
            symmetric_product(c.complex, opt.n, opt.cap_simplices);
        j["counts_by_dim"] = counts_by_dim_json(q);
        j["complex"] = complex_to_json(ComplexFile{q, {}});
        text += "cells by dimension:";
        for (const Json& cnt : j["counts_by_dim"]) text += " " + cnt.dump();
        text += "\n";
        if (!opt.plot.empty() && q.dimension() <= 2) write_svg_plot(q, opt.plot);
    }
    return j;
}

Json run_kummer(const Options& opt, std::string& text) {
    ComplexWithAction kk =
        opt.circle ? kummer_kernel_circle(opt.n) : kummer_kernel(opt.n);
    SimplicialComplex q = group_quotient(kk.complex, kk.action,
                                         opt.cap_subdivisions,
                                         opt.cap_simplices);
    Json j;
    j["schema"] = "katoskel/kummer-result-v1";
    j["n"] = opt.n;
    j["variant"] = opt.circle ? "circle" : "torus";
    j["kernel_counts_by_dim"] = counts_by_dim_json(kk.complex);
    j["group_order"] = kk.action.perms.size();
    j["quotient_counts_by_dim"] = counts_by_dim_json(q);
    j["euler"] = euler_characteristic(q);
    HomologyResult h = homology(q);
    j["homology"] = homology_to_json(h);
    text = "kummer kernel, n = " + std::to_string(opt.n) + " (" +
           (opt.circle ? "circle" : "torus") + " variant)\n";
    text += "group order " + std::to_string(kk.action.perms.size()) + "\n";
    text += "quotient euler characteristic: " +
            std::to_string(euler_characteristic(q)) + "\n";
    for (size_t d = 0; d < h.size(); ++d)
        text += "H_" + std::to_string(d) + " = " + homology_group_str(h[d]) +
                "\n";
    if (opt.want_classify) {
        SurfaceClass c = classify_closed_surface(q);
        j["classification"] = classification_to_json(c);
        text += "classification: " + surface_name(c) + "\n";
    }
    if (!opt.plot.empty()) write_svg_plot(q, opt.plot);
    return j;
}

Json run_homology(const Options& opt, std::string& text) {
    ComplexFile c = complex_from_input(load_json_file(opt.input));
    HomologyResult h = homology(c.complex);
    Json j;
    j["schema"] = "katoskel/homology-result-v1";
    j["counts_by_dim"] = counts_by_dim_json(c.complex);
    j["homology"] = homology_to_json(h);
    j["euler"] = euler_characteristic(c.complex);
    text.clear();
    for (size_t d = 0; d < h.size(); ++d)
        text += "H_" + std::to_string(d) + " = " + homology_group_str(h[d]) +
                "\n";
    text += "chi = " + std::to_string(euler_characteristic(c.complex)) + "\n";
    if (!opt.plot.empty()) write_svg_plot(c.complex, opt.plot);
    return j;
}

Json run_classify(const Options& opt, std::string& text) {
    ComplexFile c = complex_from_input(load_json_file(opt.input));
    SurfaceClass sc = classify_closed_surface(c.complex);
    Json j;
    j["schema"] = "katoskel/classify-result-v1";
    j["classification"] = classification_to_json(sc);
    text = surface_name(sc);
    if (!sc.witness.empty()) text += ": " + sc.witness;
    text += "\n";
    if (!opt.plot.empty()) write_svg_plot(c.complex, opt.plot);
    return j;
}

Json run_resolve(const Options& opt, std::string& text) {
    KatoFan f = fan_from_input(load_json_file(opt.input));
    KatoFan r = resolve(f);
    Json j;
    j["schema"] = "katoskel/resolve-result-v1";
    j["regular_before"] = is_regular(f);
    j["regular_after"] = is_regular(r);
    j["counts_by_rank_before"] = counts_by_rank_json(f);
    j["counts_by_rank_after"] = counts_by_rank_json(r);
    text = std::string("regular before: ") +
           (j["regular_before"].get<bool>() ? "yes" : "no") +
           "\nregular after: " +
           (j["regular_after"].get<bool>() ? "yes" : "no") + "\n";
    text += "points by rank after resolution:";
    for (const auto& [rk, c] : j["counts_by_rank_after"].items())
        text += " rank " + rk + ": " + c.dump();
    text += "\n";
    return j;
}

Json run_validate(const Options& opt, std::string& text) {
    Json doc = load_json_file(opt.input);
    std::optional<StratifiedModel> context;
    std::vector<std::string> diags;
    if (!opt.divisors.empty()) {
        // validate the divisor against the model given as --input
        try {
            context = model_from_json(doc);
        } catch (const std::exception& e) {
            diags.push_back(e.what());
        }
        for (const std::string& path : opt.divisors) {
            Json dj = load_json_file(path);
            for (const std::string& d :
                 validate_document(dj, context ? &*context : nullptr))
                diags.push_back(path + ": " + d);
        }
    }
    for (const std::string& d : validate_document(doc, nullptr))
        diags.push_back(d);
    Json j;
    j["schema"] = "katoskel/validate-result-v1";
    j["diagnostics"] = diags;
    if (diags.empty())
        text = "ok\n";
    else {
        text.clear();
        for (const std::string& d : diags) text += d + "\n";
    }
    return j;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"skeletons of product degenerations: fans, weights, "
                 "quotients, homology"};
    app.require_subcommand(1);
    Options opt;
    if (const char* threads = std::getenv("KATOSKEL_THREADS")) {
        char* end = nullptr;
        long t = std::strtol(threads, &end, 10);
        if (end == threads || *end != '\0' || t < 1) {
            Json err;
            err["error"]["code"] = "SchemaError";
            err["error"]["message"] =
                "KATOSKEL_THREADS must be a positive integer";
            std::cerr << dump_canonical(err);
            return 2;
        }
    }
    std::map<std::string, Json (*)(const Options&, std::string&)> handlers = {
        {"fan", run_fan},           {"skeleton", run_skeleton},
        {"product", run_product},   {"weight", run_weight},
        {"ks", run_ks},             {"essential", run_essential},
        {"quotient", run_quotient}, {"sym", run_sym},
        {"kummer", run_kummer},     {"homology", run_homology},
        {"classify", run_classify}, {"resolve", run_resolve},
        {"validate", run_validate}};
    std::vector<CLI::App*> subs;
    for (const auto& [name, fn] : handlers) {
        (void)fn;
        CLI::App* sub = app.add_subcommand(name);
        if (name != "kummer")
            sub->add_option("--input", opt.input, "input JSON document")
                ->required();
        else
            sub->add_option("--input", opt.input, "input JSON document");
        sub->add_option("--with", opt.with, "second factor for products");
        sub->add_option("--divisor", opt.divisors, "divisor JSON document");
        sub->add_option("--action", opt.action, "named action in the input");
        sub->add_option("--n", opt.n, "power for sym and kummer");
        sub->add_flag("--circle", opt.circle, "circle-variant kummer kernel");
        sub->add_flag("--homology", opt.want_homology, "include homology");
        sub->add_flag("--classify", opt.want_classify,
                      "include surface classification");
        sub->add_option("--cap-simplices", opt.cap_simplices,
                        "simplex cap for quotients and products");
        sub->add_option("--cap-subdivisions", opt.cap_subdivisions,
                        "regularization subdivision cap");
        sub->add_option("--format", opt.format, "json or text")
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--out", opt.out, "output path (default stdout)");
        sub->add_option("--plot", opt.plot, "SVG plot output path");
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        Json err;
        err["error"]["code"] = "UsageError";
        err["error"]["message"] = e.what();
        std::cerr << dump_canonical(err);
        return 2;
    }
    std::string command = app.get_subcommands().at(0)->get_name();
    try {
        std::string text;
        Json result = handlers.at(command)(opt, text);
        std::string payload =
            opt.format == "text" ? text : dump_canonical(result);
        if (opt.out.empty())
            std::cout << payload;
        else
            write_text_file(opt.out, payload);
        return 0;
    } catch (const std::exception& e) {
        std::string code = "Internal";
        if (auto* err = dynamic_cast<const IOError*>(&e))
            code = err->code();
        else if (auto* err2 = dynamic_cast<const TopologyError*>(&e))
            code = err2->code();
        else if (auto* err3 = dynamic_cast<const FanError*>(&e))
            code = err3->code();
        else if (auto* err4 = dynamic_cast<const SkeletonError*>(&e))
            code = err4->code();
        else if (auto* err5 = dynamic_cast<const WeightError*>(&e))
            code = err5->code();
        else if (auto* err6 = dynamic_cast<const MonoidError*>(&e))
            code = err6->code();
        Json err;
        err["error"]["code"] = code;
        err["error"]["message"] = e.what();
        std::cerr << dump_canonical(err);
        return code.find("Cap") != std::string::npos ? 3 : 2;
    }
}

}  // namespace
}  // namespace katoskel

int main(int argc, char** argv) { return katoskel::run_cli(argc, argv); }
