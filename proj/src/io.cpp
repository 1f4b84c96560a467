#include "katoskel/io.hpp"

#include <fstream>
#include <set>

namespace katoskel {

namespace {

Int int_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Int(j.get<long long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw IOError("SchemaError", where + " must be an integer");
}

IVec ivec_from_json(const Json& j, const std::string& where) {
    if (!j.is_array())
        throw IOError("SchemaError", where + " must be an array of integers");
    IVec v;
    for (const Json& e : j) v.push_back(int_from_json(e, where));
    return v;
}

Json ivec_to_json(const IVec& v) {
    Json a = Json::array();
    for (const Int& x : v) a.push_back((long long)(x));
    return a;
}

std::vector<size_t> index_vec_from_json(const Json& j,
                                        const std::string& where) {
    if (!j.is_array())
        throw IOError("SchemaError", where + " must be an array");
    std::vector<size_t> v;
    for (const Json& e : j) {
        if (!e.is_number_unsigned() && !e.is_number_integer())
            throw IOError("SchemaError", where + " must contain indices");
        long long x = e.get<long long>();
        if (x < 0) throw IOError("SchemaError", where + " has a negative index");
        v.push_back(size_t(x));
    }
    return v;
}

const Json& field(const Json& j, const std::string& key,
                  const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw IOError("SchemaError", where + " is missing the field " + key);
    return *it;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
    size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw IOError("SchemaError", "zero denominator in " + s);
        return Rat(num, den);
    } catch (const IOError&) {
        throw;
    } catch (const std::exception&) {
        throw IOError("SchemaError", "cannot parse the rational " + s);
    }
}

std::string rat_to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IOError("ParseError", "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        throw IOError("ParseError", path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("ParseError", "cannot write " + path);
    out << content;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string schema_of(const Json& j) {
    if (!j.is_object() || !j.contains("schema") || !j["schema"].is_string())
        throw IOError("SchemaError", "the document has no schema field");
    std::string s = j["schema"].get<std::string>();
    const std::string prefix = "katoskel/";
    if (s.rfind(prefix, 0) != 0)
        throw IOError("SchemaError", "unknown schema " + s);
    std::string kind = s.substr(prefix.size());
    if (kind != "model-v1" && kind != "complex-v1" && kind != "divisor-v1" &&
        kind != "cone-v1")
        throw IOError("SchemaError", "unknown schema " + s);
    return kind;
}

StratifiedModel model_from_json(const Json& j) {
    if (schema_of(j) != "model-v1")
        throw IOError("SchemaError", "expected a model document");
    StratifiedModel m;
    for (const Json& c : field(j, "components", "model")) {
        Component comp;
        comp.name = field(c, "name", "component").get<std::string>();
        comp.vertical = field(c, "vertical", "component").get<bool>();
        comp.multiplicity = c.contains("multiplicity")
                                ? int_from_json(c["multiplicity"], "multiplicity")
                                : Int(1);
        m.components.push_back(comp);
    }
    for (const Json& s : field(j, "strata", "model")) {
        Stratum st;
        for (const Json& c : field(s, "components", "stratum"))
            st.components.push_back(c.get<std::string>());
        if (s.contains("branches"))
            for (const Json& b : s["branches"])
                st.branches.push_back(b.get<std::string>());
        if (s.contains("stalk")) {
            const Json& o = s["stalk"];
            StalkOverride ov;
            for (const Json& r : field(o, "cone_rays", "stalk override"))
                ov.cone_rays.push_back(ivec_from_json(r, "cone ray"));
            for (const Json& c : field(o, "ray_components", "stalk override"))
                ov.ray_components.push_back(c.get<std::string>());
            ov.pi = ivec_from_json(field(o, "pi", "stalk override"), "pi");
            st.stalk = std::move(ov);
        }
        m.strata.push_back(std::move(st));
    }
    return m;
}

Json model_to_json(const StratifiedModel& m) {
    Json j;
    j["schema"] = "katoskel/model-v1";
    j["components"] = Json::array();
    for (const Component& c : m.components) {
        Json cj;
        cj["name"] = c.name;
        cj["vertical"] = c.vertical;
        cj["multiplicity"] = (long long)(c.multiplicity);
        j["components"].push_back(cj);
    }
    j["strata"] = Json::array();
    for (const Stratum& s : m.strata) {
        Json sj;
        sj["components"] = s.components;
        if (!s.branches.empty()) sj["branches"] = s.branches;
        if (s.stalk) {
            Json oj;
            oj["cone_rays"] = Json::array();
            for (const IVec& r : s.stalk->cone_rays)
                oj["cone_rays"].push_back(ivec_to_json(r));
            oj["ray_components"] = s.stalk->ray_components;
            oj["pi"] = ivec_to_json(s.stalk->pi);
            sj["stalk"] = oj;
        }
        j["strata"].push_back(sj);
    }
    return j;
}

ComplexFile complex_from_json(const Json& j) {
    if (schema_of(j) != "complex-v1")
        throw IOError("SchemaError", "expected a complex document");
    ComplexFile out;
    for (const Json& v : field(j, "vertices", "complex"))
        out.complex.labels.push_back(v.get<std::string>());
    out.complex.num_vertices = out.complex.labels.size();
    for (const Json& s : field(j, "maximal", "complex")) {
        std::vector<size_t> simplex = index_vec_from_json(s, "maximal simplex");
        std::sort(simplex.begin(), simplex.end());
        for (size_t v : simplex)
            if (v >= out.complex.num_vertices)
                throw IOError("ReferenceError",
                              "simplex references a missing vertex");
        out.complex.maximal.push_back(std::move(simplex));
    }
    std::sort(out.complex.maximal.begin(), out.complex.maximal.end());
    if (j.contains("actions")) {
        if (!j["actions"].is_object())
            throw IOError("SchemaError", "actions must be an object");
        for (const auto& [name, gens] : j["actions"].items()) {
            std::vector<std::vector<size_t>> glist;
            for (const Json& g : gens) {
                std::vector<size_t> perm = index_vec_from_json(g, "generator");
                if (perm.size() != out.complex.num_vertices)
                    throw IOError("SchemaError",
                                  "generator size does not match the vertex "
                                  "count");
                glist.push_back(std::move(perm));
            }
            out.actions[name] = std::move(glist);
        }
    }
    return out;
}

Json complex_to_json(const ComplexFile& c) {
    Json j;
    j["schema"] = "katoskel/complex-v1";
    j["vertices"] = c.complex.labels;
    j["maximal"] = Json::array();
    for (const auto& s : c.complex.maximal) {
        Json sj = Json::array();
        for (size_t v : s) sj.push_back(v);
        j["maximal"].push_back(sj);
    }
    if (!c.actions.empty()) {
        Json aj = Json::object();
        for (const auto& [name, gens] : c.actions) {
            Json gj = Json::array();
            for (const auto& g : gens) {
                Json pj = Json::array();
                for (size_t v : g) pj.push_back(v);
                gj.push_back(pj);
            }
            aj[name] = gj;
        }
        j["actions"] = aj;
    }
    return j;
}

LogDivisor divisor_from_json(const Json& j) {
    if (schema_of(j) != "divisor-v1")
        throw IOError("SchemaError", "expected a divisor document");
    LogDivisor d;
    d.m = int_from_json(field(j, "m", "divisor"), "m");
    if (j.contains("mults")) {
        if (!j["mults"].is_object())
            throw IOError("SchemaError", "mults must be an object");
        for (const auto& [id, val] : j["mults"].items()) {
            if (!val.is_string())
                throw IOError("SchemaError",
                              "multiplicities must be rational strings");
            d.mults[id] = rat_from_string(val.get<std::string>());
        }
    }
    return d;
}

Json divisor_to_json(const LogDivisor& d) {
    Json j;
    j["schema"] = "katoskel/divisor-v1";
    j["m"] = (long long)(d.m);
    Json mj = Json::object();
    for (const auto& [id, val] : d.mults) mj[id] = rat_to_string(val);
    j["mults"] = mj;
    return j;
}

ConeFile cone_from_json(const Json& j) {
    if (schema_of(j) != "cone-v1")
        throw IOError("SchemaError", "expected a cone document");
    ConeFile c;
    long long dim = field(j, "dim", "cone").get<long long>();
    if (dim < 1) throw IOError("SchemaError", "the dimension must be positive");
    c.dim = size_t(dim);
    for (const Json& r : field(j, "rays", "cone")) {
        IVec ray = ivec_from_json(r, "ray");
        if (ray.size() != c.dim)
            throw IOError("SchemaError", "ray length does not match dim");
        c.rays.push_back(std::move(ray));
    }
    c.pi_dual = ivec_from_json(field(j, "pi_dual", "cone"), "pi_dual");
    if (c.pi_dual.size() != c.dim)
        throw IOError("SchemaError", "pi_dual length does not match dim");
    return c;
}

Json cone_to_json(const ConeFile& c) {
    Json j;
    j["schema"] = "katoskel/cone-v1";
    j["dim"] = c.dim;
    j["rays"] = Json::array();
    for (const IVec& r : c.rays) j["rays"].push_back(ivec_to_json(r));
    j["pi_dual"] = ivec_to_json(c.pi_dual);
    return j;
}

Json homology_to_json(const HomologyResult& h) {
    Json j = Json::object();
    for (size_t d = 0; d < h.size(); ++d) {
        Json g;
        g["betti"] = h[d].betti;
        g["torsion"] = Json::array();
        for (const Int& t : h[d].torsion) g["torsion"].push_back(t.str());
        j[std::to_string(d)] = g;
    }
    return j;
}

std::vector<std::string> validate_document(const Json& j,
                                           const StratifiedModel* context) {
    std::vector<std::string> out;
    std::string kind;
    try {
        kind = schema_of(j);
    } catch (const IOError& e) {
        out.push_back(e.what());
        return out;
    }
    try {
        if (kind == "model-v1") {
            StratifiedModel m = model_from_json(j);
            std::set<std::string> names;
            for (const Component& c : m.components) {
                if (!names.insert(c.name).second)
                    out.push_back("duplicate component " + c.name);
                if (c.vertical && c.multiplicity < 1)
                    out.push_back("component " + c.name +
                                  " has a non-positive multiplicity");
            }
            std::set<std::set<std::string>> stratum_sets;
            for (const Stratum& s : m.strata) {
                for (const std::string& c : s.components)
                    if (!names.count(c))
                        out.push_back("stratum references the unknown "
                                      "component " +
                                      c);
                stratum_sets.insert(
                    {s.components.begin(), s.components.end()});
            }
            // closure: every nonempty subset of a stratum set is a stratum
            for (const auto& s : stratum_sets) {
                std::vector<std::string> v(s.begin(), s.end());
                for (size_t mask = 1; mask + 1 < (size_t(1) << v.size());
                     ++mask) {
                    std::set<std::string> sub;
                    for (size_t i = 0; i < v.size(); ++i)
                        if (mask & (size_t(1) << i)) sub.insert(v[i]);
                    if (!stratum_sets.count(sub)) {
                        std::string name;
                        for (const auto& c : sub)
                            name += (name.empty() ? "" : ",") + c;
                        out.push_back("closure violation: the face {" + name +
                                      "} of a stratum is not a stratum");
                    }
                }
            }
        } else if (kind == "complex-v1") {
            ComplexFile c = complex_from_json(j);
            for (const auto& [name, gens] : c.actions) {
                try {
                    GroupAction a = close_group(gens);
                    SimplicialComplex q =
                        group_quotient(c.complex, a, 0, size_t(1) << 40);
                    (void)q;
                } catch (const TopologyError& e) {
                    if (e.code() == "InvalidAction")
                        out.push_back("action " + name + " is ill-formed: " +
                                      e.what());
                }
            }
        } else if (kind == "divisor-v1") {
            LogDivisor d = divisor_from_json(j);
            if (d.m < 1) out.push_back("the index m must be positive");
            if (context) {
                KatoFan fan = fan_from_stratification(*context);
                for (const auto& [id, mult] : d.mults) {
                    (void)mult;
                    bool found = false;
                    for (const FanPoint& p : fan.points)
                        if (p.id == id && p.stalk.ambient_rank == 1)
                            found = true;
                    if (!found)
                        out.push_back(
                            "reference error: the divisor names the unknown "
                            "height-one point " +
                            id);
                }
            }
        } else if (kind == "cone-v1") {
            cone_from_json(j);
        }
    } catch (const std::exception& e) {
        out.push_back(e.what());
    }
    return out;
}

}  // namespace katoskel
