#include "katoskel/fan.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace katoskel {

namespace {

IMat dedup_sorted(IMat vecs) {
    std::sort(vecs.begin(), vecs.end());
    vecs.erase(std::unique(vecs.begin(), vecs.end()), vecs.end());
    return vecs;
}

IVec concat(const IVec& a, const IVec& b) {
    IVec r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

IMat hstack(const IMat& a, const IMat& b) {
    size_t rows = std::max(a.size(), b.size());
    IMat r(rows);
    for (size_t i = 0; i < rows; ++i) {
        if (i < a.size()) r[i] = a[i];
        if (i < b.size()) r[i] = concat(r[i], b[i]);
    }
    return r;
}

// Integer right inverse of a surjective integer matrix (all Smith invariants
// must be 1).
IMat right_inverse(const IMat& p) {
    SmithForm sf = smith_form(p);
    if (sf.invariants.size() != sf.rows)
        throw FanError("Internal", "matrix is not surjective");
    for (const Int& d : sf.invariants)
        if (d != 1)
            throw FanError("Internal", "matrix has a nontrivial cokernel");
    IMat e(sf.cols, IVec(sf.rows, 0));
    for (size_t i = 0; i < sf.rows; ++i) e[i][i] = 1;
    return mat_mul(mat_mul(sf.v, e), sf.u);
}

// A realized cone in Z^D together with its saturated span lattice and the
// face data computed in span coordinates.
struct SpanCone {
    IMat rays;    // primitive extreme rays, ambient coords, sorted
    IMat basis;   // saturated span basis, k x D
    IMat red;     // rays in span coordinates, parallel to rays
    IMat facets;  // inward facet normals, span coordinates
    size_t k = 0;
};

SpanCone span_cone(const IMat& rays_in) {
    if (rays_in.empty()) throw FanError("Internal", "empty cone");
    IMat prim;
    for (const IVec& r : rays_in) {
        if (is_zero(r)) continue;
        prim.push_back(primitive(r));
    }
    prim = dedup_sorted(prim);
    if (prim.empty()) throw FanError("Internal", "empty cone");
    SpanCone c;
    c.basis = saturate_lattice(prim);
    c.k = c.basis.size();
    IMat red_all;
    for (const IVec& r : prim) red_all.push_back(*lattice_coords(c.basis, r));
    c.facets = cone_facet_normals(c.k, red_all);
    IMat ext_red = cone_extreme_rays_full(c.k, red_all);
    for (const IVec& e : ext_red) {
        IVec amb(prim[0].size(), 0);
        for (size_t i = 0; i < c.k; ++i)
            if (e[i] != 0)
                for (size_t j = 0; j < amb.size(); ++j)
                    amb[j] += e[i] * c.basis[i][j];
        c.rays.push_back(amb);
    }
    std::vector<size_t> order(c.rays.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return c.rays[a] < c.rays[b]; });
    IMat sr, sred;
    for (size_t i : order) {
        sr.push_back(c.rays[i]);
        sred.push_back(ext_red[i]);
    }
    c.rays = std::move(sr);
    c.red = std::move(sred);
    return c;
}

bool cone_contains_vec(const IMat& rays, const IVec& v) {
    if (is_zero(v)) return true;
    if (rays.empty()) return false;
    SpanCone c = span_cone(rays);
    // The span basis is saturated, so an integer vector of the rational span
    // always has integer coordinates.
    auto red = lattice_coords(c.basis, v);
    if (!red) return false;
    for (const IVec& f : c.facets)
        if (dot(f, *red) < 0) return false;
    return true;
}

// All faces of a span cone, as sorted ambient extreme-ray sets (the full cone
// included, the zero face omitted).
std::vector<IMat> faces_of(const SpanCone& c) {
    std::set<IMat> seen;
    std::vector<IMat> queue;
    seen.insert(c.rays);
    queue.push_back(c.rays);
    // red coordinates lookup
    std::map<IVec, IVec> red_of;
    for (size_t i = 0; i < c.rays.size(); ++i) red_of[c.rays[i]] = c.red[i];
    while (!queue.empty()) {
        IMat cur = queue.back();
        queue.pop_back();
        for (const IVec& f : c.facets) {
            IMat nxt;
            for (const IVec& r : cur)
                if (dot(f, red_of[r]) == 0) nxt.push_back(r);
            if (nxt.empty()) continue;
            if (seen.insert(nxt).second) queue.push_back(nxt);
        }
    }
    return {seen.begin(), seen.end()};
}

KatoFan fan_from_cones(size_t D, const std::vector<IMat>& maximal,
                       const IVec& pi_dual) {
    if (pi_dual.size() != D)
        throw FanError("DimensionMismatch",
                       "uniformizer length does not match ambient dimension");
    std::set<IMat> all_faces;
    std::set<std::pair<IMat, IMat>> rel;  // (deep key, shallow key)
    for (const IMat& rays : maximal) {
        SpanCone c = span_cone(rays);
        std::vector<IMat> fs = faces_of(c);
        for (const IMat& a : fs) all_faces.insert(a);
        for (const IMat& a : fs)
            for (const IMat& b : fs) {
                if (a.size() <= b.size() || a == b) continue;
                if (std::includes(a.begin(), a.end(), b.begin(), b.end()))
                    rel.insert({a, b});
            }
    }
    std::vector<IMat> keys(all_faces.begin(), all_faces.end());
    std::vector<SpanCone> cones;
    cones.reserve(keys.size());
    std::stable_sort(keys.begin(), keys.end(), [](const IMat& a, const IMat& b) {
        size_t ra = rank_of(a), rb = rank_of(b);
        if (ra != rb) return ra < rb;
        return a < b;
    });
    std::map<IMat, size_t> index_of;
    KatoFan fan;
    fan.realized_dim = D;
    fan.realized_pi = pi_dual;
    for (size_t i = 0; i < keys.size(); ++i) {
        SpanCone c = span_cone(keys[i]);
        FanPoint pt;
        pt.id = "p" + std::to_string(i);
        pt.stalk = saturated_cone_monoid(c.k, c.facets);
        pt.pi = mat_apply(c.basis, pi_dual);
        if (!pt.stalk.contains(pt.pi))
            throw FanError("InvalidUniformizer",
                           "uniformizer is negative on a cone ray");
        pt.vertical = !is_zero(pt.pi);
        pt.realized_rays = keys[i];
        index_of[keys[i]] = i;
        cones.push_back(std::move(c));
        fan.points.push_back(std::move(pt));
    }
    for (const auto& [a, b] : rel) {
        size_t deep = index_of[a], shallow = index_of[b];
        const SpanCone& ca = cones[deep];
        const SpanCone& cb = cones[shallow];
        IMat tau;
        for (const IVec& row : cb.basis)
            tau.push_back(*lattice_coords(ca.basis, row));
        fan.cospec[{deep, shallow}] = MonoidHom{std::move(tau)};
    }
    return fan;
}

IVec zeros(size_t n) { return IVec(n, 0); }

}  // namespace

std::vector<size_t> KatoFan::generizations(size_t x) const {
    std::vector<size_t> out;
    for (const auto& [key, hom] : cospec) {
        (void)hom;
        if (key.first == x) out.push_back(key.second);
    }
    return out;
}

std::vector<size_t> KatoFan::rank1_generizations(size_t x) const {
    std::vector<size_t> out;
    for (size_t y : generizations(x))
        if (points[y].stalk.dim() == 1) out.push_back(y);
    return out;
}

KatoFan fan_of_cone(size_t dim, const IMat& rays, const IVec& pi_dual) {
    return fan_from_cones(dim, {rays}, pi_dual);
}

KatoFan fan_from_stratification(const StratifiedModel& m) {
    struct CompInfo {
        bool vertical;
        Int mult;
    };
    std::map<std::string, CompInfo> comps;
    for (const Component& c : m.components) {
        if (c.name.empty())
            throw FanError("InconsistentStratification", "unnamed component");
        if (comps.count(c.name))
            throw FanError("InconsistentStratification",
                           "duplicate component " + c.name);
        if (c.vertical && c.multiplicity < 1)
            throw FanError("InconsistentStratification",
                           "nonpositive multiplicity on " + c.name);
        comps[c.name] = {c.vertical, c.vertical ? c.multiplicity : Int(0)};
    }
    struct SInfo {
        std::vector<std::string> set;       // sorted component names
        std::vector<std::string> branches;  // at least one entry
        const Stratum* src = nullptr;
        IMat rays;          // per component (sorted order), stalk coordinates
        AffineMonoid stalk;
        IVec pi;
    };
    std::vector<SInfo> strata;
    std::set<std::vector<std::string>> sets;
    for (const Stratum& s : m.strata) {
        SInfo info;
        info.set = s.components;
        std::sort(info.set.begin(), info.set.end());
        info.set.erase(std::unique(info.set.begin(), info.set.end()),
                       info.set.end());
        if (info.set.size() != s.components.size() || info.set.empty())
            throw FanError("InconsistentStratification",
                           "stratum component set empty or repeated");
        for (const std::string& c : info.set)
            if (!comps.count(c))
                throw FanError("InconsistentStratification",
                               "unknown component " + c);
        if (!sets.insert(info.set).second)
            throw FanError("InconsistentStratification",
                           "two strata share a component set");
        info.branches = s.branches;
        if (info.branches.empty()) info.branches.push_back("");
        info.src = &s;
        strata.push_back(std::move(info));
    }
    // specialization closure: every nonempty proper subset of a stratum's
    // component set must itself carry a stratum
    for (const SInfo& s : strata) {
        size_t n = s.set.size();
        for (size_t mask = 1; mask + 1 < (size_t(1) << n); ++mask) {
            std::vector<std::string> sub;
            for (size_t i = 0; i < n; ++i)
                if (mask & (size_t(1) << i)) sub.push_back(s.set[i]);
            if (!sets.count(sub))
                throw FanError("InconsistentStratification",
                               "missing stratum on a subset of {" +
                                   s.set.front() + ",...}");
        }
    }
    auto subset = [](const std::vector<std::string>& a,
                     const std::vector<std::string>& b) {
        return a.size() < b.size() &&
               std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    // branch incidence and overrides need strata without superstrata
    for (const SInfo& s : strata) {
        bool has_super = false;
        for (const SInfo& t : strata)
            if (subset(s.set, t.set)) has_super = true;
        if (has_super && s.branches.size() > 1)
            throw FanError("InconsistentStratification",
                           "multi-branch stratum with a superstratum needs "
                           "explicit branch incidence (unsupported)");
        if (has_super && s.src->stalk)
            throw FanError("InconsistentStratification",
                           "stalk override on a non-maximal stratum");
    }
    // build stalks
    for (SInfo& s : strata) {
        size_t k = s.set.size();
        if (!s.src->stalk) {
            s.rays = identity_mat(k);
            s.stalk = monoid_from_generators(k, identity_mat(k));
            s.pi = IVec(k, 0);
            for (size_t i = 0; i < k; ++i) s.pi[i] = comps[s.set[i]].mult;
            continue;
        }
        const StalkOverride& ov = *s.src->stalk;
        for (const IVec& r : ov.cone_rays)
            if (r.size() != k)
                throw FanError("InconsistentStratification",
                               "override ray length must equal the number of "
                               "stratum components");
        IMat ext = cone_extreme_rays_full(k, ov.cone_rays);
        std::sort(ext.begin(), ext.end());
        if (ext.size() != k)
            throw FanError("InconsistentStratification",
                           "override cone must have one ray per component");
        if (ov.ray_components.size() != k)
            throw FanError("InconsistentStratification",
                           "ray_components must label every extreme ray");
        std::map<std::string, IVec> ray_of;
        for (size_t i = 0; i < k; ++i) {
            if (!comps.count(ov.ray_components[i]) ||
                ray_of.count(ov.ray_components[i]))
                throw FanError("InconsistentStratification",
                               "ray_components must be a permutation of the "
                               "stratum components");
            ray_of[ov.ray_components[i]] = ext[i];
        }
        for (const std::string& c : s.set)
            if (!ray_of.count(c))
                throw FanError("InconsistentStratification",
                               "ray_components must cover component " + c);
        IMat facets = cone_facet_normals(k, ext);
        s.stalk = saturated_cone_monoid(k, facets);
        s.pi = ov.pi;
        if (s.pi.size() != k || !s.stalk.contains(s.pi))
            throw FanError("InconsistentStratification",
                           "override uniformizer is not a stalk element");
        s.rays.clear();
        for (const std::string& c : s.set) {
            const IVec& r = ray_of[c];
            if (dot(s.pi, r) != comps[c].mult)
                throw FanError("InconsistentStratification",
                               "uniformizer valuation along " + c +
                                   " does not match its multiplicity");
            s.rays.push_back(r);
        }
        // every proper component subset must span a unimodular face, so that
        // the sub-strata keep their free snc stalks
        for (size_t mask = 1; mask + 1 < (size_t(1) << k); ++mask) {
            IMat sel;
            for (size_t i = 0; i < k; ++i)
                if (mask & (size_t(1) << i)) sel.push_back(s.rays[i]);
            IVec nt(k, 0);
            for (const IVec& f : facets) {
                bool vanishes = true;
                for (const IVec& r : sel)
                    if (dot(f, r) != 0) { vanishes = false; break; }
                if (vanishes) nt = add(nt, f);
            }
            IMat face_rays;
            for (const IVec& r : ext)
                if (dot(nt, r) == 0) face_rays.push_back(r);
            IMat want = sel;
            std::sort(want.begin(), want.end());
            if (is_zero(nt) || face_rays != want)
                throw FanError("InconsistentStratification",
                               "component subset does not span a face of the "
                               "override cone");
            IMat basis = saturate_lattice(sel);
            IMat red;
            for (const IVec& r : sel) red.push_back(*lattice_coords(basis, r));
            Int det = lattice_det(red, basis.size());
            if (det != 1 && det != -1)
                throw FanError("InconsistentStratification",
                               "override face is not unimodular");
        }
    }
    // points
    KatoFan fan;
    std::map<std::pair<size_t, size_t>, size_t> point_of;
    for (size_t si = 0; si < strata.size(); ++si) {
        const SInfo& s = strata[si];
        for (size_t bi = 0; bi < s.branches.size(); ++bi) {
            FanPoint pt;
            std::string id;
            for (size_t i = 0; i < s.set.size(); ++i) {
                if (i) id += "|";
                id += s.set[i];
            }
            if (!s.branches[bi].empty()) id += ":" + s.branches[bi];
            pt.id = id;
            pt.component_set = s.set;
            pt.branch = s.branches[bi];
            pt.stalk = s.stalk;
            pt.pi = s.pi;
            pt.vertical = !is_zero(s.pi);
            point_of[{si, bi}] = fan.points.size();
            fan.points.push_back(std::move(pt));
        }
    }
    // cospecialization
    for (size_t si = 0; si < strata.size(); ++si)
        for (size_t ti = 0; ti < strata.size(); ++ti) {
            if (si == ti || !subset(strata[ti].set, strata[si].set)) continue;
            const SInfo& s = strata[si];
            const SInfo& t = strata[ti];
            IMat tau;
            for (const std::string& c : t.set) {
                size_t pos = size_t(std::lower_bound(s.set.begin(), s.set.end(),
                                                     c) -
                                    s.set.begin());
                tau.push_back(s.rays[pos]);
            }
            for (size_t bs = 0; bs < s.branches.size(); ++bs)
                for (size_t bt = 0; bt < t.branches.size(); ++bt)
                    fan.cospec[{point_of[{si, bs}], point_of[{ti, bt}]}] =
                        MonoidHom{tau};
        }
    // realization when a single maximal stratum dominates everything and no
    // stratum is branched
    size_t top = strata.size();
    for (size_t si = 0; si < strata.size(); ++si) {
        bool dominates = true;
        for (size_t ti = 0; ti < strata.size(); ++ti)
            if (ti != si && !subset(strata[ti].set, strata[si].set))
                dominates = false;
        if (dominates) top = si;
    }
    bool branched = false;
    for (const SInfo& s : strata)
        if (s.branches.size() > 1) branched = true;
    if (top < strata.size() && !branched) {
        const SInfo& s0 = strata[top];
        fan.realized_dim = s0.set.size();
        fan.realized_pi = s0.pi;
        for (size_t si = 0; si < strata.size(); ++si) {
            IMat rays;
            for (const std::string& c : strata[si].set) {
                size_t pos = size_t(std::lower_bound(s0.set.begin(),
                                                     s0.set.end(), c) -
                                    s0.set.begin());
                rays.push_back(s0.rays[pos]);
            }
            std::sort(rays.begin(), rays.end());
            fan.points[point_of[{si, 0}]].realized_rays = rays;
        }
    }
    return fan;
}

bool is_semistable(const KatoFan& f) {
    for (const FanPoint& p : f.points)
        if (p.vertical && saturation_index(p.stalk, p.pi) != 1) return false;
    return true;
}

FanProduct fan_product(const KatoFan& f, const KatoFan& g,
                       const BranchRule& rule) {
    bool ss = is_semistable(f) || is_semistable(g);
    if (!rule && !ss)
        throw FanError("MissingBranchRule",
                       "neither factor is semistable and no branch rule was "
                       "supplied");
    FanProduct out;
    out.factor_x = &f;
    out.factor_y = &g;
    KatoFan& fan = out.fan;
    auto rank = [](const KatoFan& h, std::optional<size_t> i) {
        return i ? h.points[*i].stalk.ambient_rank : size_t(0);
    };
    // vertical pairs
    for (size_t xi = 0; xi < f.points.size(); ++xi) {
        if (!f.points[xi].vertical) continue;
        for (size_t yi = 0; yi < g.points.size(); ++yi) {
            if (!g.points[yi].vertical) continue;
            PushoutResult po =
                pushout_over_base(f.points[xi].stalk, f.points[xi].pi,
                                  g.points[yi].stalk, g.points[yi].pi, true);
            Int n = rule ? rule(f, xi, g, yi) : Int(1);
            if (n < 1)
                throw FanError("MissingBranchRule",
                               "branch rule returned a nonpositive count");
            if (ss && n != 1)
                throw FanError("MissingBranchRule",
                               "a semistable factor forces n(x,y) = 1");
            IMat pres = hstack(po.incl1, po.incl2);
            IMat section = right_inverse(pres);
            for (Int b = 0; b < n; ++b) {
                FanPoint pt;
                pt.id = f.points[xi].id + "*" + g.points[yi].id;
                if (n > 1) pt.id += ":b" + b.str();
                pt.stalk = po.monoid;
                pt.pi = po.pi;
                pt.vertical = true;
                ProductPointInfo info;
                info.x = xi;
                info.y = yi;
                info.branch = size_t(b);
                info.n = n;
                info.torsion = po.torsion_order;
                info.incl1 = po.incl1;
                info.incl2 = po.incl2;
                info.section = section;
                fan.points.push_back(std::move(pt));
                out.info.push_back(std::move(info));
            }
        }
    }
    // points over the generic point of the base: single-sided fibres over the
    // horizontal locus of either factor, then joint horizontal pairs
    for (size_t xi = 0; xi < f.points.size(); ++xi) {
        if (f.points[xi].vertical) continue;
        size_t r1 = f.points[xi].stalk.ambient_rank;
        FanPoint pt;
        pt.id = f.points[xi].id + "*~";
        pt.stalk = f.points[xi].stalk;
        pt.pi = zeros(r1);
        pt.vertical = false;
        ProductPointInfo info;
        info.x = xi;
        info.incl1 = identity_mat(r1);
        info.incl2 = IMat(r1, IVec(0));
        info.section = identity_mat(r1);
        fan.points.push_back(std::move(pt));
        out.info.push_back(std::move(info));
    }
    for (size_t yi = 0; yi < g.points.size(); ++yi) {
        if (g.points[yi].vertical) continue;
        size_t r2 = g.points[yi].stalk.ambient_rank;
        FanPoint pt;
        pt.id = "~*" + g.points[yi].id;
        pt.stalk = g.points[yi].stalk;
        pt.pi = zeros(r2);
        pt.vertical = false;
        ProductPointInfo info;
        info.y = yi;
        info.incl1 = IMat(r2, IVec(0));
        info.incl2 = identity_mat(r2);
        info.section = identity_mat(r2);
        fan.points.push_back(std::move(pt));
        out.info.push_back(std::move(info));
    }
    for (size_t xi = 0; xi < f.points.size(); ++xi) {
        if (f.points[xi].vertical) continue;
        for (size_t yi = 0; yi < g.points.size(); ++yi) {
            if (g.points[yi].vertical) continue;
            size_t r1 = f.points[xi].stalk.ambient_rank;
            size_t r2 = g.points[yi].stalk.ambient_rank;
            IMat incl1(r1 + r2, IVec(r1, 0)), incl2(r1 + r2, IVec(r2, 0));
            for (size_t i = 0; i < r1; ++i) incl1[i][i] = 1;
            for (size_t i = 0; i < r2; ++i) incl2[r1 + i][i] = 1;
            IMat gens;
            for (const IVec& v : f.points[xi].stalk.min_generators)
                gens.push_back(mat_apply(incl1, v));
            for (const IVec& v : g.points[yi].stalk.min_generators)
                gens.push_back(mat_apply(incl2, v));
            FanPoint pt;
            pt.id = f.points[xi].id + "*" + g.points[yi].id;
            pt.stalk = monoid_from_generators(r1 + r2, gens);
            pt.pi = zeros(r1 + r2);
            pt.vertical = false;
            ProductPointInfo info;
            info.x = xi;
            info.y = yi;
            info.incl1 = std::move(incl1);
            info.incl2 = std::move(incl2);
            info.section = identity_mat(r1 + r2);
            fan.points.push_back(std::move(pt));
            out.info.push_back(std::move(info));
        }
    }
    // componentwise order and cospecialization
    auto gen_ok = [](const KatoFan& h, std::optional<size_t> sh,
                     std::optional<size_t> dp) {
        if (!dp) return !sh.has_value();
        if (!sh) return true;
        return *sh == *dp || h.cospec.count({*dp, *sh}) > 0;
    };
    for (size_t i = 0; i < fan.points.size(); ++i) {
        for (size_t j = 0; j < fan.points.size(); ++j) {
            if (i == j) continue;
            const ProductPointInfo& di = out.info[i];
            const ProductPointInfo& dj = out.info[j];
            if (!gen_ok(f, dj.x, di.x) || !gen_ok(g, dj.y, di.y)) continue;
            if (di.x == dj.x && di.y == dj.y) continue;  // branch siblings
            if (Int(dj.branch) != Int(di.branch) % dj.n) continue;
            size_t r1d = rank(f, di.x), r2d = rank(g, di.y);
            size_t r1s = rank(f, dj.x), r2s = rank(g, dj.y);
            IMat jmat(r1s + r2s, IVec(r1d + r2d, 0));
            if (dj.x) {
                IMat tx = (*dj.x == *di.x)
                              ? identity_mat(r1d)
                              : f.cospec.at({*di.x, *dj.x}).matrix;
                for (size_t a = 0; a < r1s; ++a)
                    for (size_t b = 0; b < r1d; ++b) jmat[a][b] = tx[a][b];
            }
            if (dj.y) {
                IMat ty = (*dj.y == *di.y)
                              ? identity_mat(r2d)
                              : g.cospec.at({*di.y, *dj.y}).matrix;
                for (size_t a = 0; a < r2s; ++a)
                    for (size_t b = 0; b < r2d; ++b)
                        jmat[r1s + a][r1d + b] = ty[a][b];
            }
            IMat pres_sh = hstack(dj.incl1, dj.incl2);
            IMat tau = mat_mul(mat_mul(pres_sh, jmat), di.section);
            fan.cospec[{i, j}] = MonoidHom{std::move(tau)};
        }
    }
    // realization
    if (f.realized_dim > 0 && g.realized_dim > 0) {
        size_t df = f.realized_dim, dg = g.realized_dim;
        bool ok = true;
        for (const FanPoint& p : f.points)
            if (!p.realized_rays) ok = false;
        for (const FanPoint& p : g.points)
            if (!p.realized_rays) ok = false;
        if (ok) {
            fan.realized_dim = df + dg;
            fan.realized_pi = concat(f.realized_pi, zeros(dg));
            for (size_t i = 0; i < fan.points.size(); ++i) {
                const ProductPointInfo& d = out.info[i];
                IMat rays;
                const IMat* rx =
                    d.x ? &*f.points[*d.x].realized_rays : nullptr;
                const IMat* ry =
                    d.y ? &*g.points[*d.y].realized_rays : nullptr;
                if (rx)
                    for (const IVec& r : *rx)
                        if (dot(f.realized_pi, r) == 0)
                            rays.push_back(concat(r, zeros(dg)));
                if (ry)
                    for (const IVec& s : *ry)
                        if (dot(g.realized_pi, s) == 0)
                            rays.push_back(concat(zeros(df), s));
                if (rx && ry)
                    for (const IVec& r : *rx) {
                        Int a = dot(f.realized_pi, r);
                        if (a <= 0) continue;
                        for (const IVec& s : *ry) {
                            Int b = dot(g.realized_pi, s);
                            if (b <= 0) continue;
                            rays.push_back(
                                primitive(concat(scale(b, r), scale(a, s))));
                        }
                    }
                fan.points[i].realized_rays = dedup_sorted(rays);
            }
        }
    }
    return out;
}

std::optional<std::pair<size_t, size_t>> n_monotonicity_violation(
    const FanProduct& p) {
    for (const auto& [key, hom] : p.fan.cospec) {
        (void)hom;
        if (p.info[key.first].n < p.info[key.second].n) return key;
    }
    return std::nullopt;
}

bool n_monotonicity_check(const FanProduct& p) {
    return !n_monotonicity_violation(p).has_value();
}

namespace {

std::vector<size_t> maximal_points(const KatoFan& f) {
    std::vector<bool> shallow(f.points.size(), false);
    for (const auto& [key, hom] : f.cospec) {
        (void)hom;
        shallow[key.second] = true;
    }
    std::vector<size_t> out;
    for (size_t i = 0; i < f.points.size(); ++i)
        if (!shallow[i]) out.push_back(i);
    return out;
}

KatoFan star_core(const KatoFan& f, const IVec& ray) {
    std::vector<IMat> new_max;
    for (size_t i : maximal_points(f)) {
        if (!f.points[i].realized_rays)
            throw FanError("MissingRealization",
                           "fan has no shared cone realization");
        const IMat& rays = *f.points[i].realized_rays;
        if (!cone_contains_vec(rays, ray)) {
            new_max.push_back(rays);
            continue;
        }
        SpanCone c = span_cone(rays);
        if (c.k == 1) {
            new_max.push_back(rays);
            continue;
        }
        for (const IVec& eta : c.facets) {
            IMat fr;
            for (size_t t = 0; t < c.rays.size(); ++t)
                if (dot(eta, c.red[t]) == 0) fr.push_back(c.rays[t]);
            if (fr.empty() || cone_contains_vec(fr, ray)) continue;
            fr.push_back(primitive(ray));
            new_max.push_back(dedup_sorted(fr));
        }
    }
    return fan_from_cones(f.realized_dim, new_max, f.realized_pi);
}

}  // namespace

KatoFan star_subdivision(const KatoFan& f, size_t point, const IVec& ray) {
    if (f.realized_dim == 0)
        throw FanError("MissingRealization",
                       "fan has no shared cone realization");
    if (point >= f.points.size() || ray.size() != f.realized_dim)
        throw FanError("DimensionMismatch", "bad point index or ray length");
    if (is_zero(ray)) throw FanError("RayOutsideCone", "zero ray");
    if (!f.points[point].realized_rays ||
        !cone_contains_vec(*f.points[point].realized_rays, ray))
        throw FanError("RayOutsideCone",
                       "ray does not lie in the cone of the given point");
    return star_core(f, ray);
}

KatoFan barycentric_subdivision(const KatoFan& f) {
    if (f.realized_dim == 0)
        throw FanError("MissingRealization",
                       "fan has no shared cone realization");
    struct Item {
        size_t dim;
        IMat key;
        IVec center;
    };
    std::vector<Item> items;
    for (const FanPoint& p : f.points) {
        if (!p.realized_rays)
            throw FanError("MissingRealization",
                           "fan has no shared cone realization");
        size_t d = p.stalk.dim();
        if (d < 2) continue;
        IVec center(f.realized_dim, 0);
        for (const IVec& r : *p.realized_rays) center = add(center, r);
        items.push_back({d, *p.realized_rays, primitive(center)});
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.dim != b.dim) return a.dim > b.dim;
        return a.key < b.key;
    });
    KatoFan cur = f;
    for (const Item& it : items) cur = star_core(cur, it.center);
    return cur;
}

bool is_regular(const KatoFan& f) {
    for (const FanPoint& p : f.points)
        if (!is_free(p.stalk)) return false;
    return true;
}

KatoFan resolve(const KatoFan& f, int iteration_cap) {
    if (is_regular(f)) return f;
    if (f.realized_dim == 0)
        throw FanError("MissingRealization",
                       "fan has no shared cone realization");
    KatoFan cur = f;
    for (int iter = 0; iter < iteration_cap; ++iter) {
        if (is_regular(cur)) return cur;
        std::optional<std::pair<Rat, IVec>> best;
        auto consider = [&](const Rat& mult, const IVec& ray) {
            if (!best || mult < best->first ||
                (mult == best->first && ray < best->second))
                best = {mult, ray};
        };
        for (size_t i : maximal_points(cur)) {
            const IMat& rays = *cur.points[i].realized_rays;
            SpanCone c = span_cone(rays);
            if (c.rays.size() != c.k) {
                // not simplicial: pull at an existing ray
                for (const IVec& r : c.rays) consider(Rat(1), r);
                continue;
            }
            Int det = lattice_det(c.red, c.k);
            if (det < 0) det = -det;
            if (det == 1) continue;
            AffineMonoid lat = saturated_cone_monoid(c.k, c.red);
            std::set<IVec> rayset(c.red.begin(), c.red.end());
            for (const IVec& h : lat.sat_hilbert) {
                if (rayset.count(h)) continue;
                RMat a(c.k, RVec(c.k));
                for (size_t u = 0; u < c.k; ++u)
                    for (size_t v = 0; v < c.k; ++v)
                        a[v][u] = Rat(c.red[u][v]);
                RVec b(c.k);
                for (size_t v = 0; v < c.k; ++v) b[v] = Rat(h[v]);
                auto t = solve_rational(a, b);
                Rat mult = 0;
                for (const Rat& x : *t) mult += x;
                IVec amb(cur.realized_dim, 0);
                for (size_t u = 0; u < c.k; ++u)
                    if (h[u] != 0)
                        for (size_t w = 0; w < cur.realized_dim; ++w)
                            amb[w] += h[u] * c.basis[u][w];
                consider(mult, amb);
            }
        }
        if (!best)
            throw FanError("Internal", "no subdivision candidate found");
        cur = star_core(cur, best->second);
    }
    throw FanError("ResolutionCapExceeded",
                   "resolution did not terminate within the iteration cap");
}

std::vector<RVec> realized_support_sample(const KatoFan& f, long denom,
                                          long box) {
    if (f.realized_dim == 0)
        throw FanError("MissingRealization",
                       "fan has no shared cone realization");
    size_t d = f.realized_dim;
    std::vector<SpanCone> cones;
    for (size_t i : maximal_points(f))
        cones.push_back(span_cone(*f.points[i].realized_rays));
    std::set<RVec> out;
    long lim = box * denom;
    std::vector<long> idx(d, -lim);
    while (true) {
        RVec q(d);
        for (size_t j = 0; j < d; ++j) q[j] = Rat(idx[j], denom);
        for (const SpanCone& c : cones) {
            RMat a(d, RVec(c.k));
            for (size_t u = 0; u < c.k; ++u)
                for (size_t v = 0; v < d; ++v) a[v][u] = Rat(c.basis[u][v]);
            auto t = solve_rational(a, q);
            if (!t) continue;
            bool inside = true;
            // check the solved coordinates reproduce q (span membership) and
            // lie inside the cone
            for (size_t v = 0; v < d && inside; ++v) {
                Rat s = 0;
                for (size_t u = 0; u < c.k; ++u) s += (*t)[u] * Rat(c.basis[u][v]);
                if (s != q[v]) inside = false;
            }
            for (const IVec& eta : c.facets) {
                if (!inside) break;
                Rat s = 0;
                for (size_t u = 0; u < c.k; ++u) s += (*t)[u] * Rat(eta[u]);
                if (s < 0) inside = false;
            }
            if (inside) {
                out.insert(q);
                break;
            }
        }
        size_t j = 0;
        while (j < d) {
            if (idx[j] < lim) {
                ++idx[j];
                break;
            }
            idx[j] = -lim;
            ++j;
        }
        if (j == d) break;
    }
    return {out.begin(), out.end()};
}

}  // namespace katoskel
