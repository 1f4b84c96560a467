#include "katoskel/weight.hpp"

#include <algorithm>
#include <set>

namespace katoskel {

namespace {

Rat rrdot(const RVec& a, const RVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Height-one points through x: x itself when it has rank one, otherwise its
// rank-one generizations. Returns pairs (point index, functional row).
std::vector<std::pair<size_t, IVec>> height_one_data(const KatoFan& fan,
                                                     size_t x) {
    std::vector<std::pair<size_t, IVec>> out;
    if (fan.points[x].stalk.ambient_rank == 1) {
        out.push_back({x, IVec{1}});
        return out;
    }
    for (size_t r : fan.rank1_generizations(x))
        out.push_back({r, fan.cospec.at({x, r}).matrix[0]});
    return out;
}

Rat mult_of(const LogDivisor& d, const std::string& id) {
    auto it = d.mults.find(id);
    return it == d.mults.end() ? Rat(0) : it->second;
}

}  // namespace

Rat PLWeight::value(size_t face, const RVec& alpha) const {
    return Rat(m) + rrdot(linear[face], alpha);
}

Rat PLWeight::slope(size_t face, const IVec& ray) const {
    Rat s = 0;
    for (size_t i = 0; i < ray.size(); ++i) s += linear[face][i] * Rat(ray[i]);
    return s;
}

PLWeight weight_function(const PolyhedralComplex& sk, const LogDivisor& d) {
    if (d.m < 1)
        throw WeightError("InvalidIndex", "the index m must be positive");
    for (const auto& [id, a] : d.mults) {
        (void)a;
        bool found = false;
        for (const FanPoint& p : sk.fan.points)
            if (p.id == id) {
                if (p.stalk.ambient_rank != 1)
                    throw WeightError("UnsupportedDivisorComponent",
                                      "divisor key " + id +
                                          " is not a height-one point");
                found = true;
            }
        if (!found)
            throw WeightError("UnsupportedDivisorComponent",
                              "divisor key " + id + " is not a fan point");
    }
    PLWeight w;
    w.m = d.m;
    for (const SkeletonFace& face : sk.faces) {
        auto rows = height_one_data(sk.fan, face.fan_point);
        RMat a;
        RVec b;
        for (const auto& [pt, n] : rows) {
            RVec row(n.size());
            for (size_t j = 0; j < n.size(); ++j) row[j] = Rat(n[j]);
            a.push_back(std::move(row));
            b.push_back(mult_of(d, sk.fan.points[pt].id));
        }
        auto sol = solve_rational(a, b);
        if (!sol)
            throw WeightError("InconsistentDivisor",
                              "multiplicities do not define a divisor at " +
                                  face.id);
        w.linear.push_back(*sol);
    }
    // continuity across gluing: the divisor elements must be compatible with
    // the cospecialization maps
    for (const auto& [key, emb] : sk.inclusions) {
        (void)emb;
        const IMat& tau = sk.fan.cospec
                              .at({sk.faces[key.first].fan_point,
                                   sk.faces[key.second].fan_point})
                              .matrix;
        RVec mapped(tau.size(), Rat(0));
        for (size_t i = 0; i < tau.size(); ++i)
            for (size_t j = 0; j < tau[i].size(); ++j)
                mapped[i] += Rat(tau[i][j]) * w.linear[key.first][j];
        if (mapped != w.linear[key.second])
            throw WeightError("InconsistentDivisor",
                              "weight is discontinuous across the gluing of " +
                                  sk.faces[key.first].id + " and " +
                                  sk.faces[key.second].id);
    }
    return w;
}

MinimalityLocus minimality_locus(const PolyhedralComplex& sk,
                                 const PLWeight& w) {
    MinimalityLocus out;
    std::optional<Rat> min_value;
    for (size_t i = 0; i < sk.faces.size(); ++i) {
        for (const IVec& r : sk.faces[i].rays)
            if (w.slope(i, r) < 0) out.minus_infinity = true;
        for (const RVec& v : sk.faces[i].vertices) {
            Rat val = w.value(i, v);
            if (!min_value || val < *min_value) min_value = val;
        }
    }
    if (out.minus_infinity || !min_value) return out;
    out.min_value = *min_value;
    for (size_t i = 0; i < sk.faces.size(); ++i) {
        bool flat = true;
        for (const RVec& v : sk.faces[i].vertices)
            if (w.value(i, v) != *min_value) flat = false;
        for (const IVec& r : sk.faces[i].rays)
            if (w.slope(i, r) != 0) flat = false;
        if (flat) out.faces.push_back(i);
    }
    return out;
}

LogDivisor normalize_divisor(const LogDivisor& d,
                             const PolyhedralComplex& sk) {
    // vertical height-one points with their uniformizer multiplicities
    std::vector<std::pair<std::string, Int>> vertical;
    std::set<std::string> vertical_ids;
    for (const FanPoint& p : sk.fan.points)
        if (p.vertical && p.stalk.ambient_rank == 1) {
            vertical.push_back({p.id, p.pi[0]});
            vertical_ids.insert(p.id);
        }
    if (vertical.empty()) return d;
    std::optional<Rat> tmin;
    for (const auto& [id, wmult] : vertical) {
        Rat t = mult_of(d, id) / Rat(wmult);
        if (!tmin || t < *tmin) tmin = t;
    }
    Int scale = denominator(*tmin);
    for (const auto& [id, a] : d.mults) {
        (void)id;
        scale = ilcm(scale, denominator(a));
    }
    Int n = numerator(*tmin) * (scale / denominator(*tmin));
    LogDivisor out;
    out.m = d.m * scale;
    for (const auto& [id, a] : d.mults)
        if (!vertical_ids.count(id)) {
            Rat v = a * Rat(scale);
            if (v != 0) out.mults[id] = v;
        }
    for (const auto& [id, wmult] : vertical) {
        Rat v = mult_of(d, id) * Rat(scale) - Rat(n * wmult);
        if (v != 0) out.mults[id] = v;
    }
    return out;
}

std::vector<size_t> essential_skeleton(const PolyhedralComplex& sk,
                                       const std::vector<LogDivisor>& forms) {
    if (forms.empty())
        throw WeightError("EmptyFormList",
                          "essential skeleton needs at least one form");
    std::set<size_t> faces;
    for (const LogDivisor& d : forms) {
        MinimalityLocus l = minimality_locus(sk, weight_function(sk, d));
        if (l.minus_infinity) continue;  // unbounded weight contributes nothing
        faces.insert(l.faces.begin(), l.faces.end());
    }
    return std::vector<size_t>(faces.begin(), faces.end());
}

LogDivisor product_divisor(const FanProduct& p, const LogDivisor& dx,
                           const LogDivisor& dy) {
    if (dx.m != dy.m)
        throw WeightError("IndexMismatch",
                          "product forms must share the same index");
    LogDivisor out;
    out.m = dx.m;
    for (size_t i = 0; i < p.fan.points.size(); ++i) {
        const FanPoint& z = p.fan.points[i];
        if (z.stalk.ambient_rank != 1) continue;
        const ProductPointInfo& info = p.info[i];
        Rat v = 0;
        if (info.x && !info.incl1[0].empty())
            v += Rat(info.incl1[0][0]) *
                 mult_of(dx, p.factor_x->points[*info.x].id);
        if (info.y && !info.incl2[0].empty())
            v += Rat(info.incl2[0][0]) *
                 mult_of(dy, p.factor_y->points[*info.y].id);
        if (v != 0) out.mults[z.id] = v;
    }
    return out;
}

bool product_weight_check(const ProductSkeleton& ps, const PLWeight& wx,
                          const PLWeight& wy, const PLWeight& wz,
                          std::string* witness) {
    auto fail = [&](const std::string& msg) {
        if (witness) *witness = msg;
        return false;
    };
    if (wx.m != wy.m || wx.m != wz.m)
        return fail("the three weights have different indices");
    for (size_t i = 0; i < ps.complex.faces.size(); ++i) {
        const SkeletonFace& f = ps.complex.faces[i];
        size_t fx = ps.face_x[i], fy = ps.face_y[i];
        for (const RVec& v : f.vertices) {
            Rat lhs = wz.value(i, v);
            Rat rhs = wx.value(fx, mat_apply_r(ps.map_x[i], v)) +
                      wy.value(fy, mat_apply_r(ps.map_y[i], v)) - Rat(wz.m);
            if (lhs != rhs)
                return fail("weight identity fails at a vertex of " + f.id);
        }
        for (const IVec& r : f.rays) {
            Rat lhs = wz.slope(i, r);
            Rat rhs = wx.slope(fx, mat_apply(ps.map_x[i], r)) +
                      wy.slope(fy, mat_apply(ps.map_y[i], r));
            if (lhs != rhs)
                return fail("weight identity fails on a ray of " + f.id);
        }
    }
    MinimalityLocus lz = minimality_locus(ps.complex, wz);
    MinimalityLocus lx = minimality_locus(ps.skx, wx);
    MinimalityLocus ly = minimality_locus(ps.sky, wy);
    if (lz.minus_infinity || lx.minus_infinity || ly.minus_infinity)
        return fail("a minimality locus is unbounded below");
    std::set<std::pair<size_t, size_t>> pairs, expected;
    for (size_t f : lz.faces) pairs.insert({ps.face_x[f], ps.face_y[f]});
    for (size_t i : lx.faces)
        for (size_t j : ly.faces) expected.insert({i, j});
    if (pairs != expected || lz.faces.size() != expected.size())
        return fail("minimality loci do not correspond under the product");
    if (witness) witness->clear();
    return true;
}

}  // namespace katoskel
