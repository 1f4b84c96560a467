// Brute-force oracles used to pin expected values independently of the
// library's algorithms. Everything here enumerates lattice points directly.
#pragma once

#include <map>
#include <set>
#include <vector>

#include "katoskel/monoid.hpp"

namespace katoskel::oracle {

// All lattice points of the cone (reduced coordinates) inside the zonotope
// spanned by the extreme rays; every Hilbert basis element lies there.
inline IMat cone_points_in_zonotope(const AffineMonoid& m) {
    size_t d = m.dim();
    if (d == 0) return {};
    IVec lo(d, 0), hi(d, 0);
    for (const IVec& r : m.extreme_rays)
        for (size_t j = 0; j < d; ++j) {
            if (r[j] < 0) lo[j] += r[j];
            if (r[j] > 0) hi[j] += r[j];
        }
    IMat pts;
    IVec x = lo;
    while (true) {
        bool inside = true;
        for (const IVec& f : m.facet_normals)
            if (dot(f, x) < 0) { inside = false; break; }
        if (inside && !is_zero(x)) pts.push_back(x);
        size_t i = 0;
        while (i < d) {
            x[i] += 1;
            if (x[i] <= hi[i]) break;
            x[i] = lo[i];
            ++i;
        }
        if (i == d) break;
    }
    return pts;
}

// Brute-force Hilbert basis of the saturation: irreducible elements among the
// zonotope points, in reduced coordinates.
inline IMat hilbert_basis_brute(const AffineMonoid& m) {
    IMat pts = cone_points_in_zonotope(m);
    std::set<IVec> pset(pts.begin(), pts.end());
    IMat hb;
    for (const IVec& x : pts) {
        bool reducible = false;
        for (const IVec& y : pts) {
            if (y == x) continue;
            IVec z = sub(x, y);
            if (is_zero(z)) continue;
            bool in = true;
            for (const IVec& f : m.facet_normals)
                if (dot(f, z) < 0) { in = false; break; }
            if (in) { reducible = true; break; }
        }
        if (!reducible) hb.push_back(x);
    }
    std::sort(hb.begin(), hb.end());
    return hb;
}

// Reduced sorted Hilbert basis as computed by the library, for comparison.
inline IMat hilbert_basis_reduced(const AffineMonoid& m) {
    IMat out;
    for (const IVec& h : m.sat_hilbert) out.push_back(m.reduce(h));
    std::sort(out.begin(), out.end());
    return out;
}

// Monoid elements (reduced) of grading at most `bound` under the grading
// h = sum of facet normals.
inline std::set<IVec> monoid_elements_bounded(const AffineMonoid& m,
                                              const Int& bound) {
    size_t d = m.dim();
    IVec h(d, 0);
    for (const IVec& f : m.facet_normals) h = add(h, f);
    IMat gens;
    for (const IVec& g : m.min_generators) gens.push_back(m.reduce(g));
    std::set<IVec> done;
    std::vector<IVec> frontier{IVec(d, 0)};
    done.insert(IVec(d, 0));
    while (!frontier.empty()) {
        IVec cur = frontier.back();
        frontier.pop_back();
        for (const IVec& g : gens) {
            IVec nxt = add(cur, g);
            if (dot(h, nxt) > bound) continue;
            if (done.insert(nxt).second) frontier.push_back(nxt);
        }
    }
    return done;
}

// Brute-force face test straight from the definition: F (the submonoid
// generated by the member vectors) is a face iff whenever a + b lands in F
// for monoid elements a, b, both lie in F. Checked on a bounded enumeration.
inline bool is_face_brute(const AffineMonoid& m,
                          const std::vector<size_t>& members) {
    size_t d = m.dim();
    IVec h(d, 0);
    for (const IVec& f : m.facet_normals) h = add(h, f);
    Int maxg = 0;
    IMat gens;
    for (const IVec& g : m.min_generators) {
        IVec r = m.reduce(g);
        maxg = std::max(maxg, dot(h, r));
        gens.push_back(r);
    }
    Int bound = 3 * maxg;
    std::set<IVec> all = monoid_elements_bounded(m, bound);
    // member submonoid, same bound
    std::set<IVec> fset;
    {
        std::vector<IVec> frontier{IVec(d, 0)};
        fset.insert(IVec(d, 0));
        while (!frontier.empty()) {
            IVec cur = frontier.back();
            frontier.pop_back();
            for (size_t i : members) {
                IVec nxt = add(cur, gens[i]);
                if (dot(h, nxt) > bound) continue;
                if (fset.insert(nxt).second) frontier.push_back(nxt);
            }
        }
    }
    for (const IVec& a : all)
        for (const IVec& b : all) {
            IVec s = add(a, b);
            if (dot(h, s) > bound) continue;
            if (fset.count(s) && (!fset.count(a) || !fset.count(b)))
                return false;
        }
    return true;
}

}  // namespace katoskel::oracle
