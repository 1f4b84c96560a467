#include "katoskel/monoid.hpp"

#include <map>
#include <numeric>
#include <set>

namespace katoskel {

namespace {

IMat dedup_sorted(IMat vecs) {
    std::sort(vecs.begin(), vecs.end());
    vecs.erase(std::unique(vecs.begin(), vecs.end()), vecs.end());
    return vecs;
}

// Valid inward facet normals of the cone spanned by gens, assumed
// full-dimensional in Z^d. For pointed cones these are exactly the facets.
IMat compute_facets(const IMat& gens, size_t d) {
    if (d == 0) return {};
    std::set<IVec> normals;
    if (d == 1) {
        bool pos = false, negv = false;
        for (const IVec& g : gens) {
            if (g[0] > 0) pos = true;
            if (g[0] < 0) negv = true;
        }
        if (!negv) normals.insert(IVec{1});
        if (!pos) normals.insert(IVec{-1});
        IMat out(normals.begin(), normals.end());
        return out;
    }
    IMat pool = dedup_sorted(gens);
    size_t n = pool.size();
    std::vector<size_t> idx(d - 1);
    // iterate over (d-1)-subsets of pool
    std::vector<size_t> comb(d - 1);
    std::iota(comb.begin(), comb.end(), 0);
    auto next_comb = [&]() -> bool {
        size_t k = d - 1;
        for (size_t i = k; i-- > 0;) {
            if (comb[i] + (k - i) < n) {
                ++comb[i];
                for (size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    if (n < d - 1) return {};
    do {
        IMat sub;
        for (size_t i : comb) sub.push_back(pool[i]);
        if (rank_of(sub) != d - 1) continue;
        IMat ker = kernel_basis(sub);
        if (ker.size() != 1) continue;
        IVec nrm = ker[0];
        bool pos = false, negv = false;
        for (const IVec& g : gens) {
            Int s = dot(nrm, g);
            if (s > 0) pos = true;
            if (s < 0) negv = true;
        }
        if (pos && negv) continue;
        if (negv) nrm = neg(nrm);
        normals.insert(primitive(nrm));
    } while (next_comb());
    IMat out(normals.begin(), normals.end());
    return out;
}

bool cone_is_pointed(const IMat& gens, const IMat& facets, size_t d) {
    if (d == 0) return true;
    IVec h(d, 0);
    for (const IVec& f : facets) h = add(h, f);
    for (const IVec& g : gens)
        if (!is_zero(g) && dot(h, g) <= 0) return false;
    return true;
}

bool in_cone(const IMat& facets, const IVec& reduced) {
    for (const IVec& f : facets)
        if (dot(f, reduced) < 0) return false;
    return true;
}

IMat compute_extreme_rays(const IMat& gens, const IMat& facets, size_t d) {
    std::set<IVec> rays;
    for (const IVec& g : gens) {
        if (is_zero(g)) continue;
        IMat tight;
        for (const IVec& f : facets)
            if (dot(f, g) == 0) tight.push_back(f);
        size_t need = d == 0 ? 0 : d - 1;
        if (rank_of(tight) == need) rays.insert(primitive(g));
    }
    IMat out(rays.begin(), rays.end());
    return out;
}

// Lattice points of the half-open fundamental parallelepiped of the
// simplicial cone on the given rays (a basis-sized independent set in Z^d).
IMat parallelepiped_points(const IMat& rays) {
    size_t d = rays.size();
    SmithForm sf = smith_form(rays);
    if (sf.invariants.size() != d)
        throw MonoidError("Internal", "degenerate simplicial cone");
    // residue classes of Z^d modulo the row lattice of rays
    IMat points;
    IVec z(d, 0);
    auto emit = [&]() {
        // representative x0 = z * Vinv (rows); move into the parallelepiped
        IVec x(d, 0);
        for (size_t i = 0; i < d; ++i)
            if (z[i] != 0)
                for (size_t j = 0; j < d; ++j) x[j] += z[i] * sf.vinv[i][j];
        // solve x = t * rays over Q, shift by floors
        RMat a(d, RVec(d));
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) a[j][i] = Rat(rays[i][j]);
        RVec b(d);
        for (size_t j = 0; j < d; ++j) b[j] = Rat(x[j]);
        auto t = solve_rational(a, b);
        IVec p = x;
        for (size_t i = 0; i < d; ++i) {
            Int fl = numerator((*t)[i]) / denominator((*t)[i]);
            if ((*t)[i] < 0 && (*t)[i] != Rat(fl)) fl -= 1;
            if (fl != 0)
                for (size_t j = 0; j < d; ++j) p[j] -= fl * rays[i][j];
        }
        if (!is_zero(p)) points.push_back(p);
    };
    // enumerate z in the box of invariant factors
    while (true) {
        emit();
        size_t i = 0;
        while (i < d) {
            z[i] += 1;
            if (z[i] < sf.invariants[i]) break;
            z[i] = 0;
            ++i;
        }
        if (i == d) break;
    }
    return points;
}

IMat hilbert_basis_of_cone(const IMat& extreme, const IMat& facets, size_t d) {
    if (d == 0 || extreme.empty()) return {};
    std::set<IVec> cand(extreme.begin(), extreme.end());
    std::vector<IVec> rays_vec(extreme.begin(), extreme.end());
    for (const auto& simplex : triangulate_cone(rays_vec)) {
        IMat rows(simplex.begin(), simplex.end());
        for (IVec& p : parallelepiped_points(rows)) cand.insert(std::move(p));
    }
    IMat hb;
    for (const IVec& x : cand) {
        bool reducible = false;
        for (const IVec& y : cand) {
            if (y == x) continue;
            if (in_cone(facets, sub(x, y))) { reducible = true; break; }
        }
        if (!reducible) hb.push_back(x);
    }
    return dedup_sorted(hb);
}

// Membership of reduced vectors in the monoid generated by gens (reduced),
// using a strictly positive grading h for termination.
struct MemberTester {
    const IMat& gens;
    IVec h;
    const IMat& facets;
    std::map<IVec, bool> memo;

    bool member(const IVec& x) {
        if (is_zero(x)) return true;
        if (!in_cone(facets, x)) return false;
        auto it = memo.find(x);
        if (it != memo.end()) return it->second;
        bool ok = false;
        Int hx = dot(h, x);
        for (const IVec& g : gens) {
            if (is_zero(g) || dot(h, g) > hx) continue;
            if (member(sub(x, g))) { ok = true; break; }
        }
        memo[x] = ok;
        return ok;
    }
};

IVec grading_from_facets(const IMat& facets, size_t d) {
    IVec h(d, 0);
    for (const IVec& f : facets) h = add(h, f);
    return h;
}

IMat minimal_generators(const IMat& gens_reduced, const IMat& facets,
                        size_t d) {
    IMat pool = dedup_sorted(gens_reduced);
    pool.erase(std::remove_if(pool.begin(), pool.end(), is_zero), pool.end());
    IVec h = grading_from_facets(facets, d);
    // sort by grading then lex so that small elements are kept first
    std::sort(pool.begin(), pool.end(), [&](const IVec& a, const IVec& b) {
        Int ha = dot(h, a), hb = dot(h, b);
        if (ha != hb) return ha < hb;
        return a < b;
    });
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = pool.size(); i-- > 0;) {
            IMat rest;
            for (size_t j = 0; j < pool.size(); ++j)
                if (j != i) rest.push_back(pool[j]);
            MemberTester t{rest, h, facets, {}};
            if (t.member(pool[i])) {
                pool.erase(pool.begin() + i);
                changed = true;
            }
        }
    }
    return dedup_sorted(pool);
}

}  // namespace

IVec AffineMonoid::reduce(const IVec& ambient) const {
    auto c = lattice_coords(group_basis, ambient);
    if (!c) throw MonoidError("OutsideGroup", "vector not in the group lattice");
    return *c;
}

IVec AffineMonoid::unreduce(const IVec& reduced) const {
    IVec v(ambient_rank, 0);
    for (size_t i = 0; i < reduced.size(); ++i)
        if (reduced[i] != 0)
            for (size_t j = 0; j < ambient_rank; ++j)
                v[j] += reduced[i] * group_basis[i][j];
    return v;
}

bool AffineMonoid::cone_contains(const IVec& ambient) const {
    auto c = lattice_coords(group_basis, ambient);
    if (!c) return false;
    return in_cone(facet_normals, *c);
}

bool AffineMonoid::contains(const IVec& ambient) const {
    auto c = lattice_coords(group_basis, ambient);
    if (!c) return false;
    IMat gens_red;
    for (const IVec& g : min_generators) gens_red.push_back(reduce(g));
    MemberTester t{gens_red, grading_from_facets(facet_normals, dim()),
                   facet_normals, {}};
    return t.member(*c);
}

IMat AffineMonoid::canonical_key() const {
    IMat key;
    for (const IVec& g : min_generators) key.push_back(reduce(g));
    return dedup_sorted(key);
}

AffineMonoid monoid_from_generators(size_t rank, const IMat& gens) {
    for (const IVec& g : gens)
        if (g.size() != rank)
            throw MonoidError("DimensionMismatch",
                              "generator length does not match rank");
    AffineMonoid m;
    m.ambient_rank = rank;
    m.generators = dedup_sorted(gens);
    m.generators.erase(
        std::remove_if(m.generators.begin(), m.generators.end(), is_zero),
        m.generators.end());
    m.group_basis = hnf_rows(m.generators);
    size_t d = m.group_basis.size();
    IMat gens_red;
    for (const IVec& g : m.generators) gens_red.push_back(m.reduce(g));
    m.facet_normals = compute_facets(gens_red, d);
    if (!cone_is_pointed(gens_red, m.facet_normals, d))
        throw MonoidError("NotSharp", "monoid contains a nonzero unit");
    m.extreme_rays = compute_extreme_rays(gens_red, m.facet_normals, d);
    IMat hb_red = hilbert_basis_of_cone(m.extreme_rays, m.facet_normals, d);
    for (const IVec& h : hb_red) m.sat_hilbert.push_back(m.unreduce(h));
    m.sat_hilbert = dedup_sorted(m.sat_hilbert);
    IMat min_red = minimal_generators(gens_red, m.facet_normals, d);
    for (const IVec& g : min_red) m.min_generators.push_back(m.unreduce(g));
    m.min_generators = dedup_sorted(m.min_generators);
    m.saturated = true;
    for (const IVec& h : m.sat_hilbert)
        if (!m.contains(h)) { m.saturated = false; break; }
    return m;
}

AffineMonoid saturate(const AffineMonoid& m) {
    if (m.saturated) return m;
    return monoid_from_generators(m.ambient_rank, m.sat_hilbert);
}

bool is_saturated(const AffineMonoid& m) { return m.saturated; }

bool is_free(const AffineMonoid& m) {
    if (!m.saturated) return false;
    if (m.sat_hilbert.size() != m.dim()) return false;
    IMat red;
    for (const IVec& h : m.sat_hilbert) red.push_back(m.reduce(h));
    Int det = lattice_det(red, m.dim());
    return det == 1 || det == -1;
}

std::vector<Face> faces(const AffineMonoid& m) {
    IMat min_red;
    for (const IVec& g : m.min_generators) min_red.push_back(m.reduce(g));
    std::set<std::vector<size_t>> seen;
    std::vector<std::vector<size_t>> queue;
    std::vector<size_t> full(min_red.size());
    std::iota(full.begin(), full.end(), 0);
    seen.insert(full);
    queue.push_back(full);
    while (!queue.empty()) {
        std::vector<size_t> cur = queue.back();
        queue.pop_back();
        for (const IVec& f : m.facet_normals) {
            std::vector<size_t> nxt;
            for (size_t i : cur)
                if (dot(f, min_red[i]) == 0) nxt.push_back(i);
            if (seen.insert(nxt).second) queue.push_back(nxt);
        }
    }
    std::vector<std::vector<size_t>> sorted(seen.begin(), seen.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return a < b;
              });
    std::vector<Face> out;
    for (auto& s : sorted) out.push_back(Face{std::move(s)});
    return out;
}

bool is_face_of(const AffineMonoid& m, const Face& f) {
    for (size_t i : f.members)
        if (i >= m.min_generators.size()) return false;
    std::set<size_t> ms(f.members.begin(), f.members.end());
    if (ms.size() != f.members.size()) return false;
    IMat min_red;
    for (const IVec& g : m.min_generators) min_red.push_back(m.reduce(g));
    if (ms.size() == min_red.size()) return true;  // the full monoid
    IVec n(m.dim(), 0);
    for (const IVec& eta : m.facet_normals) {
        bool vanishes = true;
        for (size_t i : ms)
            if (dot(eta, min_red[i]) != 0) { vanishes = false; break; }
        if (vanishes) n = add(n, eta);
    }
    for (size_t i = 0; i < min_red.size(); ++i) {
        Int v = dot(n, min_red[i]);
        if (ms.count(i)) {
            if (v != 0) return false;
        } else {
            if (v <= 0) return false;
        }
    }
    return true;
}

std::pair<AffineMonoid, MonoidHom> quotient_by_face(const AffineMonoid& m,
                                                    const Face& f) {
    if (!is_face_of(m, f))
        throw MonoidError("NotAFace", "member set is not a face");
    size_t r = m.ambient_rank;
    if (f.members.empty()) {
        return {m, MonoidHom{identity_mat(r)}};
    }
    IMat span;
    for (size_t i : f.members) span.push_back(m.min_generators[i]);
    IMat w = saturate_lattice(span);  // k x r, saturated
    size_t k = w.size();
    SmithForm sf = smith_form(w);
    IMat proj(r - k, IVec(r, 0));
    for (size_t j = 0; j + k < r; ++j)
        for (size_t i = 0; i < r; ++i) proj[j][i] = sf.v[i][k + j];
    IMat images;
    for (const IVec& g : m.min_generators) {
        IVec img = mat_apply(proj, g);
        if (!is_zero(img)) images.push_back(img);
    }
    AffineMonoid q = saturate(monoid_from_generators(r - k, images));
    return {q, MonoidHom{proj}};
}

PushoutResult pushout_over_base(const AffineMonoid& q1, const IVec& pi1,
                                const AffineMonoid& q2, const IVec& pi2,
                                bool saturated) {
    if (is_zero(pi1) || is_zero(pi2))
        throw MonoidError("ZeroUniformizer", "uniformizer image is zero");
    if (!q1.contains(pi1) || !q2.contains(pi2))
        throw MonoidError("ZeroUniformizer",
                          "uniformizer image is not a monoid element");
    size_t r1 = q1.ambient_rank, r2 = q2.ambient_rank;
    IVec rel(r1 + r2, 0);
    for (size_t i = 0; i < r1; ++i) rel[i] = pi1[i];
    for (size_t i = 0; i < r2; ++i) rel[r1 + i] = -pi2[i];
    Int torsion = content(rel);
    IVec rel_prim = primitive(rel);
    QuotientByVector qv = quotient_by_primitive(rel_prim);
    size_t n = r1 + r2 - 1;
    IMat incl1(n, IVec(r1, 0)), incl2(n, IVec(r2, 0));
    for (size_t j = 0; j < n; ++j) {
        for (size_t i = 0; i < r1; ++i) incl1[j][i] = qv.projection[j][i];
        for (size_t i = 0; i < r2; ++i) incl2[j][i] = qv.projection[j][r1 + i];
    }
    IMat images;
    for (const IVec& g : q1.min_generators) images.push_back(mat_apply(incl1, g));
    for (const IVec& g : q2.min_generators) images.push_back(mat_apply(incl2, g));
    AffineMonoid p = monoid_from_generators(n, images);
    if (saturated) p = saturate(p);
    PushoutResult res;
    res.pi = mat_apply(incl1, pi1);
    res.monoid = std::move(p);
    res.torsion_order = torsion;
    res.incl1 = std::move(incl1);
    res.incl2 = std::move(incl2);
    return res;
}

std::vector<Int> ray_valuations(const AffineMonoid& q, const IVec& pi) {
    IVec red = q.reduce(pi);
    std::vector<Int> vals;
    for (const IVec& eta : q.facet_normals) vals.push_back(dot(eta, red));
    return vals;
}

Int saturation_index(const AffineMonoid& q, const IVec& pi) {
    if (is_zero(pi))
        throw MonoidError("ZeroUniformizer", "uniformizer image is zero");
    if (!q.contains(pi))
        throw MonoidError("ZeroUniformizer",
                          "uniformizer image is not a monoid element");
    Int l = 1;
    for (const Int& v : ray_valuations(q, pi))
        if (v > 0) l = ilcm(l, v);
    return l;
}

IMat cone_facet_normals(size_t dim, const IMat& rays) {
    for (const IVec& r : rays)
        if (r.size() != dim)
            throw MonoidError("DimensionMismatch",
                              "ray length does not match dimension");
    if (rank_of(rays) != dim)
        throw MonoidError("DimensionMismatch", "cone is not full-dimensional");
    IMat facets = compute_facets(rays, dim);
    if (!cone_is_pointed(rays, facets, dim))
        throw MonoidError("NotSharp", "cone contains a line");
    return facets;
}

IMat cone_extreme_rays_full(size_t dim, const IMat& rays) {
    IMat facets = cone_facet_normals(dim, rays);
    return compute_extreme_rays(rays, facets, dim);
}

AffineMonoid saturated_cone_monoid(size_t dim, const IMat& rays) {
    IMat facets = cone_facet_normals(dim, rays);
    IMat ext = compute_extreme_rays(rays, facets, dim);
    IMat hb = hilbert_basis_of_cone(ext, facets, dim);
    return monoid_from_generators(dim, hb);
}

std::vector<std::vector<IVec>> triangulate_cone(const std::vector<IVec>& rays) {
    std::vector<std::vector<IVec>> out;
    if (rays.empty()) return out;
    size_t d = rays[0].size();
    IMat pool;
    for (const IVec& r : rays) pool.push_back(primitive(r));
    pool = dedup_sorted(pool);
    if (rank_of(pool) != d)
        throw MonoidError("Internal", "cone is not full-dimensional");
    if (pool.size() == d) {
        out.push_back(std::vector<IVec>(pool.begin(), pool.end()));
        return out;
    }
    IMat facets = compute_facets(pool, d);
    const IVec& apex = pool[0];
    for (const IVec& eta : facets) {
        if (dot(eta, apex) == 0) continue;
        IMat sub;
        for (const IVec& r : pool)
            if (dot(eta, r) == 0) sub.push_back(r);
        IMat basis = saturate_lattice(sub);
        std::vector<IVec> sub_red;
        for (const IVec& r : sub) sub_red.push_back(*lattice_coords(basis, r));
        for (const auto& simplex : triangulate_cone(sub_red)) {
            std::vector<IVec> lifted;
            lifted.push_back(apex);
            for (const IVec& s : simplex) {
                IVec amb(d, 0);
                for (size_t i = 0; i < s.size(); ++i)
                    if (s[i] != 0)
                        for (size_t j = 0; j < d; ++j)
                            amb[j] += s[i] * basis[i][j];
                lifted.push_back(amb);
            }
            out.push_back(std::move(lifted));
        }
    }
    return out;
}

Int cone_normalized_volume(const std::vector<IVec>& rays) {
    if (rays.empty()) return 0;
    size_t d = rays[0].size();
    Int vol = 0;
    for (const auto& simplex : triangulate_cone(rays)) {
        IMat rows(simplex.begin(), simplex.end());
        Int det = lattice_det(rows, d);
        vol += abs(det);
    }
    return vol;
}

bool bipartite_unimodularity_check(
    int n1, int n2,
    const std::vector<std::vector<std::pair<int, int>>>& trees) {
    if (n1 < 1 || n2 < 1)
        throw MonoidError("DimensionMismatch", "sides must be positive");
    size_t nv = size_t(n1) + size_t(n2);
    auto xij = [&](int i, int j) {
        IVec v(nv, 0);
        v[size_t(i)] = 1;
        v[size_t(n1) + size_t(j)] = 1;
        return v;
    };
    IMat all;
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) all.push_back(xij(i, j));
    IMat basis = hnf_rows(all);
    size_t d = basis.size();  // n1 + n2 - 1
    std::vector<IVec> all_red;
    for (const IVec& v : all) all_red.push_back(*lattice_coords(basis, v));
    Int total = cone_normalized_volume(all_red);
    Int covered = 0;
    bool unimodular = true;
    for (const auto& tree : trees) {
        if (tree.size() != d)
            throw MonoidError("NotSpanningTree", "wrong number of edges");
        std::vector<size_t> parent(nv);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<size_t(size_t)> find = [&](size_t a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        IMat rows;
        for (auto [i, j] : tree) {
            if (i < 0 || i >= n1 || j < 0 || j >= n2)
                throw MonoidError("NotSpanningTree", "edge out of range");
            size_t a = find(size_t(i)), b = find(size_t(n1) + size_t(j));
            if (a == b)
                throw MonoidError("NotSpanningTree", "edge set has a cycle");
            parent[a] = b;
            rows.push_back(*lattice_coords(basis, xij(i, j)));
        }
        size_t roots = 0;
        for (size_t v = 0; v < nv; ++v)
            if (find(v) == v) ++roots;
        if (roots != 1)
            throw MonoidError("NotSpanningTree", "edge set is not spanning");
        Int det = abs(lattice_det(rows, d));
        if (det == 0)
            throw MonoidError("NotASubdivision", "degenerate tree cone");
        covered += det;
        if (det != 1) unimodular = false;
    }
    if (covered != total)
        throw MonoidError("NotASubdivision",
                          "tree cones do not tile the bipartite cone");
    return unimodular;
}

}  // namespace katoskel
