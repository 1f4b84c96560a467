#include "katoskel/topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace katoskel {

namespace {

using Simplex = std::vector<size_t>;

std::string join_labels(const std::vector<std::string>& labels,
                        const Simplex& s) {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ".";
        out += labels.empty() ? std::to_string(s[i]) : labels[s[i]];
    }
    return out;
}

Simplex apply_perm(const std::vector<size_t>& g, const Simplex& s) {
    Simplex t(s.size());
    for (size_t i = 0; i < s.size(); ++i) t[i] = g[s[i]];
    return t;
}

// Parity of the permutation sorting t; -1 for odd, +1 for even.
int sort_sign(Simplex t) {
    int sign = 1;
    for (size_t i = 0; i < t.size(); ++i)
        for (size_t j = i + 1; j < t.size(); ++j)
            if (t[i] > t[j]) {
                std::swap(t[i], t[j]);
                sign = -sign;
            }
    return sign;
}

void validate_action(const SimplicialComplex& k, const GroupAction& a) {
    if (a.perms.empty())
        throw TopologyError("InvalidAction", "the group is empty");
    std::set<std::vector<size_t>> elems;
    bool has_id = false;
    for (const auto& g : a.perms) {
        if (g.size() != k.num_vertices)
            throw TopologyError("InvalidAction",
                                "permutation size does not match the complex");
        std::vector<bool> seen(g.size(), false);
        bool id = true;
        for (size_t i = 0; i < g.size(); ++i) {
            if (g[i] >= g.size() || seen[g[i]])
                throw TopologyError("InvalidAction",
                                    "element is not a permutation");
            seen[g[i]] = true;
            if (g[i] != i) id = false;
        }
        has_id = has_id || id;
        elems.insert(g);
    }
    if (!has_id)
        throw TopologyError("InvalidAction", "the identity is missing");
    for (const auto& g : a.perms)
        for (const auto& h : a.perms) {
            std::vector<size_t> gh(g.size());
            for (size_t i = 0; i < g.size(); ++i) gh[i] = g[h[i]];
            if (!elems.count(gh))
                throw TopologyError("InvalidAction",
                                    "the group is not closed under composition");
        }
    auto sims = k.all_simplices();
    std::vector<std::set<Simplex>> by_dim;
    for (const auto& level : sims)
        by_dim.emplace_back(level.begin(), level.end());
    for (const auto& g : a.perms)
        for (size_t d = 0; d < sims.size(); ++d)
            for (const Simplex& s : sims[d]) {
                Simplex t = apply_perm(g, s);
                std::sort(t.begin(), t.end());
                if (std::unique(t.begin(), t.end()) != t.end() ||
                    !by_dim[d].count(t))
                    throw TopologyError(
                        "InvalidAction",
                        "an element does not map simplices to simplices");
            }
}

std::vector<size_t> orbit_reps_of_vertices(const SimplicialComplex& k,
                                           const GroupAction& a) {
    std::vector<size_t> rep(k.num_vertices);
    for (size_t v = 0; v < k.num_vertices; ++v) {
        size_t best = v;
        for (const auto& g : a.perms) best = std::min(best, g[v]);
        rep[v] = best;
    }
    return rep;
}

// Regularity conditions for the vertex-orbit quotient to be a simplicial
// complex with the right geometry:
// (a) the vertices of every simplex lie in distinct orbits,
// (c) any element stabilizing a simplex setwise fixes it pointwise,
// (b) simplices with the same orbit image lie in a single orbit.
bool action_is_regular(const SimplicialComplex& k, const GroupAction& a,
                       bool require_b) {
    auto sims = k.all_simplices();
    auto rep = orbit_reps_of_vertices(k, a);
    for (const auto& level : sims)
        for (const Simplex& s : level) {
            std::set<size_t> reps;
            for (size_t v : s) reps.insert(rep[v]);
            if (reps.size() != s.size()) return false;  // (a)
            for (const auto& g : a.perms) {
                Simplex t = apply_perm(g, s);
                std::sort(t.begin(), t.end());
                if (t == s)
                    for (size_t v : s)
                        if (g[v] != v) return false;  // (c)
            }
        }
    if (!require_b) return true;
    for (const auto& level : sims) {
        std::map<Simplex, std::vector<const Simplex*>> by_image;
        for (const Simplex& s : level) {
            Simplex img;
            for (size_t v : s) img.push_back(rep[v]);
            std::sort(img.begin(), img.end());
            by_image[img].push_back(&s);
        }
        for (const auto& [img, members] : by_image) {
            (void)img;
            if (members.size() < 2) continue;
            std::set<Simplex> orbit;
            for (const auto& g : a.perms) {
                Simplex t = apply_perm(g, *members[0]);
                std::sort(t.begin(), t.end());
                orbit.insert(t);
            }
            for (const Simplex* s : members)
                if (!orbit.count(*s)) return false;  // (b)
        }
    }
    return true;
}

// Counts simplices with an early exit, so oversized complexes are rejected
// without a full enumeration.
bool simplices_exceed(const SimplicialComplex& k, size_t cap) {
    if (k.maximal.size() > cap) return true;
    std::set<Simplex> seen;
    for (const Simplex& s : k.maximal)
        for (size_t mask = 1; mask < (size_t(1) << s.size()); ++mask) {
            Simplex sub;
            for (size_t i = 0; i < s.size(); ++i)
                if (mask & (size_t(1) << i)) sub.push_back(s[i]);
            seen.insert(std::move(sub));
            if (seen.size() > cap) return true;
        }
    return false;
}

// Subdivide until the requested regularity holds; shared by group_quotient
// and the chain-level quotient.
std::pair<SimplicialComplex, GroupAction> regularize(
    const SimplicialComplex& k, const GroupAction& a, bool require_b,
    int max_subdivisions, size_t simplex_cap) {
    validate_action(k, a);
    SimplicialComplex cur = k;
    GroupAction act = a;
    for (int iter = 0;; ++iter) {
        if (simplices_exceed(cur, simplex_cap))
            throw TopologyError("SizeCapExceeded",
                                "the subdivided complex exceeds the simplex cap");
        if (action_is_regular(cur, act, require_b)) return {cur, act};
        if (iter == max_subdivisions)
            throw TopologyError(
                "RegularityCapExceeded",
                "the action is not regular after the allowed subdivisions");
        std::tie(cur, act) = barycentric_subdivision(cur, act);
    }
}

// Orbit structure of the simplices of a partially regular action: canonical
// representative and the sign of the carrying element per simplex.
struct OrbitData {
    std::vector<std::vector<Simplex>> reps;  // per dimension, sorted
    // per dimension: simplex -> (index of representative, sign)
    std::vector<std::map<Simplex, std::pair<size_t, int>>> of;
};

OrbitData orbit_data(const SimplicialComplex& k, const GroupAction& a) {
    auto sims = k.all_simplices();
    OrbitData out;
    out.reps.resize(sims.size());
    out.of.resize(sims.size());
    for (size_t d = 0; d < sims.size(); ++d) {
        std::map<Simplex, std::pair<Simplex, int>> canon;  // simplex -> rep, sign
        for (const Simplex& s : sims[d]) {
            Simplex best;
            int sign = 1;
            for (const auto& g : a.perms) {
                Simplex t = apply_perm(g, s);
                int sg = sort_sign(t);
                std::sort(t.begin(), t.end());
                if (best.empty() || t < best) {
                    best = t;
                    sign = sg;
                }
            }
            canon[s] = {best, sign};
        }
        std::set<Simplex> rep_set;
        for (const auto& [s, rs] : canon) {
            (void)s;
            rep_set.insert(rs.first);
        }
        out.reps[d].assign(rep_set.begin(), rep_set.end());
        for (const auto& [s, rs] : canon) {
            size_t idx = size_t(std::lower_bound(out.reps[d].begin(),
                                                 out.reps[d].end(), rs.first) -
                                out.reps[d].begin());
            out.of[d][s] = {idx, rs.second};
        }
    }
    return out;
}

// Sparse integer Smith reduction: returns the rank and the invariant factors
// greater than one. Unit pivots are eliminated first to avoid coefficient
// growth; the small residue goes through the dense routine.
std::pair<size_t, std::vector<Int>> sparse_smith(
    std::vector<std::map<size_t, Int>> cols, size_t nrows) {
    size_t ncols = cols.size();
    std::vector<std::set<size_t>> row_cols(nrows);
    for (size_t c = 0; c < ncols; ++c)
        for (const auto& [r, v] : cols[c]) {
            (void)v;
            row_cols[r].insert(c);
        }
    std::vector<bool> col_active(ncols, true), row_active(nrows, true);
    using Key = std::pair<size_t, size_t>;  // (column length, column index)
    std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
    for (size_t c = 0; c < ncols; ++c)
        if (!cols[c].empty()) heap.push({cols[c].size(), c});
    size_t rank = 0;
    while (!heap.empty()) {
        auto [len, c] = heap.top();
        heap.pop();
        if (!col_active[c] || cols[c].empty() || cols[c].size() != len)
            continue;
        size_t pivot_row = nrows;
        size_t best_cost = 0;
        for (const auto& [r, v] : cols[c])
            if (v == 1 || v == -1) {
                size_t cost = row_cols[r].size();
                if (pivot_row == nrows || cost < best_cost ||
                    (cost == best_cost && r < pivot_row)) {
                    pivot_row = r;
                    best_cost = cost;
                }
            }
        if (pivot_row == nrows) continue;  // no unit entry; leave for residue
        Int eps = cols[c].at(pivot_row);
        std::vector<size_t> touched(row_cols[pivot_row].begin(),
                                    row_cols[pivot_row].end());
        for (size_t c2 : touched) {
            if (c2 == c || !col_active[c2]) continue;
            Int coeff = cols[c2].at(pivot_row) * eps;
            for (const auto& [r, v] : cols[c]) {
                auto it = cols[c2].find(r);
                if (it == cols[c2].end()) {
                    cols[c2][r] = -coeff * v;
                    row_cols[r].insert(c2);
                } else {
                    it->second -= coeff * v;
                    if (it->second == 0) {
                        cols[c2].erase(it);
                        row_cols[r].erase(c2);
                    }
                }
            }
            if (!cols[c2].empty()) heap.push({cols[c2].size(), c2});
        }
        for (const auto& [r, v] : cols[c]) {
            (void)v;
            row_cols[r].erase(c);
        }
        col_active[c] = false;
        row_active[pivot_row] = false;
        cols[c].clear();
        ++rank;
    }
    // residue: the remaining active columns restricted to active rows
    std::vector<size_t> res_cols, res_rows;
    std::map<size_t, size_t> row_index;
    for (size_t c = 0; c < ncols; ++c)
        if (col_active[c] && !cols[c].empty()) res_cols.push_back(c);
    std::vector<Int> torsion;
    if (!res_cols.empty()) {
        for (size_t c : res_cols)
            for (const auto& [r, v] : cols[c]) {
                (void)v;
                if (row_active[r] && !row_index.count(r)) {
                    row_index[r] = res_rows.size();
                    res_rows.push_back(r);
                }
            }
        IMat dense(res_rows.size(), IVec(res_cols.size(), 0));
        for (size_t j = 0; j < res_cols.size(); ++j)
            for (const auto& [r, v] : cols[res_cols[j]])
                dense[row_index.at(r)][j] = v;
        SmithForm sf = smith_form(dense);
        rank += sf.invariants.size();
        for (const Int& inv : sf.invariants)
            if (inv > 1) torsion.push_back(inv);
    }
    return {rank, torsion};
}

// Homology of a chain complex given by cell counts per dimension and the
// boundary matrices (columns of d-cells over (d-1)-cells).
HomologyResult homology_from_boundaries(
    const std::vector<size_t>& counts,
    const std::vector<std::vector<std::map<size_t, Int>>>& bnd) {
    size_t top = counts.size();
    std::vector<size_t> rank(top + 1, 0);
    std::vector<std::vector<Int>> tors(top + 1);
    for (size_t d = 1; d < top; ++d)
        std::tie(rank[d], tors[d]) = sparse_smith(bnd[d], counts[d - 1]);
    HomologyResult out(top);
    for (size_t d = 0; d < top; ++d) {
        out[d].betti = counts[d] - rank[d] - rank[d + 1];
        out[d].torsion = d + 1 < top ? tors[d + 1] : std::vector<Int>{};
    }
    return out;
}

std::vector<std::map<size_t, Int>> boundary_columns(
    const std::vector<Simplex>& lower, const std::vector<Simplex>& upper) {
    std::vector<std::map<size_t, Int>> cols(upper.size());
    for (size_t j = 0; j < upper.size(); ++j) {
        const Simplex& s = upper[j];
        int sign = 1;
        for (size_t i = 0; i < s.size(); ++i) {
            Simplex f;
            for (size_t t = 0; t < s.size(); ++t)
                if (t != i) f.push_back(s[t]);
            size_t idx = size_t(
                std::lower_bound(lower.begin(), lower.end(), f) - lower.begin());
            cols[j][idx] += sign;
            if (cols[j][idx] == 0) cols[j].erase(idx);
            sign = -sign;
        }
    }
    return cols;
}

SimplicialComplex order_complex_of_faces(const PolyhedralComplex& p,
                                         bool bounded_only) {
    std::vector<size_t> keep;
    std::vector<size_t> new_index(p.faces.size(), size_t(-1));
    for (size_t i = 0; i < p.faces.size(); ++i)
        if (!bounded_only || p.faces[i].bounded()) {
            new_index[i] = keep.size();
            keep.push_back(i);
        }
    auto strictly_below = [&](size_t i, size_t j) {
        return i != j && p.inclusions.count({j, i}) > 0;
    };
    SimplicialComplex out;
    out.num_vertices = keep.size();
    for (size_t i : keep) out.labels.push_back(p.faces[i].id);
    // covers of the graded face poset
    std::vector<std::vector<size_t>> above(keep.size());
    for (size_t a = 0; a < keep.size(); ++a)
        for (size_t b = 0; b < keep.size(); ++b)
            if (strictly_below(keep[a], keep[b]) &&
                p.faces[keep[b]].dim == p.faces[keep[a]].dim + 1)
                above[a].push_back(b);
    std::vector<bool> minimal(keep.size(), true);
    for (size_t a = 0; a < keep.size(); ++a)
        for (size_t b : above[a]) minimal[b] = false;
    // a vertex of the order complex per face; maximal simplices are the
    // maximal chains, generated as cover paths from minimal faces
    Simplex chain;
    auto extend = [&](auto&& self, size_t top) -> void {
        chain.push_back(top);
        if (above[top].empty()) {
            Simplex s = chain;
            std::sort(s.begin(), s.end());
            out.maximal.push_back(std::move(s));
        } else {
            for (size_t nxt : above[top]) self(self, nxt);
        }
        chain.pop_back();
    };
    for (size_t a = 0; a < keep.size(); ++a)
        if (minimal[a]) extend(extend, a);
    std::sort(out.maximal.begin(), out.maximal.end());
    out.maximal.erase(std::unique(out.maximal.begin(), out.maximal.end()),
                      out.maximal.end());
    return out;
}

}  // namespace

std::vector<std::vector<Simplex>> SimplicialComplex::all_simplices() const {
    size_t dim = 0;
    for (const Simplex& s : maximal) dim = std::max(dim, s.size());
    std::vector<std::vector<Simplex>> out(dim);
    for (const Simplex& s : maximal)
        for (size_t mask = 1; mask < (size_t(1) << s.size()); ++mask) {
            Simplex sub;
            for (size_t i = 0; i < s.size(); ++i)
                if (mask & (size_t(1) << i)) sub.push_back(s[i]);
            out[sub.size() - 1].push_back(std::move(sub));
        }
    for (auto& level : out) {
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
    }
    return out;
}

size_t SimplicialComplex::dimension() const {
    size_t dim = 0;
    for (const Simplex& s : maximal) dim = std::max(dim, s.size());
    return dim == 0 ? 0 : dim - 1;
}

size_t SimplicialComplex::simplex_count() const {
    size_t n = 0;
    for (const auto& level : all_simplices()) n += level.size();
    return n;
}

GroupAction close_group(const std::vector<std::vector<size_t>>& generators) {
    if (generators.empty())
        throw TopologyError("InvalidAction", "no generators given");
    size_t n = generators[0].size();
    std::vector<size_t> id(n);
    std::iota(id.begin(), id.end(), 0);
    std::set<std::vector<size_t>> elems{id};
    std::vector<std::vector<size_t>> frontier{id};
    while (!frontier.empty()) {
        std::vector<std::vector<size_t>> next;
        for (const auto& g : frontier)
            for (const auto& h : generators) {
                if (h.size() != n)
                    throw TopologyError("InvalidAction",
                                        "generator sizes differ");
                std::vector<size_t> gh(n);
                for (size_t i = 0; i < n; ++i) gh[i] = h[g[i]];
                if (elems.insert(gh).second) next.push_back(std::move(gh));
            }
        frontier = std::move(next);
    }
    GroupAction a;
    a.perms.assign(elems.begin(), elems.end());
    return a;
}

SimplicialComplex triangulate(const PolyhedralComplex& p) {
    for (const SkeletonFace& f : p.faces)
        if (!f.bounded())
            throw TopologyError("UnboundedFace",
                                "face " + f.id + " has recession rays");
    return order_complex_of_faces(p, false);
}

SimplicialComplex triangulate_bounded(const PolyhedralComplex& p) {
    return order_complex_of_faces(p, true);
}

SimplicialComplex barycentric_subdivision(const SimplicialComplex& k) {
    std::vector<size_t> id(k.num_vertices);
    std::iota(id.begin(), id.end(), 0);
    return barycentric_subdivision(k, GroupAction{{id}}).first;
}

std::pair<SimplicialComplex, GroupAction> barycentric_subdivision(
    const SimplicialComplex& k, const GroupAction& a) {
    auto sims = k.all_simplices();
    std::map<Simplex, size_t> index;
    SimplicialComplex out;
    for (const auto& level : sims)
        for (const Simplex& s : level) {
            index[s] = out.num_vertices++;
            out.labels.push_back("{" + join_labels(k.labels, s) + "}");
        }
    for (const Simplex& s : k.maximal) {
        Simplex perm = s;
        std::sort(perm.begin(), perm.end());
        do {
            Simplex flag;
            Simplex prefix;
            for (size_t v : perm) {
                prefix.push_back(v);
                Simplex sorted = prefix;
                std::sort(sorted.begin(), sorted.end());
                flag.push_back(index.at(sorted));
            }
            std::sort(flag.begin(), flag.end());
            out.maximal.push_back(std::move(flag));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    std::sort(out.maximal.begin(), out.maximal.end());
    out.maximal.erase(std::unique(out.maximal.begin(), out.maximal.end()),
                      out.maximal.end());
    GroupAction induced;
    for (const auto& g : a.perms) {
        std::vector<size_t> ng(out.num_vertices);
        for (const auto& [s, idx] : index) {
            Simplex t = apply_perm(g, s);
            std::sort(t.begin(), t.end());
            ng[idx] = index.at(t);
        }
        induced.perms.push_back(std::move(ng));
    }
    return {out, induced};
}

SimplicialComplex group_quotient(const SimplicialComplex& k,
                                 const GroupAction& a, int max_subdivisions,
                                 size_t simplex_cap) {
    auto [cur, act] = regularize(k, a, true, max_subdivisions, simplex_cap);
    auto rep = orbit_reps_of_vertices(cur, act);
    std::vector<size_t> reps_sorted;
    for (size_t v = 0; v < cur.num_vertices; ++v)
        if (rep[v] == v) reps_sorted.push_back(v);
    std::vector<size_t> new_index(cur.num_vertices, 0);
    for (size_t i = 0; i < reps_sorted.size(); ++i)
        new_index[reps_sorted[i]] = i;
    SimplicialComplex out;
    out.num_vertices = reps_sorted.size();
    if (!cur.labels.empty())
        for (size_t v : reps_sorted) out.labels.push_back(cur.labels[v]);
    for (const Simplex& s : cur.maximal) {
        Simplex t;
        for (size_t v : s) t.push_back(new_index[rep[v]]);
        std::sort(t.begin(), t.end());
        out.maximal.push_back(std::move(t));
    }
    std::sort(out.maximal.begin(), out.maximal.end());
    out.maximal.erase(std::unique(out.maximal.begin(), out.maximal.end()),
                      out.maximal.end());
    // drop any image that became a face of another image
    std::vector<Simplex> kept;
    for (const Simplex& s : out.maximal) {
        bool dominated = false;
        for (const Simplex& t : out.maximal)
            if (t.size() > s.size() &&
                std::includes(t.begin(), t.end(), s.begin(), s.end()))
                dominated = true;
        if (!dominated) kept.push_back(s);
    }
    out.maximal = std::move(kept);
    return out;
}

HomologyResult quotient_homology(const SimplicialComplex& k,
                                 const GroupAction& a, int max_subdivisions,
                                 size_t simplex_cap) {
    auto [cur, act] = regularize(k, a, false, max_subdivisions, simplex_cap);
    OrbitData od = orbit_data(cur, act);
    std::vector<size_t> counts;
    for (const auto& level : od.reps) counts.push_back(level.size());
    std::vector<std::vector<std::map<size_t, Int>>> bnd(counts.size());
    for (size_t d = 1; d < counts.size(); ++d) {
        bnd[d].resize(counts[d]);
        for (size_t j = 0; j < od.reps[d].size(); ++j) {
            const Simplex& s = od.reps[d][j];
            int sign = 1;
            for (size_t i = 0; i < s.size(); ++i) {
                Simplex f;
                for (size_t t = 0; t < s.size(); ++t)
                    if (t != i) f.push_back(s[t]);
                auto [idx, carry] = od.of[d - 1].at(f);
                auto& cell = bnd[d][j][idx];
                cell += sign * carry;
                if (cell == 0) bnd[d][j].erase(idx);
                sign = -sign;
            }
        }
    }
    return homology_from_boundaries(counts, bnd);
}

std::vector<size_t> quotient_cell_counts(const SimplicialComplex& k,
                                         const GroupAction& a,
                                         int max_subdivisions,
                                         size_t simplex_cap) {
    auto [cur, act] = regularize(k, a, false, max_subdivisions, simplex_cap);
    OrbitData od = orbit_data(cur, act);
    std::vector<size_t> counts;
    for (const auto& level : od.reps) counts.push_back(level.size());
    return counts;
}

ComplexWithAction product_power(const SimplicialComplex& k, int n,
                                size_t simplex_cap) {
    if (n < 1)
        throw TopologyError("InvalidIndex", "the power must be positive");
    auto sims = k.all_simplices();
    std::vector<Simplex> poset;  // simplices of k, by dimension then lex
    for (const auto& level : sims)
        for (const Simplex& s : level) poset.push_back(s);
    size_t np = poset.size();
    double vcount = 1;
    for (int i = 0; i < n; ++i) vcount *= double(np);
    if (vcount > double(simplex_cap))
        throw TopologyError("SizeCapExceeded",
                            "the product has too many cells");
    // covers in the face poset: codimension-one subsets
    std::vector<std::vector<size_t>> above(np);
    for (size_t a = 0; a < np; ++a)
        for (size_t b = 0; b < np; ++b)
            if (poset[b].size() == poset[a].size() + 1 &&
                std::includes(poset[b].begin(), poset[b].end(),
                              poset[a].begin(), poset[a].end()))
                above[a].push_back(b);
    // tuple ids in lexicographic order
    std::map<std::vector<size_t>, size_t> tuple_id;
    {
        std::vector<size_t> tuple(n, 0);
        while (true) {
            size_t id = tuple_id.size();
            tuple_id[tuple] = id;
            int pos = n - 1;
            while (pos >= 0 && tuple[pos] + 1 == np) tuple[pos--] = 0;
            if (pos < 0) break;
            ++tuple[pos];
        }
    }
    ComplexWithAction out;
    out.complex.num_vertices = tuple_id.size();
    out.complex.labels.resize(tuple_id.size());
    for (const auto& [tuple, id] : tuple_id) {
        std::string lab;
        for (int i = 0; i < n; ++i) {
            if (i) lab += "*";
            lab += join_labels(k.labels, poset[tuple[i]]);
        }
        out.complex.labels[id] = lab;
    }
    // maximal chains of the product poset, generated over covers
    std::vector<size_t> tuple(n);
    Simplex chain;
    auto extend = [&](auto&& self) -> void {
        chain.push_back(tuple_id.at(tuple));
        bool extended = false;
        for (int i = 0; i < n; ++i) {
            size_t old = tuple[i];
            for (size_t nxt : above[old]) {
                tuple[i] = nxt;
                extended = true;
                self(self);
            }
            tuple[i] = old;
        }
        if (!extended) {
            if (out.complex.maximal.size() >= simplex_cap)
                throw TopologyError("SizeCapExceeded",
                                    "the product has too many chains");
            Simplex s = chain;
            std::sort(s.begin(), s.end());
            out.complex.maximal.push_back(std::move(s));
        }
        chain.pop_back();
    };
    size_t nverts0 = sims.empty() ? 0 : sims[0].size();
    std::vector<size_t> pick(n, 0);
    while (true) {
        for (int i = 0; i < n; ++i) tuple[i] = pick[i];  // dim-0 ids lead
        extend(extend);
        int pos = n - 1;
        while (pos >= 0 && pick[pos] + 1 == nverts0) pick[pos--] = 0;
        if (pos < 0) break;
        ++pick[pos];
    }
    std::sort(out.complex.maximal.begin(), out.complex.maximal.end());
    out.complex.maximal.erase(std::unique(out.complex.maximal.begin(),
                                          out.complex.maximal.end()),
                              out.complex.maximal.end());
    // the coordinate permutation action of S_n on tuples
    std::vector<size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        std::vector<size_t> g(out.complex.num_vertices);
        for (const auto& [tup, id] : tuple_id) {
            std::vector<size_t> moved(n);
            for (int i = 0; i < n; ++i) moved[i] = tup[sigma[i]];
            g[id] = tuple_id.at(moved);
        }
        out.action.perms.push_back(std::move(g));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

SimplicialComplex symmetric_product(const SimplicialComplex& k, int n,
                                    size_t simplex_cap) {
    if (n < 1)
        throw TopologyError("InvalidIndex", "the power must be positive");
    if (n == 1) return k;
    ComplexWithAction pw = product_power(k, n, simplex_cap);
    return group_quotient(pw.complex, pw.action, 3, simplex_cap);
}

HomologyResult symmetric_product_homology(const SimplicialComplex& k, int n,
                                          size_t simplex_cap) {
    if (n < 1)
        throw TopologyError("InvalidIndex", "the power must be positive");
    if (n == 1) return homology(k);
    ComplexWithAction pw = product_power(k, n, simplex_cap);
    return quotient_homology(pw.complex, pw.action, 3, simplex_cap);
}

Int symmetric_product_euler(const SimplicialComplex& k, int n) {
    if (n < 1)
        throw TopologyError("InvalidIndex", "the power must be positive");
    Int chi = euler_characteristic(k);
    std::vector<size_t> sigma(static_cast<size_t>(n), 0);
    std::iota(sigma.begin(), sigma.end(), 0);
    Int total = 0, order = 0;
    do {
        // cycle count of sigma; the fixed locus of sigma on K^n is K^cycles
        std::vector<bool> seen(sigma.size(), false);
        size_t cycles = 0;
        for (size_t i = 0; i < sigma.size(); ++i)
            if (!seen[i]) {
                ++cycles;
                for (size_t j = i; !seen[j]; j = sigma[j]) seen[j] = true;
            }
        Int term = 1;
        for (size_t c = 0; c < cycles; ++c) term *= chi;
        total += term;
        ++order;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total / order;
}

ComplexWithAction kummer_kernel(int n) {
    if (n < 1)
        throw TopologyError("InvalidIndex", "the power must be positive");
    if (n >= 2)
        throw TopologyError(
            "SizeCapExceeded",
            "no equivariant product grid exists beyond n = 1 at desk scale");
    // the kernel of the sum map on (R^2/Z^2)^2 is the torus R^2/Z^2, carried
    // to itself by the coordinate swap through v -> -v
    const size_t m = 4;
    ComplexWithAction out;
    out.complex.num_vertices = m * m;
    auto id = [&](size_t i, size_t j) { return (i % m) * m + (j % m); };
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            out.complex.labels.push_back("(" + std::to_string(i) + "," +
                                         std::to_string(j) + ")");
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            Simplex t1{id(i, j), id(i + 1, j), id(i + 1, j + 1)};
            Simplex t2{id(i, j), id(i, j + 1), id(i + 1, j + 1)};
            std::sort(t1.begin(), t1.end());
            std::sort(t2.begin(), t2.end());
            out.complex.maximal.push_back(t1);
            out.complex.maximal.push_back(t2);
        }
    std::sort(out.complex.maximal.begin(), out.complex.maximal.end());
    std::vector<size_t> neg(m * m);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            neg[id(i, j)] = id(m - i, m - j);
    out.action = close_group({neg});
    return out;
}

ComplexWithAction kummer_kernel_circle(int n) {
    if (n < 1)
        throw TopologyError("InvalidIndex", "the power must be positive");
    if (n >= 3)
        throw TopologyError("SizeCapExceeded",
                            "circle-variant kernels beyond n = 2 exceed desk "
                            "scale");
    if (n == 1) {
        // the kernel of S^1 x S^1 -> S^1 is a circle; the transposition acts
        // by the flip x -> -x
        const size_t m = 4;
        ComplexWithAction out;
        out.complex.num_vertices = m;
        for (size_t i = 0; i < m; ++i)
            out.complex.labels.push_back(std::to_string(i));
        for (size_t i = 0; i < m; ++i) {
            Simplex e{i, (i + 1) % m};
            std::sort(e.begin(), e.end());
            out.complex.maximal.push_back(e);
        }
        std::sort(out.complex.maximal.begin(), out.complex.maximal.end());
        std::vector<size_t> flip(m);
        for (size_t i = 0; i < m; ++i) flip[i] = (m - i) % m;
        out.action = close_group({flip});
        return out;
    }
    // n = 2: the kernel is the 2-torus R^2 modulo the root lattice, with the
    // S_3 action generated by the coordinate swap and the cycle
    // (x1, x2) -> (x2, -x1-x2); the triangular mesh is invariant
    const size_t m = 3;
    ComplexWithAction out;
    out.complex.num_vertices = m * m;
    auto id = [&](size_t i, size_t j) { return (i % m) * m + (j % m); };
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            out.complex.labels.push_back("(" + std::to_string(i) + "," +
                                         std::to_string(j) + ")");
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            Simplex t1{id(i, j), id(i + 1, j), id(i, j + 1)};
            Simplex t2{id(i + 1, j), id(i, j + 1), id(i + 1, j + 1)};
            std::sort(t1.begin(), t1.end());
            std::sort(t2.begin(), t2.end());
            out.complex.maximal.push_back(t1);
            out.complex.maximal.push_back(t2);
        }
    std::sort(out.complex.maximal.begin(), out.complex.maximal.end());
    std::vector<size_t> swap_perm(m * m), cycle(m * m);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            swap_perm[id(i, j)] = id(j, i);
            cycle[id(i, j)] = id(j, (2 * m - i - j) % m);
        }
    out.action = close_group({swap_perm, cycle});
    return out;
}

HomologyResult homology(const SimplicialComplex& k) {
    auto sims = k.all_simplices();
    std::vector<size_t> counts;
    for (const auto& level : sims) counts.push_back(level.size());
    if (counts.empty()) return {};
    std::vector<std::vector<std::map<size_t, Int>>> bnd(counts.size());
    for (size_t d = 1; d < counts.size(); ++d)
        bnd[d] = boundary_columns(sims[d - 1], sims[d]);
    return homology_from_boundaries(counts, bnd);
}

long euler_characteristic(const SimplicialComplex& k) {
    long chi = 0;
    long sign = 1;
    for (const auto& level : k.all_simplices()) {
        chi += sign * long(level.size());
        sign = -sign;
    }
    return chi;
}

SurfaceClass classify_closed_surface(const SimplicialComplex& k) {
    auto fail = [](const std::string& w) {
        SurfaceClass c;
        c.type = SurfaceType::not_a_surface;
        c.witness = w;
        return c;
    };
    auto sims = k.all_simplices();
    if (sims.size() != 3)
        return fail("the complex is not two-dimensional");
    for (const Simplex& s : k.maximal)
        if (s.size() != 3)
            return fail("a maximal simplex is not a triangle");
    const auto& edges = sims[1];
    const auto& tris = sims[2];
    std::map<Simplex, std::vector<size_t>> edge_tris;
    for (size_t t = 0; t < tris.size(); ++t)
        for (size_t i = 0; i < 3; ++i) {
            Simplex e;
            for (size_t j = 0; j < 3; ++j)
                if (j != i) e.push_back(tris[t][j]);
            edge_tris[e].push_back(t);
        }
    for (const Simplex& e : edges)
        if (edge_tris[e].size() != 2)
            return fail("edge {" + join_labels(k.labels, e) + "} lies in " +
                        std::to_string(edge_tris[e].size()) + " triangles");
    // vertex links must be single cycles
    for (size_t v = 0; v < k.num_vertices; ++v) {
        std::map<size_t, std::vector<size_t>> link;
        size_t link_edges = 0;
        for (const Simplex& t : tris)
            if (std::find(t.begin(), t.end(), v) != t.end()) {
                std::vector<size_t> opp;
                for (size_t u : t)
                    if (u != v) opp.push_back(u);
                link[opp[0]].push_back(opp[1]);
                link[opp[1]].push_back(opp[0]);
                ++link_edges;
            }
        if (link.empty())
            return fail("vertex " +
                        (k.labels.empty() ? std::to_string(v) : k.labels[v]) +
                        " lies in no triangle");
        for (const auto& [u, nbrs] : link) {
            (void)u;
            if (nbrs.size() != 2)
                return fail("the link of a vertex is not a cycle");
        }
        // connectivity of the link
        std::set<size_t> seen{link.begin()->first};
        std::vector<size_t> stack{link.begin()->first};
        while (!stack.empty()) {
            size_t u = stack.back();
            stack.pop_back();
            for (size_t w : link.at(u))
                if (seen.insert(w).second) stack.push_back(w);
        }
        if (seen.size() != link.size())
            return fail("the link of a vertex is disconnected");
    }
    // orientability: propagate coherent orientations across shared edges
    std::vector<int> orient(tris.size(), 0);
    bool orientable = true;
    for (size_t seed = 0; seed < tris.size(); ++seed) {
        if (orient[seed]) continue;
        orient[seed] = 1;
        std::vector<size_t> stack{seed};
        while (!stack.empty() && orientable) {
            size_t t = stack.back();
            stack.pop_back();
            for (size_t i = 0; i < 3; ++i) {
                Simplex e;
                for (size_t j = 0; j < 3; ++j)
                    if (j != i) e.push_back(tris[t][j]);
                // the induced orientation of the shared edge must disagree
                int induced = (i % 2 == 0) ? 1 : -1;
                for (size_t t2 : edge_tris[e]) {
                    if (t2 == t) continue;
                    size_t i2 = 0;
                    while (std::find(e.begin(), e.end(), tris[t2][i2]) !=
                           e.end())
                        ++i2;
                    int induced2 = (i2 % 2 == 0) ? 1 : -1;
                    int needed = -orient[t] * induced * induced2;
                    if (orient[t2] == 0) {
                        orient[t2] = needed;
                        stack.push_back(t2);
                    } else if (orient[t2] != needed) {
                        orientable = false;
                    }
                }
            }
        }
    }
    long chi = euler_characteristic(k);
    SurfaceClass c;
    if (orientable) {
        if (chi == 2)
            c.type = SurfaceType::sphere;
        else if (chi == 0) {
            c.type = SurfaceType::torus;
            c.genus = 1;
        } else {
            c.type = SurfaceType::orientable_genus;
            c.genus = (2 - chi) / 2;
        }
    } else {
        if (chi == 1)
            c.type = SurfaceType::projective_plane;
        else if (chi == 0) {
            c.type = SurfaceType::klein_bottle;
            c.genus = 2;
        } else {
            c.type = SurfaceType::nonorientable_genus;
            c.genus = 2 - chi;
        }
    }
    return c;
}

}  // namespace katoskel
