#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "katoskel/fan.hpp"

using namespace katoskel;

namespace {

StratifiedModel quartic_model() {
    StratifiedModel m;
    m.components = {{"E1", true, 1}, {"E2", true, 1}};
    m.strata = {{{"E1"}, {}, {}},
                {{"E2"}, {}, {}},
                {{"E1", "E2"}, {"p_A", "p_B"}, {}}};
    return m;
}

StratifiedModel node_model() {
    StratifiedModel m;
    m.components = {{"C1", true, 1}, {"C2", true, 1}};
    m.strata = {{{"C1"}, {}, {}}, {{"C2"}, {}, {}}, {{"C1", "C2"}, {}, {}}};
    return m;
}

StratifiedModel p1_model() {
    StratifiedModel m;
    m.components = {{"(0:1)", false, 1}, {"(1:0)", false, 1}, {"P1k", true, 1}};
    m.strata = {{{"(0:1)"}, {}, {}},
                {{"(1:0)"}, {}, {}},
                {{"P1k"}, {}, {}},
                {{"(0:1)", "P1k"}, {}, {}},
                {{"(1:0)", "P1k"}, {}, {}}};
    return m;
}

// Thick-fiber model: two components of multiplicity 2 meeting in a node.
StratifiedModel thick_model() {
    StratifiedModel m;
    m.components = {{"D1", true, 2}, {"D2", true, 2}};
    m.strata = {{{"D1"}, {}, {}}, {{"D2"}, {}, {}}, {{"D1", "D2"}, {}, {}}};
    return m;
}

size_t find_point(const KatoFan& f, const std::string& id) {
    for (size_t i = 0; i < f.points.size(); ++i)
        if (f.points[i].id == id) return i;
    REQUIRE(false);
    return 0;
}

std::vector<size_t> dims_sorted(const KatoFan& f) {
    std::vector<size_t> d;
    for (const FanPoint& p : f.points) d.push_back(p.stalk.dim());
    std::sort(d.begin(), d.end());
    return d;
}

void check_fan_coherence(const KatoFan& f) {
    for (const auto& [key, hom] : f.cospec) {
        const FanPoint& deep = f.points[key.first];
        const FanPoint& sh = f.points[key.second];
        // pi preserved
        CHECK(mat_apply(hom.matrix, deep.pi) == sh.pi);
        // stalk elements map to stalk elements
        for (const IVec& g : deep.stalk.min_generators)
            CHECK(sh.stalk.contains(mat_apply(hom.matrix, g)));
    }
    // functoriality over all chains
    for (const auto& [k1, h1] : f.cospec)
        for (const auto& [k2, h2] : f.cospec) {
            if (k1.second != k2.first) continue;
            auto direct = f.cospec.find({k1.first, k2.second});
            REQUIRE(direct != f.cospec.end());
            CHECK(mat_mul(h2.matrix, h1.matrix) == direct->second.matrix);
        }
}

size_t count_maximal(const KatoFan& f) {
    std::set<size_t> shallow;
    for (const auto& [key, hom] : f.cospec) {
        (void)hom;
        shallow.insert(key.second);
    }
    return f.points.size() - shallow.size();
}

}  // namespace

TEST_CASE("quartic degeneration fan has four points") {
    KatoFan f = fan_from_stratification(quartic_model());
    REQUIRE(f.points.size() == 4);
    CHECK(dims_sorted(f) == std::vector<size_t>{1, 1, 2, 2});
    size_t v1 = find_point(f, "E1");
    size_t pa = find_point(f, "E1|E2:p_A");
    size_t pb = find_point(f, "E1|E2:p_B");
    CHECK(f.points[v1].stalk.dim() == 1);
    CHECK(f.points[v1].pi == IVec{1});
    CHECK(f.points[pa].stalk.dim() == 2);
    CHECK(is_free(f.points[pa].stalk));
    CHECK(f.points[pa].pi == IVec{1, 1});
    CHECK(f.points[pa].stalk == f.points[pb].stalk);
    // each branch point cospecializes to both vertices
    CHECK(f.cospec.size() == 4);
    CHECK(f.generizations(pa).size() == 2);
    CHECK(f.rank1_generizations(pa).size() == 2);
    CHECK(is_semistable(f));
    CHECK(is_regular(f));
    check_fan_coherence(f);
}

TEST_CASE("single component model gives a one-point fan") {
    StratifiedModel m;
    m.components = {{"E", true, 1}};
    m.strata = {{{"E"}, {}, {}}};
    KatoFan f = fan_from_stratification(m);
    REQUIRE(f.points.size() == 1);
    CHECK(f.points[0].stalk.dim() == 1);
    CHECK(f.points[0].pi == IVec{1});
    CHECK(f.points[0].vertical);
    CHECK(f.cospec.empty());
}

TEST_CASE("projective line model with horizontal sections has five points") {
    KatoFan f = fan_from_stratification(p1_model());
    REQUIRE(f.points.size() == 5);
    size_t vertical = 0, horizontal = 0;
    for (const FanPoint& p : f.points) (p.vertical ? vertical : horizontal)++;
    CHECK(vertical == 3);
    CHECK(horizontal == 2);
    size_t pair = find_point(f, "(0:1)|P1k");
    CHECK(f.points[pair].stalk.dim() == 2);
    CHECK(f.points[pair].pi == IVec{0, 1});
    CHECK(is_semistable(f));
    check_fan_coherence(f);
}

TEST_CASE("specialization closure is enforced") {
    StratifiedModel m;
    m.components = {{"E1", true, 1}, {"E2", true, 1}};
    m.strata = {{{"E1"}, {}, {}}, {{"E1", "E2"}, {}, {}}};
    CHECK_THROWS_WITH_AS(fan_from_stratification(m),
                         doctest::Contains("InconsistentStratification"),
                         FanError);
}

TEST_CASE("three-component chain is functorial") {
    StratifiedModel m;
    m.components = {{"A", true, 1}, {"B", true, 1}, {"C", true, 1}};
    m.strata = {{{"A"}, {}, {}},      {{"B"}, {}, {}},
                {{"C"}, {}, {}},      {{"A", "B"}, {}, {}},
                {{"A", "C"}, {}, {}}, {{"B", "C"}, {}, {}},
                {{"A", "B", "C"}, {}, {}}};
    KatoFan f = fan_from_stratification(m);
    REQUIRE(f.points.size() == 7);
    size_t top = find_point(f, "A|B|C");
    CHECK(f.generizations(top).size() == 6);
    CHECK(f.rank1_generizations(top).size() == 3);
    CHECK(f.realized_dim == 3);
    check_fan_coherence(f);
}

TEST_CASE("quartic product fan has the 4+8+4 point table") {
    KatoFan f = fan_from_stratification(quartic_model());
    FanProduct p = fan_product(f, f);
    REQUIRE(p.fan.points.size() == 16);
    CHECK(dims_sorted(p.fan) ==
          std::vector<size_t>{1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3});
    for (const ProductPointInfo& info : p.info) {
        CHECK(info.n == 1);
        CHECK(info.torsion == 1);
    }
    // square-type stalks: rank 3 with 4 extreme rays, not free
    size_t squares = 0;
    for (const FanPoint& pt : p.fan.points)
        if (pt.stalk.dim() == 3) {
            ++squares;
            CHECK(pt.stalk.extreme_rays.size() == 4);
            CHECK(pt.stalk.sat_hilbert.size() == 4);
            CHECK(is_saturated(pt.stalk));
            CHECK_FALSE(is_free(pt.stalk));
        }
    CHECK(squares == 4);
    // deepest points see 8 generizations, 4 of them of rank one
    size_t sq = 0;
    for (size_t i = 0; i < p.fan.points.size(); ++i)
        if (p.fan.points[i].stalk.dim() == 3) {
            sq = i;
            CHECK(p.fan.generizations(i).size() == 8);
            CHECK(p.fan.rank1_generizations(i).size() == 4);
        }
    (void)sq;
    CHECK(is_semistable(p.fan));
    CHECK_FALSE(is_regular(p.fan));
    CHECK(n_monotonicity_check(p));
    check_fan_coherence(p.fan);
}

TEST_CASE("one-point base-like factor leaves the other factor unchanged") {
    StratifiedModel b;
    b.components = {{"S", true, 1}};
    b.strata = {{{"S"}, {}, {}}};
    KatoFan base = fan_from_stratification(b);
    KatoFan f = fan_from_stratification(quartic_model());
    FanProduct p = fan_product(base, f);
    REQUIRE(p.fan.points.size() == f.points.size());
    CHECK(dims_sorted(p.fan) == dims_sorted(f));
    CHECK(p.fan.cospec.size() == f.cospec.size());
    for (size_t i = 0; i < p.fan.points.size(); ++i) {
        size_t yi = *p.info[i].y;
        CHECK(p.fan.points[i].stalk.dim() == f.points[yi].stalk.dim());
        CHECK(is_free(p.fan.points[i].stalk) == is_free(f.points[yi].stalk));
        CHECK(saturation_index(p.fan.points[i].stalk, p.fan.points[i].pi) ==
              saturation_index(f.points[yi].stalk, f.points[yi].pi));
    }
    check_fan_coherence(p.fan);
}

TEST_CASE("node times node matches the bipartite cone") {
    KatoFan f = fan_from_stratification(node_model());
    FanProduct p = fan_product(f, f);
    REQUIRE(p.fan.points.size() == 9);
    CHECK(dims_sorted(p.fan) ==
          std::vector<size_t>{1, 1, 1, 1, 2, 2, 2, 2, 3});
    size_t top = 0;
    for (size_t i = 0; i < p.fan.points.size(); ++i)
        if (p.fan.points[i].stalk.dim() == 3) top = i;
    const AffineMonoid& s = p.fan.points[top].stalk;
    CHECK(s.min_generators.size() == 4);
    CHECK(s.extreme_rays.size() == 4);
    // brute-force oracle: Hilbert basis of {(a,b,c,d) in N^4 : a+b = c+d}
    // computed by direct enumeration and reducibility checks
    IMat sol;
    for (Int a = 0; a <= 3; ++a)
        for (Int b = 0; b <= 3; ++b)
            for (Int c = 0; c <= 3; ++c)
                for (Int d = 0; d <= 3; ++d)
                    if (a + b == c + d && a + b + c + d > 0)
                        sol.push_back({a, b, c, d});
    std::set<IVec> solset(sol.begin(), sol.end());
    size_t irreducible = 0;
    for (const IVec& x : sol) {
        bool red = false;
        for (const IVec& y : sol) {
            if (y == x) continue;
            IVec z = sub(x, y);
            if (std::all_of(z.begin(), z.end(),
                            [](const Int& t) { return t >= 0; }) &&
                solset.count(z))
                red = true;
        }
        if (!red) ++irreducible;
    }
    CHECK(irreducible == 4);
    // opposite generators sum to the same element (a+d = b+c relation)
    const IMat& g = s.min_generators;
    bool relation = false;
    for (size_t i = 0; i < 4 && !relation; ++i)
        for (size_t j = i + 1; j < 4 && !relation; ++j) {
            IVec lhs = add(g[i], g[j]);
            for (size_t k = 0; k < 4 && !relation; ++k)
                for (size_t l = k + 1; l < 4; ++l) {
                    if (k == i || k == j || l == i || l == j) continue;
                    if (lhs == add(g[k], g[l])) {
                        relation = true;
                        break;
                    }
                }
        }
    CHECK(relation);
    // product of realized fans is realized in the joined lattice
    CHECK(p.fan.realized_dim == 4);
    REQUIRE(p.fan.points[top].realized_rays.has_value());
    CHECK(p.fan.points[top].realized_rays->size() == 4);
    check_fan_coherence(p.fan);
}

TEST_CASE("product with horizontal components keeps the generic-fibre points") {
    KatoFan f = fan_from_stratification(p1_model());
    FanProduct p = fan_product(f, f);
    // 3x3 vertical pairs plus 2+2 single-sided and 2x2 joint horizontal points
    REQUIRE(p.fan.points.size() == 17);
    size_t vertical = 0, horizontal = 0, rank1 = 0;
    for (const FanPoint& pt : p.fan.points) {
        (pt.vertical ? vertical : horizontal)++;
        if (pt.stalk.dim() == 1) ++rank1;
    }
    CHECK(vertical == 9);
    CHECK(horizontal == 8);
    CHECK(rank1 == 5);  // one vertical component, four horizontal ones
    // the deepest mixed point has free rank-3 stalk and three components
    size_t deep = find_point(p.fan, "(0:1)|P1k*(0:1)|P1k");
    CHECK(p.fan.points[deep].stalk.dim() == 3);
    CHECK(is_free(p.fan.points[deep].stalk));
    CHECK(p.fan.rank1_generizations(deep).size() == 3);
    check_fan_coherence(p.fan);
}

TEST_CASE("rank additivity for vertical pairs") {
    KatoFan f = fan_from_stratification(quartic_model());
    KatoFan g = fan_from_stratification(p1_model());
    FanProduct p = fan_product(f, g);
    for (size_t i = 0; i < p.fan.points.size(); ++i) {
        const ProductPointInfo& d = p.info[i];
        if (!p.fan.points[i].vertical) continue;
        REQUIRE(d.x.has_value());
        REQUIRE(d.y.has_value());
        CHECK(p.fan.points[i].stalk.dim() ==
              f.points[*d.x].stalk.dim() + g.points[*d.y].stalk.dim() - 1);
    }
}

TEST_CASE("branch rules and monotonicity of branch counts") {
    KatoFan f = fan_from_stratification(thick_model());
    CHECK_FALSE(is_semistable(f));
    CHECK_THROWS_WITH_AS(fan_product(f, f), doctest::Contains("MissingBranchRule"),
                         FanError);

    // counts that grow with depth satisfy the specialization inequality
    BranchRule deeper_more = [](const KatoFan& a, size_t x, const KatoFan& b,
                                size_t y) {
        return Int(a.points[x].stalk.dim() == 2 && b.points[y].stalk.dim() == 2
                       ? 2
                       : 1);
    };
    FanProduct good = fan_product(f, f, deeper_more);
    CHECK(n_monotonicity_check(good));
    CHECK_FALSE(n_monotonicity_violation(good).has_value());
    // torsion of the glued lattice is reported for thick fibers
    for (size_t i = 0; i < good.fan.points.size(); ++i)
        if (good.fan.points[i].stalk.dim() == 1) CHECK(good.info[i].torsion == 2);
    check_fan_coherence(good.fan);

    // counts that shrink with depth violate it and the pair is reported
    BranchRule shallower_more = [](const KatoFan& a, size_t x, const KatoFan& b,
                                   size_t y) {
        return Int(a.points[x].stalk.dim() == 1 && b.points[y].stalk.dim() == 1
                       ? 2
                       : 1);
    };
    FanProduct bad = fan_product(f, f, shallower_more);
    CHECK_FALSE(n_monotonicity_check(bad));
    auto v = n_monotonicity_violation(bad);
    REQUIRE(v.has_value());
    CHECK(bad.info[v->first].n < bad.info[v->second].n);

    // explicit branches appear as separate points
    BranchRule always_two = [](const KatoFan&, size_t, const KatoFan&, size_t) {
        return Int(2);
    };
    FanProduct doubled = fan_product(f, f, always_two);
    CHECK(doubled.fan.points.size() == 18);  // 9 vertical pairs, twice
    CHECK(n_monotonicity_check(doubled));
    check_fan_coherence(doubled.fan);

    // a semistable factor forces n = 1
    KatoFan ss = fan_from_stratification(node_model());
    CHECK_THROWS_WITH_AS(fan_product(ss, f, always_two),
                         doctest::Contains("MissingBranchRule"), FanError);
}

TEST_CASE("fan of the first quadrant and its star subdivision") {
    KatoFan f = fan_of_cone(2, {{1, 0}, {0, 1}}, {1, 1});
    REQUIRE(f.points.size() == 3);
    CHECK(dims_sorted(f) == std::vector<size_t>{1, 1, 2});
    CHECK(is_regular(f));
    CHECK(is_semistable(f));
    check_fan_coherence(f);

    size_t top = 2;
    KatoFan s = star_subdivision(f, top, {1, 1});
    REQUIRE(s.points.size() == 5);
    CHECK(count_maximal(s) == 2);
    for (const FanPoint& p : s.points) CHECK(is_free(p.stalk));
    check_fan_coherence(s);
    // support is unchanged on an exact rational grid
    CHECK(realized_support_sample(f, 3, 2) == realized_support_sample(s, 3, 2));

    CHECK_THROWS_WITH_AS(star_subdivision(f, top, {-1, 0}),
                         doctest::Contains("RayOutsideCone"), FanError);
    CHECK_THROWS_WITH_AS(fan_of_cone(2, {{1, 0}, {0, 1}}, {-1, 2}),
                         doctest::Contains("InvalidUniformizer"), FanError);
}

TEST_CASE("quadric cone point resolves by the classical middle ray") {
    KatoFan f = fan_of_cone(2, {{1, 0}, {1, 2}}, {1, 1});
    REQUIRE(f.points.size() == 3);
    size_t top = 2;
    CHECK(f.points[top].stalk.sat_hilbert.size() == 3);
    CHECK_FALSE(is_regular(f));

    KatoFan r = resolve(f);
    CHECK(is_regular(r));
    REQUIRE(r.points.size() == 5);
    CHECK(count_maximal(r) == 2);
    // the inserted ray is (1,1)
    bool found = false;
    for (const FanPoint& p : r.points)
        if (p.stalk.dim() == 1 && p.realized_rays &&
            (*p.realized_rays)[0] == IVec{1, 1})
            found = true;
    CHECK(found);
    CHECK(realized_support_sample(f, 2, 3) == realized_support_sample(r, 2, 3));
    check_fan_coherence(r);

    // the same subdivision produced directly
    KatoFan s = star_subdivision(f, top, {1, 1});
    CHECK(is_regular(s));
    CHECK(s.points.size() == r.points.size());
}

TEST_CASE("square cone fan: barycentric subdivision and resolution") {
    IMat rays = {{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    KatoFan f = fan_of_cone(3, rays, {0, 0, 1});
    REQUIRE(f.points.size() == 9);  // 4 rays + 4 facets + top
    size_t top = 8;
    CHECK(f.points[top].stalk.dim() == 3);
    CHECK(f.points[top].stalk.min_generators.size() == 4);
    CHECK_FALSE(is_regular(f));
    check_fan_coherence(f);

    KatoFan b = barycentric_subdivision(f);
    CHECK(count_maximal(b) == 8);
    for (size_t i : {size_t(0)}) (void)i;
    for (size_t i = 0; i < b.points.size(); ++i)
        if (b.points[i].stalk.dim() == 3)
            CHECK(b.points[i].realized_rays->size() == 3);
    CHECK(realized_support_sample(f, 1, 3) == realized_support_sample(b, 1, 3));
    check_fan_coherence(b);

    KatoFan r = resolve(f);
    CHECK(is_regular(r));
    CHECK(count_maximal(r) == 2);
    CHECK(realized_support_sample(f, 1, 3) == realized_support_sample(r, 1, 3));
}

TEST_CASE("resolving the realized node product") {
    KatoFan f = fan_from_stratification(node_model());
    FanProduct p = fan_product(f, f);
    CHECK(p.fan.realized_dim == 4);
    CHECK_FALSE(is_regular(p.fan));
    KatoFan r = resolve(p.fan);
    CHECK(is_regular(r));
    CHECK(count_maximal(r) == 2);
    check_fan_coherence(r);
}

TEST_CASE("resolve is the identity on regular fans") {
    KatoFan f = fan_from_stratification(quartic_model());
    KatoFan r = resolve(f);
    CHECK(r.points.size() == f.points.size());
    CHECK(is_regular(r));
}

TEST_CASE("unrealized singular fans report the missing realization") {
    KatoFan f = fan_from_stratification(quartic_model());
    FanProduct p = fan_product(f, f);
    CHECK(p.fan.realized_dim == 0);  // branched factor has no realization
    CHECK_THROWS_WITH_AS(resolve(p.fan), doctest::Contains("MissingRealization"),
                         FanError);
    CHECK_THROWS_WITH_AS(barycentric_subdivision(p.fan),
                         doctest::Contains("MissingRealization"), FanError);
}

TEST_CASE("stalk overrides install a singular stratum") {
    StratifiedModel m;
    m.components = {{"C1", true, 1}, {"C2", true, 3}};
    StalkOverride ov;
    ov.cone_rays = {{1, 0}, {1, 2}};
    ov.ray_components = {"C1", "C2"};
    ov.pi = {1, 1};
    m.strata = {{{"C1"}, {}, {}}, {{"C2"}, {}, {}}, {{"C1", "C2"}, {}, ov}};
    KatoFan f = fan_from_stratification(m);
    REQUIRE(f.points.size() == 3);
    size_t top = find_point(f, "C1|C2");
    CHECK(f.points[top].stalk.sat_hilbert.size() == 3);
    CHECK_FALSE(is_free(f.points[top].stalk));
    size_t v2 = find_point(f, "C2");
    CHECK(f.points[v2].pi == IVec{3});
    CHECK(f.realized_dim == 2);
    check_fan_coherence(f);

    KatoFan r = resolve(f);
    CHECK(is_regular(r));
    CHECK(r.points.size() == 5);

    // mismatched multiplicity is rejected
    m.components[1].multiplicity = 2;
    CHECK_THROWS_WITH_AS(fan_from_stratification(m),
                         doctest::Contains("InconsistentStratification"),
                         FanError);
}

TEST_CASE("presentation sections invert the gluing projection") {
    KatoFan f = fan_from_stratification(quartic_model());
    FanProduct p = fan_product(f, f);
    for (size_t i = 0; i < p.fan.points.size(); ++i) {
        const ProductPointInfo& d = p.info[i];
        IMat pres;
        for (size_t r = 0; r < d.incl1.size(); ++r) {
            IVec row = d.incl1[r];
            row.insert(row.end(), d.incl2[r].begin(), d.incl2[r].end());
            pres.push_back(row);
        }
        CHECK(mat_mul(pres, d.section) ==
              identity_mat(p.fan.points[i].stalk.ambient_rank));
    }
}
