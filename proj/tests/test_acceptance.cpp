// End-to-end acceptance checks. Each numbered check prints a single PASS or
// FAIL line; the process exits with the number of failed checks.
#include <atomic>
#include <chrono>
#include <iostream>
#include <mutex>
#include <thread>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "katoskel/io.hpp"
#include "katoskel/topology.hpp"
#include "katoskel/weight.hpp"

#include "oracles.hpp"

using namespace katoskel;

namespace {

int failures = 0;

class Criterion {
  public:
    Criterion(int number, std::string title, double budget_seconds)
        : number_(number),
          title_(std::move(title)),
          budget_(budget_seconds),
          start_(std::chrono::steady_clock::now()) {}

    void require(bool ok, const std::string& what) {
        if (!ok && problem_.empty()) problem_ = what;
    }

    void finish() {
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start_)
                .count();
        if (problem_.empty() && elapsed > budget_) {
            std::ostringstream s;
            s << "took " << elapsed << " s, budget " << budget_ << " s";
            problem_ = s.str();
        }
        if (problem_.empty()) {
            std::cout << "PASS " << number_ << ": " << title_ << "\n";
        } else {
            std::cout << "FAIL " << number_ << ": " << title_ << " ("
                      << problem_ << ")\n";
            ++failures;
        }
    }

  private:
    int number_;
    std::string title_;
    double budget_;
    std::chrono::steady_clock::time_point start_;
    std::string problem_;
};

IVec v(std::initializer_list<long> xs) {
    IVec out;
    for (long x : xs) out.push_back(Int(x));
    return out;
}

HomologyGroup hg(long betti, std::vector<long> torsion = {}) {
    HomologyGroup g;
    g.betti = betti;
    for (long t : torsion) g.torsion.push_back(Int(t));
    return g;
}

StratifiedModel quartic_model() {
    StratifiedModel m;
    m.components = {{"E1", true, 1}, {"E2", true, 1}};
    m.strata = {{{"E1"}, {}, {}},
                {{"E2"}, {}, {}},
                {{"E1", "E2"}, {"p_A", "p_B"}, {}}};
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

StratifiedModel p1_three_model() {
    StratifiedModel m;
    m.components = {{"(0:1)", false, 1},
                    {"(1:0)", false, 1},
                    {"(1:1)", false, 1},
                    {"P1k", true, 1}};
    m.strata = {{{"(0:1)"}, {}, {}},     {{"(1:0)"}, {}, {}},
                {{"(1:1)"}, {}, {}},     {{"P1k"}, {}, {}},
                {{"(0:1)", "P1k"}, {}, {}}, {{"(1:0)", "P1k"}, {}, {}},
                {{"(1:1)", "P1k"}, {}, {}}};
    return m;
}

SimplicialComplex sphere_complex() {
    SimplicialComplex k;
    k.num_vertices = 4;
    k.maximal = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
    return k;
}

SimplicialComplex interval_complex() {
    SimplicialComplex k;
    k.num_vertices = 2;
    k.maximal = {{0, 1}};
    return k;
}

SimplicialComplex projective_plane_complex() {
    SimplicialComplex k;
    k.num_vertices = 6;
    k.maximal = {{0, 1, 5}, {1, 2, 5}, {2, 3, 5}, {3, 4, 5}, {0, 4, 5},
                 {0, 1, 3}, {1, 2, 4}, {0, 2, 3}, {1, 3, 4}, {0, 2, 4}};
    return k;
}

GroupAction label_swap_action(const SimplicialComplex& k, const std::string& a,
                              const std::string& b) {
    std::map<std::string, size_t> by_label;
    for (size_t i = 0; i < k.num_vertices; ++i) by_label[k.labels[i]] = i;
    std::vector<size_t> perm(k.num_vertices);
    for (size_t i = 0; i < k.num_vertices; ++i) {
        std::string swapped;
        for (size_t p = 0; p < k.labels[i].size();) {
            if (k.labels[i].compare(p, a.size(), a) == 0) {
                swapped += b;
                p += a.size();
            } else if (k.labels[i].compare(p, b.size(), b) == 0) {
                swapped += a;
                p += b.size();
            } else {
                swapped += k.labels[i][p++];
            }
        }
        perm[i] = by_label.at(swapped);
    }
    return close_group({perm});
}

// d(d(sigma)) accumulated with signs must cancel to zero for every simplex.
bool boundary_squares_to_zero(const SimplicialComplex& k) {
    auto sims = k.all_simplices();
    for (size_t d = 2; d < sims.size(); ++d)
        for (const auto& s : sims[d]) {
            std::map<std::vector<size_t>, long> acc;
            for (size_t i = 0; i < s.size(); ++i) {
                std::vector<size_t> f = s;
                f.erase(f.begin() + i);
                long sign_i = (i % 2) ? -1 : 1;
                for (size_t j = 0; j < f.size(); ++j) {
                    std::vector<size_t> g = f;
                    g.erase(g.begin() + j);
                    acc[g] += sign_i * ((j % 2) ? -1 : 1);
                }
            }
            for (const auto& [f, c] : acc)
                if (c != 0) return false;
        }
    return true;
}

bool euler_consistent(const SimplicialComplex& k) {
    HomologyResult h = homology(k);
    long chi = 0;
    long sign = 1;
    for (const HomologyGroup& g : h) {
        chi += sign * long(g.betti);
        sign = -sign;
    }
    return chi == euler_characteristic(k);
}

// Exhaustive family of one-dimensional stratified models: k vertical
// components with multiplicities in 1..3, any set of pairwise intersections,
// each intersecting pair with one or two branches. Models differing only by
// a relabeling of the components are kept once: every checked property is
// invariant under renaming, so one representative per class is exhaustive.
std::vector<StratifiedModel> small_models(size_t k) {
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < k; ++i)
        for (size_t j = i + 1; j < k; ++j) pairs.push_back({i, j});
    std::vector<size_t> perm(k);
    for (size_t i = 0; i < k; ++i) perm[i] = i;
    std::vector<std::vector<size_t>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<StratifiedModel> out;
    std::set<std::vector<size_t>> seen;
    size_t mult_combos = 1, pair_combos = 1;
    for (size_t i = 0; i < k; ++i) mult_combos *= 3;
    for (size_t i = 0; i < pairs.size(); ++i) pair_combos *= 3;
    for (size_t mm = 0; mm < mult_combos; ++mm) {
        std::vector<size_t> mult(k);
        size_t rest = mm;
        for (size_t i = 0; i < k; ++i) {
            mult[i] = 1 + rest % 3;
            rest /= 3;
        }
        for (size_t pp = 0; pp < pair_combos; ++pp) {
            std::map<std::pair<size_t, size_t>, size_t> choice;
            size_t prest = pp;
            for (const auto& pr : pairs) {
                choice[pr] = prest % 3;  // 0 absent, 1 one branch, 2 two
                prest /= 3;
            }
            // canonical signature over all component relabelings
            std::vector<size_t> best;
            for (const auto& sigma : perms) {
                std::vector<size_t> sig;
                for (size_t i = 0; i < k; ++i) sig.push_back(mult[sigma[i]]);
                for (const auto& pr : pairs) {
                    size_t a = sigma[pr.first], b = sigma[pr.second];
                    if (a > b) std::swap(a, b);
                    sig.push_back(choice.at({a, b}));
                }
                if (best.empty() || sig < best) best = sig;
            }
            if (!seen.insert(best).second) continue;
            StratifiedModel m;
            for (size_t i = 0; i < k; ++i) {
                m.components.push_back(
                    {"V" + std::to_string(i + 1), true, Int(long(mult[i]))});
                m.strata.push_back({{m.components.back().name}, {}, {}});
            }
            for (const auto& pr : pairs) {
                if (choice.at(pr) == 0) continue;
                Stratum s;
                s.components = {m.components[pr.first].name,
                                m.components[pr.second].name};
                if (choice.at(pr) == 2) s.branches = {"b1", "b2"};
                m.strata.push_back(s);
            }
            out.push_back(std::move(m));
        }
    }
    return out;
}

LogDivisor random_divisor(const KatoFan& fan, const Int& m, std::mt19937& rng) {
    LogDivisor d;
    d.m = m;
    for (const FanPoint& p : fan.points)
        if (p.stalk.ambient_rank == 1 && rng() % 2)
            d.mults[p.id] = Rat(Int(rng() % 4));
    return d;
}

// Spanning trees of K_{n1,n2} given by monotone staircase paths from cell
// (0,0) to cell (n1-1,n2-1); together they triangulate the bipartite cone.
std::vector<std::vector<std::pair<int, int>>> staircase_trees(int n1, int n2) {
    std::vector<std::vector<std::pair<int, int>>> out;
    int moves = n1 + n2 - 2;
    for (size_t mask = 0; mask < (size_t(1) << moves); ++mask) {
        int down = 0;
        for (int b = 0; b < moves; ++b)
            if (mask & (size_t(1) << b)) ++down;
        if (down != n1 - 1) continue;
        std::vector<std::pair<int, int>> tree{{0, 0}};
        int i = 0, j = 0;
        for (int b = 0; b < moves; ++b) {
            if (mask & (size_t(1) << b))
                ++i;
            else
                ++j;
            tree.push_back({i, j});
        }
        out.push_back(std::move(tree));
    }
    return out;
}

void criterion_1() {
    Criterion c(1, "quartic pipeline: circle, torus, sphere quotient", 5.0);
    KatoFan f = fan_from_stratification(quartic_model());
    PolyhedralComplex sk = skeleton_of_fan(f);
    c.require(sk.face_counts_by_dim() == std::vector<size_t>{2, 2},
              "skeleton is not a 2-vertex 2-edge circle");
    FanProduct p = fan_product(f, f);
    ProductSkeleton ps = product_skeleton(sk, sk, p);
    c.require(ps.complex.face_counts_by_dim() == std::vector<size_t>{4, 8, 4},
              "product complex does not have 4/8/4 cells");
    SimplicialComplex k = triangulate(ps.complex);
    c.require(euler_characteristic(k) == 0, "product euler is not 0");
    c.require(homology(k) == HomologyResult{hg(1), hg(2), hg(1)},
              "product homology is not (Z, Z^2, Z)");
    GroupAction a = label_swap_action(k, "p_A", "p_B");
    SimplicialComplex q = group_quotient(k, a);
    c.require(classify_closed_surface(q).type == SurfaceType::sphere,
              "quotient is not classified as a sphere");
    c.require(homology(q) == HomologyResult{hg(1), hg(0), hg(1)},
              "quotient homology is not (Z, 0, Z)");
    c.finish();
}

void criterion_2() {
    Criterion c(2, "marked projective lines: full line and single vertex",
                1.0);
    PolyhedralComplex sk47 =
        skeleton_of_fan(fan_from_stratification(p1_model()));
    LogDivisor d47;
    d47.m = 1;
    MinimalityLocus l47 = minimality_locus(sk47, weight_function(sk47, d47));
    c.require(!l47.minus_infinity && l47.faces.size() == sk47.faces.size(),
              "trivial form does not keep the entire line");
    PolyhedralComplex sk48 =
        skeleton_of_fan(fan_from_stratification(p1_three_model()));
    LogDivisor d48;
    d48.m = 3;
    d48.mults = {{"(0:1)", 1}, {"(1:0)", 1}, {"(1:1)", 1}};
    MinimalityLocus l48 = minimality_locus(sk48, weight_function(sk48, d48));
    bool single_vertex =
        l48.faces.size() == 1 && sk48.faces[l48.faces[0]].id == "P1k";
    c.require(single_vertex, "three marked sections do not cut the locus to "
                             "the vertex");
    c.finish();
}

void criterion_3() {
    Criterion c(3, "product sweep: homeomorphism and weight identity", 60.0);
    std::vector<StratifiedModel> models;
    for (size_t k = 1; k <= 3; ++k)
        for (StratifiedModel& m : small_models(k))
            models.push_back(std::move(m));
    std::vector<KatoFan> fans;
    std::vector<PolyhedralComplex> skels;
    std::vector<bool> semistable;
    for (const StratifiedModel& m : models) {
        fans.push_back(fan_from_stratification(m));
        skels.push_back(skeleton_of_fan(fans.back()));
        semistable.push_back(is_semistable(fans.back()));
    }
    std::vector<std::pair<size_t, size_t>> todo;
    for (size_t i = 0; i < fans.size(); ++i)
        for (size_t j = i; j < fans.size(); ++j)
            if (semistable[i] || semistable[j]) todo.push_back({i, j});
    std::atomic<size_t> pairs_checked{0}, weights_checked{0};
    std::atomic<size_t> next{0};
    std::mutex fail_mutex;
    std::string failure;
    auto worker = [&]() {
        for (;;) {
            size_t t = next.fetch_add(1);
            if (t >= todo.size()) return;
            {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failure.empty()) return;
            }
            auto [i, j] = todo[t];
            FanProduct p = fan_product(fans[i], fans[j]);
            ProductSkeleton ps = product_skeleton(skels[i], skels[j], p);
            std::string witness;
            std::string local;
            if (!check_product_homeomorphism(ps, &witness)) {
                local = "homeomorphism fails for pair " + std::to_string(i) +
                        "," + std::to_string(j) + ": " + witness;
            } else {
                ++pairs_checked;
                std::mt19937 rng(20250823u + uint32_t(t));
                Int m = Int(1 + rng() % 3);
                LogDivisor dx = random_divisor(fans[i], m, rng);
                LogDivisor dy = random_divisor(fans[j], m, rng);
                try {
                    PLWeight wx = weight_function(skels[i], dx);
                    PLWeight wy = weight_function(skels[j], dy);
                    LogDivisor dz = product_divisor(p, dx, dy);
                    PLWeight wz = weight_function(ps.complex, dz);
                    if (!product_weight_check(ps, wx, wy, wz, &witness))
                        local = "weight identity fails for pair " +
                                std::to_string(i) + "," + std::to_string(j) +
                                ": " + witness;
                    else
                        ++weights_checked;
                } catch (const WeightError&) {
                    // the sampled multiplicities fit no actual form
                }
            }
            if (!local.empty()) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (failure.empty()) failure = local;
                return;
            }
        }
    };
    size_t nthreads = std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    c.require(failure.empty(), failure);
    c.require(pairs_checked > 2000,
              "sweep is unexpectedly small: " +
                  std::to_string(pairs_checked.load()));
    c.require(weights_checked > pairs_checked / 2,
              "too few weight identities were exercised");
    c.finish();
}

void criterion_4() {
    Criterion c(4, "pushout saturation law on small free monoids", 30.0);
    auto free_monoid = [](size_t rank) {
        IMat gens;
        for (size_t i = 0; i < rank; ++i) {
            IVec e(rank, 0);
            e[i] = 1;
            gens.push_back(e);
        }
        return monoid_from_generators(rank, gens);
    };
    std::vector<std::pair<AffineMonoid, IVec>> us;
    for (long a = 1; a <= 3; ++a) us.push_back({free_monoid(1), v({a})});
    for (long a = 1; a <= 3; ++a)
        for (long b = 1; b <= 3; ++b)
            us.push_back({free_monoid(2), v({a, b})});
    for (const auto& [m1, p1] : us) {
        bool all_agree = true;
        for (const auto& [m2, p2] : us) {
            auto plain = pushout_over_base(m1, p1, m2, p2, false);
            auto sat = pushout_over_base(m1, p1, m2, p2, true);
            if (!(plain.monoid == sat.monoid)) all_agree = false;
        }
        if (all_agree != (saturation_index(m1, p1) == 1)) {
            c.require(false, "law fails for a rank-" +
                                 std::to_string(m1.ambient_rank) +
                                 " uniformizer");
            break;
        }
    }
    c.finish();
}

void criterion_5() {
    Criterion c(5, "hilbert bases equal the brute-force minimal generators",
                120.0);
    size_t tested = 0, wrong = 0;
    auto check_gens = [&](size_t rank, const IMat& gens) {
        try {
            AffineMonoid m = monoid_from_generators(rank, gens);
            if (m.dim() == 0) return;
            if (oracle::hilbert_basis_reduced(m) !=
                oracle::hilbert_basis_brute(m))
                ++wrong;
            ++tested;
        } catch (const MonoidError&) {
            // degenerate or non-sharp samples are outside the oracle's domain
        }
    };
    for (long a = 1; a <= 4; ++a)
        for (long b = a; b <= 4; ++b) check_gens(1, {v({a}), v({b})});
    IMat vecs2;
    for (long a = 0; a <= 4; ++a)
        for (long b = 0; b <= 4; ++b)
            if (a || b) vecs2.push_back(v({a, b}));
    for (size_t i = 0; i < vecs2.size(); ++i)
        for (size_t j = i + 1; j < vecs2.size(); ++j) {
            check_gens(2, {vecs2[i], vecs2[j]});
            for (size_t l = j + 1; l < vecs2.size(); l += 3)
                check_gens(2, {vecs2[i], vecs2[j], vecs2[l]});
        }
    std::mt19937 rng(20250823);
    std::uniform_int_distribution<int> entry(0, 4);
    int rank3 = 0;
    while (rank3 < 150) {
        IMat gens;
        size_t count = 3 + rng() % 2;
        for (size_t i = 0; i < count; ++i) {
            IVec g(3);
            for (size_t j = 0; j < 3; ++j) g[j] = entry(rng);
            gens.push_back(g);
        }
        size_t before = tested;
        check_gens(3, gens);
        if (tested > before) ++rank3;
    }
    c.require(wrong == 0, std::to_string(wrong) + " of " +
                              std::to_string(tested) + " bases disagree");
    c.require(tested > 600,
              "sweep is unexpectedly small: " + std::to_string(tested));
    c.finish();
}

void criterion_6() {
    Criterion c(6, "symmetric powers: intervals and the sphere", 120.0);
    SimplicialComplex interval = interval_complex();
    for (int n = 1; n <= 4; ++n) {
        HomologyResult h = symmetric_product_homology(interval, n);
        bool point = h.size() == size_t(n) + 1 && h[0] == hg(1);
        for (size_t d = 1; d < h.size(); ++d)
            if (!(h[d] == hg(0))) point = false;
        c.require(point, "Sym^" + std::to_string(n) +
                             "(interval) is not a contractible " +
                             std::to_string(n) + "-dimensional complex");
    }
    SimplicialComplex s2 = sphere_complex();
    HomologyResult h2 = symmetric_product_homology(s2, 2);
    c.require(h2 == HomologyResult{hg(1), hg(0), hg(1), hg(0), hg(1)},
              "Sym^2(S^2) homology is not (Z,0,Z,0,Z)");
    c.require(symmetric_product_euler(s2, 2) == 3, "Sym^2(S^2) euler is not 3");
    c.require(symmetric_product_euler(s2, 3) == 4, "Sym^3(S^2) euler is not 4");
    // the full chain-level Sym^3 stays behind the simplex cap
    bool capped = false;
    try {
        symmetric_product_homology(s2, 3);
    } catch (const TopologyError& e) {
        capped = std::string(e.code()).find("Cap") != std::string::npos;
    }
    c.require(capped, "Sym^3(S^2) chain computation unexpectedly ran");
    c.finish();
}

void criterion_7() {
    Criterion c(7, "kummer kernels: sphere quotient and contractible alcoves",
                60.0);
    ComplexWithAction torus = kummer_kernel(1);
    SimplicialComplex q = group_quotient(torus.complex, torus.action);
    c.require(classify_closed_surface(q).type == SurfaceType::sphere,
              "torus kernel quotient is not a sphere");
    for (int n = 1; n <= 2; ++n) {
        ComplexWithAction circ = kummer_kernel_circle(n);
        HomologyResult h = quotient_homology(circ.complex, circ.action);
        bool point = h.size() == size_t(n) + 1 && h[0] == hg(1);
        for (size_t d = 1; d < h.size(); ++d)
            if (!(h[d] == hg(0))) point = false;
        c.require(point, "circle-variant quotient for n = " +
                             std::to_string(n) +
                             " is not a contractible " + std::to_string(n) +
                             "-dimensional complex");
    }
    c.finish();
}

void criterion_8() {
    Criterion c(8, "staircase spanning-tree cones are unimodular", 30.0);
    for (int n1 = 1; n1 <= 5; ++n1)
        for (int n2 = n1; n1 + n2 <= 6; ++n2) {
            if (n1 == 1 && n2 == 1) continue;  // a single ray has no trees
            bool ok = bipartite_unimodularity_check(n1, n2,
                                                    staircase_trees(n1, n2));
            c.require(ok, "a tree cone for K_{" + std::to_string(n1) + "," +
                              std::to_string(n2) + "} is not unimodular");
        }
    c.finish();
}

void criterion_9() {
    Criterion c(9, "homology oracles and chain-level consistency", 60.0);
    SimplicialComplex s2 = sphere_complex();
    SimplicialComplex torus = kummer_kernel(1).complex;
    SimplicialComplex rp2 = projective_plane_complex();
    c.require(homology(s2) == HomologyResult{hg(1), hg(0), hg(1)},
              "sphere homology is wrong");
    c.require(homology(torus) == HomologyResult{hg(1), hg(2), hg(1)},
              "torus homology is wrong");
    c.require(homology(rp2) == HomologyResult{hg(1), hg(0, {2}), hg(0)},
              "projective plane homology is wrong");
    c.require(symmetric_product_homology(s2, 2) ==
                  HomologyResult{hg(1), hg(0), hg(1), hg(0), hg(1)},
              "complex projective plane via Sym^2 is wrong");
    ComplexWithAction pw = product_power(s2, 2);
    std::vector<size_t> counts = quotient_cell_counts(pw.complex, pw.action);
    long chi = 0;
    for (size_t d = 0; d < counts.size(); ++d)
        chi += (d % 2 ? -1 : 1) * long(counts[d]);
    c.require(chi == 3, "Sym^2(S^2) cell counts are inconsistent with chi=3");
    for (const SimplicialComplex* k : {&s2, &torus, &rp2, &pw.complex}) {
        c.require(boundary_squares_to_zero(*k), "boundary does not square to "
                                                "zero");
        c.require(euler_consistent(*k),
                  "euler characteristic disagrees with the betti numbers");
    }
    c.finish();
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    return failures;
}
