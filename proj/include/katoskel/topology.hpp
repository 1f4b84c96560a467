// Simplicial topology for skeleton artifacts: canonical (order-complex)
// triangulation of polyhedral complexes, finite group actions with regular
// quotients, symmetric products, Kummer kernels, exact integer homology via
// Smith normal form, and closed-surface classification.
#pragma once

#include "katoskel/skeleton.hpp"

namespace katoskel {

class TopologyError : public std::runtime_error {
  public:
    TopologyError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

struct SimplicialComplex {
    size_t num_vertices = 0;
    std::vector<std::string> labels;  // empty or parallel to the vertices
    std::vector<std::vector<size_t>> maximal;  // sorted vertex tuples

    // All simplices grouped by dimension, sorted and deduplicated.
    std::vector<std::vector<std::vector<size_t>>> all_simplices() const;
    size_t dimension() const;
    size_t simplex_count() const;
};

// A finite group given by vertex permutations; must contain the identity and
// be closed under composition, and every element must map simplices to
// simplices.
struct GroupAction {
    std::vector<std::vector<size_t>> perms;
};

// Closure of a generating set of permutations under composition.
GroupAction close_group(const std::vector<std::vector<size_t>>& generators);

struct HomologyGroup {
    size_t betti = 0;
    std::vector<Int> torsion;  // invariant factors greater than one

    bool operator==(const HomologyGroup&) const = default;
};
using HomologyResult = std::vector<HomologyGroup>;

// Order complex of the face poset: one vertex per face, one simplex per
// chain. Canonical, so cellular automorphisms induce simplicial ones.
SimplicialComplex triangulate(const PolyhedralComplex& p);
// Same construction restricted to the bounded faces; used when homology of a
// complex with recession rays is requested.
SimplicialComplex triangulate_bounded(const PolyhedralComplex& p);

SimplicialComplex barycentric_subdivision(const SimplicialComplex& k);
// The same subdivision together with the action induced on it.
std::pair<SimplicialComplex, GroupAction> barycentric_subdivision(
    const SimplicialComplex& k, const GroupAction& a);

// Subdivides until the action is regular (stabilizers fix simplices
// pointwise, vertices of a simplex lie in distinct orbits, and simplices
// with equal orbit image lie in one orbit), then identifies vertex orbits.
SimplicialComplex group_quotient(const SimplicialComplex& k,
                                 const GroupAction& a,
                                 int max_subdivisions = 3,
                                 size_t simplex_cap = 500000);

// Homology of |K|/G computed from the equivariant chain complex (cellular
// chains of the quotient CW structure); needs only pointwise-fixing
// stabilizers, so it avoids the subdivisions group_quotient may require.
HomologyResult quotient_homology(const SimplicialComplex& k,
                                 const GroupAction& a,
                                 int max_subdivisions = 3,
                                 size_t simplex_cap = 500000);
// Cell counts per dimension of the same quotient CW structure.
std::vector<size_t> quotient_cell_counts(const SimplicialComplex& k,
                                         const GroupAction& a,
                                         int max_subdivisions = 3,
                                         size_t simplex_cap = 500000);

// The n-fold product of K triangulated as the order complex of the product
// face poset, together with the coordinate-permutation action of S_n.
struct ComplexWithAction {
    SimplicialComplex complex;
    GroupAction action;
};
ComplexWithAction product_power(const SimplicialComplex& k, int n,
                                size_t simplex_cap = 500000);

// Quotient of the n-fold product by S_n; Sym^1 = K.
SimplicialComplex symmetric_product(const SimplicialComplex& k, int n,
                                    size_t simplex_cap = 500000);
HomologyResult symmetric_product_homology(const SimplicialComplex& k, int n,
                                          size_t simplex_cap = 500000);
// Euler characteristic of Sym^n(K) by Burnside counting over S_n; exact and
// independent of any cap.
Int symmetric_product_euler(const SimplicialComplex& k, int n);

// Kernel of the skeleton summation map for an abelian surface degeneration
// whose skeleton is a 2-torus: for n = 1 this is the torus R^2/Z^2 with the
// S_2 action v -> -v. Larger n admit no equivariant product grid and are
// rejected.
ComplexWithAction kummer_kernel(int n);
// Variant for skeletons equal to a circle: the kernel is an n-torus with the
// S_{n+1} Weyl-type action; supported for n <= 2.
ComplexWithAction kummer_kernel_circle(int n);

HomologyResult homology(const SimplicialComplex& k);
long euler_characteristic(const SimplicialComplex& k);

enum class SurfaceType {
    sphere,
    torus,
    klein_bottle,
    projective_plane,
    orientable_genus,
    nonorientable_genus,
    not_a_surface,
};
struct SurfaceClass {
    SurfaceType type = SurfaceType::not_a_surface;
    long genus = 0;
    std::string witness;
};
SurfaceClass classify_closed_surface(const SimplicialComplex& k);

}  // namespace katoskel
