// Sharp fine (optionally saturated) affine monoids given as finitely
// generated submonoids of an integer lattice, with faces, face quotients,
// pushouts over a base, and the saturation index.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "katoskel/linalg.hpp"

namespace katoskel {

class MonoidError : public std::runtime_error {
  public:
    MonoidError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

struct AffineMonoid {
    size_t ambient_rank = 0;
    IMat generators;       // as supplied (deduplicated, zero dropped)
    IMat group_basis;      // HNF basis (rows) of the lattice generated
    IMat min_generators;   // minimal generating set of the monoid, ambient coords
    IMat sat_hilbert;      // Hilbert basis of the saturation, ambient coords
    bool saturated = false;

    // Cone data in reduced coordinates (coordinates w.r.t. group_basis).
    IMat facet_normals;    // primitive inward normals, reduced coords
    IMat extreme_rays;     // primitive ray generators, reduced coords

    size_t dim() const { return group_basis.size(); }

    IVec reduce(const IVec& ambient) const;
    IVec unreduce(const IVec& reduced) const;

    // Membership in the saturation (cone intersect group).
    bool cone_contains(const IVec& ambient) const;
    // Membership in the monoid itself.
    bool contains(const IVec& ambient) const;

    // Sorted reduced minimal generators; the canonical equality key.
    IMat canonical_key() const;

    bool operator==(const AffineMonoid& other) const {
        return canonical_key() == other.canonical_key();
    }
};

struct MonoidHom {
    IMat matrix;  // dst_rank x src_rank, applied to ambient column vectors
};

inline MonoidHom compose(const MonoidHom& second, const MonoidHom& first) {
    return MonoidHom{mat_mul(second.matrix, first.matrix)};
}

struct Face {
    std::vector<size_t> members;  // indices into parent's min_generators
};

AffineMonoid monoid_from_generators(size_t rank, const IMat& gens);
AffineMonoid saturate(const AffineMonoid& m);
bool is_saturated(const AffineMonoid& m);
bool is_free(const AffineMonoid& m);

std::vector<Face> faces(const AffineMonoid& m);
bool is_face_of(const AffineMonoid& m, const Face& f);

// Sharp quotient by a face together with the projection hom.
std::pair<AffineMonoid, MonoidHom> quotient_by_face(const AffineMonoid& m,
                                                    const Face& f);

struct PushoutResult {
    AffineMonoid monoid;
    IVec pi;            // common image of the uniformizers, ambient coords
    Int torsion_order;  // order of the torsion killed in the glued lattice
    IMat incl1, incl2;  // ambient maps Q1 -> pushout, Q2 -> pushout
};

PushoutResult pushout_over_base(const AffineMonoid& q1, const IVec& pi1,
                                const AffineMonoid& q2, const IVec& pi2,
                                bool saturated);

Int saturation_index(const AffineMonoid& q, const IVec& pi);

// Ray valuations of an element: value of each primitive facet normal
// (component multiplicities of pi), in the order of facet_normals.
std::vector<Int> ray_valuations(const AffineMonoid& q, const IVec& pi);

// Primitive inward facet normals of the full-dimensional pointed cone
// spanned by `rays` inside Z^dim (standard coordinates, no lattice
// reduction); these are the extreme rays of the dual cone.
IMat cone_facet_normals(size_t dim, const IMat& rays);

// Primitive extreme rays of the same cone.
IMat cone_extreme_rays_full(size_t dim, const IMat& rays);

// The monoid of all lattice points of the cone spanned by `rays` inside
// Z^dim; always saturated with full group lattice.
AffineMonoid saturated_cone_monoid(size_t dim, const IMat& rays);

// Triangulates the full-dimensional pointed cone spanned by the given rays
// (lattice Z^dim); returns maximal simplicial subsets of the ray list.
std::vector<std::vector<IVec>> triangulate_cone(const std::vector<IVec>& rays);

// Normalized volume (sum of |det| over a triangulation) of the cone.
Int cone_normalized_volume(const std::vector<IVec>& rays);

// Lemma-checking operation: each spanning tree of K_{n1,n2} spans a cone on
// the vectors x_ij = e_i + f_j; the trees must triangulate the full cone and
// the check reports whether every tree cone is unimodular in the lattice
// generated by all x_ij.
bool bipartite_unimodularity_check(
    int n1, int n2,
    const std::vector<std::vector<std::pair<int, int>>>& trees);

}  // namespace katoskel
