// Skeletons of Kato fans: each vertical point x realizes the rational
// polyhedron sigma_x = {alpha : stalk -> R>=0, alpha(pi) = 1}; the faces glue
// along the cospecialization maps into a polyhedral complex. Products of
// skeletons come with cellwise affine comparison maps that are checked to be
// a PL homeomorphism in the semistable case.
#pragma once

#include "katoskel/fan.hpp"

namespace katoskel {

class SkeletonError : public std::runtime_error {
  public:
    SkeletonError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

// One cell of the skeleton, in the coordinates dual to the stalk ambient
// lattice. V-representation is primary (vertices plus recession rays for
// horizontal directions); the H-representation alpha(g) >= 0, alpha(pi) = 1
// is kept for membership tests.
struct SkeletonFace {
    size_t fan_point = 0;  // index into the fan's point list
    std::string id;
    size_t dim = 0;        // stalk rank minus one
    RMat vertices;         // rows, sorted; each satisfies alpha(pi) = 1
    IMat rays;             // primitive recession directions, alpha(pi) = 0
    IMat hrep;             // stalk generators g, constraints alpha(g) >= 0
    IVec pi;

    bool bounded() const { return rays.empty(); }
    bool contains(const RVec& alpha) const;
};

struct PolyhedralComplex {
    KatoFan fan;
    std::vector<SkeletonFace> faces;  // one per vertical fan point
    std::vector<std::optional<size_t>> face_of_point;
    // Affine embeddings sigma_shallow -> sigma_deep on dual coordinates,
    // transposes of the cospecialization matrices (key: {deep, shallow} face
    // indices).
    std::map<std::pair<size_t, size_t>, IMat> inclusions;

    std::vector<size_t> face_counts_by_dim() const;
    // Coordinates of a face point inside the fan's shared realization, when
    // the underlying point carries one.
    std::optional<RVec> realize(size_t face, const RVec& alpha) const;
};

PolyhedralComplex skeleton_of_fan(const KatoFan& f);

bool complexes_equal(const PolyhedralComplex& a, const PolyhedralComplex& b);

// Skeleton of a fibred product fan together with the per-cell projections to
// the factor skeletons (restriction of alpha along the stalk inclusions).
struct ProductSkeleton {
    PolyhedralComplex complex;
    PolyhedralComplex skx, sky;
    std::vector<size_t> face_x, face_y;  // per face: factor face index
    std::vector<IMat> map_x, map_y;      // per face: dual-side linear maps
    std::vector<ProductPointInfo> info;  // per face, copied from the product
};

ProductSkeleton product_skeleton(const PolyhedralComplex& skx,
                                 const PolyhedralComplex& sky,
                                 const FanProduct& p);

// Verifies that the cellwise maps assemble to a PL homeomorphism onto
// Sk(X) x Sk(Y): face bijection against factor pairs, unimodular affine
// invertibility of every cell map, and compatibility with gluing. On failure
// returns false and stores a description in *witness if given.
bool check_product_homeomorphism(const ProductSkeleton& ps,
                                 std::string* witness = nullptr);

// Skeleton of a subdivided fan, after verifying that `subdivided` really
// refines the fan underlying `sk` inside their common realization (same
// support, each maximal piece inside one cone, volumes matching).
PolyhedralComplex subdivide_complex(const PolyhedralComplex& sk,
                                    const KatoFan& subdivided);

}  // namespace katoskel
