// Kato fans described combinatorially: finite posets of stratum-branch
// points with sharp fs monoid stalks, marked uniformizers, and surjective
// cospecialization maps; construction from stratified models, subdivision,
// resolution, and fibred products with branch counting.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "katoskel/monoid.hpp"

namespace katoskel {

struct Component {
    std::string name;
    bool vertical = true;
    Int multiplicity = 1;  // meaningful for vertical components only
};

struct StalkOverride {
    IMat cone_rays;                         // rays of the dual (realized) cone
    std::vector<std::string> ray_components;  // parallel to sorted extreme rays
    IVec pi;
};

struct Stratum {
    std::vector<std::string> components;
    std::vector<std::string> branches;  // defaults to one anonymous branch
    std::optional<StalkOverride> stalk;
};

struct StratifiedModel {
    std::vector<Component> components;
    std::vector<Stratum> strata;
};

// Fan stalks always use full-group coordinates: ambient_rank == dim and the
// group lattice is all of Z^dim.
struct FanPoint {
    std::string id;
    std::vector<std::string> component_set;
    std::string branch;
    AffineMonoid stalk;
    IVec pi;              // uniformizer in stalk coordinates; may be zero
    bool vertical = false;  // pi != 0
    // Extreme rays of the realized cone Hom(stalk, R>=0) inside a lattice
    // shared by the whole fan, when such a realization exists.
    std::optional<IMat> realized_rays;
};

struct KatoFan {
    std::vector<FanPoint> points;
    // tau_{x,y} for y a strict generization of x (key: {deep, shallow}).
    std::map<std::pair<size_t, size_t>, MonoidHom> cospec;
    size_t realized_dim = 0;  // ambient dimension of realized rays, 0 if none
    IVec realized_pi;         // uniformizer as a functional on realized rays

    bool leq(size_t shallow, size_t deep) const {
        return shallow == deep || cospec.count({deep, shallow}) > 0;
    }
    // Strict generizations of a point (indices y with tau_{x,y} present).
    std::vector<size_t> generizations(size_t x) const;
    std::vector<size_t> rank1_generizations(size_t x) const;
};

class FanError : public std::runtime_error {
  public:
    FanError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

KatoFan fan_from_stratification(const StratifiedModel& m);

// The fan of all faces of a single cone: realized cone = the cone spanned by
// `rays` in Z^dim, stalks = dual monoids of the faces. pi_dual is the
// uniformizer as a functional on the realized cone (an element of the full
// dual monoid); its restriction to each face is the stalk uniformizer.
KatoFan fan_of_cone(size_t dim, const IMat& rays, const IVec& pi_dual);

// Fibred product over the base fan. Pair metadata for each product point.
struct ProductPointInfo {
    std::optional<size_t> x;   // index in the first factor; nullopt = generic
    std::optional<size_t> y;   // index in the second factor
    size_t branch = 0;         // 0 .. n(x,y)-1
    Int n = 1;
    Int torsion = 1;           // torsion order killed in the glued lattice
    // Presentation of the stalk as a quotient of the joined ambient lattice.
    IMat incl1, incl2;         // factor ambient -> product stalk ambient
    IMat section;              // stalk ambient -> joined ambient lattice
};

using BranchRule =
    std::function<Int(const KatoFan&, size_t, const KatoFan&, size_t)>;

struct FanProduct {
    KatoFan fan;
    std::vector<ProductPointInfo> info;  // parallel to fan.points
    const KatoFan* factor_x = nullptr;
    const KatoFan* factor_y = nullptr;
};

FanProduct fan_product(const KatoFan& f, const KatoFan& g,
                       const BranchRule& rule = nullptr);

bool is_semistable(const KatoFan& f);

// Branch counts must grow under specialization in both coordinates; returns
// the violating pair of point indices if any.
std::optional<std::pair<size_t, size_t>> n_monotonicity_violation(
    const FanProduct& p);
bool n_monotonicity_check(const FanProduct& p);

// Subdivisions; require a realized fan.
KatoFan star_subdivision(const KatoFan& f, size_t point, const IVec& ray);
KatoFan barycentric_subdivision(const KatoFan& f);

bool is_regular(const KatoFan& f);
KatoFan resolve(const KatoFan& f, int iteration_cap = 500);

// All rational points of the realized support on the grid (1/denom) Z^dim
// with coordinates bounded by `box`; used for subdivision support checks.
std::vector<RVec> realized_support_sample(const KatoFan& f, long denom,
                                          long box);

}  // namespace katoskel
