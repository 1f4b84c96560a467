// Piecewise linear weight functions on skeletons from divisor data: on the
// cell of a point x the weight is alpha(d_x) + m, where d_x is the rational
// stalk element whose component valuations are the given divisor
// multiplicities. Provides minimality loci, divisor normalization, essential
// skeletons as finite unions, and the product weight identity.
#pragma once

#include "katoskel/skeleton.hpp"

namespace katoskel {

class WeightError : public std::runtime_error {
  public:
    WeightError(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

// A logarithmic m-pluricanonical form, given by the multiplicities of its
// divisor along the height-one fan points (keyed by point id; absent keys
// mean multiplicity zero).
struct LogDivisor {
    Int m = 1;
    std::map<std::string, Rat> mults;
};

// Affine functional per face: wt(alpha) = <linear, alpha> + m. The linear
// parts agree across gluing; weight_function verifies this.
struct PLWeight {
    Int m = 1;
    std::vector<RVec> linear;  // parallel to the complex's faces

    Rat value(size_t face, const RVec& alpha) const;
    Rat slope(size_t face, const IVec& ray) const;
};

PLWeight weight_function(const PolyhedralComplex& sk, const LogDivisor& d);

struct MinimalityLocus {
    bool minus_infinity = false;  // some recession slope is negative
    Rat min_value = 0;
    std::vector<size_t> faces;  // sorted face indices, closed under faces
};

MinimalityLocus minimality_locus(const PolyhedralComplex& sk,
                                 const PLWeight& w);

// Rescales by the minimal integer d and shifts by n times the uniformizer
// divisor so that all vertical multiplicities are integral, nonnegative, and
// some vertical multiplicity vanishes. Zero multiplicities are dropped.
LogDivisor normalize_divisor(const LogDivisor& d, const PolyhedralComplex& sk);

// Union of the minimality loci of the given forms, as sorted face indices.
std::vector<size_t> essential_skeleton(const PolyhedralComplex& sk,
                                       const std::vector<LogDivisor>& forms);

// Divisor of the product form pr*(omega_X) (x) pr*(omega_Y) on a fibred
// product fan; the factor indices must agree.
LogDivisor product_divisor(const FanProduct& p, const LogDivisor& dx,
                           const LogDivisor& dy);

// Verifies wt_Z = wt_X + wt_Y - m at every vertex and on every ray slope of
// the product complex, and that the minimality locus of wt_Z corresponds
// bijectively to the product of the factor loci.
bool product_weight_check(const ProductSkeleton& ps, const PLWeight& wx,
                          const PLWeight& wy, const PLWeight& wz,
                          std::string* witness = nullptr);

}  // namespace katoskel
