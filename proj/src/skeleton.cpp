#include "katoskel/skeleton.hpp"

#include <algorithm>
#include <set>

#include "katoskel/monoid.hpp"

namespace katoskel {

namespace {

bool rvec_less(const RVec& a, const RVec& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

void sort_rows(RMat& m) { std::sort(m.begin(), m.end(), rvec_less); }

IVec concat(const IVec& a, const IVec& b) {
    IVec r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

RVec rconcat(const RVec& a, const RVec& b) {
    RVec r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

IVec zeros(size_t n) { return IVec(n, 0); }

IMat vstack(const IMat& a, const IMat& b) {
    IMat r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

// Maximal points carrying realized cones.
std::vector<size_t> realized_maximal(const KatoFan& f) {
    std::vector<char> shallow(f.points.size(), 0);
    for (const auto& [key, hom] : f.cospec) {
        (void)hom;
        shallow[key.second] = 1;
    }
    std::vector<size_t> out;
    for (size_t i = 0; i < f.points.size(); ++i)
        if (!shallow[i] && f.points[i].realized_rays) out.push_back(i);
    return out;
}

// A realized cone with its saturated span basis, reduced rays, and facet
// normals in span coordinates.
struct RealCone {
    IMat rays;
    IMat basis;  // k x D, saturated HNF basis of the span
    IMat red;    // rays in basis coordinates
    IMat normals;
    size_t k = 0;

    bool contains(const IVec& v) const {
        auto c = lattice_coords(basis, v);
        if (!c) return false;
        for (const IVec& n : normals)
            if (dot(n, *c) < 0) return false;
        return true;
    }
};

RealCone real_cone(const IMat& rays) {
    RealCone c;
    c.rays = rays;
    c.basis = saturate_lattice(rays);
    c.k = c.basis.size();
    for (const IVec& r : rays) c.red.push_back(*lattice_coords(c.basis, r));
    c.normals = cone_facet_normals(c.k, c.red);
    return c;
}

}  // namespace

bool SkeletonFace::contains(const RVec& alpha) const {
    if (rdot(alpha, pi) != 1) return false;
    for (const IVec& g : hrep)
        if (rdot(alpha, g) < 0) return false;
    return true;
}

std::vector<size_t> PolyhedralComplex::face_counts_by_dim() const {
    std::vector<size_t> counts;
    for (const SkeletonFace& f : faces) {
        if (counts.size() <= f.dim) counts.resize(f.dim + 1, 0);
        counts[f.dim]++;
    }
    return counts;
}

std::optional<RVec> PolyhedralComplex::realize(size_t face,
                                               const RVec& alpha) const {
    const FanPoint& p = fan.points[faces[face].fan_point];
    if (!p.realized_rays) return std::nullopt;
    IMat basis = saturate_lattice(*p.realized_rays);
    RVec out(fan.realized_dim, Rat(0));
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < out.size(); ++j)
            out[j] += alpha[i] * Rat(basis[i][j]);
    return out;
}

PolyhedralComplex skeleton_of_fan(const KatoFan& f) {
    PolyhedralComplex sk;
    sk.fan = f;
    sk.face_of_point.assign(f.points.size(), std::nullopt);
    for (size_t i = 0; i < f.points.size(); ++i) {
        const FanPoint& p = f.points[i];
        if (!p.vertical) continue;
        SkeletonFace face;
        face.fan_point = i;
        face.id = p.id;
        size_t d = p.stalk.ambient_rank;
        face.dim = d - 1;
        face.pi = p.pi;
        face.hrep = p.stalk.min_generators;
        // Extreme rays of the dual cone; pairing with pi splits them into
        // vertices (after scaling to alpha(pi) = 1) and recession rays.
        for (const IVec& r : cone_facet_normals(d, p.stalk.min_generators)) {
            Int c = dot(r, p.pi);
            if (c == 0) {
                face.rays.push_back(primitive(r));
            } else {
                RVec v(d);
                for (size_t j = 0; j < d; ++j) v[j] = Rat(r[j], c);
                face.vertices.push_back(std::move(v));
            }
        }
        sort_rows(face.vertices);
        std::sort(face.rays.begin(), face.rays.end());
        sk.face_of_point[i] = sk.faces.size();
        sk.faces.push_back(std::move(face));
    }
    for (const auto& [key, hom] : f.cospec) {
        auto fi = sk.face_of_point[key.first];
        auto fj = sk.face_of_point[key.second];
        if (fi && fj) sk.inclusions[{*fi, *fj}] = transpose(hom.matrix);
    }
    return sk;
}

bool complexes_equal(const PolyhedralComplex& a, const PolyhedralComplex& b) {
    if (a.faces.size() != b.faces.size()) return false;
    for (size_t i = 0; i < a.faces.size(); ++i) {
        const SkeletonFace& fa = a.faces[i];
        const SkeletonFace& fb = b.faces[i];
        if (fa.dim != fb.dim || fa.vertices != fb.vertices ||
            fa.rays != fb.rays)
            return false;
    }
    std::set<std::pair<size_t, size_t>> ka, kb;
    for (const auto& [key, m] : a.inclusions) {
        (void)m;
        ka.insert(key);
    }
    for (const auto& [key, m] : b.inclusions) {
        (void)m;
        kb.insert(key);
    }
    return ka == kb;
}

ProductSkeleton product_skeleton(const PolyhedralComplex& skx,
                                 const PolyhedralComplex& sky,
                                 const FanProduct& p) {
    if (!p.factor_x || !p.factor_y)
        throw SkeletonError("NotAProductFan", "product lacks factor fans");
    auto matches = [](const PolyhedralComplex& sk, const KatoFan& factor) {
        if (sk.fan.points.size() != factor.points.size()) return false;
        for (size_t i = 0; i < factor.points.size(); ++i)
            if (sk.fan.points[i].id != factor.points[i].id) return false;
        return true;
    };
    if (!matches(skx, *p.factor_x) || !matches(sky, *p.factor_y))
        throw SkeletonError("NotAProductFan",
                            "factor skeletons do not match the product fan");
    ProductSkeleton ps;
    ps.complex = skeleton_of_fan(p.fan);
    ps.skx = skx;
    ps.sky = sky;
    for (const SkeletonFace& face : ps.complex.faces) {
        const ProductPointInfo& d = p.info[face.fan_point];
        if (!d.x || !d.y || !skx.face_of_point[*d.x] ||
            !sky.face_of_point[*d.y])
            throw SkeletonError("NotAProductFan",
                                "vertical product point without a vertical "
                                "factor pair");
        ps.face_x.push_back(*skx.face_of_point[*d.x]);
        ps.face_y.push_back(*sky.face_of_point[*d.y]);
        ps.map_x.push_back(transpose(d.incl1));
        ps.map_y.push_back(transpose(d.incl2));
        ps.info.push_back(d);
    }
    return ps;
}

bool check_product_homeomorphism(const ProductSkeleton& ps,
                                 std::string* witness) {
    auto fail = [&](const std::string& msg) {
        if (witness) *witness = msg;
        return false;
    };
    // (i) faces correspond bijectively to pairs of factor faces.
    std::map<std::pair<size_t, size_t>, size_t> pair_count;
    for (size_t i = 0; i < ps.complex.faces.size(); ++i)
        pair_count[{ps.face_x[i], ps.face_y[i]}]++;
    for (size_t i = 0; i < ps.skx.faces.size(); ++i)
        for (size_t j = 0; j < ps.sky.faces.size(); ++j) {
            size_t c = pair_count.count({i, j}) ? pair_count[{i, j}] : 0;
            if (c != 1)
                return fail("face pair (" + ps.skx.faces[i].id + ", " +
                            ps.sky.faces[j].id + ") is covered by " +
                            std::to_string(c) + " product cells");
        }
    if (ps.complex.faces.size() != ps.skx.faces.size() * ps.sky.faces.size())
        return fail("product has extra cells beyond the factor pairs");
    // (ii) each cell map is a unimodular affine isomorphism onto the product
    // of the factor cells.
    for (size_t i = 0; i < ps.complex.faces.size(); ++i) {
        const SkeletonFace& fz = ps.complex.faces[i];
        const SkeletonFace& fx = ps.skx.faces[ps.face_x[i]];
        const SkeletonFace& fy = ps.sky.faces[ps.face_y[i]];
        // vertices map bijectively onto vertex pairs
        RMat images, expected;
        for (const RVec& v : fz.vertices)
            images.push_back(rconcat(mat_apply_r(ps.map_x[i], v),
                                     mat_apply_r(ps.map_y[i], v)));
        for (const RVec& vx : fx.vertices)
            for (const RVec& vy : fy.vertices)
                expected.push_back(rconcat(vx, vy));
        sort_rows(images);
        sort_rows(expected);
        if (images != expected)
            return fail("cell " + fz.id +
                        ": vertices do not match the factor vertex pairs");
        // rays map bijectively onto (rays_x, 0) and (0, rays_y)
        IMat rimages, rexpected;
        for (const IVec& r : fz.rays)
            rimages.push_back(primitive(concat(mat_apply(ps.map_x[i], r),
                                               mat_apply(ps.map_y[i], r))));
        size_t dx = fx.pi.size(), dy = fy.pi.size();
        for (const IVec& r : fx.rays) rexpected.push_back(concat(r, zeros(dy)));
        for (const IVec& r : fy.rays) rexpected.push_back(concat(zeros(dx), r));
        std::sort(rimages.begin(), rimages.end());
        std::sort(rexpected.begin(), rexpected.end());
        if (rimages != rexpected)
            return fail("cell " + fz.id +
                        ": rays do not match the factor recession rays");
        // unimodularity on the integral affine structures: the direction
        // lattice {alpha(pi_z) = 0} must map isomorphically onto the direct
        // sum of the factor direction lattices.
        IMat kz = integer_kernel(IMat{fz.pi});
        IMat kx = integer_kernel(IMat{fx.pi});
        IMat ky = integer_kernel(IMat{fy.pi});
        IMat kxy;
        for (const IVec& r : kx) kxy.push_back(concat(r, zeros(dy)));
        for (const IVec& r : ky) kxy.push_back(concat(zeros(dx), r));
        if (kz.size() != kxy.size())
            return fail("cell " + fz.id + ": direction lattice rank mismatch");
        IMat m = vstack(ps.map_x[i], ps.map_y[i]);
        IMat coords;
        for (const IVec& k : kz) {
            auto c = lattice_coords(kxy, mat_apply(m, k));
            if (!c)
                return fail("cell " + fz.id +
                            ": direction lattice image is not integral");
            coords.push_back(*c);
        }
        if (lattice_det(coords, coords.size()) != 1)
            return fail("cell " + fz.id +
                        ": cell map is not unimodular on direction lattices");
    }
    // (iii) compatibility with gluing on both factors.
    for (const auto& [key, tau] : ps.complex.fan.cospec) {
        auto fi = ps.complex.face_of_point[key.first];
        auto fj = ps.complex.face_of_point[key.second];
        if (!fi || !fj) continue;
        const ProductPointInfo& di = ps.info[*fi];
        const ProductPointInfo& dj = ps.info[*fj];
        auto factor_tau = [](const PolyhedralComplex& sk, size_t deep,
                            size_t shallow) {
            if (deep == shallow)
                return identity_mat(sk.fan.points[deep].stalk.ambient_rank);
            return sk.fan.cospec.at({deep, shallow}).matrix;
        };
        IMat tx = factor_tau(ps.skx, *di.x, *dj.x);
        IMat ty = factor_tau(ps.sky, *di.y, *dj.y);
        if (mat_mul(tau.matrix, di.incl1) != mat_mul(dj.incl1, tx) ||
            mat_mul(tau.matrix, di.incl2) != mat_mul(dj.incl2, ty))
            return fail("gluing between cells " + ps.complex.faces[*fi].id +
                        " and " + ps.complex.faces[*fj].id +
                        " is incompatible with the factor gluing");
    }
    if (witness) witness->clear();
    return true;
}

PolyhedralComplex subdivide_complex(const PolyhedralComplex& sk,
                                    const KatoFan& subdivided) {
    const KatoFan& f = sk.fan;
    if (f.realized_dim == 0 || subdivided.realized_dim == 0)
        throw SkeletonError("NotASubdivision",
                            "both fans must carry a shared cone realization");
    if (f.realized_dim != subdivided.realized_dim ||
        f.realized_pi != subdivided.realized_pi)
        throw SkeletonError("NotASubdivision",
                            "fans are realized in different ambient data");
    std::vector<RealCone> coarse;
    for (size_t i : realized_maximal(f))
        coarse.push_back(real_cone(*f.points[i].realized_rays));
    // Pieces grouped by the coarse cone containing them, in its span
    // coordinates.
    struct Piece {
        IMat red;
        IMat normals;
    };
    std::vector<std::vector<Piece>> pieces(coarse.size());
    for (size_t i : realized_maximal(subdivided)) {
        const IMat& rays = *subdivided.points[i].realized_rays;
        size_t k = rank_of(rays);
        bool placed = false;
        for (size_t c = 0; c < coarse.size() && !placed; ++c) {
            if (coarse[c].k != k) continue;
            bool inside = true;
            for (const IVec& r : rays)
                if (!coarse[c].contains(r)) {
                    inside = false;
                    break;
                }
            if (!inside) continue;
            Piece p;
            for (const IVec& r : rays)
                p.red.push_back(*lattice_coords(coarse[c].basis, r));
            p.normals = cone_facet_normals(k, p.red);
            pieces[c].push_back(std::move(p));
            placed = true;
        }
        if (!placed)
            throw SkeletonError("NotASubdivision",
                                "cone of " + subdivided.points[i].id +
                                    " is not contained in a cone of the "
                                    "original fan");
    }
    // Coverage: every facet of a piece interior to the coarse cone must have
    // a neighbouring piece on its other side.
    for (size_t c = 0; c < coarse.size(); ++c) {
        if (pieces[c].empty())
            throw SkeletonError("NotASubdivision",
                                "pieces do not cover the original support");
        for (size_t a = 0; a < pieces[c].size(); ++a) {
            for (const IVec& n : pieces[c][a].normals) {
                IMat facet;
                for (const IVec& r : pieces[c][a].red)
                    if (dot(n, r) == 0) facet.push_back(r);
                // the zero face (one-dimensional pieces) is always boundary
                if (facet.empty()) continue;
                bool on_boundary = false;
                for (const IVec& m : coarse[c].normals) {
                    bool flat = true;
                    for (const IVec& r : facet)
                        if (dot(m, r) != 0) flat = false;
                    if (flat && !facet.empty()) on_boundary = true;
                }
                if (on_boundary) continue;
                bool neighbour = false;
                for (size_t b = 0; b < pieces[c].size() && !neighbour; ++b) {
                    if (b == a) continue;
                    bool shares = true;
                    for (const IVec& r : facet)
                        for (const IVec& m : pieces[c][b].normals)
                            if (dot(m, r) < 0) shares = false;
                    if (!shares) continue;
                    for (const IVec& r : pieces[c][b].red)
                        if (dot(n, r) < 0) neighbour = true;
                }
                if (!neighbour)
                    throw SkeletonError(
                        "NotASubdivision",
                        "pieces do not cover the original support");
            }
        }
    }
    return skeleton_of_fan(subdivided);
}

}  // namespace katoskel
