// Exact integer/rational linear algebra on small dense matrices: Hermite and
// Smith normal forms, kernels, rational solving, lattice membership.
#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace katoskel {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IVec = std::vector<Int>;
using IMat = std::vector<IVec>;  // row-major
using RVec = std::vector<Rat>;
using RMat = std::vector<RVec>;

inline Int igcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }
inline Int ilcm(Int a, Int b) { return boost::multiprecision::lcm(a, b); }

inline Int dot(const IVec& a, const IVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat rdot(const RVec& a, const IVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
    return s;
}

inline IVec add(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline IVec sub(const IVec& a, const IVec& b) {
    IVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline IVec scale(const Int& c, const IVec& a) {
    IVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline bool is_zero(const IVec& a) {
    return std::all_of(a.begin(), a.end(), [](const Int& x) { return x == 0; });
}

inline IVec neg(const IVec& a) { return scale(Int(-1), a); }

inline Int content(const IVec& a) {
    Int g = 0;
    for (const Int& x : a) g = igcd(g, x);
    return g;
}

// Divides out the content; zero vectors pass through unchanged.
inline IVec primitive(IVec a) {
    Int g = content(a);
    if (g > 1)
        for (Int& x : a) x /= g;
    return a;
}

// Matrix-vector product (rows of m dotted with v).
inline IVec mat_apply(const IMat& m, const IVec& v) {
    IVec r(m.size());
    for (size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
    return r;
}

inline RVec mat_apply_r(const IMat& m, const RVec& v) {
    RVec r(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        Rat s = 0;
        for (size_t j = 0; j < v.size(); ++j) s += Rat(m[i][j]) * v[j];
        r[i] = s;
    }
    return r;
}

inline IMat mat_mul(const IMat& a, const IMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IMat c(n, IVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

inline IMat identity_mat(size_t n) {
    IMat m(n, IVec(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline IMat transpose(const IMat& a) {
    if (a.empty()) return {};
    IMat t(a[0].size(), IVec(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

// Row Hermite normal form: returns the nonzero rows of the canonical basis of
// the row lattice (pivots positive, entries above pivots reduced into
// [0, pivot)).
inline IMat hnf_rows(IMat a) {
    size_t rows = a.size();
    if (rows == 0) return {};
    size_t cols = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // Gcd out column c below row r using row operations.
        while (true) {
            size_t piv = rows;
            for (size_t i = r; i < rows; ++i)
                if (a[i][c] != 0 && (piv == rows ||
                                     abs(a[i][c]) < abs(a[piv][c])))
                    piv = i;
            if (piv == rows) break;
            std::swap(a[r], a[piv]);
            bool clean = true;
            for (size_t i = r + 1; i < rows; ++i) {
                if (a[i][c] != 0) {
                    Int q = a[i][c] / a[r][c];
                    for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
                    if (a[i][c] != 0) clean = false;
                }
            }
            if (clean) break;
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) a[r][j] = -a[r][j];
        for (size_t i = 0; i < r; ++i) {
            Int q = a[i][c] / a[r][c];
            if (a[i][c] - q * a[r][c] < 0) q -= 1;  // floor division
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) a[i][j] -= q * a[r][j];
        }
        ++r;
    }
    a.resize(r);
    return a;
}

// Solves H-membership for a row-HNF basis; returns coefficients if v lies in
// the row lattice of h.
inline std::optional<IVec> lattice_coords(const IMat& h, IVec v) {
    IVec coeff(h.size(), 0);
    for (size_t i = 0; i < h.size(); ++i) {
        size_t p = 0;
        while (p < h[i].size() && h[i][p] == 0) ++p;
        if (p == h[i].size()) continue;
        if (v[p] % h[i][p] != 0) {
            // try continuing: pivot columns are strictly increasing, so v[p]
            // must be divisible by the pivot.
            return std::nullopt;
        }
        Int q = v[p] / h[i][p];
        coeff[i] = q;
        for (size_t j = 0; j < v.size(); ++j) v[j] -= q * h[i][j];
    }
    if (!is_zero(v)) return std::nullopt;
    return coeff;
}

inline bool in_lattice(const IMat& h, const IVec& v) {
    return lattice_coords(h, v).has_value();
}

inline size_t rank_of(const IMat& a) { return hnf_rows(a).size(); }

// Rational Gaussian elimination; returns one solution of A x = b or nullopt.
inline std::optional<RVec> solve_rational(const RMat& a_in, const RVec& b_in) {
    RMat a = a_in;
    RVec b = b_in;
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = rows;
        for (size_t i = r; i < rows; ++i)
            if (a[i][c] != 0) { piv = i; break; }
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        std::swap(b[r], b[piv]);
        Rat d = a[r][c];
        for (size_t j = 0; j < cols; ++j) a[r][j] /= d;
        b[r] /= d;
        for (size_t i = 0; i < rows; ++i) {
            if (i != r && a[i][c] != 0) {
                Rat f = a[i][c];
                for (size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
                b[i] -= f * b[r];
            }
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    RVec x(cols, Rat(0));
    for (size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
    return x;
}

// Basis of the rational nullspace of A (integer matrix), returned as
// primitive integer vectors.
inline IMat kernel_basis(const IMat& a) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    if (rows == 0) return {};
    RMat m(rows, RVec(cols));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) m[i][j] = Rat(a[i][j]);
    std::vector<size_t> pivot_of_col(cols, SIZE_MAX);
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = rows;
        for (size_t i = r; i < rows; ++i)
            if (m[i][c] != 0) { piv = i; break; }
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        Rat d = m[r][c];
        for (size_t j = 0; j < cols; ++j) m[r][j] /= d;
        for (size_t i = 0; i < rows; ++i)
            if (i != r && m[i][c] != 0) {
                Rat f = m[i][c];
                for (size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
            }
        pivot_of_col[c] = r;
        ++r;
    }
    IMat out;
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] != SIZE_MAX) continue;
        RVec v(cols, Rat(0));
        v[c] = 1;
        for (size_t cc = 0; cc < cols; ++cc)
            if (pivot_of_col[cc] != SIZE_MAX) v[cc] = -m[pivot_of_col[cc]][c];
        Int l = 1;
        for (const Rat& x : v) l = ilcm(l, denominator(x));
        IVec iv(cols);
        for (size_t j = 0; j < cols; ++j)
            iv[j] = numerator(v[j]) * (l / denominator(v[j]));
        out.push_back(primitive(iv));
    }
    return out;
}

struct SmithForm {
    std::vector<Int> invariants;  // nonzero diagonal entries, each dividing the next
    IMat u, uinv;                 // S = U A V, with tracked inverses
    IMat v, vinv;
    size_t rows = 0, cols = 0;
};

// Full Smith normal form with transform tracking. Intended for small dense
// matrices (lattice quotients, parallelepiped enumeration); the homology
// engine has its own sparse reduction.
inline SmithForm smith_form(IMat a) {
    SmithForm sf;
    sf.rows = a.size();
    sf.cols = sf.rows ? a[0].size() : 0;
    sf.u = identity_mat(sf.rows);
    sf.uinv = identity_mat(sf.rows);
    sf.v = identity_mat(sf.cols);
    sf.vinv = identity_mat(sf.cols);
    size_t n = std::min(sf.rows, sf.cols);
    auto row_op = [&](size_t i, size_t j, const Int& q) {
        // row i -= q * row j
        for (size_t c = 0; c < sf.cols; ++c) a[i][c] -= q * a[j][c];
        for (size_t c = 0; c < sf.rows; ++c) sf.u[i][c] -= q * sf.u[j][c];
        for (size_t r = 0; r < sf.rows; ++r) sf.uinv[r][j] += q * sf.uinv[r][i];
    };
    auto col_op = [&](size_t i, size_t j, const Int& q) {
        // col i -= q * col j
        for (size_t r = 0; r < sf.rows; ++r) a[r][i] -= q * a[r][j];
        for (size_t r = 0; r < sf.cols; ++r) sf.v[r][i] -= q * sf.v[r][j];
        for (size_t c = 0; c < sf.cols; ++c) sf.vinv[j][c] += q * sf.vinv[i][c];
    };
    auto row_swap = [&](size_t i, size_t j) {
        std::swap(a[i], a[j]);
        std::swap(sf.u[i], sf.u[j]);
        for (size_t r = 0; r < sf.rows; ++r) std::swap(sf.uinv[r][i], sf.uinv[r][j]);
    };
    auto col_swap = [&](size_t i, size_t j) {
        for (size_t r = 0; r < sf.rows; ++r) std::swap(a[r][i], a[r][j]);
        for (size_t r = 0; r < sf.cols; ++r) std::swap(sf.v[r][i], sf.v[r][j]);
        std::swap(sf.vinv[i], sf.vinv[j]);
    };
    auto row_negate = [&](size_t i) {
        for (size_t c = 0; c < sf.cols; ++c) a[i][c] = -a[i][c];
        for (size_t c = 0; c < sf.rows; ++c) sf.u[i][c] = -sf.u[i][c];
        for (size_t r = 0; r < sf.rows; ++r) sf.uinv[r][i] = -sf.uinv[r][i];
    };
    for (size_t t = 0; t < n; ++t) {
        // find pivot
        size_t pi = sf.rows, pj = sf.cols;
        for (size_t i = t; i < sf.rows; ++i)
            for (size_t j = t; j < sf.cols; ++j)
                if (a[i][j] != 0 &&
                    (pi == sf.rows || abs(a[i][j]) < abs(a[pi][pj]))) {
                    pi = i; pj = j;
                }
        if (pi == sf.rows) break;
        row_swap(t, pi);
        col_swap(t, pj);
        bool again = true;
        while (again) {
            again = false;
            for (size_t i = t + 1; i < sf.rows; ++i)
                if (a[i][t] != 0) {
                    Int q = a[i][t] / a[t][t];
                    row_op(i, t, q);
                    if (a[i][t] != 0) { row_swap(t, i); again = true; }
                }
            for (size_t j = t + 1; j < sf.cols; ++j)
                if (a[t][j] != 0) {
                    Int q = a[t][j] / a[t][t];
                    col_op(j, t, q);
                    if (a[t][j] != 0) { col_swap(t, j); again = true; }
                }
        }
        if (a[t][t] < 0) row_negate(t);
        // divisibility fixup: ensure a[t][t] divides all later entries
        for (size_t i = t + 1; i < sf.rows; ++i)
            for (size_t j = t + 1; j < sf.cols; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    // add row i to row t and restart this pivot
                    row_op(t, i, Int(-1));
                    --t;
                    goto next_pivot;
                }
        sf.invariants.push_back(a[t][t]);
    next_pivot:;
    }
    return sf;
}

// Saturation of the lattice spanned by the rows of b inside Z^n: the set of
// integer vectors in the rational row span, returned as an HNF basis.
inline IMat saturate_lattice(const IMat& b) {
    if (b.empty()) return {};
    SmithForm sf = smith_form(b);
    IMat basis;
    for (size_t i = 0; i < sf.invariants.size(); ++i)
        basis.push_back(sf.vinv[i]);
    return hnf_rows(basis);
}

// Integer kernel: HNF basis of {x in Z^cols : A x = 0} (as rows).
inline IMat integer_kernel(const IMat& a) {
    IMat k = kernel_basis(a);
    if (k.empty()) return {};
    return saturate_lattice(k);
}

// Absolute determinant of the lattice spanned by rows (product of SNF
// invariants); 0 if rank-deficient relative to square shape.
inline Int lattice_det(const IMat& rows_mat, size_t expect_rank) {
    IMat h = hnf_rows(rows_mat);
    if (h.size() != expect_rank) return 0;
    Int d = 1;
    for (size_t i = 0; i < h.size(); ++i) {
        size_t p = 0;
        while (p < h[i].size() && h[i][p] == 0) ++p;
        d *= h[i][p];
    }
    return d;
}

// Completes the primitive vector v to a basis of Z^n and returns the
// projection Z^n -> Z^(n-1) with kernel Z v, together with a right inverse
// (section) of the projection.
struct QuotientByVector {
    IMat projection;  // (n-1) x n
    IMat section;     // n x (n-1), projection * section = identity
};

inline QuotientByVector quotient_by_primitive(const IVec& v) {
    size_t n = v.size();
    IMat m(1, v);
    SmithForm sf = smith_form(m);  // S = U [v] V => v V = e1 (since primitive)
    // Rows of Vinv form a basis of Z^n whose first element is v (up to sign):
    // v = e1 * Vinv-scale... Work with V: the columns give the basis change.
    // v * V = (1, 0, ..., 0) (row vector), so in the basis given by the rows
    // of V^{-1}, v is the first basis vector.
    // Projection: x |-> last n-1 coordinates of x expressed in that basis,
    // i.e. drop the first entry of (x * V) ... careful with orientation:
    // treat x as a row vector: coords(x) = x * V has the property that
    // x = coords(x) * V^{-1}.
    QuotientByVector q;
    q.projection = IMat(n - 1, IVec(n, 0));
    q.section = IMat(n, IVec(n - 1, 0));
    for (size_t j = 1; j < n; ++j)
        for (size_t i = 0; i < n; ++i) q.projection[j - 1][i] = sf.v[i][j];
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 1; j < n; ++j) q.section[i][j - 1] = sf.vinv[j][i];
    return q;
}

}  // namespace katoskel
