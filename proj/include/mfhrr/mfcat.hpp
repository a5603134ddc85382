// mfcat.hpp
//
// The matrix-factorization category mf(Q, f): validated objects (A, B) with
// A*B = B*A = f*I, Koszul stabilizations, tensor products, duals, the
// N-twist and Hom complexes.  f = 0 is allowed and gives Z/2-periodic
// complexes of free modules.
//
// Sign conventions are frozen here and documented in docs/signs.md; every
// sign-sensitive test downstream depends on them.

#pragma once

#include <vector>

#include "polycore.hpp"

namespace mfhrr {

struct NotAFactorization : MfhrrError { using MfhrrError::MfhrrError; };
struct RingMismatch : MfhrrError { using MfhrrError::MfhrrError; };
struct PotentialMismatch : MfhrrError { using MfhrrError::MfhrrError; };

class MatrixFactorization {
public:
    std::vector<std::string> ring;
    Poly f;        // the potential; may be 0
    PolyMatrix A;  // delta_1 : P1 -> P0, rows indexed by the source basis (p1 x p0)
    PolyMatrix B;  // delta_0 : P0 -> P1, rows indexed by the source basis (p0 x p1)

    size_t p0() const { return A.cols; }
    size_t p1() const { return A.rows; }
    size_t total_rank() const { return p0() + p1(); }
    bool is_zero_object() const { return p0() == 0 && p1() == 0; }

    // full (p0+p1)-square matrix of the odd map delta on the ordered basis
    // P0 then P1 (rows = source): delta = [[0, B], [A, 0]]
    PolyMatrix delta() const {
        size_t n = total_rank();
        PolyMatrix d(n, n, ring);
        for (size_t i = 0; i < p0(); ++i)
            for (size_t j = 0; j < p1(); ++j) d.at(i, p0() + j) = B.at(i, j);
        for (size_t i = 0; i < p1(); ++i)
            for (size_t j = 0; j < p0(); ++j) d.at(p0() + i, j) = A.at(i, j);
        return d;
    }

    bool operator==(const MatrixFactorization& o) const {
        return ring == o.ring && f == o.f && A == o.A && B == o.B;
    }
};

// validated constructor: checks A*B = f*I and B*A = f*I exactly
inline MatrixFactorization mf_new(PolyMatrix A, PolyMatrix B, Poly f) {
    if (A.ring != B.ring || A.ring != f.ring)
        throw RingMismatch("matrix factorization pieces over different rings");
    if (A.rows != B.cols || A.cols != B.rows)
        throw NotAFactorization("A and B have incompatible shapes");
    if (!f.is_zero() && A.rows != A.cols)
        throw NotAFactorization("nonzero potential needs square components");
    PolyMatrix ab = A * B;
    PolyMatrix f0 = PolyMatrix::scalar(A.rows, f);
    if (ab != f0)
        throw NotAFactorization("A*B != f*I: got " +
                                (ab.rows ? ab.at(0, 0).render() : std::string("0x0")));
    PolyMatrix ba = B * A;
    PolyMatrix f1 = PolyMatrix::scalar(B.rows, f);
    if (ba != f1)
        throw NotAFactorization("B*A != f*I");
    return MatrixFactorization{f.ring, std::move(f), std::move(A), std::move(B)};
}

inline MatrixFactorization mf_zero(const std::vector<std::string>& ring) {
    return MatrixFactorization{ring, Poly(ring), PolyMatrix(0, 0, ring),
                               PolyMatrix(0, 0, ring)};
}

// ---------------------------------------------------------------------------
// Koszul stabilization of f = sum x_i y_i: delta = sum x_i e_i^* + y_i e_i on
// the exterior algebra over e_1..e_n.  Basis: index subsets of {1..n} sorted
// lexicographically as sequences, even-cardinality subsets for P0 and
// odd-cardinality subsets for P1.

namespace detail {

inline std::vector<std::vector<int>> sorted_subsets(size_t n, int parity) {
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> s;
        for (size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back((int)i);
        if ((int)(s.size() % 2) == parity) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// e_i wedge e_S: sign (-1)^{#(j in S : j < i)}
inline bool wedge_subset(int i, const std::vector<int>& S, int& sign,
                         std::vector<int>& out) {
    int before = 0;
    for (int j : S) {
        if (j == i) return false;
        if (j < i) ++before;
    }
    sign = (before % 2 == 0) ? 1 : -1;
    out = S;
    out.insert(std::lower_bound(out.begin(), out.end(), i), i);
    return true;
}

// e_i^* contraction of e_S: sign (-1)^{#(j in S : j < i)}
inline bool contract_subset(int i, const std::vector<int>& S, int& sign,
                            std::vector<int>& out) {
    int before = 0;
    bool found = false;
    out.clear();
    for (int j : S) {
        if (j == i) { found = true; continue; }
        if (j < i) ++before;
        out.push_back(j);
    }
    if (!found) return false;
    sign = (before % 2 == 0) ? 1 : -1;
    return true;
}

}  // namespace detail

inline MatrixFactorization koszul_mf(const std::vector<Poly>& xs,
                                     const std::vector<Poly>& ys) {
    if (xs.empty() || xs.size() != ys.size())
        throw MfhrrError("koszul_mf needs equal nonempty coefficient lists");
    const auto& ring = xs[0].ring;
    size_t n = xs.size();
    auto even = detail::sorted_subsets(n, 0);
    auto odd = detail::sorted_subsets(n, 1);

    auto index_of = [](const std::vector<std::vector<int>>& basis,
                       const std::vector<int>& s) {
        return (size_t)(std::lower_bound(basis.begin(), basis.end(), s) -
                        basis.begin());
    };

    // delta(e_S) expanded on the opposite-parity basis; the matrix rows are
    // indexed by the source basis (the convention the anchors are written in)
    auto fill = [&](const std::vector<std::vector<int>>& src,
                    const std::vector<std::vector<int>>& dst) {
        PolyMatrix M(src.size(), dst.size(), ring);
        for (size_t r = 0; r < src.size(); ++r) {
            for (size_t i = 0; i < n; ++i) {
                int sign;
                std::vector<int> t;
                if (detail::contract_subset((int)i, src[r], sign, t)) {
                    size_t c = index_of(dst, t);
                    M.at(r, c) = M.at(r, c) + xs[i] * Rational(sign);
                }
                if (detail::wedge_subset((int)i, src[r], sign, t)) {
                    size_t c = index_of(dst, t);
                    M.at(r, c) = M.at(r, c) + ys[i] * Rational(sign);
                }
            }
        }
        return M;
    };

    Poly f(ring);
    for (size_t i = 0; i < n; ++i) f = f + xs[i] * ys[i];
    PolyMatrix A = fill(odd, even);   // delta on the odd part
    PolyMatrix B = fill(even, odd);   // delta on the even part
    return mf_new(std::move(A), std::move(B), std::move(f));
}

// ---------------------------------------------------------------------------
// tensor product: (X (x) Y)_0 = X0(x)Y0 + X1(x)Y1, (X (x) Y)_1 = X1(x)Y0 +
// X0(x)Y1, differential delta_X (x) 1 + 1 (x) delta_Y where the second
// summand carries the Koszul sign (-1)^i out of X_i (x) Y.

namespace detail {

inline PolyMatrix kron(const PolyMatrix& M, const PolyMatrix& N) {
    PolyMatrix r(M.rows * N.rows, M.cols * N.cols, M.ring);
    for (size_t i = 0; i < M.rows; ++i)
        for (size_t j = 0; j < M.cols; ++j) {
            if (M.at(i, j).is_zero()) continue;
            for (size_t k = 0; k < N.rows; ++k)
                for (size_t l = 0; l < N.cols; ++l)
                    r.at(i * N.rows + k, j * N.cols + l) = M.at(i, j) * N.at(k, l);
        }
    return r;
}

// assemble a 2x2 block matrix
inline PolyMatrix blocks2(const PolyMatrix& m00, const PolyMatrix& m01,
                          const PolyMatrix& m10, const PolyMatrix& m11) {
    size_t r0 = m00.rows, r1 = m10.rows, c0 = m00.cols, c1 = m01.cols;
    PolyMatrix r(r0 + r1, c0 + c1, m00.ring);
    auto put = [&](const PolyMatrix& m, size_t ro, size_t co) {
        for (size_t i = 0; i < m.rows; ++i)
            for (size_t j = 0; j < m.cols; ++j) r.at(ro + i, co + j) = m.at(i, j);
    };
    put(m00, 0, 0);
    put(m01, 0, c0);
    put(m10, r0, 0);
    put(m11, r0, c0);
    return r;
}

}  // namespace detail

inline MatrixFactorization tensor(const MatrixFactorization& X,
                                  const MatrixFactorization& Y) {
    if (X.ring != Y.ring) throw RingMismatch("tensor over different rings");
    if (X.is_zero_object() || Y.is_zero_object()) return mf_zero(X.ring);
    const auto& ring = X.ring;
    auto I = [&](size_t n) { return PolyMatrix::identity(n, ring); };
    using detail::blocks2;
    using detail::kron;

    // assemble in the column-acting picture (transpose the stored row-source
    // matrices), then transpose back for storage
    PolyMatrix a1 = X.A.transpose(), a0 = X.B.transpose();
    PolyMatrix b1 = Y.A.transpose(), b0 = Y.B.transpose();
    // rows: X0Y0 | X1Y1 ; cols: X1Y0 | X0Y1
    PolyMatrix A = blocks2(kron(a1, I(Y.p0())), kron(I(X.p0()), b1),
                           -kron(I(X.p1()), b0), kron(a0, I(Y.p1())));
    // rows: X1Y0 | X0Y1 ; cols: X0Y0 | X1Y1
    PolyMatrix B = blocks2(kron(a0, I(Y.p0())), -kron(I(X.p1()), b1),
                           kron(I(X.p0()), b0), kron(a1, I(Y.p1())));
    return mf_new(A.transpose(), B.transpose(), X.f + Y.f);
}

// dual: matrix-level convention dual(A, B) = (B^T, -A^T), an object of mf(Q, -f)
inline MatrixFactorization dual(const MatrixFactorization& X) {
    return mf_new(X.B.transpose(), -X.A.transpose(), -X.f);
}

// N-twist into mf(Q, -f): negate delta_0 and swap the parity labels, so the
// twisted object stores (-B, A).  This is the reading of the twist under
// which theta(X, n_twist(Y)) = chi(X, Y) holds with the tensor and dual
// conventions above; see docs/signs.md.
inline MatrixFactorization n_twist(const MatrixFactorization& X) {
    return mf_new(-X.B, X.A, -X.f);
}

// shift: swap the two components (parity change); stays in mf(Q, f)
inline MatrixFactorization shift(const MatrixFactorization& X) {
    return mf_new(X.B, X.A, X.f);
}

// direct sum, blockwise
inline MatrixFactorization direct_sum(const MatrixFactorization& X,
                                      const MatrixFactorization& Y) {
    if (X.ring != Y.ring) throw RingMismatch("direct sum over different rings");
    if (X.f != Y.f) throw PotentialMismatch("direct sum needs equal potentials");
    using detail::blocks2;
    PolyMatrix z01(X.p0(), Y.p1(), X.ring), z10(Y.p0(), X.p1(), X.ring);
    PolyMatrix A = blocks2(X.A, z01, z10, Y.A);
    PolyMatrix w01(X.p1(), Y.p0(), X.ring), w10(Y.p1(), X.p0(), X.ring);
    PolyMatrix B = blocks2(X.B, w01, w10, Y.B);
    return mf_new(std::move(A), std::move(B), X.f);
}

// Hom complex: Hom(X, Y) = dual(X) tensor Y, a Z/2-periodic complex (f = 0)
inline MatrixFactorization hom_complex(const MatrixFactorization& X,
                                       const MatrixFactorization& Y) {
    if (X.ring != Y.ring) throw RingMismatch("hom over different rings");
    // the zero object belongs to mf(Q, f) for every f
    if (X.f != Y.f && !X.is_zero_object() && !Y.is_zero_object())
        throw PotentialMismatch("hom needs equal potentials");
    return tensor(dual(X), Y);
}

}  // namespace mfhrr
