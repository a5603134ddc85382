// homology.hpp
//
// Exact homology dimensions of Z/2-periodic complexes of free modules.
//
// Ground truth: kernels via syzygies, images pulled into kernel coordinates
// via lift, and quotient_dimension on the resulting presentation.  A second,
// independent path (truncated_oracle) does plain linear algebra on graded
// degree slices up to a cutoff N and is used by the tests to cross-check the
// Groebner path.

#pragma once

#include <set>
#include <unordered_map>

#include "groebner.hpp"
#include "mfcat.hpp"

namespace mfhrr {

struct HomologyDims {
    size_t h0 = 0, h1 = 0;
    bool operator==(const HomologyDims& o) const { return h0 == o.h0 && h1 == o.h1; }
};

namespace detail {

// dim_k of ker(outgoing) / im(incoming), where the maps act on column
// vectors: incoming : Q^a -> Q^m, outgoing : Q^m -> Q^b
inline size_t ker_mod_im(const PolyMatrix& incoming, const PolyMatrix& outgoing) {
    const auto& ring = incoming.ring;
    std::vector<VectorPoly> kernel = syzygies(outgoing);
    if (kernel.empty()) return 0;

    // express each column of `incoming` in kernel coordinates
    TrackedGroebner ker_gb(kernel, outgoing.cols, ring);
    std::vector<VectorPoly> relations;
    for (size_t j = 0; j < incoming.cols; ++j) {
        VectorPoly col(incoming.rows, ring);
        for (size_t i = 0; i < incoming.rows; ++i) col.comp[i] = incoming.at(i, j);
        if (col.is_zero()) continue;
        relations.push_back(VectorPoly(ker_gb.lift(col)));
    }
    // plus the relations among the kernel generators themselves
    PolyMatrix K(outgoing.cols, kernel.size(), ring);
    for (size_t j = 0; j < kernel.size(); ++j)
        for (size_t i = 0; i < outgoing.cols; ++i) K.at(i, j) = kernel[j].comp[i];
    for (auto& s : syzygies(K)) relations.push_back(s);

    return quotient_dimension({kernel.size(), ring, relations});
}

}  // namespace detail

// exact homology dimensions: h0 = dim ker(B)/im(A), h1 = dim ker(A)/im(B)
inline HomologyDims z2_homology_dims(const MatrixFactorization& C) {
    if (!C.f.is_zero()) throw MfhrrError("homology needs a complex (f = 0)");
    if (C.is_zero_object()) return {0, 0};
    // stored matrices are written with rows indexed by the source basis, so
    // the column-acting maps are the transposes: delta_1 = A^T, delta_0 = B^T
    PolyMatrix At = C.A.transpose(), Bt = C.B.transpose();
    HomologyDims d;
    d.h0 = detail::ker_mod_im(At, Bt);
    d.h1 = detail::ker_mod_im(Bt, At);
    return d;
}

inline long euler_chi(const MatrixFactorization& X, const MatrixFactorization& Y) {
    HomologyDims d = z2_homology_dims(hom_complex(X, Y));
    return (long)d.h0 - (long)d.h1;
}

inline long theta(const MatrixFactorization& X, const MatrixFactorization& Y) {
    if (!X.is_zero_object() && !Y.is_zero_object() && !(X.f + Y.f).is_zero())
        throw PotentialMismatch("theta needs opposite potentials");
    HomologyDims d = z2_homology_dims(tensor(X, Y));
    return (long)d.h0 - (long)d.h1;
}

// ---------------------------------------------------------------------------
// truncated_oracle: homology of C (x) k[x]/m^N by sparse exact linear algebra.
// Test-only heuristic; the caller doubles N until two answers agree.

namespace detail {

// sparse column: row index -> coefficient
using SparseCol = std::unordered_map<size_t, Rational>;

// rank by sparse fraction-free-ish Gaussian elimination over Q
inline size_t sparse_rank(std::vector<SparseCol> cols) {
    std::unordered_map<size_t, size_t> pivot_of_row;  // row -> column index
    std::vector<size_t> pivot_row(cols.size(), SIZE_MAX);
    size_t rank = 0;
    for (size_t c = 0; c < cols.size(); ++c) {
        SparseCol& col = cols[c];
        // eliminate known pivots
        for (;;) {
            size_t hit = SIZE_MAX;
            for (auto& [r, v] : col) {
                auto it = pivot_of_row.find(r);
                if (it != pivot_of_row.end()) { hit = r; break; }
            }
            if (hit == SIZE_MAX) break;
            size_t pc = pivot_of_row[hit];
            Rational factor = col[hit];  // pivot columns are normalized to 1
            for (auto& [r, v] : cols[pc]) {
                auto it = col.find(r);
                if (it == col.end()) {
                    col.emplace(r, -factor * v);
                } else {
                    it->second -= factor * v;
                    if (it->second == 0) col.erase(it);
                }
            }
        }
        if (col.empty()) continue;
        // new pivot: pick the sparsest remaining approach — just take any row
        size_t prow = col.begin()->first;
        Rational inv = Rational(1) / col[prow];
        for (auto& [r, v] : col) v *= inv;
        pivot_of_row[prow] = c;
        pivot_row[c] = prow;
        ++rank;
    }
    return rank;
}

// grading detection for the degree-sliced oracle.  Doubled internal degrees
// T[u] per generator (P0 block first, then P1) and a doubled degree raise H
// for delta, satisfying T[u] + H = 2*deg(entry u->v) + T[v] on every nonzero
// entry of delta.  Returns false when the complex is not gradable this way.
struct OracleGrading {
    std::vector<long> T;  // size p0 + p1
    long H = 0;
};

inline bool detect_grading(const MatrixFactorization& C, OracleGrading& out) {
    PolyMatrix d = C.delta();
    size_t n = d.rows;
    if (n == 0) { out.T.clear(); return true; }
    // entry degrees; -1 marks zero entries, -2 marks non-homogeneous ones
    std::vector<std::vector<long>> deg(n, std::vector<long>(n, -1));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const Poly& p = d.at(i, j);
            if (p.is_zero()) continue;
            long dd = p.terms.begin()->first.degree();
            for (auto& [m, c] : p.terms)
                if (m.degree() != (int)dd) return false;
            deg[i][j] = dd;
        }
    // T[v] = T[u] + H - 2 deg(u->v); propagate T as alpha + beta*H
    std::vector<long> alpha(n, 0), beta(n, 0);
    std::vector<int> seen(n, 0);
    bool have_H = false;
    long H = 0;
    for (size_t root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        alpha[root] = 0;
        beta[root] = 0;
        std::vector<size_t> stack{root};
        while (!stack.empty()) {
            size_t u = stack.back();
            stack.pop_back();
            for (size_t v = 0; v < n; ++v) {
                for (int dir = 0; dir < 2; ++dir) {
                    long e = dir == 0 ? deg[u][v] : deg[v][u];
                    if (e < 0) continue;
                    // dir 0: edge u->v, dir 1: edge v->u
                    long na = dir == 0 ? alpha[u] - 2 * e : alpha[u] + 2 * e;
                    long nb = dir == 0 ? beta[u] + 1 : beta[u] - 1;
                    if (!seen[v]) {
                        seen[v] = 1;
                        alpha[v] = na;
                        beta[v] = nb;
                        stack.push_back(v);
                    } else if (alpha[v] != na || beta[v] != nb) {
                        // consistency pins H: alpha[v] + beta[v] H = na + nb H
                        if (beta[v] == nb) return false;
                        long num = na - alpha[v], den = beta[v] - nb;
                        if (num % den != 0) return false;
                        long h = num / den;
                        if (have_H && h != H) return false;
                        have_H = true;
                        H = h;
                    }
                }
            }
        }
    }
    if (!have_H) H = 0;
    out.H = H;
    out.T.assign(n, 0);
    for (size_t u = 0; u < n; ++u) out.T[u] = alpha[u] + beta[u] * H;
    // final verification of every edge
    for (size_t u = 0; u < n; ++u)
        for (size_t v = 0; v < n; ++v)
            if (deg[u][v] >= 0 && out.T[u] + H != 2 * deg[u][v] + out.T[v])
                return false;
    return true;
}

// all monomials of exact total degree `rem` in nvars variables
inline void monomials_of_degree_rec(size_t nvars, size_t pos, int rem,
                                    std::vector<int>& e, std::vector<Monomial>& out) {
    if (nvars == 0) {
        if (rem == 0) out.push_back(Monomial(e));
        return;
    }
    if (pos + 1 == nvars) {
        e[pos] = rem;
        out.push_back(Monomial(e));
        return;
    }
    for (int k = 0; k <= rem; ++k) {
        e[pos] = k;
        monomials_of_degree_rec(nvars, pos + 1, rem - k, e, out);
    }
}

inline std::vector<Monomial> monomials_of_degree(size_t nvars, int d) {
    std::vector<Monomial> out;
    std::vector<int> e(nvars, 0);
    monomials_of_degree_rec(nvars, 0, d, e, out);
    return out;
}

struct SliceRank {
    size_t cols = 0, rank = 0;
};

// rank of one graded slice of the map given by M (rows indexed by the source
// basis).  Ts/Tt are the doubled degree shifts of the source/target
// generators, s the doubled degree of the source slice, and the map raises
// doubled degree by H.  The slice matrix is exact: no truncation happens.
inline SliceRank graded_slice_rank(const PolyMatrix& M, const std::vector<long>& Ts,
                                   const std::vector<long>& Tt, long s, long H) {
    size_t nvars = M.ring.size();
    std::map<std::pair<size_t, std::vector<int>>, size_t> tindex;
    for (size_t v = 0; v < Tt.size(); ++v) {
        long twice = s + H - Tt[v];
        if (twice < 0 || twice % 2 != 0) continue;
        for (auto& m : monomials_of_degree(nvars, (int)(twice / 2)))
            tindex.emplace(std::make_pair(v, m.e), tindex.size());
    }
    std::vector<SparseCol> cols;
    for (size_t u = 0; u < Ts.size(); ++u) {
        long twice = s - Ts[u];
        if (twice < 0 || twice % 2 != 0) continue;
        for (auto& m : monomials_of_degree(nvars, (int)(twice / 2))) {
            SparseCol col;
            for (size_t v = 0; v < Tt.size(); ++v) {
                for (auto& [em, ec] : M.at(u, v).terms) {
                    auto it = tindex.find({v, (m * em).e});
                    if (it == tindex.end()) continue;
                    col[it->second] += ec;
                }
            }
            for (auto it = col.begin(); it != col.end();)
                it = it->second == 0 ? col.erase(it) : std::next(it);
            cols.push_back(std::move(col));
        }
    }
    SliceRank r;
    r.cols = cols.size();
    r.rank = sparse_rank(std::move(cols));
    return r;
}

}  // namespace detail

// Homology dimensions from plain linear algebra, degree slice by degree
// slice.  Each slice of the complex is a finite exact matrix over Q, so each
// slice homology is exact; N bounds how far up the degree ladder we look.
// The caller doubles N until two answers agree, which succeeds exactly when
// the trailing slices contribute nothing more.
inline HomologyDims truncated_oracle(const MatrixFactorization& C, int N) {
    if (!C.f.is_zero()) throw MfhrrError("oracle needs a complex (f = 0)");
    if (C.is_zero_object()) return {0, 0};
    detail::OracleGrading g;
    if (!detail::detect_grading(C, g))
        throw MfhrrError("truncated oracle needs a graded complex");
    size_t p0 = C.p0(), p1 = C.p1();
    std::vector<long> T0(g.T.begin(), g.T.begin() + p0);
    std::vector<long> T1(g.T.begin() + p0, g.T.end());
    // doubled degrees realized by basis elements of monomial degree < N
    std::set<long> s0, s1;
    for (size_t i = 0; i < p0; ++i)
        for (int k = 0; k < N; ++k) s0.insert(2 * k + T0[i]);
    for (size_t j = 0; j < p1; ++j)
        for (int k = 0; k < N; ++k) s1.insert(2 * k + T1[j]);
    HomologyDims d;
    for (long s : s0) {
        auto b = detail::graded_slice_rank(C.B, T0, T1, s, g.H);
        auto a = detail::graded_slice_rank(C.A, T1, T0, s - g.H, g.H);
        d.h0 += b.cols - b.rank - a.rank;  // nullity(delta_0) - rank(delta_1)
    }
    for (long s : s1) {
        auto a = detail::graded_slice_rank(C.A, T1, T0, s, g.H);
        auto b = detail::graded_slice_rank(C.B, T0, T1, s - g.H, g.H);
        d.h1 += a.cols - a.rank - b.rank;
    }
    return d;
}

// doubles N until two consecutive oracle answers agree (heuristic stabilization)
inline HomologyDims truncated_oracle_stabilized(const MatrixFactorization& C,
                                                int start = 8, int max_n = 64) {
    HomologyDims prev = truncated_oracle(C, start);
    for (int N = start * 2; N <= max_n; N *= 2) {
        HomologyDims cur = truncated_oracle(C, N);
        if (cur == prev) return cur;
        prev = cur;
    }
    throw MfhrrError("truncated oracle failed to stabilize");
}

}  // namespace mfhrr
