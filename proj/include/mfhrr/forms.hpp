// forms.hpp
//
// Z/2-folded exterior algebra of differential forms over Q = k[x_1..x_n],
// the de Rham differential, matrices of forms with a parity split, the
// supertrace, the Chern character of a matrix factorization, and the explicit
// chain-level HKR map (with the basis connection, so priming a matrix is just
// the entrywise exterior derivative).  Sign conventions live in docs/signs.md.

#pragma once

#include "groebner.hpp"
#include "mfcat.hpp"

namespace mfhrr {

struct OddDimension : MfhrrError { using MfhrrError::MfhrrError; };
struct NotIsolated : MfhrrError { using MfhrrError::MfhrrError; };
struct ConnectionMismatch : MfhrrError { using MfhrrError::MfhrrError; };

// ---------------------------------------------------------------------------
// DiffForm: components indexed by ascending variable-index subsets S, the
// component of S being the polynomial coefficient of dx_S.

class DiffForm {
public:
    std::vector<std::string> ring;
    std::map<std::vector<int>, Poly> components;  // ascending subsets -> coeff

    DiffForm() = default;
    explicit DiffForm(std::vector<std::string> vars) : ring(std::move(vars)) {}

    static DiffForm from_poly(const Poly& p) {
        DiffForm w(p.ring);
        w.add_component({}, p);
        return w;
    }
    static DiffForm dx(const std::vector<std::string>& vars, int i) {
        DiffForm w(vars);
        w.add_component({i}, Poly::constant(vars, Rational(1)));
        return w;
    }

    void add_component(const std::vector<int>& subset, const Poly& p) {
        if (p.is_zero()) return;
        auto it = components.find(subset);
        if (it == components.end()) {
            components.emplace(subset, p);
        } else {
            it->second += p;
            if (it->second.is_zero()) components.erase(it);
        }
    }

    bool is_zero() const { return components.empty(); }

    // homogeneous form degree, or -1 for 0 or mixed content
    int pure_degree() const {
        int d = -1;
        for (auto& [s, p] : components) {
            if (d < 0) d = (int)s.size();
            else if (d != (int)s.size()) return -1;
        }
        return d;
    }

    Poly component(const std::vector<int>& subset) const {
        auto it = components.find(subset);
        return it == components.end() ? Poly(ring) : it->second;
    }

    DiffForm operator+(const DiffForm& o) const {
        DiffForm w = *this;
        for (auto& [s, p] : o.components) w.add_component(s, p);
        return w;
    }
    DiffForm operator-() const {
        DiffForm w(ring);
        for (auto& [s, p] : components) w.add_component(s, -p);
        return w;
    }
    DiffForm operator-(const DiffForm& o) const { return *this + (-o); }
    DiffForm& operator+=(const DiffForm& o) { return *this = *this + o; }
    DiffForm operator*(const Rational& c) const {
        DiffForm w(ring);
        for (auto& [s, p] : components) w.add_component(s, p * c);
        return w;
    }
    bool operator==(const DiffForm& o) const { return components == o.components; }

    std::string render() const {
        if (components.empty()) return "0";
        std::string out;
        for (auto& [s, p] : components) {
            if (!out.empty()) out += " + ";
            std::string fs;
            for (int i : s) {
                if (!fs.empty()) fs += "^";  // wedge, rendered ascii
                fs += "d" + ring[i];
            }
            if (s.empty()) out += p.render();
            else out += "(" + p.render() + ")*" + fs;
        }
        return out;
    }
};

namespace detail {

// merge two ascending index sequences; returns false when they overlap,
// otherwise fills `merged` and the transposition sign
inline bool merge_subsets(const std::vector<int>& a, const std::vector<int>& b,
                          std::vector<int>& merged, int& sign) {
    merged.clear();
    sign = 1;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            merged.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            // b[j] moves past the remaining a-elements
            if ((a.size() - i) % 2 == 1) sign = -sign;
            merged.push_back(b[j++]);
        } else {
            return false;  // common index: wedge is zero
        }
    }
    return true;
}

}  // namespace detail

inline DiffForm wedge(const DiffForm& w, const DiffForm& e) {
    if (w.ring != e.ring) throw RingMismatch("wedge needs one ring");
    DiffForm out(w.ring);
    std::vector<int> merged;
    int sign;
    for (auto& [s, p] : w.components)
        for (auto& [t, q] : e.components) {
            if (!detail::merge_subsets(s, t, merged, sign)) continue;
            out.add_component(merged, p * q * Rational(sign));
        }
    return out;
}

inline DiffForm de_rham(const DiffForm& w) {
    DiffForm out(w.ring);
    std::vector<int> merged;
    int sign;
    for (auto& [s, p] : w.components) {
        for (size_t i = 0; i < w.ring.size(); ++i) {
            Poly dp = partial_derivative(p, i);
            if (dp.is_zero()) continue;
            std::vector<int> di{(int)i};
            if (!detail::merge_subsets(di, s, merged, sign)) continue;
            out.add_component(merged, dp * Rational(sign));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// FormMatrix: a (p0+p1) x (p0+p1) grid of forms, basis ordered P0 then P1.
// Entry (i, j) is the canonical End-tensor-form component mu_ij of
// sum E_ij (x) mu_ij, so composition carries the Koszul sign
// (-1)^{deg(mu_ik) * (par(k) + par(j))} past the right factor's matrix unit,
// and priming an entry (the basis connection) is d with the sign
// (-1)^{par(column)}.  These signs are what make str-based identities come
// out right for odd endomorphisms with odd form coefficients; see
// docs/signs.md.

class FormMatrix {
public:
    std::vector<std::string> ring;
    size_t p0 = 0, p1 = 0;
    std::vector<DiffForm> entries;  // row-major, (p0+p1)^2

    FormMatrix() = default;
    FormMatrix(size_t p0_, size_t p1_, std::vector<std::string> vars)
        : ring(std::move(vars)), p0(p0_), p1(p1_),
          entries((p0_ + p1_) * (p0_ + p1_), DiffForm(ring)) {}

    size_t dim() const { return p0 + p1; }
    DiffForm& at(size_t i, size_t j) { return entries[i * dim() + j]; }
    const DiffForm& at(size_t i, size_t j) const { return entries[i * dim() + j]; }

    static FormMatrix identity(size_t p0, size_t p1, const std::vector<std::string>& vars) {
        FormMatrix m(p0, p1, vars);
        Poly one = Poly::constant(vars, Rational(1));
        for (size_t i = 0; i < m.dim(); ++i) m.at(i, i) = DiffForm::from_poly(one);
        return m;
    }

    bool is_zero() const {
        for (auto& e : entries)
            if (!e.is_zero()) return false;
        return true;
    }

    FormMatrix operator+(const FormMatrix& o) const {
        if (p0 != o.p0 || p1 != o.p1) throw DimensionMismatch("form matrix sum");
        FormMatrix m = *this;
        for (size_t k = 0; k < entries.size(); ++k) m.entries[k] += o.entries[k];
        return m;
    }
    FormMatrix operator-() const {
        FormMatrix m = *this;
        for (auto& e : m.entries) e = -e;
        return m;
    }
    bool odd_index(size_t i) const { return i >= p0; }

    FormMatrix operator*(const FormMatrix& o) const {
        if (dim() != o.dim() || p0 != o.p0)
            throw DimensionMismatch("form matrix product");
        FormMatrix m(p0, p1, ring);
        for (size_t i = 0; i < dim(); ++i)
            for (size_t j = 0; j < dim(); ++j) {
                DiffForm acc(ring);
                for (size_t k = 0; k < dim(); ++k) {
                    bool unit_odd = odd_index(k) != odd_index(j);
                    // split the left entry by form degree for the Koszul sign
                    for (auto& [s, p] : at(i, k).components) {
                        int sign = (unit_odd && s.size() % 2 == 1) ? -1 : 1;
                        DiffForm piece(ring);
                        piece.add_component(s, p * Rational(sign));
                        acc += wedge(piece, o.at(k, j));
                    }
                }
                m.at(i, j) = acc;
            }
        return m;
    }
    FormMatrix operator*(const Rational& c) const {
        FormMatrix m = *this;
        for (auto& e : m.entries) e = e * c;
        return m;
    }
    bool operator==(const FormMatrix& o) const {
        return p0 == o.p0 && p1 == o.p1 && entries == o.entries;
    }

    // the prime of the basis connection: entrywise d, with the canonical
    // component sign (-1)^{par(column)}
    FormMatrix prime() const {
        FormMatrix m = *this;
        for (size_t i = 0; i < dim(); ++i)
            for (size_t j = 0; j < dim(); ++j) {
                DiffForm d = de_rham(at(i, j));
                m.at(i, j) = odd_index(j) ? -d : d;
            }
        return m;
    }
};

// str(M) = tr over the P0 block minus tr over the P1 block; off-diagonal
// (odd endomorphism) content never reaches the diagonal, so it contributes 0
inline DiffForm supertrace(const FormMatrix& M) {
    DiffForm out(M.ring);
    for (size_t i = 0; i < M.p0; ++i) out += M.at(i, i);
    for (size_t i = M.p0; i < M.dim(); ++i) out += -M.at(i, i);
    return out;
}

// the column-acting odd map delta of an MF as a form matrix: stored A and B
// have rows indexed by the source basis, so the blocks are the transposes
inline FormMatrix delta_form(const MatrixFactorization& X) {
    FormMatrix D(X.p0(), X.p1(), X.ring);
    for (size_t i = 0; i < X.p0(); ++i)
        for (size_t j = 0; j < X.p1(); ++j) {
            D.at(i, X.p0() + j) = DiffForm::from_poly(X.A.at(j, i));
            D.at(X.p0() + j, i) = DiffForm::from_poly(X.B.at(i, j));
        }
    return D;
}

// a plain even endomorphism (pair of polynomial blocks) as a form matrix
inline FormMatrix even_endo_form(const PolyMatrix& on_p0, const PolyMatrix& on_p1) {
    FormMatrix M(on_p0.rows, on_p1.rows, on_p0.ring);
    for (size_t i = 0; i < on_p0.rows; ++i)
        for (size_t j = 0; j < on_p0.cols; ++j)
            M.at(i, j) = DiffForm::from_poly(on_p0.at(i, j));
    for (size_t i = 0; i < on_p1.rows; ++i)
        for (size_t j = 0; j < on_p1.cols; ++j)
            M.at(on_p0.rows + i, on_p0.rows + j) = DiffForm::from_poly(on_p1.at(i, j));
    return M;
}

// ---------------------------------------------------------------------------
// MilnorClass: the coefficient of dx_1...dx_n reduced to its normal form
// modulo the Jacobian ideal of f.

struct MilnorClass {
    std::vector<std::string> ring;
    Poly f;
    Poly rep;  // normal form modulo (f_1,...,f_n)

    bool operator==(const MilnorClass& o) const { return rep == o.rep && f == o.f; }
    std::string render() const { return rep.render(); }
};

namespace detail {

inline std::vector<Poly> jacobian(const Poly& f) {
    std::vector<Poly> J;
    for (size_t i = 0; i < f.ring.size(); ++i) J.push_back(partial_derivative(f, i));
    return J;
}

inline GroebnerBasis jacobian_basis(const Poly& f) {
    std::vector<VectorPoly> gens;
    for (auto& g : jacobian(f)) gens.push_back(VectorPoly({g}));
    return buchberger(gens, 1, f.ring);
}

// zero-dimensionality = every variable has a pure power among the leading
// monomials (the unit ideal passes trivially)
inline bool is_zero_dimensional(const GroebnerBasis& gb) {
    size_t nvars = gb.ring.size();
    std::vector<Monomial> leads;
    for (auto& g : gb.gens) leads.push_back(leading_term(g).m);
    try {
        count_standard_monomials(leads, nvars);
    } catch (const InfiniteLength&) {
        return false;
    }
    return true;
}

}  // namespace detail

inline MilnorClass milnor_reduce(const DiffForm& w, const Poly& f) {
    std::vector<int> top;
    for (size_t i = 0; i < f.ring.size(); ++i) top.push_back((int)i);
    GroebnerBasis gb = detail::jacobian_basis(f);
    if (!detail::is_zero_dimensional(gb))
        throw NotIsolated("Jacobian ideal is not zero-dimensional");
    VectorPoly v({w.component(top)});
    return {f.ring, f, gb.normal_form(v).comp[0]};
}

// ---------------------------------------------------------------------------
// Chern character: ch(X) = (2/n!) tr(dA dB ... dA dB), n factors, reduced
// into the Milnor algebra of f.  The blocks enter in the column-acting
// (transposed) convention used everywhere else, so that eps(id_X[]) of the
// HKR map below reduces to ch(X) in every even dimension; for n = 2 the two
// readings of the trace agree.

inline MilnorClass chern(const MatrixFactorization& X) {
    size_t n = X.ring.size();
    if (n % 2 != 0) throw OddDimension("chern needs an even number of variables");
    if (X.is_zero_object()) return milnor_reduce(DiffForm(X.ring), X.f);

    auto lift = [&](const PolyMatrix& M) {
        FormMatrix F(M.rows, 0, M.ring);
        for (size_t i = 0; i < M.rows; ++i)
            for (size_t j = 0; j < M.cols; ++j)
                F.at(i, j) = de_rham(DiffForm::from_poly(M.at(i, j)));
        return F;
    };
    // dA and dB are square (f != 0); alternate the n factors dA dB dA dB ...
    FormMatrix dA = lift(X.A.transpose()), dB = lift(X.B.transpose());
    FormMatrix acc = dA;
    for (size_t k = 1; k < n; ++k) acc = acc * ((k % 2 == 1) ? dB : dA);
    DiffForm tr(X.ring);
    for (size_t i = 0; i < acc.p0; ++i) tr += acc.at(i, i);
    Rational scale = Rational(2) / factorial((unsigned)n);
    return milnor_reduce(tr * scale, X.f);
}

// ---------------------------------------------------------------------------
// The explicit HKR map on words of matrices.  A word is
// coeff * a0[a1|...|am] together with the odd map delta of the underlying
// object; with the basis connection the primes are entrywise d, and
//
//   eps(word) = sum over i0..im >= 0 of
//       (-1)^(sum i) / (m + sum i)! * str(a0 d'^{i0} a1' d'^{i1} ... am' d'^{im})

struct HkrWord {
    Rational coeff;
    FormMatrix a0;
    std::vector<FormMatrix> rest;  // a1..am, unprimed
    FormMatrix delta;              // unprimed odd map of the object
};

namespace detail {

inline void hkr_word_rec(const FormMatrix& acc, const std::vector<FormMatrix>& primed,
                         size_t next, const FormMatrix& dprime, int inserted,
                         size_t max_insert, DiffForm& out, const Rational& coeff) {
    if (next == primed.size()) {
        // trailing powers of d'
        FormMatrix cur = acc;
        for (size_t i = 0; ; ++i) {
            int total = inserted + (int)i;
            Rational sign = (total % 2 == 0) ? Rational(1) : Rational(-1);
            Rational c = coeff * sign / factorial((unsigned)(primed.size() + total));
            out += supertrace(cur) * c;
            if (i == max_insert || cur.is_zero()) break;
            cur = cur * dprime;
        }
        return;
    }
    FormMatrix cur = acc;
    for (size_t i = 0; ; ++i) {
        hkr_word_rec(cur * primed[next], primed, next + 1, dprime,
                     inserted + (int)i, max_insert, out, coeff);
        if (i == max_insert || cur.is_zero()) break;
        cur = cur * dprime;
    }
}

}  // namespace detail

inline DiffForm hkr_epsilon(const std::vector<HkrWord>& words) {
    if (words.empty()) return DiffForm();
    DiffForm out(words.front().a0.ring);
    size_t n = out.ring.size();
    for (auto& w : words) {
        if (w.a0.ring != out.ring)
            throw ConnectionMismatch("hkr words over different rings");
        if (w.delta.p0 != w.a0.p0 || w.delta.p1 != w.a0.p1)
            throw ConnectionMismatch("hkr word arrows do not match the object");
        std::vector<FormMatrix> primed;
        for (auto& a : w.rest) primed.push_back(a.prime());
        // each d' carries at least one dx, so more than n insertions vanish
        detail::hkr_word_rec(w.a0, primed, 0, w.delta.prime(), 0, n, out, w.coeff);
    }
    return out;
}

// eps of the tautological class id_X[] of a matrix factorization
inline DiffForm hkr_epsilon_id(const MatrixFactorization& X) {
    HkrWord w;
    w.coeff = Rational(1);
    w.a0 = FormMatrix::identity(X.p0(), X.p1(), X.ring);
    w.delta = delta_form(X);
    return hkr_epsilon({w});
}

}  // namespace mfhrr
