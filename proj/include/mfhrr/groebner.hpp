// groebner.hpp
//
// Groebner bases for submodules of free modules Q^r over the polynomial
// ring, with the grevlex monomial order and a position-over-term module
// order (smaller position index has higher priority).
//
// Every basis element carries an exact representation in terms of the
// original generators, so membership tests come with certificates (lift).
// Syzygies are computed by the elimination trick: append unit vectors,
// compute a basis, and read off the elements supported on the tail block.

#pragma once

#include <optional>
#include <set>
#include <vector>

#include "polycore.hpp"

namespace mfhrr {

struct NotInModule : MfhrrError { using MfhrrError::MfhrrError; };
struct NotZeroDimensional : MfhrrError { using MfhrrError::MfhrrError; };
struct InfiniteLength : MfhrrError { using MfhrrError::MfhrrError; };

// ---------------------------------------------------------------------------
// VectorPoly: element of a free module Q^r.

class VectorPoly {
public:
    std::vector<Poly> comp;  // fixed rank; all components share the ring

    VectorPoly() = default;
    VectorPoly(size_t rank, const std::vector<std::string>& ring)
        : comp(rank, Poly(ring)) {}
    explicit VectorPoly(std::vector<Poly> c) : comp(std::move(c)) {}

    size_t rank() const { return comp.size(); }
    bool is_zero() const {
        for (auto& p : comp)
            if (!p.is_zero()) return false;
        return true;
    }

    VectorPoly operator+(const VectorPoly& o) const {
        VectorPoly r(*this);
        for (size_t i = 0; i < comp.size(); ++i) r.comp[i] = r.comp[i] + o.comp[i];
        return r;
    }
    VectorPoly operator-(const VectorPoly& o) const {
        VectorPoly r(*this);
        for (size_t i = 0; i < comp.size(); ++i) r.comp[i] = r.comp[i] - o.comp[i];
        return r;
    }
    VectorPoly operator-() const {
        VectorPoly r(*this);
        for (auto& p : r.comp) p = -p;
        return r;
    }
    VectorPoly operator*(const Poly& p) const {
        VectorPoly r(*this);
        for (auto& c : r.comp) c = c * p;
        return r;
    }
    VectorPoly operator*(const Rational& c) const {
        VectorPoly r(*this);
        for (auto& p : r.comp) p = p * c;
        return r;
    }
    bool operator==(const VectorPoly& o) const { return comp == o.comp; }
};

// module term: (position, monomial); position-over-term, lower position wins
struct ModTerm {
    size_t pos;
    Monomial m;
};

// returns -1 / 0 / +1 comparing a against b in the module order
inline int modterm_cmp(const ModTerm& a, const ModTerm& b) {
    if (a.pos != b.pos) return a.pos < b.pos ? 1 : -1;
    return grevlex_cmp(a.m, b.m);
}

// leading module term of a nonzero vector
inline ModTerm leading_term(const VectorPoly& v) {
    for (size_t i = 0; i < v.rank(); ++i)
        if (!v.comp[i].is_zero()) return {i, v.comp[i].leading_monomial()};
    throw MfhrrError("leading term of zero vector");
}

inline Rational leading_coeff(const VectorPoly& v) {
    ModTerm lt = leading_term(v);
    return v.comp[lt.pos].leading_coeff();
}

// ---------------------------------------------------------------------------
// GroebnerBasis with lift certificates.

class GroebnerBasis {
public:
    size_t rank = 0;
    std::vector<std::string> ring;
    std::vector<VectorPoly> gens;               // reduced, monic basis
    std::vector<std::vector<Poly>> reps;        // gens[k] = sum_j reps[k][j] * input[j]

    // full normal form: no term of the result is divisible by a leading term.
    // If quotients is non-null it receives c with v = sum c_k gens[k] + result.
    VectorPoly normal_form(VectorPoly v, std::vector<Poly>* quotients = nullptr) const {
        if (quotients) quotients->assign(gens.size(), Poly(ring));
        VectorPoly result(rank, ring);
        while (!v.is_zero()) {
            ModTerm lt = leading_term(v);
            Rational lc = v.comp[lt.pos].leading_coeff();
            bool reduced = false;
            for (size_t k = 0; k < gens.size(); ++k) {
                ModTerm gl = leading_term(gens[k]);
                if (gl.pos == lt.pos && gl.m.divides(lt.m)) {
                    Monomial q = lt.m / gl.m;
                    Rational c = lc / leading_coeff(gens[k]);
                    Poly qp = Poly::term(ring, q, c);
                    v = v - gens[k] * qp;
                    if (quotients) (*quotients)[k] = (*quotients)[k] + qp;
                    reduced = true;
                    break;
                }
            }
            if (!reduced) {
                // move the irreducible leading term into the remainder
                result.comp[lt.pos].add_term(lt.m, lc);
                v.comp[lt.pos].add_term(lt.m, -lc);
            }
        }
        return result;
    }
};

// ---------------------------------------------------------------------------
// Buchberger with pair pruning (coprime criterion in rank 1, chain criterion
// in general) and a final auto-reduction; representations are tracked so
// that lift certificates fall out for free.

namespace detail {

struct TrackedElem {
    VectorPoly v;
    std::vector<Poly> rep;  // v = sum rep[j] * input[j]
};

inline void make_monic(TrackedElem& e) {
    Rational lc = leading_coeff(e.v);
    Rational inv = Rational(1) / lc;
    e.v = e.v * inv;
    for (auto& p : e.rep) p = p * inv;
}

}  // namespace detail

class TrackedGroebner {
public:
    size_t rank;
    std::vector<std::string> ring;
    std::vector<VectorPoly> input;
    GroebnerBasis gb;

    TrackedGroebner(std::vector<VectorPoly> generators, size_t rank_,
                    std::vector<std::string> ring_)
        : rank(rank_), ring(std::move(ring_)), input(std::move(generators)) {
        compute();
    }

    // lift: coefficients c with v = sum c_j * input[j]; throws NotInModule
    std::vector<Poly> lift(const VectorPoly& v) const {
        std::vector<Poly> q;
        VectorPoly r = gb.normal_form(v, &q);
        if (!r.is_zero()) throw NotInModule("vector is not in the submodule");
        std::vector<Poly> out(input.size(), Poly(ring));
        for (size_t k = 0; k < gb.gens.size(); ++k) {
            if (q[k].is_zero()) continue;
            for (size_t j = 0; j < input.size(); ++j)
                out[j] = out[j] + q[k] * gb.reps[k][j];
        }
        return out;
    }

    bool contains(const VectorPoly& v) const {
        return gb.normal_form(v).is_zero();
    }

private:
    void compute() {
        using detail::TrackedElem;
        gb.rank = rank;
        gb.ring = ring;

        std::vector<TrackedElem> basis;
        for (size_t j = 0; j < input.size(); ++j) {
            if (input[j].is_zero()) continue;
            TrackedElem e{input[j], std::vector<Poly>(input.size(), Poly(ring))};
            e.rep[j] = Poly::constant(ring, Rational(1));
            detail::make_monic(e);
            basis.push_back(std::move(e));
        }

        // pair queue; done records pairs already handled (for the chain rule)
        std::set<std::pair<size_t, size_t>> pending, done;
        auto add_pairs_for = [&](size_t t) {
            ModTerm lt = leading_term(basis[t].v);
            for (size_t i = 0; i < t; ++i)
                if (leading_term(basis[i].v).pos == lt.pos)
                    pending.insert({i, t});
        };
        for (size_t t = 0; t < basis.size(); ++t) add_pairs_for(t);

        while (!pending.empty()) {
            auto [i, j] = *pending.begin();
            pending.erase(pending.begin());
            done.insert({i, j});

            ModTerm li = leading_term(basis[i].v);
            ModTerm lj = leading_term(basis[j].v);
            Monomial l = Monomial::lcm(li.m, lj.m);

            // coprime criterion (valid for ideals, i.e. rank 1)
            if (rank == 1 && li.m.coprime(lj.m)) continue;

            // chain criterion: a third element whose lead divides the lcm,
            // with both side pairs already handled
            bool skip = false;
            for (size_t k = 0; k < basis.size() && !skip; ++k) {
                if (k == i || k == j) continue;
                ModTerm lk = leading_term(basis[k].v);
                if (lk.pos != li.pos || !lk.m.divides(l)) continue;
                auto p1 = std::minmax(i, k), p2 = std::minmax(j, k);
                if (done.count({p1.first, p1.second}) &&
                    done.count({p2.first, p2.second}))
                    skip = true;
            }
            if (skip) continue;

            // S-vector (both elements are monic)
            Poly mi = Poly::term(ring, l / li.m, Rational(1));
            Poly mj = Poly::term(ring, l / lj.m, Rational(1));
            TrackedElem s;
            s.v = basis[i].v * mi - basis[j].v * mj;
            s.rep.assign(input.size(), Poly(ring));
            for (size_t t = 0; t < input.size(); ++t)
                s.rep[t] = basis[i].rep[t] * mi - basis[j].rep[t] * mj;

            reduce_tracked(s, basis);
            if (s.v.is_zero()) continue;
            detail::make_monic(s);
            basis.push_back(std::move(s));
            add_pairs_for(basis.size() - 1);
        }

        // auto-reduce: replace each element by its normal form w.r.t. the rest
        for (size_t pass = 0, changed = 1; changed && pass < 64; ++pass) {
            changed = 0;
            for (size_t k = 0; k < basis.size();) {
                TrackedElem e = basis[k];
                std::vector<detail::TrackedElem> others;
                for (size_t t = 0; t < basis.size(); ++t)
                    if (t != k) others.push_back(basis[t]);
                reduce_tracked(e, others);
                if (e.v.is_zero()) {
                    basis.erase(basis.begin() + k);
                    changed = 1;
                    continue;
                }
                detail::make_monic(e);
                if (!(e.v == basis[k].v)) changed = 1;
                basis[k] = std::move(e);
                ++k;
            }
        }

        // canonical order: descending leading terms, for determinism
        std::sort(basis.begin(), basis.end(),
                  [](const TrackedElem& a, const TrackedElem& b) {
                      ModTerm la = leading_term(a.v), lb = leading_term(b.v);
                      return modterm_cmp(la, lb) > 0;
                  });

        for (auto& e : basis) {
            gb.gens.push_back(e.v);
            gb.reps.push_back(e.rep);
        }
    }

    // full reduction of e.v by the given elements, keeping e.rep in sync
    static void reduce_tracked(detail::TrackedElem& e,
                               const std::vector<detail::TrackedElem>& by) {
        VectorPoly result;
        if (e.v.is_zero()) return;
        result = VectorPoly(e.v.rank(), e.v.comp[0].ring);
        VectorPoly v = e.v;
        while (!v.is_zero()) {
            ModTerm lt = leading_term(v);
            Rational lc = v.comp[lt.pos].leading_coeff();
            bool reduced = false;
            for (auto& g : by) {
                ModTerm gl = leading_term(g.v);
                if (gl.pos == lt.pos && gl.m.divides(lt.m)) {
                    Poly qp = Poly::term(v.comp[0].ring, lt.m / gl.m,
                                         lc / leading_coeff(g.v));
                    v = v - g.v * qp;
                    for (size_t t = 0; t < e.rep.size(); ++t)
                        e.rep[t] = e.rep[t] - g.rep[t] * qp;
                    reduced = true;
                    break;
                }
            }
            if (!reduced) {
                result.comp[lt.pos].add_term(lt.m, lc);
                v.comp[lt.pos].add_term(lt.m, -lc);
            }
        }
        e.v = result;
    }
};

inline GroebnerBasis buchberger(const std::vector<VectorPoly>& gens, size_t rank,
                                const std::vector<std::string>& ring) {
    return TrackedGroebner(gens, rank, ring).gb;
}

inline VectorPoly normal_form(const VectorPoly& v, const GroebnerBasis& gb) {
    return gb.normal_form(v);
}

inline std::vector<Poly> lift(const VectorPoly& v, const std::vector<VectorPoly>& gens,
                              size_t rank, const std::vector<std::string>& ring) {
    return TrackedGroebner(gens, rank, ring).lift(v);
}

// ---------------------------------------------------------------------------
// syzygies: generators of ker(M : Q^cols -> Q^rows).
//
// Embed column j as (M e_j ; e_j) in Q^(rows+cols); with the position-over-
// term order the head block dominates, so basis elements vanishing on the
// head block generate the syzygy module.

inline std::vector<VectorPoly> syzygies(const PolyMatrix& M) {
    size_t r = M.rows, c = M.cols;
    std::vector<VectorPoly> embedded;
    for (size_t j = 0; j < c; ++j) {
        VectorPoly v(r + c, M.ring);
        for (size_t i = 0; i < r; ++i) v.comp[i] = M.at(i, j);
        v.comp[r + j] = Poly::constant(M.ring, Rational(1));
        embedded.push_back(std::move(v));
    }
    GroebnerBasis gb = buchberger(embedded, r + c, M.ring);
    std::vector<VectorPoly> kernel;
    for (auto& g : gb.gens) {
        bool head_zero = true;
        for (size_t i = 0; i < r && head_zero; ++i)
            if (!g.comp[i].is_zero()) head_zero = false;
        if (!head_zero) continue;
        VectorPoly tail(c, M.ring);
        for (size_t j = 0; j < c; ++j) tail.comp[j] = g.comp[r + j];
        kernel.push_back(std::move(tail));
    }
    return kernel;
}

// ---------------------------------------------------------------------------
// power_membership: minimal N <= cap with x_i^N in the ideal J, plus a lift
// x_i^N = sum_j a_j J_j.

struct PowerMembership {
    unsigned N;
    std::vector<Poly> coefficients;
};

inline PowerMembership power_membership(const std::vector<Poly>& J, size_t var_index,
                                        const std::vector<std::string>& ring,
                                        unsigned cap = 64) {
    std::vector<VectorPoly> gens;
    for (auto& g : J) gens.push_back(VectorPoly({g}));
    TrackedGroebner tg(gens, 1, ring);
    Poly x = Poly::variable(ring, var_index);
    for (unsigned N = 1; N <= cap; ++N) {
        VectorPoly v({x.pow(N)});
        if (tg.contains(v)) return {N, tg.lift(v)};
    }
    throw NotZeroDimensional("no power of " + ring[var_index] +
                             " lies in the ideal (cap " + std::to_string(cap) + ")");
}

// ---------------------------------------------------------------------------
// quotient_dimension: dim_k of Q^r / <relations>, by counting standard
// monomials per position.

struct ModulePresentation {
    size_t rank;
    std::vector<std::string> ring;
    std::vector<VectorPoly> relations;
};

namespace detail {

// counts monomials outside the monomial ideal generated by `leads`;
// throws InfiniteLength when the count is infinite
inline size_t count_standard_monomials(const std::vector<Monomial>& leads, size_t nvars) {
    // constant leading monomial kills the whole position
    for (auto& m : leads)
        if (m.degree() == 0) return 0;
    // finiteness needs a pure power of every variable
    std::vector<int> bound(nvars, -1);
    for (auto& m : leads) {
        int nz = -1;
        bool pure = true;
        for (size_t i = 0; i < nvars; ++i) {
            if (m.e[i] > 0) {
                if (nz >= 0) { pure = false; break; }
                nz = (int)i;
            }
        }
        if (pure && nz >= 0) {
            if (bound[nz] < 0 || m.e[nz] < bound[nz]) bound[nz] = m.e[nz];
        }
    }
    for (size_t i = 0; i < nvars; ++i)
        if (bound[i] < 0)
            throw InfiniteLength("quotient is not finite dimensional");
    // enumerate the bounded box and test divisibility
    size_t count = 0;
    std::vector<int> e(nvars, 0);
    for (;;) {
        Monomial m(e);
        bool divisible = false;
        for (auto& l : leads)
            if (l.divides(m)) { divisible = true; break; }
        if (!divisible) ++count;
        size_t i = 0;
        while (i < nvars) {
            if (++e[i] < bound[i]) break;
            e[i++] = 0;
        }
        if (i == nvars) break;
    }
    return count;
}

}  // namespace detail

inline size_t quotient_dimension(const ModulePresentation& pres) {
    if (pres.ring.empty()) throw MfhrrError("empty ring");
    GroebnerBasis gb = buchberger(pres.relations, pres.rank, pres.ring);
    size_t total = 0;
    for (size_t pos = 0; pos < pres.rank; ++pos) {
        std::vector<Monomial> leads;
        for (auto& g : gb.gens) {
            ModTerm lt = leading_term(g);
            if (lt.pos == pos) leads.push_back(lt.m);
        }
        total += detail::count_standard_monomials(leads, pres.ring.size());
    }
    return total;
}

// the standard monomials themselves (a k-basis of the quotient), per position
inline std::vector<ModTerm> standard_monomials(const ModulePresentation& pres) {
    GroebnerBasis gb = buchberger(pres.relations, pres.rank, pres.ring);
    size_t nvars = pres.ring.size();
    std::vector<ModTerm> out;
    for (size_t pos = 0; pos < pres.rank; ++pos) {
        std::vector<Monomial> leads;
        for (auto& g : gb.gens) {
            ModTerm lt = leading_term(g);
            if (lt.pos == pos) leads.push_back(lt.m);
        }
        // reuse the counting logic's finiteness analysis by calling it first
        size_t cnt = detail::count_standard_monomials(leads, nvars);
        if (cnt == 0) continue;
        std::vector<int> bound(nvars, 0);
        for (auto& m : leads) {
            int nz = -1;
            bool pure = true;
            for (size_t i = 0; i < nvars; ++i) {
                if (m.e[i] > 0) {
                    if (nz >= 0) { pure = false; break; }
                    nz = (int)i;
                }
            }
            if (pure && nz >= 0 && (bound[nz] == 0 || m.e[nz] < bound[nz]))
                bound[nz] = m.e[nz];
        }
        std::vector<int> e(nvars, 0);
        for (;;) {
            Monomial m(e);
            bool divisible = false;
            for (auto& l : leads)
                if (l.divides(m)) { divisible = true; break; }
            if (!divisible) out.push_back({pos, m});
            size_t i = 0;
            while (i < nvars) {
                if (++e[i] < bound[i]) break;
                e[i++] = 0;
            }
            if (i == nvars) break;
        }
    }
    return out;
}

}  // namespace mfhrr
