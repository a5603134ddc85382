// residue.hpp
//
// Grothendieck residues of generalized fractions via the transformation law,
// the residue pairing on the Milnor algebra, the Kunneth sign check for
// products of fractions, and the canonical one-variable Cech reduction.

#pragma once

#include "forms.hpp"

namespace mfhrr {

// [g dx_1...dx_n / (g_1^{a_1}, ..., g_n^{a_n})]
struct GeneralizedFraction {
    std::vector<std::string> ring;
    Poly numerator;
    std::vector<std::pair<Poly, int>> denominators;  // (g_i, power a_i >= 1)
};

// res[g dx / (x_1^{a_1}, ..., x_n^{a_n})]: the coefficient of
// x_1^{a_1 - 1} ... x_n^{a_n - 1} in g (the Cech module action)
inline Rational res_monomial(const Poly& g, const std::vector<int>& a) {
    if (a.size() != g.ring.size()) throw ArityMismatch("one power per variable");
    Monomial m(g.ring.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 1) throw MfhrrError("denominator powers must be >= 1");
        m.e[i] = a[i] - 1;
    }
    return g.coeff(m);
}

// res[g dx / (g_1, ..., g_n)] by the transformation law: lift
// x_i^N = sum_j a_ij g_j with a single common N, then
// res = res_monomial(g * det(a), (N, ..., N))
inline Rational res_general(const Poly& g, const std::vector<Poly>& dens,
                            unsigned N_override = 0) {
    const auto& ring = g.ring;
    size_t n = ring.size();
    if (dens.size() != n) throw ArityMismatch("need one denominator per variable");
    // common power: the max of the per-variable minimal ones
    unsigned N = N_override;
    if (N == 0)
        for (size_t i = 0; i < n; ++i)
            N = std::max(N, power_membership(dens, i, ring).N);
    std::vector<VectorPoly> gens;
    for (auto& d : dens) gens.push_back(VectorPoly({d}));
    TrackedGroebner tg(gens, 1, ring);
    PolyMatrix a(n, n, ring);
    for (size_t i = 0; i < n; ++i) {
        VectorPoly v({Poly::variable(ring, i).pow(N)});
        if (!tg.contains(v)) throw NotZeroDimensional("power not in the ideal");
        std::vector<Poly> coeffs = tg.lift(v);
        for (size_t j = 0; j < n; ++j) a.at(i, j) = coeffs[j];
    }
    std::vector<int> powers(n, (int)N);
    return res_monomial(g * a.determinant(), powers);
}

inline Rational res_general(const GeneralizedFraction& fr) {
    std::vector<Poly> dens;
    for (auto& [gi, ai] : fr.denominators) dens.push_back(gi.pow((unsigned)ai));
    return res_general(fr.numerator, dens);
}

// <g dx, h dx> = res[g h dx / (df/dx_1, ..., df/dx_n)]
inline Rational residue_pairing(const Poly& f, const MilnorClass& w,
                                const MilnorClass& w2) {
    std::vector<Poly> J = detail::jacobian(f);
    try {
        return res_general(w.rep * w2.rep, J);
    } catch (const NotZeroDimensional&) {
        throw NotIsolated("Jacobian ideal is not zero-dimensional");
    }
}

// Kunneth check for the product of two fractions over disjoint variable sets.
// lhs is the residue of the wedge-concatenated fraction over the product
// ring, which picks up (-1)^{mn} from moving the second numerator form past
// the first denominator block; rhs is (-1)^{mn} res' res''.
inline std::pair<Rational, Rational> kunneth_residue_check(
    const GeneralizedFraction& fr1, const GeneralizedFraction& fr2) {
    for (auto& v : fr1.ring)
        for (auto& w : fr2.ring)
            if (v == w) throw MfhrrError("variable sets must be disjoint");
    size_t m = fr1.ring.size(), n = fr2.ring.size();
    std::vector<std::string> ring = fr1.ring;
    ring.insert(ring.end(), fr2.ring.begin(), fr2.ring.end());

    // transport a poly into the product ring (first block or second block)
    auto lift_poly = [&](const Poly& p, size_t offset) {
        Poly out(ring);
        for (auto& [mo, c] : p.terms) {
            Monomial me(ring.size());
            for (size_t i = 0; i < mo.e.size(); ++i) me.e[offset + i] = mo.e[i];
            out.add_term(me, c);
        }
        return out;
    };

    std::vector<Poly> dens;
    for (auto& [gi, ai] : fr1.denominators) dens.push_back(lift_poly(gi.pow((unsigned)ai), 0));
    for (auto& [gi, ai] : fr2.denominators) dens.push_back(lift_poly(gi.pow((unsigned)ai), m));
    Poly num = lift_poly(fr1.numerator, 0) * lift_poly(fr2.numerator, m);

    Rational sign = (m * n) % 2 == 0 ? Rational(1) : Rational(-1);
    Rational lhs = sign * res_general(num, dens);
    Rational rhs = sign * res_general(fr1) * res_general(fr2);
    return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Cech1Var: elements of k[x][1/x] . alpha (x) dx in canonical form: the
// polynomial part is a coboundary and is dropped; the singular part
// j -> coefficient of alpha / x^j (x) dx is kept.

struct Cech1Var {
    std::vector<std::string> ring;  // one variable
    Poly poly_part;                 // transient; zero after reduction
    std::map<int, Rational> singular;  // j >= 1 -> coefficient

    bool operator==(const Cech1Var& o) const { return singular == o.singular; }

    Cech1Var& operator+=(const Cech1Var& o) {
        poly_part += o.poly_part;
        for (auto& [j, c] : o.singular) {
            singular[j] += c;
            if (singular[j] == 0) singular.erase(j);
        }
        return *this;
    }
    Cech1Var operator*(const Rational& c) const {
        Cech1Var out{ring, poly_part * c, {}};
        if (c != 0)
            for (auto& [j, v] : singular) out.singular[j] = v * c;
        return out;
    }

    // res(alpha / x (x) dx) = 1, all higher poles 0
    Rational residue() const {
        auto it = singular.find(1);
        return it == singular.end() ? Rational(0) : it->second;
    }

    std::string render() const {
        std::string out;
        for (auto& [j, c] : singular) {
            if (!out.empty()) out += " + ";
            out += rat_to_string(c) + "*(a/" + ring[0] + "^" + std::to_string(j) + ")*d" + ring[0];
        }
        return out.empty() ? "0" : out;
    }
};

inline Cech1Var cech_1var_reduce(const Cech1Var& e) {
    if (e.ring.size() != 1) throw ArityMismatch("one-variable model only");
    Cech1Var out{e.ring, Poly(e.ring), e.singular};
    for (auto it = out.singular.begin(); it != out.singular.end();)
        it = (it->second == 0 || it->first < 1) ? out.singular.erase(it) : std::next(it);
    return out;
}

}  // namespace mfhrr
