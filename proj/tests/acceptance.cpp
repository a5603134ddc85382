// Acceptance suite: one pass/fail line per criterion, all in exact rational
// arithmetic.  Returns nonzero if any criterion fails.

#include <chrono>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <mfhrr/corpus.hpp>

using namespace mfhrr;

namespace {

int g_failures = 0;

void report(int number, const std::string& what, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << what
              << "\n";
    if (!ok) ++g_failures;
}

Poly random_poly(std::mt19937& rng, const std::vector<std::string>& ring,
                 int nterms = 2, int maxdeg = 2, int maxcoef = 3) {
    std::uniform_int_distribution<int> tcount(0, nterms);
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<int> coef(-maxcoef, maxcoef);
    Poly p(ring);
    int k = tcount(rng);
    for (int t = 0; t < k; ++t) {
        Monomial m(ring.size());
        for (size_t i = 0; i < ring.size(); ++i) m.e[i] = deg(rng);
        p.add_term(m, Rational(coef(rng)));
    }
    return p;
}

Elt rand_elt(std::mt19937& rng, const Ambient& A, int parity) {
    PolyMatrix m(A.dim(), A.dim(), A.ring);
    for (size_t i = 0; i < A.dim(); ++i)
        for (size_t j = 0; j < A.dim(); ++j) {
            int blk = (int)((i >= A.p0) + (j >= A.p0)) % 2;
            if (blk == parity) m.at(i, j) = random_poly(rng, A.ring);
        }
    return {m, parity};
}

Chain rand_chain(std::mt19937& rng, const Ambient& A, size_t max_len,
                 size_t nwords = 1) {
    Chain c(A);
    for (size_t w = 0; w < nwords; ++w) {
        std::vector<Elt> letters;
        size_t len = rng() % (max_len + 1);
        for (size_t k = 0; k <= len; ++k) letters.push_back(rand_elt(rng, A, (int)(rng() % 2)));
        c = c + chain_word(A, Rational(1 + (int)(rng() % 3)), letters);
    }
    return c;
}

Chain rand_chain_homog(std::mt19937& rng, const Ambient& A, int parity,
                       size_t max_len) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::vector<Elt> letters;
        size_t len = rng() % (max_len + 1);
        for (size_t k = 0; k <= len; ++k) letters.push_back(rand_elt(rng, A, (int)(rng() % 2)));
        Chain c = chain_word(A, Rational(1), letters);
        if (!c.is_zero() && c.words[0].parity() == parity) return c;
    }
    return Chain(A);
}

// 1. residue normalization: res[dx/(x_1,...,x_n)] = 1 and res with any
// power > 1 under numerator 1 vanishes, for n <= 4
void criterion_1() {
    bool ok = true;
    for (size_t n = 1; n <= 4 && ok; ++n) {
        std::vector<std::string> ring;
        for (size_t i = 0; i < n; ++i) ring.push_back("x" + std::to_string(i + 1));
        Poly one = Poly::constant(ring, Rational(1));
        std::vector<Poly> dens;
        for (size_t i = 0; i < n; ++i) dens.push_back(Poly::variable(ring, i));
        ok = ok && res_monomial(one, std::vector<int>(n, 1)) == 1 &&
             res_general(one, dens) == 1;
        for (size_t i = 0; i < n; ++i) {
            std::vector<int> a(n, 1);
            a[i] = 2;
            std::vector<Poly> d2 = dens;
            d2[i] = dens[i].pow(2);
            ok = ok && res_monomial(one, a) == 0 && res_general(one, d2) == 0;
        }
    }
    report(1, "residue normalization for n <= 4", ok);
}

// 2. the one-variable trace identity for j = 0..5
void criterion_2() {
    Thm112Report rep = thm112_verify(5);
    if (!rep.passed)
        for (auto& line : rep.lines) std::cout << "  " << line << "\n";
    report(2, "one-variable identity res(eps(y^j)) = -trace(y^j), j = 0..5",
           rep.passed && rep.first_failing_j == -1);
}

// 3. HRR on f = xy, X = (x, y): chi = 1, <ch,ch> = -1, sign = -1
void criterion_3() {
    std::vector<std::string> XY = {"x", "y"};
    PolyMatrix A(1, 1, XY), B(1, 1, XY);
    A.at(0, 0) = parse_poly("x", XY);
    B.at(0, 0) = parse_poly("y", XY);
    auto X = mf_new(A, B, parse_poly("x*y", XY));
    HrrResult r = hrr_check(X, X);
    bool ok = r.chi == 1 && r.pairing == -1 && r.sign == -1 && r.verdict;
    report(3, "HRR on f = xy: 1 = (-1)(-1)", ok);
}

// 4. HRR on f = x^3 + y^3, X = (x+y, x^2-xy+y^2): ch = 3(y-x) dx dy,
// <ch,ch> = -2, and the homology engine independently returns chi = 2
void criterion_4() {
    std::vector<std::string> XY = {"x", "y"};
    Poly f = parse_poly("x^3+y^3", XY);
    PolyMatrix A(1, 1, XY), B(1, 1, XY);
    A.at(0, 0) = parse_poly("x+y", XY);
    B.at(0, 0) = parse_poly("x^2-x*y+y^2", XY);
    auto X = mf_new(A, B, f);
    MilnorClass ch = chern(X);
    bool ok = ch.rep == parse_poly("3*y-3*x", XY);
    ok = ok && residue_pairing(f, ch, ch) == -2;
    ok = ok && euler_chi(X, X) == 2;
    report(4, "HRR on f = x^3+y^3: ch = 3(y-x) dxdy, pairing -2, chi = 2", ok);
}

// 5. HRR in four variables on the Koszul factorization of x1 y1 + x2 y2:
// both pipelines agree (equality is the criterion)
void criterion_5() {
    std::vector<std::string> R = {"x1", "y1", "x2", "y2"};
    auto X = koszul_mf({parse_poly("x1", R), parse_poly("x2", R)},
                       {parse_poly("y1", R), parse_poly("y2", R)});
    HrrResult r = hrr_check(X, X);
    report(5, "HRR in four variables: chi(X, X) = <ch, ch>", r.verdict);
}

// 6. the Kunneth residue sign on 20 randomized fraction pairs with m, n <= 2
void criterion_6() {
    std::mt19937 rng(6006);
    bool ok = true;
    for (int t = 0; t < 20 && ok; ++t) {
        size_t m = 1 + rng() % 2, n = 1 + rng() % 2;
        std::vector<std::string> R1, R2;
        for (size_t i = 0; i < m; ++i) R1.push_back("u" + std::to_string(i + 1));
        for (size_t i = 0; i < n; ++i) R2.push_back("v" + std::to_string(i + 1));
        auto frac = [&](const std::vector<std::string>& ring) {
            GeneralizedFraction fr{ring, random_poly(rng, ring, 4, 3, 5), {}};
            for (size_t i = 0; i < ring.size(); ++i)
                fr.denominators.push_back({Poly::variable(ring, i), 1 + (int)(rng() % 2)});
            return fr;
        };
        auto [lhs, rhs] = kunneth_residue_check(frac(R1), frac(R2));
        ok = ok && lhs == rhs;
    }
    report(6, "Kunneth residue sign on 20 randomized fraction pairs", ok);
}

// 7. the Hochschild property suites, seed-deterministic
void criterion_7() {
    std::vector<std::string> XY = {"x", "y"};
    std::mt19937 rng(7007);
    bool ok = true;

    // b^2 = 0 on >= 200 random chains of length <= 4 over (Q, 0, -f) and End(X)
    Poly f = parse_poly("x*y", XY);
    Ambient Q = ambient_poly(-parse_poly("x^3+y^3", XY));
    PolyMatrix A(1, 1, XY), B(1, 1, XY);
    A.at(0, 0) = parse_poly("x", XY);
    B.at(0, 0) = parse_poly("y", XY);
    auto X = mf_new(A, B, f);
    Ambient E = ambient_end(X);
    for (int t = 0; t < 100 && ok; ++t)
        ok = hochschild_b(hochschild_b(rand_chain(rng, Q, 4))).is_zero();
    for (int t = 0; t < 100 && ok; ++t)
        ok = hochschild_b(hochschild_b(rand_chain(rng, E, 4))).is_zero();

    // eps o b = (-df) wedge eps over (Q, 0, -f)
    {
        Ambient Qf = ambient_poly(-f);
        DiffForm mdf = de_rham(DiffForm::from_poly(-f));
        for (int t = 0; t < 10 && ok; ++t) {
            Chain c = rand_chain(rng, Qf, 2, 2);
            ok = hkr_epsilon_chain(hochschild_b(c)) == wedge(mdf, hkr_epsilon_chain(c));
        }
    }

    // the Kunneth map is a chain map
    {
        std::vector<std::string> U = {"u"}, V = {"v"};
        Ambient QA = ambient_poly(-parse_poly("u^3", U));
        Ambient QB = ambient_poly(-parse_poly("v^2", V));
        for (int t = 0; t < 10 && ok; ++t) {
            int pa = (int)(rng() % 2);
            Chain a = rand_chain_homog(rng, QA, pa, 2);
            Chain b = rand_chain(rng, QB, 2, 1);
            if (a.is_zero() || b.is_zero()) continue;
            Rational ls = pa == 0 ? Rational(1) : Rational(-1);
            ok = hochschild_b(kunneth_star(a, b)) ==
                 kunneth_star(hochschild_b(a), b) + kunneth_star(a, hochschild_b(b)) * ls;
        }
    }

    // psi is a chain map
    for (int t = 0; t < 10 && ok; ++t) {
        Chain c = rand_chain(rng, E, 3, 1);
        ok = psi_mf(hochschild_b(c), X) == hochschild_b(psi_mf(c, X));
    }

    // b0 = 1[h] * -  is central up to the Koszul sign
    {
        Ambient Qc = ambient_poly(-parse_poly("x^2+y^2", XY));
        Chain oneh = chain_word(Qc, Rational(1), {elt_identity(Qc), elt_scalar(Qc, Qc.h)});
        for (int t = 0; t < 10 && ok; ++t) {
            int pc = (int)(rng() % 2);
            Chain c = rand_chain_homog(rng, Qc, pc, 2);
            if (c.is_zero()) continue;
            Rational s = pc == 0 ? Rational(1) : Rational(-1);
            ok = shuffle_star(oneh, c) == shuffle_star(c, oneh) * s;
        }
    }

    // 1[e*]^{*j} = j! 1[e*|...|e*] in the rank-(1,1) exterior model
    {
        std::vector<std::string> X1 = {"x"};
        auto K = koszul_mf({Poly::variable(X1, 0)}, {Poly(X1)});
        Ambient E1 = ambient_end(K);
        Elt estar{PolyMatrix(2, 2, X1), 1};
        estar.mat.at(0, 1) = Poly::constant(X1, Rational(1));
        Elt id = elt_identity(E1);
        Chain one_estar = chain_word(E1, Rational(1), {id, estar});
        Chain power = one_estar;
        for (int j = 2; j <= 5 && ok; ++j) {
            power = shuffle_star(power, one_estar);
            std::vector<Elt> letters{id};
            for (int k = 0; k < j; ++k) letters.push_back(estar);
            ok = power == chain_word(E1, factorial((unsigned)j), letters);
        }
    }

    report(7, "Hochschild suites: b^2, eps, Kunneth, psi, centrality, powers", ok);
}

// 8. oracle equivalence: the Groebner homology dimensions agree with the
// stabilized degree-slice oracle on every corpus Hom and tensor complex
void criterion_8() {
    bool ok = true;
    for (auto& e : builtin_corpus())
        for (auto& m : e.mfs) {
            auto check = [&](const MatrixFactorization& C) {
                if (!ok) return;
                ok = z2_homology_dims(C) == truncated_oracle_stabilized(C, 8);
            };
            check(hom_complex(m.mf, m.mf));
            check(tensor(m.mf, n_twist(m.mf)));
        }
    report(8, "oracle equivalence on every corpus Hom/tensor complex", ok);
}

// 9. eps/ch consistency: eps(id_X[]) reduced into the Milnor algebra equals
// the Chern character for every corpus object (all have n even)
void criterion_9() {
    bool ok = true;
    for (auto& e : builtin_corpus())
        for (auto& m : e.mfs) {
            if (!ok) break;
            MilnorClass lhs = milnor_reduce(hkr_epsilon_id(m.mf), e.f);
            ok = lhs == chern(m.mf);
        }
    report(9, "eps(id_X[]) reduces to ch(X) on the whole corpus", ok);
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::cout << (g_failures == 0 ? "all criteria passed" : "criteria failed")
              << " (" << dt << " ms)\n";
    return g_failures == 0 ? 0 : 1;
}
