#include <doctest.h>

#include <mfhrr/residue.hpp>

#include "test_util.hpp"

using namespace mfhrr;

static const std::vector<std::string> XY = {"x", "y"};

TEST_CASE("res_monomial normalization") {
    std::vector<std::string> X1 = {"x"};
    CHECK(res_monomial(Poly::constant(X1, Rational(1)), {1}) == 1);
    CHECK(res_monomial(Poly::constant(X1, Rational(1)), {2}) == 0);
    CHECK(res_monomial(parse_poly("x", X1), {2}) == 1);
    // n <= 4 normalization: numerator 1, all powers 1 -> 1; any power > 1 -> 0
    for (size_t n = 1; n <= 4; ++n) {
        std::vector<std::string> ring;
        for (size_t i = 0; i < n; ++i) ring.push_back("x" + std::to_string(i + 1));
        Poly one = Poly::constant(ring, Rational(1));
        std::vector<int> a(n, 1);
        CHECK(res_monomial(one, a) == 1);
        a[n - 1] = 2;
        CHECK(res_monomial(one, a) == 0);
    }
}

TEST_CASE("res_general via the transformation law") {
    Poly one = Poly::constant(XY, Rational(1));
    Poly x = parse_poly("x", XY), y = parse_poly("y", XY);
    CHECK(res_general(one, {x, y}) == 1);
    CHECK(res_general(one, {y, x}) == -1);
    CHECK(res_general(parse_poly("x*y", XY), {parse_poly("3*x^2", XY), parse_poly("3*y^2", XY)}) ==
          rat(1, 9));
    CHECK_THROWS_AS(res_general(one, {x, x}), NotZeroDimensional);
}

TEST_CASE("res_general independence of the lifting exponent") {
    Poly g = parse_poly("1+x*y+y^2", XY);
    std::vector<Poly> dens = {parse_poly("3*x^2", XY), parse_poly("3*y^2", XY)};
    Rational base = res_general(g, dens);
    CHECK(res_general(g, dens, 3) == base);
    CHECK(res_general(g, dens, 5) == base);
    std::vector<Poly> dens2 = {parse_poly("y", XY), parse_poly("x", XY)};
    CHECK(res_general(g, dens2, 4) == res_general(g, dens2));
}

TEST_CASE("residues kill the ideal (randomized)") {
    std::mt19937 rng(5150);
    std::vector<Poly> dens = {parse_poly("x^2+y", XY), parse_poly("y^3", XY)};
    for (int t = 0; t < 10; ++t) {
        Poly h = testutil::random_poly(rng, XY);
        CHECK(res_general(dens[t % 2] * h, dens) == 0);
    }
}

TEST_CASE("pure-power denominators agree with res_monomial") {
    std::mt19937 rng(99);
    for (int t = 0; t < 10; ++t) {
        int a1 = 1 + (int)(rng() % 3), a2 = 1 + (int)(rng() % 3);
        Poly g = testutil::random_poly(rng, XY);
        std::vector<Poly> dens = {parse_poly("x", XY).pow(a1), parse_poly("y", XY).pow(a2)};
        CHECK(res_general(g, dens) == res_monomial(g, {a1, a2}));
    }
}

TEST_CASE("residue pairing anchors") {
    auto cls = [](const std::string& s, const Poly& f) {
        DiffForm w(f.ring);
        std::vector<int> top;
        for (size_t i = 0; i < f.ring.size(); ++i) top.push_back((int)i);
        w.add_component(top, parse_poly(s, f.ring));
        return milnor_reduce(w, f);
    };
    Poly fxy = parse_poly("x*y", XY);
    CHECK(residue_pairing(fxy, cls("1", fxy), cls("1", fxy)) == -1);

    Poly fq = parse_poly("x^2+y^2", XY);
    CHECK(residue_pairing(fq, cls("1", fq), cls("1", fq)) == rat(1, 4));

    Poly fc = parse_poly("x^3+y^3", XY);
    CHECK(residue_pairing(fc, cls("3*y-3*x", fc), cls("3*y-3*x", fc)) == -2);

    CHECK_THROWS_AS(residue_pairing(parse_poly("x^3", XY), cls("1", fxy), cls("1", fxy)),
                    NotIsolated);
}

TEST_CASE("residue pairing symmetry and bilinearity (randomized)") {
    std::mt19937 rng(31337);
    Poly f = parse_poly("x^3+y^3", XY);
    auto reduce = [&](const Poly& p) {
        DiffForm w(XY);
        w.add_component({0, 1}, p);
        return milnor_reduce(w, f);
    };
    for (int t = 0; t < 8; ++t) {
        MilnorClass a = reduce(testutil::random_poly(rng, XY));
        MilnorClass b = reduce(testutil::random_poly(rng, XY));
        MilnorClass c = reduce(testutil::random_poly(rng, XY));
        CHECK(residue_pairing(f, a, b) == residue_pairing(f, b, a));
        MilnorClass bc{XY, f, b.rep + c.rep};
        CHECK(residue_pairing(f, a, bc) ==
              residue_pairing(f, a, b) + residue_pairing(f, a, c));
    }
}

TEST_CASE("Gram matrix of the pairing is nondegenerate on the Milnor basis") {
    for (const char* fs : {"x*y", "x^2+y^2", "x^3+y^3"}) {
        Poly f = parse_poly(fs, XY);
        std::vector<VectorPoly> gens;
        for (auto& g : detail::jacobian(f)) gens.push_back(VectorPoly({g}));
        auto basis = standard_monomials({1, XY, gens});
        REQUIRE(!basis.empty());
        PolyMatrix gram(basis.size(), basis.size(), XY);
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = 0; j < basis.size(); ++j) {
                MilnorClass a{XY, f, Poly::term(XY, basis[i].m, Rational(1))};
                MilnorClass b{XY, f, Poly::term(XY, basis[j].m, Rational(1))};
                gram.at(i, j) = Poly::constant(XY, residue_pairing(f, a, b));
            }
        CHECK(!gram.determinant().is_zero());
    }
}

TEST_CASE("kunneth residue sign") {
    std::vector<std::string> X1 = {"x"}, Y1 = {"y"};
    GeneralizedFraction f1{X1, Poly::constant(X1, Rational(1)), {{parse_poly("x", X1), 1}}};
    GeneralizedFraction f2{Y1, Poly::constant(Y1, Rational(1)), {{parse_poly("y", Y1), 1}}};
    auto [lhs, rhs] = kunneth_residue_check(f1, f2);
    CHECK(lhs == rhs);
    CHECK(rhs == -1);

    GeneralizedFraction f3{X1, parse_poly("x", X1), {{parse_poly("x", X1), 2}}};
    auto [l2, r2] = kunneth_residue_check(f3, f2);
    CHECK(l2 == r2);
    CHECK(r2 == -1);
}

TEST_CASE("kunneth residue sign (randomized)") {
    std::mt19937 rng(2024);
    for (int t = 0; t < 12; ++t) {
        size_t m = 1 + rng() % 2, n = 1 + rng() % 2;
        std::vector<std::string> R1, R2;
        for (size_t i = 0; i < m; ++i) R1.push_back("u" + std::to_string(i + 1));
        for (size_t i = 0; i < n; ++i) R2.push_back("v" + std::to_string(i + 1));
        auto frac = [&](const std::vector<std::string>& R) {
            GeneralizedFraction fr{R, testutil::random_poly(rng, R), {}};
            for (size_t i = 0; i < R.size(); ++i)
                fr.denominators.push_back({Poly::variable(R, i), 1 + (int)(rng() % 2)});
            return fr;
        };
        auto [lhs, rhs] = kunneth_residue_check(frac(R1), frac(R2));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("cech one-variable reduction") {
    std::vector<std::string> X1 = {"x"};
    Cech1Var a{X1, Poly(X1), {{1, Rational(1)}}};
    CHECK(cech_1var_reduce(a).singular == std::map<int, Rational>{{1, Rational(1)}});
    CHECK(cech_1var_reduce(a).residue() == 1);

    Cech1Var b{X1, parse_poly("x", X1), {{2, Rational(1)}}};
    Cech1Var rb = cech_1var_reduce(b);
    CHECK(rb.poly_part.is_zero());
    CHECK(rb.singular == std::map<int, Rational>{{2, Rational(1)}});
    CHECK(rb.residue() == 0);

    Cech1Var c{X1, Poly(X1), {{1, Rational(3)}, {3, Rational(2)}}};
    CHECK(cech_1var_reduce(c).singular ==
          std::map<int, Rational>{{1, Rational(3)}, {3, Rational(2)}});
}
