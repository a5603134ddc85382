#include <doctest.h>

#include <functional>

#include <mfhrr/forms.hpp>

#include "test_util.hpp"

using namespace mfhrr;

static const std::vector<std::string> XY = {"x", "y"};

static DiffForm rand_form(std::mt19937& rng, const std::vector<std::string>& ring,
                          int degree) {
    // random homogeneous-degree form: random polys on all subsets of that size
    DiffForm w(ring);
    std::vector<int> idx(ring.size());
    for (size_t i = 0; i < ring.size(); ++i) idx[i] = (int)i;
    std::function<void(size_t, std::vector<int>&)> pick = [&](size_t start,
                                                              std::vector<int>& cur) {
        if ((int)cur.size() == degree) {
            w.add_component(cur, testutil::random_poly(rng, ring, 2));
            return;
        }
        for (size_t i = start; i < ring.size(); ++i) {
            cur.push_back(idx[i]);
            pick(i + 1, cur);
            cur.pop_back();
        }
    };
    std::vector<int> cur;
    pick(0, cur);
    return w;
}

TEST_CASE("wedge basics") {
    DiffForm dx = DiffForm::dx(XY, 0), dy = DiffForm::dx(XY, 1);
    DiffForm dxdy(XY);
    dxdy.add_component({0, 1}, Poly::constant(XY, Rational(1)));
    CHECK(wedge(dx, dy) == dxdy);
    CHECK(wedge(dx, dx).is_zero());
    CHECK(wedge(dy, dx) == -dxdy);
}

TEST_CASE("de rham differential") {
    DiffForm xy = DiffForm::from_poly(parse_poly("x*y", XY));
    DiffForm d1 = de_rham(xy);
    CHECK(d1.component({0}) == parse_poly("y", XY));
    CHECK(d1.component({1}) == parse_poly("x", XY));
    CHECK(de_rham(DiffForm::dx(XY, 0)).is_zero());

    DiffForm xdy(XY);
    xdy.add_component({1}, parse_poly("x", XY));
    CHECK(de_rham(xdy).component({0, 1}) == Poly::constant(XY, Rational(1)));
}

TEST_CASE("d squared, graded commutativity, Leibniz (randomized)") {
    std::mt19937 rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        int dw = (int)(rng() % 3), de = (int)(rng() % 3);
        DiffForm w = rand_form(rng, XY, dw), e = rand_form(rng, XY, de);
        CHECK(de_rham(de_rham(w)).is_zero());
        int sign = (dw * de) % 2 == 0 ? 1 : -1;
        CHECK(wedge(w, e) == wedge(e, w) * Rational(sign));
        int lsign = dw % 2 == 0 ? 1 : -1;
        CHECK(de_rham(wedge(w, e)) ==
              wedge(de_rham(w), e) + wedge(w, de_rham(e)) * Rational(lsign));
    }
}

// the rank-(1,1) Koszul model: e sends 1 to e, e* sends e to 1
static FormMatrix endo_e(const std::vector<std::string>& ring) {
    FormMatrix m(1, 1, ring);
    m.at(1, 0) = DiffForm::from_poly(Poly::constant(ring, Rational(1)));
    return m;
}
static FormMatrix endo_estar(const std::vector<std::string>& ring) {
    FormMatrix m(1, 1, ring);
    m.at(0, 1) = DiffForm::from_poly(Poly::constant(ring, Rational(1)));
    return m;
}

TEST_CASE("supertrace anchors") {
    std::vector<std::string> X1 = {"x"};
    CHECK(supertrace(FormMatrix::identity(1, 1, X1)).is_zero());
    CHECK(supertrace(endo_estar(X1)).is_zero());
    CHECK(supertrace(endo_e(X1)).is_zero());
    DiffForm see = supertrace(endo_e(X1) * endo_estar(X1));
    CHECK(see.component({}) == Poly::constant(X1, Rational(-1)));
}

TEST_CASE("supertrace symmetry str(MN) = +-str(NM) (randomized)") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        // homogeneous matrices: fixed form degree, fixed endomorphism parity
        auto make = [&](int fdeg, bool endo_odd) {
            FormMatrix m(1, 1, XY);
            if (endo_odd) {
                m.at(0, 1) = rand_form(rng, XY, fdeg);
                m.at(1, 0) = rand_form(rng, XY, fdeg);
            } else {
                m.at(0, 0) = rand_form(rng, XY, fdeg);
                m.at(1, 1) = rand_form(rng, XY, fdeg);
            }
            return m;
        };
        int fM = (int)(rng() % 3), fN = (int)(rng() % 3);
        bool oM = rng() % 2, oN = rng() % 2;
        FormMatrix M = make(fM, oM), N = make(fN, oN);
        int pM = (fM + (oM ? 1 : 0)) % 2, pN = (fN + (oN ? 1 : 0)) % 2;
        Rational s = (pM * pN) % 2 == 0 ? Rational(1) : Rational(-1);
        CHECK(supertrace(M * N) == supertrace(N * M) * s);
    }
}

TEST_CASE("chern anchors") {
    PolyMatrix A(1, 1, XY), B(1, 1, XY);
    A.at(0, 0) = parse_poly("x", XY);
    B.at(0, 0) = parse_poly("y", XY);
    auto X = mf_new(A, B, parse_poly("x*y", XY));
    CHECK(chern(X).rep == Poly::constant(XY, Rational(1)));

    PolyMatrix A2(1, 1, XY), B2(1, 1, XY);
    A2.at(0, 0) = parse_poly("x+y", XY);
    B2.at(0, 0) = parse_poly("x^2-x*y+y^2", XY);
    auto X2 = mf_new(A2, B2, parse_poly("x^3+y^3", XY));
    CHECK(chern(X2).rep == parse_poly("3*y-3*x", XY));

    // additivity over direct sums
    auto S = direct_sum(X2, X2);
    CHECK(chern(S).rep == parse_poly("6*y-6*x", XY));

    std::vector<std::string> X1 = {"x"};
    PolyMatrix A1(1, 1, X1), B1(1, 1, X1);
    A1.at(0, 0) = parse_poly("x", X1);
    B1.at(0, 0) = parse_poly("x", X1);
    CHECK_THROWS_AS(chern(mf_new(A1, B1, parse_poly("x^2", X1))), OddDimension);
}

TEST_CASE("milnor reduction") {
    Poly f = parse_poly("x^3+y^3", XY);
    DiffForm w(XY);
    w.add_component({0, 1}, parse_poly("x^2", XY));
    CHECK(milnor_reduce(w, f).rep.is_zero());

    DiffForm w2(XY);
    w2.add_component({0, 1}, parse_poly("x*y", XY));
    CHECK(milnor_reduce(w2, f).rep == parse_poly("x*y", XY));

    // smooth point: unit Jacobian ideal, every class is zero
    std::vector<std::string> X1 = {"x"};
    DiffForm w3(X1);
    w3.add_component({0}, parse_poly("x^2+1", X1));
    CHECK(milnor_reduce(w3, parse_poly("x", X1)).rep.is_zero());

    CHECK_THROWS_AS(milnor_reduce(w, parse_poly("x^3", XY)), NotIsolated);
}

TEST_CASE("hkr epsilon on polynomial words") {
    // ambient (Q, 0, -f): 1x1 even matrices, zero differential
    auto poly_word = [&](const Poly& q0, const std::vector<Poly>& rest) {
        HkrWord w;
        w.coeff = Rational(1);
        w.a0 = FormMatrix(1, 0, XY);
        w.a0.at(0, 0) = DiffForm::from_poly(q0);
        for (auto& q : rest) {
            FormMatrix m(1, 0, XY);
            m.at(0, 0) = DiffForm::from_poly(q);
            w.rest.push_back(m);
        }
        w.delta = FormMatrix(1, 0, XY);
        return w;
    };
    Poly q0 = parse_poly("x^2", XY), q1 = parse_poly("x*y", XY);
    CHECK(hkr_epsilon({poly_word(q0, {})}) == DiffForm::from_poly(q0));
    DiffForm expected = wedge(DiffForm::from_poly(q0), de_rham(DiffForm::from_poly(q1)));
    CHECK(hkr_epsilon({poly_word(q0, {q1})}) == expected);
    // length two picks up the 1/2! factor: q0 dq1 dq2 / 2
    Poly q2 = parse_poly("y^2", XY);
    DiffForm two = wedge(expected, de_rham(DiffForm::from_poly(q2))) * Rational(1, 2);
    CHECK(hkr_epsilon({poly_word(q0, {q1, q2})}) == two);
}

TEST_CASE("hkr epsilon of id agrees with chern") {
    PolyMatrix A(1, 1, XY), B(1, 1, XY);
    A.at(0, 0) = parse_poly("x", XY);
    B.at(0, 0) = parse_poly("y", XY);
    auto X = mf_new(A, B, parse_poly("x*y", XY));
    DiffForm eps = hkr_epsilon_id(X);
    CHECK(eps.component({0, 1}) == Poly::constant(XY, Rational(1)));
    CHECK(milnor_reduce(eps, X.f) == chern(X));

    PolyMatrix A2(1, 1, XY), B2(1, 1, XY);
    A2.at(0, 0) = parse_poly("x+y", XY);
    B2.at(0, 0) = parse_poly("x^2-x*y+y^2", XY);
    auto X2 = mf_new(A2, B2, parse_poly("x^3+y^3", XY));
    CHECK(milnor_reduce(hkr_epsilon_id(X2), X2.f) == chern(X2));
}
