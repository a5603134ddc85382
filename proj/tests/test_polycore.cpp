#include <doctest.h>

#include <mfhrr/polycore.hpp>

#include "test_util.hpp"

using namespace mfhrr;

static const std::vector<std::string> XY = {"x", "y"};

TEST_CASE("parse_poly basic forms") {
    CHECK(parse_poly("x*y", XY) ==
          Poly::variable(XY, 0) * Poly::variable(XY, 1));
    Poly cubes = parse_poly("x^3+y^3", XY);
    CHECK(cubes == Poly::variable(XY, 0).pow(3) + Poly::variable(XY, 1).pow(3));
    CHECK_THROWS_AS(parse_poly("x+z", XY), UnknownVariable);
    CHECK_THROWS_AS(parse_poly("x++y", XY), SyntaxError);
    CHECK_THROWS_AS(parse_poly("(x", XY), SyntaxError);
    CHECK(parse_poly("0", XY).is_zero());
    CHECK(parse_poly("-x", XY) == -Poly::variable(XY, 0));
    CHECK(parse_poly("1/2", XY) == Poly::constant(XY, rat(1, 2)));
}

TEST_CASE("ring operations") {
    Poly x = Poly::variable(XY, 0), y = Poly::variable(XY, 1);
    CHECK((x + y) * (x - y) == x * x - y * y);
    Poly p = parse_poly("3*x^2*y-7", XY);
    CHECK(p * Poly::constant(XY, Rational(1)) == p);
    CHECK((x + y).pow(2) == parse_poly("x^2+2*x*y+y^2", XY));
    CHECK_THROWS_AS(x + Poly::variable({"x"}, 0), ArityMismatch);
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937 rng(7);
    for (int it = 0; it < 60; ++it) {
        Poly a = testutil::random_poly(rng, XY);
        Poly b = testutil::random_poly(rng, XY);
        Poly c = testutil::random_poly(rng, XY);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
    }
}

TEST_CASE("partial derivatives and Leibniz") {
    Poly x = Poly::variable(XY, 0), y = Poly::variable(XY, 1);
    CHECK(partial_derivative(x * y, 0) == y);
    CHECK(partial_derivative(parse_poly("x^3+y^3", XY), 0) ==
          parse_poly("3*x^2", XY));
    CHECK(partial_derivative(Poly::constant(XY, Rational(5)), 1).is_zero());

    std::mt19937 rng(11);
    for (int it = 0; it < 40; ++it) {
        Poly p = testutil::random_poly(rng, XY);
        Poly q = testutil::random_poly(rng, XY);
        for (size_t i = 0; i < 2; ++i) {
            CHECK(partial_derivative(p * q, i) ==
                  partial_derivative(p, i) * q + p * partial_derivative(q, i));
        }
    }
}

TEST_CASE("render / parse round trip") {
    std::mt19937 rng(13);
    for (int it = 0; it < 60; ++it) {
        Poly p = testutil::random_poly(rng, XY);
        CHECK(parse_poly(p.render(), XY) == p);
        // canonical renderings are stable under a second round trip
        CHECK(parse_poly(p.render(), XY).render() == p.render());
    }
    CHECK(parse_poly("x^3+y^3", XY).render() == "x^3+y^3");
}

TEST_CASE("grevlex order") {
    // x^2 > x*y > y^2 > x > y > 1 in grevlex on [x,y]
    Poly p = parse_poly("1+y+x+y^2+x*y+x^2", XY);
    std::vector<std::string> rendered;
    for (auto& [m, c] : p.terms)
        rendered.push_back(Poly::term(XY, m, c).render());
    CHECK(rendered == std::vector<std::string>{"x^2", "x*y", "y^2", "x", "y", "1"});
}

TEST_CASE("matrix operations") {
    PolyMatrix M(1, 1, XY), N(1, 1, XY);
    M.at(0, 0) = Poly::variable(XY, 0);
    N.at(0, 0) = Poly::variable(XY, 1);
    CHECK((M * N).at(0, 0) == parse_poly("x*y", XY));
    CHECK((M * N) == (N * M));
    CHECK(PolyMatrix::identity(2, XY).trace() == Poly::constant(XY, Rational(2)));
    CHECK_THROWS_AS(PolyMatrix(2, 3, XY) * PolyMatrix(2, 3, XY), DimensionMismatch);

    PolyMatrix S(2, 2, XY);
    S.at(0, 0) = parse_poly("x", XY);
    S.at(0, 1) = parse_poly("y", XY);
    S.at(1, 0) = parse_poly("1", XY);
    S.at(1, 1) = parse_poly("x", XY);
    CHECK(S.determinant() == parse_poly("x^2-y", XY));
    CHECK(S.transpose().transpose() == S);
}
