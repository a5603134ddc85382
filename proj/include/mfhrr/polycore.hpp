// polycore.hpp
//
// Exact sparse multivariate polynomial arithmetic over Q (rationals),
// grevlex monomial order, formal derivatives, a small expression parser,
// and dense matrices of polynomials.
//
// All values are immutable in spirit: operations return fresh objects and
// never mutate their arguments, so everything here is safe to share.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace mfhrr {

// Exact rational coefficients. mpq_class keeps values canonical
// (lowest terms, positive denominator) after canonicalize().
using Rational = mpq_class;

inline Rational rat(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

// Renders "p" for integers, "p/q" otherwise.
inline std::string rat_to_string(const Rational& r) {
    return r.get_str();
}

// factorial as an exact integer, used for the 1/(n+i)! style weights
inline Rational factorial(unsigned n) {
    mpz_class acc = 1;
    for (unsigned k = 2; k <= n; ++k) acc *= k;
    return Rational(acc);
}

struct MfhrrError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SyntaxError : MfhrrError { using MfhrrError::MfhrrError; };
struct UnknownVariable : MfhrrError { using MfhrrError::MfhrrError; };
struct ArityMismatch : MfhrrError { using MfhrrError::MfhrrError; };
struct DimensionMismatch : MfhrrError { using MfhrrError::MfhrrError; };

// ---------------------------------------------------------------------------
// Monomial: exponent vector of fixed arity.

struct Monomial {
    std::vector<int> e;

    Monomial() = default;
    explicit Monomial(size_t n) : e(n, 0) {}
    explicit Monomial(std::vector<int> exps) : e(std::move(exps)) {}

    size_t arity() const { return e.size(); }
    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }

    bool operator==(const Monomial& o) const { return e == o.e; }
    bool operator!=(const Monomial& o) const { return e != o.e; }

    bool divides(const Monomial& m) const {
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > m.e[i]) return false;
        return true;
    }
    Monomial operator*(const Monomial& m) const {
        Monomial r(*this);
        for (size_t i = 0; i < e.size(); ++i) r.e[i] += m.e[i];
        return r;
    }
    // quotient, caller guarantees divisibility
    Monomial operator/(const Monomial& m) const {
        Monomial r(*this);
        for (size_t i = 0; i < e.size(); ++i) r.e[i] -= m.e[i];
        return r;
    }
    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial r(a);
        for (size_t i = 0; i < r.e.size(); ++i) r.e[i] = std::max(a.e[i], b.e[i]);
        return r;
    }
    bool coprime(const Monomial& b) const {
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0 && b.e[i] > 0) return false;
        return true;
    }
};

// graded reverse lexicographic: higher total degree wins; on ties the
// monomial whose *last* differing exponent is smaller is the bigger one
inline int grevlex_cmp(const Monomial& a, const Monomial& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db ? -1 : 1;
    for (size_t i = a.e.size(); i-- > 0;) {
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? -1 : 1;
    }
    return 0;
}

struct GrevlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return grevlex_cmp(a, b) > 0;
    }
};

// ---------------------------------------------------------------------------
// Poly: sparse polynomial, terms kept in descending grevlex order so the
// leading term is terms.begin().

class Poly {
public:
    using TermMap = std::map<Monomial, Rational, GrevlexGreater>;

    std::vector<std::string> ring;  // ordered variable names
    TermMap terms;                  // no zero coefficients stored

    Poly() = default;
    explicit Poly(std::vector<std::string> vars) : ring(std::move(vars)) {}

    static Poly zero(const std::vector<std::string>& vars) { return Poly(vars); }

    static Poly constant(const std::vector<std::string>& vars, const Rational& c) {
        Poly p(vars);
        if (c != 0) p.terms.emplace(Monomial(vars.size()), c);
        return p;
    }
    static Poly variable(const std::vector<std::string>& vars, size_t i) {
        Poly p(vars);
        Monomial m(vars.size());
        m.e[i] = 1;
        p.terms.emplace(m, Rational(1));
        return p;
    }
    static Poly term(const std::vector<std::string>& vars, Monomial m, const Rational& c) {
        Poly p(vars);
        if (c != 0) p.terms.emplace(std::move(m), c);
        return p;
    }

    size_t arity() const { return ring.size(); }
    bool is_zero() const { return terms.empty(); }

    bool is_constant() const {
        return terms.empty() ||
               (terms.size() == 1 && terms.begin()->first.degree() == 0);
    }
    Rational constant_term() const {
        auto it = terms.find(Monomial(arity()));
        return it == terms.end() ? Rational(0) : it->second;
    }
    int degree() const {  // total degree; -1 for the zero polynomial
        int d = -1;
        for (auto& [m, c] : terms) d = std::max(d, m.degree());
        return d;
    }

    const Monomial& leading_monomial() const {
        if (terms.empty()) throw MfhrrError("leading term of zero polynomial");
        return terms.begin()->first;
    }
    const Rational& leading_coeff() const {
        if (terms.empty()) throw MfhrrError("leading term of zero polynomial");
        return terms.begin()->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    void check_ring(const Poly& o) const {
        if (ring != o.ring) throw ArityMismatch("polynomials over different rings");
    }

    Poly operator+(const Poly& o) const {
        check_ring(o);
        Poly r(*this);
        for (auto& [m, c] : o.terms) r.add_term(m, c);
        return r;
    }
    Poly operator-() const {
        Poly r(*this);
        for (auto& [m, c] : r.terms) c = -c;
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this + (-o); }

    Poly operator*(const Poly& o) const {
        check_ring(o);
        Poly r(ring);
        for (auto& [ma, ca] : terms)
            for (auto& [mb, cb] : o.terms) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly operator*(const Rational& c) const {
        Poly r(ring);
        if (c == 0) return r;
        for (auto& [m, co] : terms) r.terms.emplace(m, co * c);
        return r;
    }
    Poly pow(unsigned k) const {
        Poly r = constant(ring, Rational(1));
        for (unsigned i = 0; i < k; ++i) r = r * (*this);
        return r;
    }

    bool operator==(const Poly& o) const { return ring == o.ring && terms == o.terms; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // drop all terms of total degree >= bound (working mod m^bound)
    Poly truncated(int bound) const {
        Poly r(ring);
        for (auto& [m, c] : terms)
            if (m.degree() < bound) r.terms.emplace(m, c);
        return r;
    }

    // coefficient of a specific monomial
    Rational coeff(const Monomial& m) const {
        auto it = terms.find(m);
        return it == terms.end() ? Rational(0) : it->second;
    }

    std::string render() const;
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

// formal partial derivative with respect to variable i
inline Poly partial_derivative(const Poly& p, size_t i) {
    if (i >= p.arity()) throw MfhrrError("derivative index out of range");
    Poly r(p.ring);
    for (auto& [m, c] : p.terms) {
        if (m.e[i] == 0) continue;
        Monomial d(m);
        d.e[i] -= 1;
        r.add_term(d, c * Rational(m.e[i]));
    }
    return r;
}

// ---------------------------------------------------------------------------
// rendering: descending grevlex, explicit '*' and '^', e.g. "x^2-2*x*y+y^2"

inline std::string Poly::render() const {
    if (terms.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto& [m, c] : terms) {
        Rational a = c;
        if (first) {
            if (a < 0) { out << "-"; a = -a; }
        } else {
            if (a < 0) { out << "-"; a = -a; }
            else out << "+";
        }
        first = false;
        std::vector<std::string> factors;
        if (a != 1 || m.degree() == 0) factors.push_back(rat_to_string(a));
        for (size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] == 0) continue;
            if (m.e[i] == 1) factors.push_back(ring[i]);
            else factors.push_back(ring[i] + "^" + std::to_string(m.e[i]));
        }
        for (size_t i = 0; i < factors.size(); ++i) {
            if (i) out << "*";
            out << factors[i];
        }
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// parser: integers (optionally "p/q" rational literals), variables, + - * ^
// and parentheses.  Total on the grammar; exact.

namespace detail {

struct PolyParser {
    const std::string& text;
    const std::vector<std::string>& vars;
    size_t pos = 0;

    PolyParser(const std::string& t, const std::vector<std::string>& v)
        : text(t), vars(v) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    bool eat(char c) {
        if (peek(c)) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw SyntaxError(what + " at position " + std::to_string(pos));
    }

    mpz_class parse_integer() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
        if (pos == start) fail("expected integer");
        return mpz_class(text.substr(start, pos - start));
    }

    Poly parse_expr() {
        Poly acc = eat('-') ? -parse_term() : parse_term();
        for (;;) {
            if (eat('+')) acc = acc + parse_term();
            else if (eat('-')) acc = acc - parse_term();
            else return acc;
        }
    }
    Poly parse_term() {
        Poly acc = parse_power();
        while (eat('*')) acc = acc * parse_power();
        return acc;
    }
    Poly parse_power() {
        Poly base = parse_atom();
        if (eat('^')) {
            mpz_class k = parse_integer();
            if (k < 0 || !k.fits_ulong_p()) fail("bad exponent");
            return base.pow((unsigned)k.get_ui());
        }
        return base;
    }
    Poly parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Poly inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit((unsigned char)c)) {
            mpz_class num = parse_integer();
            Rational r(num);
            if (eat('/')) {  // rational literal, e.g. "1/2"
                mpz_class den = parse_integer();
                if (den == 0) fail("zero denominator");
                r = Rational(num, den);
                r.canonicalize();
            }
            return Poly::constant(vars, r);
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum((unsigned char)text[pos]) || text[pos] == '_'))
                ++pos;
            std::string name = text.substr(start, pos - start);
            for (size_t i = 0; i < vars.size(); ++i)
                if (vars[i] == name) return Poly::variable(vars, i);
            throw UnknownVariable("unknown variable '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace detail

inline Poly parse_poly(const std::string& text, const std::vector<std::string>& ring) {
    detail::PolyParser p(text, ring);
    Poly result = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return result;
}

// ---------------------------------------------------------------------------
// PolyMatrix: dense rectangular matrix of polynomials over one ring.

class PolyMatrix {
public:
    size_t rows = 0, cols = 0;
    std::vector<std::string> ring;
    std::vector<Poly> entries;  // row-major

    PolyMatrix() = default;
    PolyMatrix(size_t r, size_t c, std::vector<std::string> vars)
        : rows(r), cols(c), ring(std::move(vars)),
          entries(r * c, Poly(ring)) {}

    Poly& at(size_t i, size_t j) { return entries[i * cols + j]; }
    const Poly& at(size_t i, size_t j) const { return entries[i * cols + j]; }

    static PolyMatrix identity(size_t n, const std::vector<std::string>& vars) {
        PolyMatrix m(n, n, vars);
        for (size_t i = 0; i < n; ++i)
            m.at(i, i) = Poly::constant(vars, Rational(1));
        return m;
    }
    static PolyMatrix scalar(size_t n, const Poly& p) {
        PolyMatrix m(n, n, p.ring);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = p;
        return m;
    }

    bool is_zero() const {
        for (auto& e : entries)
            if (!e.is_zero()) return false;
        return true;
    }

    PolyMatrix operator+(const PolyMatrix& o) const {
        if (rows != o.rows || cols != o.cols)
            throw DimensionMismatch("matrix add shape mismatch");
        PolyMatrix r(*this);
        for (size_t k = 0; k < entries.size(); ++k)
            r.entries[k] = r.entries[k] + o.entries[k];
        return r;
    }
    PolyMatrix operator-() const {
        PolyMatrix r(*this);
        for (auto& e : r.entries) e = -e;
        return r;
    }
    PolyMatrix operator-(const PolyMatrix& o) const { return *this + (-o); }

    PolyMatrix operator*(const PolyMatrix& o) const {
        if (cols != o.rows) throw DimensionMismatch("matrix mul shape mismatch");
        PolyMatrix r(rows, o.cols, ring);
        for (size_t i = 0; i < rows; ++i)
            for (size_t k = 0; k < cols; ++k) {
                const Poly& a = at(i, k);
                if (a.is_zero()) continue;
                for (size_t j = 0; j < o.cols; ++j)
                    r.at(i, j) = r.at(i, j) + a * o.at(k, j);
            }
        return r;
    }
    PolyMatrix operator*(const Poly& p) const {
        PolyMatrix r(*this);
        for (auto& e : r.entries) e = e * p;
        return r;
    }
    PolyMatrix operator*(const Rational& c) const {
        PolyMatrix r(*this);
        for (auto& e : r.entries) e = e * c;
        return r;
    }

    PolyMatrix transpose() const {
        PolyMatrix r(cols, rows, ring);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
        return r;
    }
    Poly trace() const {
        if (rows != cols) throw DimensionMismatch("trace of non-square matrix");
        Poly t(ring);
        for (size_t i = 0; i < rows; ++i) t = t + at(i, i);
        return t;
    }

    bool operator==(const PolyMatrix& o) const {
        return rows == o.rows && cols == o.cols && entries == o.entries;
    }
    bool operator!=(const PolyMatrix& o) const { return !(*this == o); }

    // cofactor expansion; matrices here stay tiny (n <= 4)
    Poly determinant() const {
        if (rows != cols) throw DimensionMismatch("determinant of non-square matrix");
        if (rows == 0) return Poly::constant(ring, Rational(1));
        if (rows == 1) return at(0, 0);
        Poly det(ring);
        for (size_t j = 0; j < cols; ++j) {
            if (at(0, j).is_zero()) continue;
            PolyMatrix minor(rows - 1, cols - 1, ring);
            for (size_t i = 1; i < rows; ++i) {
                size_t jj = 0;
                for (size_t k = 0; k < cols; ++k) {
                    if (k == j) continue;
                    minor.at(i - 1, jj++) = at(i, k);
                }
            }
            Poly term = at(0, j) * minor.determinant();
            det = (j % 2 == 0) ? det + term : det - term;
        }
        return det;
    }
};

}  // namespace mfhrr
