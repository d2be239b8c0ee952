#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selcomp/arith.hpp"
#include "selcomp/error.hpp"
#include "selcomp/linalg.hpp"
#include "selcomp/poly.hpp"

#include <random>

using namespace selcomp;

namespace {

// Euler's criterion, independent of mpz_kronecker.
int legendre_ref(const Int& a, const Int& p)
{
    Int r = mod_floor(a, p);
    if (r == 0) return 0;
    Int e = (p - 1) / 2, out;
    mpz_powm(out.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return out == 1 ? 1 : -1;
}

// Hilbert symbol of nonzero integers from the classical formulas.
int hilbert_ref(Int a, Int b, const Int& p)
{
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    int alpha = 0, beta = 0;
    while (a % p == 0) { a /= p; ++alpha; }
    while (b % p == 0) { b /= p; ++beta; }
    if (p != 2) {
        int s = ((alpha * beta) % 2 == 1 && mod_floor(p, 4) == 3) ? -1 : 1;
        int la = legendre_ref(a, p), lb = legendre_ref(b, p);
        if (beta % 2 == 1) s *= la;
        if (alpha % 2 == 1) s *= lb;
        return s;
    }
    auto eps = [](const Int& u) { return static_cast<int>(mod_floor((u - 1) / 2, 2).get_si()); };
    auto omega = [](const Int& u) { return static_cast<int>(mod_floor((u * u - 1) / 8, 2).get_si()); };
    int e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
    return e % 2 == 0 ? 1 : -1;
}

Int random_nonzero(std::mt19937_64& rng, long bound)
{
    std::uniform_int_distribution<long> dist(-bound, bound);
    long v = 0;
    while (v == 0) v = dist(rng);
    return Int(v);
}

}  // namespace

TEST_CASE("kronecker agrees with Euler's criterion at odd primes")
{
    for (std::int64_t p : primes_up_to(200)) {
        if (p == 2) continue;
        for (long a = -60; a <= 60; ++a) CHECK(kronecker(Int(a), Int(p)) == legendre_ref(Int(a), Int(p)));
    }
}

TEST_CASE("hilbert symbol matches the classical formulas")
{
    std::mt19937_64 rng(20240611);
    std::vector<Int> places = {0, 2, 3, 5, 7, 11, 13};
    for (int i = 0; i < 400; ++i) {
        Int a = random_nonzero(rng, 500), b = random_nonzero(rng, 500);
        for (const Int& p : places) {
            Place v = p == 0 ? Place::infinity() : Place::finite(p);
            INFO("a=" << a << " b=" << b << " v=" << v.to_string());
            CHECK(hilbert_symbol(Rat(a), Rat(b), v) == hilbert_ref(a, b, p));
        }
    }
}

TEST_CASE("hilbert symbol is symmetric, bimultiplicative and satisfies the product formula")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Rat a(random_nonzero(rng, 3000), abs(random_nonzero(rng, 40)));
        Rat b(random_nonzero(rng, 3000), abs(random_nonzero(rng, 40)));
        Rat c(random_nonzero(rng, 3000), 1);
        a.canonicalize();
        b.canonicalize();
        std::vector<Int> primes = prime_divisors(abs(a.get_num() * a.get_den() * b.get_num() * b.get_den() * c.get_num()));
        primes.push_back(2);
        int product = hilbert_symbol(a, b, Place::infinity());
        for (const Int& p : primes) {
            Place v = Place::finite(p);
            CHECK(hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v));
            CHECK(hilbert_symbol(a * c, b, v) == hilbert_symbol(a, b, v) * hilbert_symbol(c, b, v));
            CHECK(hilbert_symbol(a, -a, v) == 1);
        }
        std::sort(primes.begin(), primes.end());
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
        for (const Int& p : primes) product *= hilbert_symbol(a, b, Place::finite(p));
        CHECK(product == 1);
    }
}

TEST_CASE("local squares")
{
    CHECK(is_square_local(Rat(17), Place::finite(2)));
    CHECK_FALSE(is_square_local(Rat(5), Place::finite(2)));
    CHECK(is_square_local(Rat(-7), Place::finite(2)));
    CHECK(is_square_local(Rat(2), Place::finite(7)));
    CHECK_FALSE(is_square_local(Rat(3), Place::finite(7)));
    CHECK_FALSE(is_square_local(Rat(7), Place::finite(7)));
    CHECK(is_square_local(Rat(49, 4), Place::finite(7)));
    CHECK_FALSE(is_square_local(Rat(-1), Place::infinity()));
    // a is a local square iff (a, b)_v = 1 for every b; spot-check against the symbol.
    for (long a = 1; a < 60; ++a) {
        for (long p : {3L, 5L, 7L}) {
            bool all_one = true;
            for (long b : {-1L, 2L, 3L, 5L, 7L, p, -p, 2 * p})
                if (hilbert_symbol(Rat(a), Rat(b), Place::finite(Int(p))) != 1) all_one = false;
            CHECK(is_square_local(Rat(a), Place::finite(Int(p))) == all_one);
        }
    }
}

TEST_CASE("squarefree parts and factorization")
{
    for (long n = -500; n <= 500; ++n) {
        if (n == 0) continue;
        SquarefreeSplit s = squarefree_part(Int(n));
        CHECK(s.core.value() * s.cofactor * s.cofactor == n);
        CHECK(s.cofactor > 0);
        Int prod = 1;
        for (const auto& [p, e] : factor_integer(Int(n))) {
            CHECK(is_prime(p));
            prod *= pow_int(p, static_cast<unsigned long>(e));
        }
        CHECK(prod == abs(Int(n)));
    }
    CHECK_THROWS_AS(SquarefreeInt(Int(12)), Error);
    CHECK_THROWS_AS(SquarefreeInt(Int(0)), Error);
    CHECK(square_class(Rat(-18, 50)).value() == -1);
    CHECK(square_class(Rat(3, 8)).value() == 6);
}

TEST_CASE("valuations and rational parsing")
{
    CHECK(valuation(Int(96), Int(2)) == 5);
    CHECK(valuation(Rat(9, 250), Int(5)) == -3);
    CHECK(valuation(Rat(9, 250), Int(3)) == 2);
    CHECK(parse_rational("-6/4") == Rat(-3, 2));
    CHECK(parse_rational("12") == 12);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("cubic discriminant agrees with the closed formula")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> dist(-30, 30);
    for (int i = 0; i < 300; ++i) {
        Int a = 1, b = dist(rng), c = dist(rng), d = dist(rng);
        PolyQ f({Rat(d), Rat(c), Rat(b), Rat(a)});
        Int ref = b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
        CHECK(discriminant(f) == Rat(ref));
        CHECK(resultant(f, f.derivative()) == Rat(-ref));
    }
}

TEST_CASE("rational roots are exactly the zeros")
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> dist(-9, 9);
    for (int i = 0; i < 200; ++i) {
        Rat r1(dist(rng), 1 + std::abs(dist(rng))), r2(dist(rng));
        r1.canonicalize();
        PolyQ lin1({-r1, Rat(1)}), lin2({-r2, Rat(1)}), quad({Rat(dist(rng) * dist(rng) + 2), Rat(0), Rat(1)});
        PolyQ f = lin1 * lin2 * quad;
        auto roots = rational_roots(f);
        for (const Rat& r : roots) CHECK(f.eval(r) == 0);
        CHECK(std::find(roots.begin(), roots.end(), r1) != roots.end());
        CHECK(std::find(roots.begin(), roots.end(), r2) != roots.end());
        CHECK(std::is_sorted(roots.begin(), roots.end()));
    }
}

TEST_CASE("factorization mod p agrees with brute-force root counts")
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> dist(-50, 50);
    for (int i = 0; i < 200; ++i) {
        PolyQ g({Rat(dist(rng)), Rat(dist(rng)), Rat(dist(rng)), Rat(1)});
        for (long p : {3L, 5L, 7L, 11L, 13L, 101L}) {
            std::vector<FpFactor> fs = factor_mod_p(g, Int(p));
            int degree_sum = 0, linear = 0;
            for (const FpFactor& f : fs) {
                degree_sum += f.factor.degree() * f.multiplicity;
                if (f.factor.degree() == 1) ++linear;
            }
            CHECK(degree_sum == 3);
            int brute = 0;
            for (long x = 0; x < p; ++x)
                if (mod_floor(Int(g.eval(Rat(x)).get_num()), Int(p)) == 0) ++brute;
            CHECK(linear == brute);
            CHECK(roots_mod_p(reduce_mod_p(g, Int(p))).size() == static_cast<std::size_t>(brute));
            CHECK(is_irreducible_mod_p(g, Int(p)) == (brute == 0));
        }
    }
}

TEST_CASE("p-adic roots are roots to the requested precision")
{
    PolyQ g = PolyQ::parse("x^3 - x - 1");
    for (long p : {5L, 7L, 59L}) {
        Int pk = pow_int(Int(p), 30);
        for (const Int& r : padic_integral_roots(g, Int(p), 30)) CHECK(mod_floor(g.eval(Rat(r)).get_num(), pk) == 0);
    }
    // x^3 - x - 1 splits completely mod 59.
    CHECK(padic_integral_roots(g, Int(59), 20).size() == 3);
    CHECK(padic_integral_roots(PolyQ::parse("x^2 - 17"), Int(2), 20).size() == 2);
    CHECK(padic_integral_roots(PolyQ::parse("x^2 - 5"), Int(2), 20).empty());
}

TEST_CASE("real root isolation")
{
    for (const char* s : {"x^3 - 3*x + 1", "x^3 - x - 1", "x^3 - 2", "x^3 - 7*x + 6"}) {
        PolyQ f = PolyQ::parse(s);
        auto roots = isolate_real_roots(f);
        int expected = discriminant(f) > 0 ? 3 : 1;
        CHECK(roots.size() == static_cast<std::size_t>(expected));
        for (auto& iv : roots) {
            refine_root(f, iv, Rat(1, 1000000));
            CHECK(iv.hi - iv.lo <= Rat(1, 1000000));
            if (iv.lo != iv.hi) CHECK(sgn(f.eval(iv.lo)) * sgn(f.eval(iv.hi)) <= 0);
        }
    }
}

TEST_CASE("linear algebra over F_l")
{
    std::mt19937_64 rng(17);
    for (std::uint32_t l : {2u, 3u, 7u}) {
        std::uniform_int_distribution<std::uint32_t> dist(0, l - 1);
        for (int i = 0; i < 50; ++i) {
            std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 7;
            std::vector<ModRow> m(rows, ModRow(cols));
            for (auto& r : m)
                for (auto& x : r) x = dist(rng);
            std::size_t rk = rank_mod(m, l);
            auto ker = kernel_mod(m, cols, l);
            CHECK(rk + ker.size() == cols);
            for (const ModRow& k : ker)
                for (const ModRow& r : m) {
                    std::uint64_t s = 0;
                    for (std::size_t j = 0; j < cols; ++j) s += static_cast<std::uint64_t>(r[j]) * k[j];
                    CHECK(s % l == 0);
                }
        }
    }
}

TEST_CASE("rational inverse and Smith form")
{
    RatMatrix m = {{Rat(2), Rat(1), Rat(0)}, {Rat(1), Rat(3), Rat(1)}, {Rat(0), Rat(1), Rat(4)}};
    CHECK(determinant(m) == 18);
    RatMatrix inv = inverse(m);
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<Rat> e(3);
        e[i] = 1;
        std::vector<Rat> row = mul(mul(e, m), inv);
        for (std::size_t j = 0; j < 3; ++j) CHECK(row[j] == (i == j ? 1 : 0));
    }
    SmithForm s = smith_form({{Int(2), Int(4)}, {Int(6), Int(8)}}, 2);
    Int prod = 1;
    for (const Int& d : s.diagonal) prod *= d;
    CHECK(abs(prod) == 8);
}
