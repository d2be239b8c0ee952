#include "selcomp/arith.hpp"

#include "selcomp/error.hpp"

#include <algorithm>
#include <cctype>
#include <random>

namespace selcomp {

Place Place::finite(const Int& p)
{
    if (p < 2 || !is_prime(p)) throw precondition_error("place must be a prime, got " + p.get_str());
    return Place(p);
}

const Int& Place::prime() const
{
    if (is_infinite()) throw precondition_error("the real place has no prime");
    return p_;
}

std::string Place::to_string() const { return is_infinite() ? std::string("inf") : p_.get_str(); }

SquarefreeInt::SquarefreeInt(const Int& value) : value_(value)
{
    if (value == 0) throw precondition_error("squarefree integer must be nonzero");
    for (const auto& [p, e] : factor_integer(value))
        if (e > 1) throw precondition_error(value.get_str() + " is not squarefree");
}

SquarefreeSplit squarefree_part(const Int& n)
{
    if (n == 0) throw precondition_error("squarefree_part of zero");
    Int core = sgn(n) < 0 ? Int(-1) : Int(1);
    Int cofactor = 1;
    for (const auto& [p, e] : factor_integer(n)) {
        if (e % 2) core *= p;
        cofactor *= pow_int(p, e / 2);
    }
    return {SquarefreeInt(core), cofactor};
}

SquarefreeInt square_class(const Rat& q)
{
    if (q == 0) throw precondition_error("square class of zero");
    return squarefree_part(Int(q.get_num() * q.get_den())).core;
}

int kronecker(const Int& a, const Int& n) { return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t()); }

int valuation(const Int& n, const Int& p)
{
    if (n == 0) throw precondition_error("valuation of zero");
    Int m = abs(n);
    int v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

int valuation(const Rat& q, const Int& p) { return valuation(Int(q.get_num()), p) - valuation(Int(q.get_den()), p); }

Int unit_part_product(const Rat& q, const Int& p)
{
    Int num = q.get_num(), den = q.get_den();
    while (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) num /= p;
    while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) den /= p;
    return num * den;
}

namespace {

// (-1)^eps(u) with eps(u) = (u-1)/2, and omega(u) = (u^2-1)/8, both mod 2, for odd u
int eps2(const Int& u) { return mod_floor(u, 4) == 3 ? 1 : 0; }
int omega2(const Int& u)
{
    Int r = mod_floor(u, 8);
    return (r == 3 || r == 5) ? 1 : 0;
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, const Place& v)
{
    if (a == 0 || b == 0) throw precondition_error("hilbert symbol of zero");
    if (v.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
    const Int& p = v.prime();
    int alpha = valuation(a, p), beta = valuation(b, p);
    Int u = unit_part_product(a, p), w = unit_part_product(b, p);
    if (p == 2) {
        int e = eps2(u) * eps2(w) + alpha * omega2(w) + beta * omega2(u);
        return (e % 2) ? -1 : 1;
    }
    int s = 1;
    if ((alpha % 2) && (beta % 2) && mod_floor(p, 4) == 3) s = -s;
    if (beta % 2) s *= kronecker(u, p);
    if (alpha % 2) s *= kronecker(w, p);
    return s;
}

bool is_square_local(const Rat& a, const Place& v)
{
    if (a == 0) throw precondition_error("square test of zero");
    if (v.is_infinite()) return a > 0;
    const Int& p = v.prime();
    if (valuation(a, p) % 2) return false;
    Int u = unit_part_product(a, p);
    if (p == 2) return mod_floor(u, 8) == 1;
    return kronecker(u, p) == 1;
}

bool is_square(const Rat& q)
{
    if (q < 0) return false;
    return is_perfect_square(Int(q.get_num())) && is_perfect_square(Int(q.get_den()));
}

bool is_prime(const Int& n)
{
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

Int pollard_brent(const Int& n, std::mt19937_64& rng)
{
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (;;) {
        Int c = Int(static_cast<unsigned long>(rng() % 1000003 + 1));
        Int y = Int(static_cast<unsigned long>(rng() % 1000003));
        Int g = 1, r = 1, q = 1, x, ys;
        const unsigned long m = 128;
        auto f = [&](const Int& t) { return mod_floor(Int(t * t + c), n); };
        while (g == 1) {
            x = y;
            for (Int i = 0; i < r; ++i) y = f(y);
            Int k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (unsigned long i = 0; i < m && k + i < r; ++i) {
                    y = f(y);
                    q = mod_floor(Int(q * abs(Int(x - y))), n);
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = f(ys);
                Int d = abs(Int(x - ys));
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split_into(const Int& n, std::vector<Int>& out, std::mt19937_64& rng)
{
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    Int d = pollard_brent(n, rng);
    split_into(d, out, rng);
    split_into(Int(n / d), out, rng);
}

}  // namespace

std::vector<std::pair<Int, int>> factor_integer(const Int& n)
{
    if (n == 0) throw precondition_error("cannot factor zero");
    Int m = abs(n);
    std::vector<Int> primes;
    static const std::vector<std::int64_t> small = primes_up_to(20000);
    for (std::int64_t p : small) {
        if (m == 1) break;
        if (Int(p) * p > m) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
            primes.emplace_back(static_cast<long>(p));
            m /= static_cast<unsigned long>(p);
        }
    }
    if (m > 1) {
        std::mt19937_64 rng(0x5e1c0u);
        split_into(m, primes, rng);
    }
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<Int, int>> out;
    for (const Int& p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

std::vector<Int> prime_divisors(const Int& n)
{
    std::vector<Int> out;
    for (auto& [p, e] : factor_integer(n)) out.push_back(p);
    return out;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound)
{
    std::vector<std::int64_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
    for (std::int64_t i = 2; i <= bound; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j <= bound; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

Int next_prime(const Int& n)
{
    Int out;
    mpz_nextprime(out.get_mpz_t(), n.get_mpz_t());
    return out;
}

Int floor_div(const Int& a, const Int& b)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Int mod_floor(const Int& a, const Int& m)
{
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int floor_of(const Rat& q) { return floor_div(Int(q.get_num()), Int(q.get_den())); }

Int isqrt(const Int& n)
{
    if (n < 0) throw precondition_error("isqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

Int pow_int(const Int& base, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Rat pow_rat(const Rat& base, long e)
{
    if (e < 0) {
        if (base == 0) throw precondition_error("negative power of zero");
        return pow_rat(Rat(1) / base, -e);
    }
    Rat num(pow_int(Int(base.get_num()), static_cast<unsigned long>(e)));
    Rat den(pow_int(Int(base.get_den()), static_cast<unsigned long>(e)));
    Rat r = num / den;
    r.canonicalize();
    return r;
}

Rat parse_rational(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw precondition_error("empty rational literal");
    Rat q;
    if (q.set_str(s, 10) != 0) throw precondition_error("malformed rational: " + s);
    if (q.get_den() == 0) throw precondition_error("zero denominator: " + s);
    q.canonicalize();
    return q;
}

std::string to_string(const Int& n) { return n.get_str(); }
std::string to_string(const Rat& q) { return q.get_str(); }

}  // namespace selcomp
