#pragma once

// Exact integer/rational substrate: square classes, quadratic symbols and
// local solubility over Q.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace selcomp {

using Int = mpz_class;
using Rat = mpq_class;

/// A place of Q: a rational prime or the real place.
class Place {
public:
    static Place infinity() { return Place(Int(0)); }
    static Place finite(const Int& p);

    bool is_infinite() const { return p_ == 0; }
    const Int& prime() const;
    std::string to_string() const;

    friend bool operator==(const Place& a, const Place& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
    // finite places by prime, the real place last
    friend bool operator<(const Place& a, const Place& b)
    {
        if (a.is_infinite() || b.is_infinite()) return !a.is_infinite() && b.is_infinite();
        return a.p_ < b.p_;
    }

private:
    explicit Place(Int p) : p_(std::move(p)) {}
    Int p_;
};

/// Nonzero squarefree integer; stands for the quadratic character of Q(sqrt(d)).
class SquarefreeInt {
public:
    explicit SquarefreeInt(const Int& value);
    const Int& value() const { return value_; }
    int sign() const { return sgn(value_); }
    friend bool operator==(const SquarefreeInt& a, const SquarefreeInt& b) { return a.value_ == b.value_; }
    friend bool operator<(const SquarefreeInt& a, const SquarefreeInt& b) { return a.value_ < b.value_; }

private:
    Int value_;
};

struct SquarefreeSplit {
    SquarefreeInt core;
    Int cofactor;  // n = core * cofactor^2, cofactor > 0
};

SquarefreeSplit squarefree_part(const Int& n);
/// Representative of q in Q*/Q*^2.
SquarefreeInt square_class(const Rat& q);

int kronecker(const Int& a, const Int& n);

/// v_p(n); n must be nonzero.
int valuation(const Int& n, const Int& p);
int valuation(const Rat& q, const Int& p);
/// q * p^{-v_p(q)} written as an odd-p-free numerator*denominator product (same square class mod p).
Int unit_part_product(const Rat& q, const Int& p);

int hilbert_symbol(const Rat& a, const Rat& b, const Place& v);
bool is_square_local(const Rat& a, const Place& v);
bool is_square(const Rat& q);

bool is_prime(const Int& n);
/// Factorization of |n| (n != 0) into primes with exponents, ascending.
std::vector<std::pair<Int, int>> factor_integer(const Int& n);
std::vector<Int> prime_divisors(const Int& n);
std::vector<std::int64_t> primes_up_to(std::int64_t bound);
Int next_prime(const Int& n);

Int floor_div(const Int& a, const Int& b);
Int mod_floor(const Int& a, const Int& m);  // result in [0, |m|)
Int floor_of(const Rat& q);
Int isqrt(const Int& n);
bool is_perfect_square(const Int& n);
Int pow_int(const Int& base, unsigned long e);
Rat pow_rat(const Rat& base, long e);

Rat parse_rational(std::string_view text);
std::string to_string(const Int& n);
std::string to_string(const Rat& q);

}  // namespace selcomp
