#pragma once

// Univariate polynomials over Q and over prime fields, with the low-degree
// factorization, discriminant and local root machinery used by descent.

#include "selcomp/arith.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace selcomp {

/// Polynomial over Q; coefficients stored constant term first, never with a zero leading term.
class PolyQ {
public:
    PolyQ() = default;
    explicit PolyQ(std::vector<Rat> coeffs);
    static PolyQ constant(const Rat& c);
    static PolyQ monomial(const Rat& c, int degree);
    /// Parses expressions like "x^3 - x - 1" or "x^3+1/4".
    static PolyQ parse(std::string_view text);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_monic() const { return !is_zero() && coeffs_.back() == 1; }
    Rat coeff(int i) const;
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    const Rat& leading() const;

    Rat eval(const Rat& x) const;
    PolyQ derivative() const;
    PolyQ monic() const;
    bool has_integer_coeffs() const;
    /// f(a + b x)
    PolyQ compose_linear(const Rat& a, const Rat& b) const;

    std::string to_string(char var = 'x') const;

    friend PolyQ operator+(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator-(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator*(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator*(const Rat& c, const PolyQ& a);
    friend bool operator==(const PolyQ& a, const PolyQ& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const PolyQ& a, const PolyQ& b) { return !(a == b); }

private:
    void trim();
    std::vector<Rat> coeffs_;
};

struct PolyDivision {
    PolyQ quotient;
    PolyQ remainder;
};
PolyDivision divmod(const PolyQ& a, const PolyQ& b);
PolyQ poly_gcd(PolyQ a, PolyQ b);
Rat resultant(const PolyQ& f, const PolyQ& g);
/// Discriminant of a polynomial of degree 1..3 (any leading coefficient).
Rat discriminant(const PolyQ& f);
/// Discriminant of a monic cubic; rejects anything else.
Rat poly_discriminant(const PolyQ& g);
/// Rational roots of a nonzero polynomial, ascending, without multiplicity.
std::vector<Rat> rational_roots(const PolyQ& f);

/// Polynomial over F_p with p < 2^62; coefficients constant term first.
struct PolyFp {
    std::uint64_t p = 2;
    std::vector<std::uint64_t> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    void trim();
    std::string to_string() const;
    friend bool operator==(const PolyFp& a, const PolyFp& b) { return a.p == b.p && a.c == b.c; }
};

struct FpFactor {
    PolyFp factor;  // monic irreducible
    int multiplicity = 1;
};

/// Reduces g (p-integral coefficients, unit leading coefficient) modulo p.
PolyFp reduce_mod_p(const PolyQ& g, const Int& p);
/// Distinct roots in F_p, ascending.
std::vector<std::uint64_t> roots_mod_p(const PolyFp& f);
/// Factorization of g mod p for deg g <= 3: monic irreducible factors sorted by
/// degree then coefficients; the leading coefficient is dropped.
std::vector<FpFactor> factor_mod_p(const PolyQ& g, const Int& p);
/// Sorted degree pattern with multiplicity, e.g. {1,1,1} or {3}; {1,1,2}-style for repeated factors.
std::vector<int> factorization_type(const std::vector<FpFactor>& factors);
bool is_irreducible_mod_p(const PolyQ& g, const Int& p);
bool splits_completely_mod_p(const PolyQ& g, const Int& p);

/// Integral monic model h(y) = c^n g(y/c) of a monic rational polynomial; returns (h, c).
std::pair<PolyQ, Int> integral_monic_model(const PolyQ& g);

/// Number of roots of a separable monic cubic in the completion at v.
int count_roots_local(const PolyQ& g, const Place& v);
/// Approximations modulo p^precision of all roots in Z_p of a nonzero integral polynomial
/// (roots in Z_p only), one entry per distinct root.
std::vector<Int> padic_integral_roots(const PolyQ& f, const Int& p, int precision);

/// Isolating interval for a real root: lo < root < hi, or lo == hi == root.
struct RootInterval {
    Rat lo;
    Rat hi;
};
/// Real roots of a squarefree polynomial, ascending.
std::vector<RootInterval> isolate_real_roots(const PolyQ& f);
/// Sign of a at the root of f isolated by iv (refines iv in place).
int sign_at_root(const PolyQ& a, const PolyQ& f, RootInterval& iv);
/// Shrinks iv around the root of f until hi - lo <= width.
void refine_root(const PolyQ& f, RootInterval& iv, const Rat& width);

}  // namespace selcomp
