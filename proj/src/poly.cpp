#include "selcomp/poly.hpp"

#include "selcomp/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace selcomp {

// ---------------------------------------------------------------- PolyQ

PolyQ::PolyQ(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs))
{
    for (Rat& c : coeffs_) c.canonicalize();
    trim();
}

PolyQ PolyQ::constant(const Rat& c) { return PolyQ(std::vector<Rat>{c}); }

PolyQ PolyQ::monomial(const Rat& c, int degree)
{
    std::vector<Rat> v(static_cast<std::size_t>(degree) + 1, Rat(0));
    v.back() = c;
    return PolyQ(std::move(v));
}

void PolyQ::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rat PolyQ::coeff(int i) const
{
    if (i < 0 || i > degree()) return Rat(0);
    return coeffs_[static_cast<std::size_t>(i)];
}

const Rat& PolyQ::leading() const
{
    if (is_zero()) throw precondition_error("leading coefficient of the zero polynomial");
    return coeffs_.back();
}

Rat PolyQ::eval(const Rat& x) const
{
    Rat acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolyQ PolyQ::derivative() const
{
    std::vector<Rat> d;
    for (int i = 1; i <= degree(); ++i) d.push_back(coeffs_[static_cast<std::size_t>(i)] * i);
    return PolyQ(std::move(d));
}

PolyQ PolyQ::monic() const
{
    Rat lc = leading();
    std::vector<Rat> v = coeffs_;
    for (Rat& c : v) c /= lc;
    return PolyQ(std::move(v));
}

bool PolyQ::has_integer_coeffs() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rat& c) { return c.get_den() == 1; });
}

PolyQ PolyQ::compose_linear(const Rat& a, const Rat& b) const
{
    PolyQ lin(std::vector<Rat>{a, b});
    PolyQ acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + PolyQ::constant(*it);
    return acc;
}

std::string PolyQ::to_string(char var) const
{
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        Rat c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        bool neg = c < 0;
        Rat a = abs(c);
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        if (i == 0 || a != 1) {
            os << a.get_str();
            if (i > 0) os << "*";
        }
        if (i >= 1) os << var;
        if (i >= 2) os << "^" << i;
    }
    return os.str();
}

PolyQ PolyQ::parse(std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw precondition_error("empty polynomial");
    std::vector<Rat> coeffs;
    std::size_t i = 0;
    auto bad = [&]() { return precondition_error("malformed polynomial: " + std::string(text)); };
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        std::size_t start = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
        Rat c = 1;
        bool has_coeff = i > start;
        if (has_coeff) c = parse_rational(s.substr(start, i - start));
        if (i < s.size() && s[i] == '*') {
            if (!has_coeff) throw bad();
            ++i;
        }
        int deg = 0;
        if (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t e0 = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (e0 == i) throw bad();
                deg = std::stoi(s.substr(e0, i - e0));
            }
        } else if (!has_coeff) {
            throw bad();
        }
        if (i < s.size() && s[i] != '+' && s[i] != '-') throw bad();
        if (coeffs.size() <= static_cast<std::size_t>(deg)) coeffs.resize(static_cast<std::size_t>(deg) + 1, Rat(0));
        coeffs[static_cast<std::size_t>(deg)] += sign * c;
    }
    return PolyQ(std::move(coeffs));
}

PolyQ operator+(const PolyQ& a, const PolyQ& b)
{
    std::vector<Rat> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Rat(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) v[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) v[i] += b.coeffs_[i];
    return PolyQ(std::move(v));
}

PolyQ operator-(const PolyQ& a, const PolyQ& b) { return a + Rat(-1) * b; }

PolyQ operator*(const PolyQ& a, const PolyQ& b)
{
    if (a.is_zero() || b.is_zero()) return PolyQ();
    std::vector<Rat> v(a.coeffs_.size() + b.coeffs_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return PolyQ(std::move(v));
}

PolyQ operator*(const Rat& c, const PolyQ& a)
{
    std::vector<Rat> v = a.coeffs_;
    for (Rat& x : v) x *= c;
    return PolyQ(std::move(v));
}

PolyDivision divmod(const PolyQ& a, const PolyQ& b)
{
    if (b.is_zero()) throw precondition_error("polynomial division by zero");
    std::vector<Rat> r = a.coeffs();
    int db = b.degree();
    std::vector<Rat> q(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0, Rat(0));
    for (int i = a.degree(); i >= db; --i) {
        Rat c = r[static_cast<std::size_t>(i)] / b.leading();
        q[static_cast<std::size_t>(i - db)] = c;
        if (c == 0) continue;
        for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= c * b.coeff(j);
    }
    if (static_cast<int>(r.size()) > db) r.resize(static_cast<std::size_t>(std::max(db, 0)));
    return {PolyQ(std::move(q)), PolyQ(std::move(r))};
}

PolyQ poly_gcd(PolyQ a, PolyQ b)
{
    while (!b.is_zero()) {
        PolyQ r = divmod(a, b).remainder;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

Rat resultant(const PolyQ& f, const PolyQ& g)
{
    if (f.is_zero() || g.is_zero()) return 0;
    int m = f.degree(), n = g.degree();
    if (n == 0) return pow_rat(g.leading(), m);
    if (m == 0) return pow_rat(f.leading(), n);
    PolyQ r = divmod(f, g).remainder;
    if (r.is_zero()) return 0;
    // res(f,g) = (-1)^{mn} res(g,f) = (-1)^{mn} lc(g)^{m - deg r} res(g, r)
    Rat s = ((m * n) % 2) ? Rat(-1) : Rat(1);
    return s * pow_rat(g.leading(), m - r.degree()) * resultant(g, r);
}

Rat discriminant(const PolyQ& f)
{
    int n = f.degree();
    if (n < 1 || n > 3) throw precondition_error("discriminant supported for degree 1..3 only");
    if (n == 1) return 1;
    if (n == 2) {
        Rat a = f.coeff(2), b = f.coeff(1), c = f.coeff(0);
        return b * b - 4 * a * c;
    }
    Rat a = f.coeff(3), b = f.coeff(2), c = f.coeff(1), d = f.coeff(0);
    return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
}

Rat poly_discriminant(const PolyQ& g)
{
    if (g.degree() != 3 || !g.is_monic()) throw precondition_error("poly_discriminant expects a monic cubic");
    if (g.coeff(2) == 0) {
        Rat a = g.coeff(1), b = g.coeff(0);
        return -4 * a * a * a - 27 * b * b;
    }
    return discriminant(g);
}

// ---------------------------------------------------------------- real roots

namespace {

std::vector<PolyQ> sturm_chain(const PolyQ& f)
{
    std::vector<PolyQ> chain{f, f.derivative()};
    while (!chain.back().is_zero() && chain.back().degree() > 0) {
        PolyQ r = divmod(chain[chain.size() - 2], chain.back()).remainder;
        if (r.is_zero()) break;
        chain.push_back(Rat(-1) * r);
    }
    if (chain.back().is_zero()) chain.pop_back();
    return chain;
}

int sign_variations(const std::vector<PolyQ>& chain, const Rat& x)
{
    int count = 0, last = 0;
    for (const PolyQ& p : chain) {
        int s = sgn(p.eval(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

// number of distinct roots in (lo, hi], lo and hi not roots
int roots_between(const std::vector<PolyQ>& chain, const Rat& lo, const Rat& hi)
{
    return sign_variations(chain, lo) - sign_variations(chain, hi);
}

Rat cauchy_bound(const PolyQ& f)
{
    Rat m = 0;
    for (int i = 0; i < f.degree(); ++i) m = std::max(m, Rat(abs(f.coeff(i) / f.leading())));
    return m + 1;
}

Rat split_point(const PolyQ& f, const Rat& lo, const Rat& hi)
{
    static const int fractions[][2] = {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}, {2, 5}, {3, 5}};
    for (auto& fr : fractions) {
        Rat m = lo + (hi - lo) * Rat(fr[0], fr[1]);
        if (f.eval(m) != 0) return m;
    }
    throw precondition_error("root isolation failed to find a split point");
}

void isolate(const PolyQ& f, const std::vector<PolyQ>& chain, const Rat& lo, const Rat& hi, std::vector<RootInterval>& out)
{
    int n = roots_between(chain, lo, hi);
    if (n == 0) return;
    if (n == 1) {
        out.push_back({lo, hi});
        return;
    }
    Rat m = split_point(f, lo, hi);
    isolate(f, chain, lo, m, out);
    isolate(f, chain, m, hi, out);
}

}  // namespace

std::vector<RootInterval> isolate_real_roots(const PolyQ& f)
{
    if (f.degree() < 1) return {};
    PolyQ sf = divmod(f, poly_gcd(f, f.derivative())).quotient;
    auto chain = sturm_chain(sf);
    Rat b = cauchy_bound(sf);
    std::vector<RootInterval> out;
    isolate(sf, chain, -b, b, out);
    return out;
}

void refine_root(const PolyQ& f, RootInterval& iv, const Rat& width)
{
    if (iv.lo == iv.hi) return;
    int slo = sgn(f.eval(iv.lo));
    while (iv.hi - iv.lo > width) {
        Rat m = (iv.lo + iv.hi) / 2;
        int sm = sgn(f.eval(m));
        if (sm == 0) {
            iv.lo = iv.hi = m;
            return;
        }
        if (sm == slo)
            iv.lo = m;
        else
            iv.hi = m;
    }
}

int sign_at_root(const PolyQ& a, const PolyQ& f, RootInterval& iv)
{
    if (a.is_zero()) return 0;
    if (a.degree() == 0) return sgn(a.leading());
    auto chain = sturm_chain(a);
    for (int iter = 0; iter < 5000; ++iter) {
        if (iv.lo == iv.hi) return sgn(a.eval(iv.lo));
        Rat alo = a.eval(iv.lo), ahi = a.eval(iv.hi);
        if (alo != 0 && ahi != 0 && roots_between(chain, iv.lo, iv.hi) == 0) return sgn(alo);
        Rat m = (iv.lo + iv.hi) / 2;
        int sm = sgn(f.eval(m));
        if (sm == 0) {
            iv.lo = iv.hi = m;
            continue;
        }
        if (sm == sgn(f.eval(iv.lo)))
            iv.lo = m;
        else
            iv.hi = m;
    }
    throw precondition_error("sign at real root not resolved (element vanishes at the root?)");
}

std::vector<Rat> rational_roots(const PolyQ& f)
{
    if (f.is_zero()) throw precondition_error("rational roots of the zero polynomial");
    if (f.degree() == 0) return {};
    // integral primitive version
    Int den = 1;
    for (const Rat& c : f.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    PolyQ g = Rat(den) * f;
    Int lead = abs(Int(g.leading().get_num()));
    std::vector<Int> divisors;
    for (Int d = 1; d <= lead && d <= 100000; ++d)
        if (mpz_divisible_p(lead.get_mpz_t(), d.get_mpz_t())) divisors.push_back(d);
    if (lead > 100000) throw precondition_error("rational_roots: leading coefficient too large");
    std::vector<Rat> out;
    Rat width = Rat(1, 4) / (Rat(lead) * lead);
    PolyQ sf = divmod(g, poly_gcd(g, g.derivative())).quotient;
    for (RootInterval iv : isolate_real_roots(g)) {
        refine_root(sf, iv, width);
        for (const Int& d : divisors) {
            Int lo = floor_of(iv.lo * d), hi = floor_of(iv.hi * d) + 1;
            for (Int u = lo; u <= hi; ++u) {
                Rat cand(u, d);
                cand.canonicalize();
                if (g.eval(cand) == 0 && std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- F_p polynomials

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
u64 addmod(u64 a, u64 b, u64 p) { return (a + b) % p; }
u64 submod(u64 a, u64 b, u64 p) { return (a + p - b) % p; }
u64 powmod(u64 a, u64 e, u64 p)
{
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}
u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

PolyFp make(u64 p, std::vector<u64> c)
{
    PolyFp f{p, std::move(c)};
    f.trim();
    return f;
}

PolyFp pmul(const PolyFp& a, const PolyFp& b)
{
    if (a.is_zero() || b.is_zero()) return make(a.p, {});
    std::vector<u64> v(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) v[i + j] = addmod(v[i + j], mulmod(a.c[i], b.c[j], a.p), a.p);
    return make(a.p, std::move(v));
}

PolyFp psub(const PolyFp& a, const PolyFp& b)
{
    std::vector<u64> v(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) v[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) v[i] = submod(v[i], b.c[i], a.p);
    return make(a.p, std::move(v));
}

void pdivmod(const PolyFp& a, const PolyFp& b, PolyFp* q, PolyFp* r)
{
    u64 p = a.p;
    std::vector<u64> rem = a.c;
    int db = b.degree();
    u64 inv = invmod(b.c.back(), p);
    std::vector<u64> quo(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0, 0);
    for (int i = a.degree(); i >= db; --i) {
        u64 c = mulmod(rem[static_cast<std::size_t>(i)], inv, p);
        quo[static_cast<std::size_t>(i - db)] = c;
        if (!c) continue;
        for (int j = 0; j <= db; ++j) {
            auto k = static_cast<std::size_t>(i - db + j);
            rem[k] = submod(rem[k], mulmod(c, b.c[static_cast<std::size_t>(j)], p), p);
        }
    }
    if (q) *q = make(p, quo);
    if (r) {
        if (static_cast<int>(rem.size()) > db) rem.resize(static_cast<std::size_t>(std::max(db, 0)));
        *r = make(p, rem);
    }
}

PolyFp pmod(const PolyFp& a, const PolyFp& m)
{
    PolyFp r;
    pdivmod(a, m, nullptr, &r);
    return r;
}

PolyFp pmonic(const PolyFp& a)
{
    u64 inv = invmod(a.c.back(), a.p);
    std::vector<u64> v = a.c;
    for (u64& x : v) x = mulmod(x, inv, a.p);
    return make(a.p, v);
}

PolyFp pgcd(PolyFp a, PolyFp b)
{
    while (!b.is_zero()) {
        PolyFp r = pmod(a, b);
        a = b;
        b = r;
    }
    return a.is_zero() ? a : pmonic(a);
}

PolyFp ppowmod(PolyFp base, u64 e, const PolyFp& m)
{
    PolyFp r = make(m.p, {1});
    base = pmod(base, m);
    while (e) {
        if (e & 1) r = pmod(pmul(r, base), m);
        base = pmod(pmul(base, base), m);
        e >>= 1;
    }
    return r;
}

u64 peval(const PolyFp& f, u64 x)
{
    u64 acc = 0;
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) acc = addmod(mulmod(acc, x, f.p), *it, f.p);
    return acc;
}

// roots of a monic product of distinct linear factors
void split_linear(const PolyFp& h, std::vector<u64>& out)
{
    u64 p = h.p;
    if (h.degree() <= 0) return;
    if (h.degree() == 1) {
        out.push_back(submod(0, h.c[0], p));
        return;
    }
    for (u64 a = 0;; ++a) {
        PolyFp xa = make(p, {a % p, 1});
        PolyFp t = psub(ppowmod(xa, (p - 1) / 2, h), make(p, {1}));
        PolyFp g = pgcd(t, h);
        if (g.degree() > 0 && g.degree() < h.degree()) {
            PolyFp q;
            pdivmod(h, g, &q, nullptr);
            split_linear(g, out);
            split_linear(pmonic(q), out);
            return;
        }
    }
}

}  // namespace

void PolyFp::trim()
{
    while (!c.empty() && c.back() == 0) c.pop_back();
}

std::string PolyFp::to_string() const
{
    std::vector<Rat> v;
    for (u64 x : c) v.emplace_back(static_cast<unsigned long>(x));
    return PolyQ(v).to_string();
}

PolyFp reduce_mod_p(const PolyQ& g, const Int& p)
{
    if (p >= Int(1) << 62) throw precondition_error("prime too large for F_p polynomial arithmetic");
    if (g.is_zero()) throw precondition_error("reduce_mod_p of zero polynomial");
    for (const Rat& c : g.coeffs())
        if (mpz_divisible_p(c.get_den().get_mpz_t(), p.get_mpz_t()))
            throw precondition_error("coefficient not p-integral for p = " + p.get_str());
    if (mpz_divisible_p(g.leading().get_num().get_mpz_t(), p.get_mpz_t()))
        throw precondition_error("leading coefficient not a unit mod " + p.get_str());
    u64 pp = p.get_ui();
    std::vector<u64> v;
    for (const Rat& c : g.coeffs()) {
        Int num = mod_floor(Int(c.get_num()), p), den = mod_floor(Int(c.get_den()), p);
        v.push_back(mulmod(num.get_ui(), invmod(den.get_ui(), pp), pp));
    }
    return make(pp, v);
}

std::vector<std::uint64_t> roots_mod_p(const PolyFp& f0)
{
    if (f0.degree() <= 0) return {};
    PolyFp f = pmonic(f0);
    u64 p = f.p;
    std::vector<u64> out;
    if (p < 256) {
        for (u64 x = 0; x < p; ++x)
            if (peval(f, x) == 0) out.push_back(x);
        return out;
    }
    PolyFp xp = ppowmod(make(p, {0, 1}), p, f);
    PolyFp h = pgcd(psub(xp, make(p, {0, 1})), f);
    split_linear(h, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FpFactor> factor_mod_p(const PolyQ& g, const Int& p)
{
    if (g.degree() > 3) throw precondition_error("factor_mod_p supports degree <= 3");
    PolyFp f = pmonic(reduce_mod_p(g, p));
    std::vector<FpFactor> out;
    for (u64 r : roots_mod_p(f)) {
        PolyFp lin = make(f.p, {submod(0, r, f.p), 1});
        int mult = 0;
        for (;;) {
            PolyFp q, rem;
            pdivmod(f, lin, &q, &rem);
            if (!rem.is_zero()) break;
            f = q;
            ++mult;
        }
        out.push_back({lin, mult});
    }
    if (f.degree() > 0) out.push_back({f, 1});
    std::sort(out.begin(), out.end(), [](const FpFactor& a, const FpFactor& b) {
        if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
        return a.factor.c < b.factor.c;
    });
    return out;
}

std::vector<int> factorization_type(const std::vector<FpFactor>& factors)
{
    std::vector<int> t;
    for (const auto& f : factors)
        for (int i = 0; i < f.multiplicity; ++i) t.push_back(f.factor.degree());
    std::sort(t.begin(), t.end());
    return t;
}

bool is_irreducible_mod_p(const PolyQ& g, const Int& p)
{
    auto f = factor_mod_p(g, p);
    return f.size() == 1 && f[0].multiplicity == 1 && f[0].factor.degree() == g.degree();
}

bool splits_completely_mod_p(const PolyQ& g, const Int& p)
{
    auto f = factor_mod_p(g, p);
    if (static_cast<int>(f.size()) != g.degree()) return false;
    return std::all_of(f.begin(), f.end(), [](const FpFactor& x) { return x.factor.degree() == 1 && x.multiplicity == 1; });
}

std::pair<PolyQ, Int> integral_monic_model(const PolyQ& g)
{
    if (!g.is_monic()) throw precondition_error("integral_monic_model expects a monic polynomial");
    Int c = 1;
    for (const Rat& a : g.coeffs()) mpz_lcm(c.get_mpz_t(), c.get_mpz_t(), a.get_den().get_mpz_t());
    int n = g.degree();
    std::vector<Rat> h(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) h[static_cast<std::size_t>(i)] = g.coeff(i) * Rat(pow_int(c, static_cast<unsigned long>(n - i)));
    return {PolyQ(h), c};
}

// ---------------------------------------------------------------- p-adic roots

namespace {

using IntPoly = std::vector<Int>;  // constant term first

IntPoly compose_shift(const IntPoly& f, const Int& a, const Int& b)
{
    // f(a + b x)
    IntPoly acc;
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        IntPoly next(acc.size() + 1, Int(0));
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i] * a;
            next[i + 1] += acc[i] * b;
        }
        next[0] += *it;
        acc = std::move(next);
    }
    return acc;
}

Int eval_int(const IntPoly& f, const Int& x)
{
    Int acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

IntPoly deriv_int(const IntPoly& f)
{
    IntPoly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
    return d;
}

Int hensel_lift(const IntPoly& f, Int x, const Int& p, int precision)
{
    Int mod = pow_int(p, static_cast<unsigned long>(std::max(precision, 1)));
    IntPoly df = deriv_int(f);
    for (int iter = 0; iter < 4 * precision + 8; ++iter) {
        Int fx = mod_floor(eval_int(f, x), mod);
        if (fx == 0) break;
        Int d = mod_floor(eval_int(df, x), mod), inv;
        if (mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t()) == 0)
            throw precondition_error("hensel lift: derivative not a unit");
        x = mod_floor(Int(x - fx * inv), mod);
    }
    return x;
}

void zp_roots(IntPoly f, const Int& p, const Int& prefix, const Int& scale, int scale_exp, int precision, int depth,
              std::vector<Int>* out, int& count)
{
    if (depth > 400) throw precondition_error("p-adic root search did not terminate (inseparable polynomial?)");
    int m = -1;
    for (const Int& c : f)
        if (c != 0) {
            int v = valuation(c, p);
            m = m < 0 ? v : std::min(m, v);
        }
    if (m < 0) throw precondition_error("p-adic root search on zero polynomial");
    Int pm = pow_int(p, static_cast<unsigned long>(m));
    for (Int& c : f) c /= pm;
    PolyFp fb;
    {
        std::vector<std::uint64_t> v;
        std::uint64_t pp = p.get_ui();
        for (const Int& c : f) v.push_back(mod_floor(c, p).get_ui());
        fb = make(pp, v);
    }
    if (fb.degree() <= 0) return;
    IntPoly df = deriv_int(f);
    for (std::uint64_t r : roots_mod_p(fb)) {
        Int rr(static_cast<unsigned long>(r));
        if (mod_floor(eval_int(df, rr), p) != 0) {
            ++count;
            if (out) {
                int need = std::max(precision - scale_exp, 1);
                Int x = hensel_lift(f, rr, p, need);
                out->push_back(mod_floor(Int(prefix + scale * x), pow_int(p, static_cast<unsigned long>(precision))));
            }
        } else {
            zp_roots(compose_shift(f, rr, p), p, prefix + scale * rr, scale * p, scale_exp + 1, precision, depth + 1, out,
                     count);
        }
    }
}

IntPoly to_int_poly(const PolyQ& f)
{
    IntPoly out;
    for (const Rat& c : f.coeffs()) {
        if (c.get_den() != 1) throw precondition_error("expected integral polynomial");
        out.push_back(c.get_num());
    }
    return out;
}

}  // namespace

int count_roots_local(const PolyQ& g, const Place& v)
{
    if (g.degree() != 3 || !g.is_monic()) throw precondition_error("count_roots_local expects a monic cubic");
    Rat disc = poly_discriminant(g);
    if (disc == 0) throw precondition_error("count_roots_local: inseparable cubic");
    if (v.is_infinite()) return disc > 0 ? 3 : 1;
    auto [h, c] = integral_monic_model(g);
    int count = 0;
    zp_roots(to_int_poly(h), v.prime(), Int(0), Int(1), 0, 1, 0, nullptr, count);
    return count;
}

std::vector<Int> padic_integral_roots(const PolyQ& f, const Int& p, int precision)
{
    std::vector<Int> out;
    int count = 0;
    zp_roots(to_int_poly(f), p, Int(0), Int(1), 0, precision, 0, &out, count);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace selcomp
