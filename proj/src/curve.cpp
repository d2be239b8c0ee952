#include "selcomp/curve.hpp"

#include "selcomp/error.hpp"

#include <sstream>

namespace selcomp {

WeierstrassCurve::WeierstrassCurve(Rat a1, Rat a2, Rat a3, Rat a4, Rat a6)
    : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)}
{
    for (Rat& x : a_) x.canonicalize();
}

WeierstrassCurve WeierstrassCurve::from_ainvs(const std::array<long, 5>& a)
{
    return WeierstrassCurve(Rat(a[0]), Rat(a[1]), Rat(a[2]), Rat(a[3]), Rat(a[4]));
}

Rat WeierstrassCurve::b2() const { return a1() * a1() + 4 * a2(); }
Rat WeierstrassCurve::b4() const { return 2 * a4() + a1() * a3(); }
Rat WeierstrassCurve::b6() const { return a3() * a3() + 4 * a6(); }
Rat WeierstrassCurve::b8() const
{
    return a1() * a1() * a6() + 4 * a2() * a6() - a1() * a3() * a4() + a2() * a3() * a3() - a4() * a4();
}
Rat WeierstrassCurve::c4() const { return b2() * b2() - 24 * b4(); }
Rat WeierstrassCurve::c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
Rat WeierstrassCurve::discriminant() const
{
    Rat B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

bool WeierstrassCurve::is_integral() const
{
    for (const Rat& x : a_)
        if (x.get_den() != 1) return false;
    return true;
}

WeierstrassCurve WeierstrassCurve::transform(const Rat& u, const Rat& r, const Rat& s, const Rat& t) const
{
    if (u == 0) throw precondition_error("transform with u = 0");
    Rat ui = 1 / u;
    Rat n1 = a1() + 2 * s;
    Rat n2 = a2() - s * a1() + 3 * r - s * s;
    Rat n3 = a3() + r * a1() + 2 * t;
    Rat n4 = a4() - s * a3() + 2 * r * a2() - (t + r * s) * a1() + 3 * r * r - 2 * s * t;
    Rat n6 = a6() + r * a4() + r * r * a2() + r * r * r - t * a3() - t * t - r * t * a1();
    return WeierstrassCurve(n1 * ui, n2 * ui * ui, n3 * pow_rat(ui, 3), n4 * pow_rat(ui, 4), n6 * pow_rat(ui, 6));
}

std::string WeierstrassCurve::to_string() const
{
    std::ostringstream os;
    os << "[" << a_[0].get_str() << "," << a_[1].get_str() << "," << a_[2].get_str() << "," << a_[3].get_str() << ","
       << a_[4].get_str() << "]";
    return os.str();
}

CurveInvariants invariants(const WeierstrassCurve& c)
{
    Rat d = c.discriminant();
    if (d == 0) throw precondition_error("singular Weierstrass model " + c.to_string());
    Rat c4 = c.c4();
    return {c4, c.c6(), d, c4 * c4 * c4 / d};
}

std::string to_string(ReductionKind k)
{
    switch (k) {
    case ReductionKind::good: return "good";
    case ReductionKind::split_multiplicative: return "split multiplicative";
    case ReductionKind::nonsplit_multiplicative: return "nonsplit multiplicative";
    case ReductionKind::additive: return "additive";
    }
    return "?";
}

namespace {

WeierstrassCurve integral_model(const WeierstrassCurve& c)
{
    Int k = 1;
    for (const Rat& a : c.ainvs()) mpz_lcm(k.get_mpz_t(), k.get_mpz_t(), a.get_den().get_mpz_t());
    if (k == 1) return c;
    return c.transform(Rat(1) / Rat(k), 0, 0, 0);
}

struct IntModel {
    Int a1, a2, a3, a4, a6;

    static IntModel from(const WeierstrassCurve& c)
    {
        return {c.a1().get_num(), c.a2().get_num(), c.a3().get_num(), c.a4().get_num(), c.a6().get_num()};
    }
    Int b2() const { return a1 * a1 + 4 * a2; }
    Int b4() const { return 2 * a4 + a1 * a3; }
    Int b6() const { return a3 * a3 + 4 * a6; }
    Int b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
    Int c4() const { return b2() * b2() - 24 * b4(); }
    Int c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
    Int disc() const
    {
        Int B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
    }
    void rst(const Int& r, const Int& s, const Int& t)
    {
        Int n1 = a1 + 2 * s;
        Int n2 = a2 - s * a1 + 3 * r - s * s;
        Int n3 = a3 + r * a1 + 2 * t;
        Int n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        Int n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        a1 = n1;
        a2 = n2;
        a3 = n3;
        a4 = n4;
        a6 = n6;
    }
};

int val_or_big(const Int& x, const Int& p) { return x == 0 ? 1 << 20 : valuation(x, p); }

bool divides(const Int& p, const Int& x) { return mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t()) != 0; }

Int inv_mod(const Int& a, const Int& p)
{
    Int r, x = mod_floor(a, p);
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()) == 0) throw precondition_error("tate: non-invertible residue");
    return r;
}

// roots of a monic quadratic T^2 + bT + c mod p
bool quadratic_has_root(const Int& b, const Int& c, const Int& p)
{
    if (p == 2) {
        Int cb = mod_floor(c, 2), bb = mod_floor(b, 2);
        return cb == 0 || bb == 0;  // T=0 root iff c even; T=1 root iff 1+b+c even
    }
    Int d = mod_floor(Int(b * b - 4 * c), p);
    return d == 0 || kronecker(d, p) == 1;
}

// cube root in F_3 and square root in F_2 are the identity on residues
Int proot(const Int& x, const Int& p) { return mod_floor(x, p); }

}  // namespace

LocalReductionData tate_local(const WeierstrassCurve& c_in, const Int& p)
{
    if (!is_prime(p)) throw precondition_error("tate_local needs a prime");
    invariants(c_in);
    IntModel E = IntModel::from(integral_model(c_in));
    LocalReductionData out;
    out.prime = p;
    for (int restarts = 0;; ++restarts) {
        Int delta = E.disc();
        int vD = valuation(delta, p);
        {
            Int c4 = E.c4();
            int vc4 = val_or_big(c4, p);
            int vj = 3 * vc4 - vD;
            out.ord_j_denominator = vj < 0 ? -vj : 0;
        }
        out.ord_delta_min = vD;
        out.minimalization_steps = restarts;
        if (vD == 0) {
            out.kodaira = "I0";
            out.conductor_exponent = 0;
            out.reduction_kind = ReductionKind::good;
            return out;
        }
        Int r, t;
        {
            Int b2 = E.b2(), b4 = E.b4(), b6 = E.b6(), c4 = E.c4(), c6 = E.c6();
            if (p == 2) {
                if (divides(p, b2)) {
                    r = proot(E.a4, p);
                    t = proot(((r + E.a2) * r + E.a4) * r + E.a6, p);
                } else {
                    // a1 odd, so its inverse mod 2 is 1
                    r = E.a3;
                    t = E.a4 + r * r;
                }
            } else if (p == 3) {
                if (divides(p, b2))
                    r = proot(-b6, p);
                else
                    r = -inv_mod(b2, p) * b4;
                t = E.a1 * r + E.a3;
            } else {
                if (divides(p, c4))
                    r = -inv_mod(12, p) * b2;
                else
                    r = -inv_mod(12 * c4, p) * (c6 + b2 * c4);
                t = -inv_mod(2, p) * (E.a1 * r + E.a3);
            }
            r = mod_floor(r, p);
            t = mod_floor(t, p);
        }
        E.rst(r, 0, t);

        if (!divides(p, E.c4())) {
            out.kodaira = "I" + std::to_string(vD);
            out.conductor_exponent = 1;
            out.reduction_kind = quadratic_has_root(E.a1, -E.a2, p) ? ReductionKind::split_multiplicative
                                                                    : ReductionKind::nonsplit_multiplicative;
            return out;
        }
        out.reduction_kind = ReductionKind::additive;
        if (val_or_big(E.a6, p) < 2) {
            out.kodaira = "II";
            out.conductor_exponent = vD;
            return out;
        }
        if (val_or_big(E.b8(), p) < 3) {
            out.kodaira = "III";
            out.conductor_exponent = vD - 1;
            return out;
        }
        if (val_or_big(E.b6(), p) < 3) {
            out.kodaira = "IV";
            out.conductor_exponent = vD - 2;
            return out;
        }
        Int s;
        if (p == 2) {
            s = proot(E.a2, p);
            t = p * proot(E.a6 / (p * p), p);
        } else if (p == 3) {
            s = E.a1;
            t = E.a3;
        } else {
            Int half = inv_mod(2, p);
            s = -E.a1 * half;
            t = -E.a3 * half;
        }
        E.rst(0, s, t);

        Int b = E.a2 / p, cc = E.a4 / (p * p), d = E.a6 / (p * p * p);
        Int w = 27 * d * d - b * b * cc * cc + 4 * b * b * b * d - 18 * b * cc * d + 4 * cc * cc * cc;
        Int x = 3 * cc - b * b;
        int sw = divides(p, w) ? (divides(p, x) ? 3 : 2) : 1;
        if (sw == 1) {
            out.kodaira = "I0*";
            out.conductor_exponent = vD - 4;
            return out;
        }
        if (sw == 2) {
            Int rr;
            if (p == 2)
                rr = proot(cc, p);
            else if (p == 3)
                rr = cc * inv_mod(b, p);
            else
                rr = (b * cc - 9 * d) * inv_mod(2 * x, p);
            rr = p * mod_floor(rr, p);
            E.rst(rr, 0, 0);
            int ix = 3, iy = 3;
            Int mx = p * p, my = p * p;
            for (;;) {
                Int a2t = E.a2 / p, a3t = E.a3 / my, a4t = E.a4 / (p * mx), a6t = E.a6 / (mx * my);
                if (!divides(p, a3t * a3t + 4 * a6t)) break;
                Int tt = p == 2 ? Int(my * proot(a6t, p)) : Int(my * mod_floor(Int(-a3t * inv_mod(2, p)), p));
                E.rst(0, 0, tt);
                my *= p;
                ++iy;
                a2t = E.a2 / p;
                a3t = E.a3 / my;
                a4t = E.a4 / (p * mx);
                a6t = E.a6 / (mx * my);
                if (!divides(p, a4t * a4t - 4 * a6t * a2t)) break;
                Int r2 = p == 2 ? Int(mx * proot(a6t * inv_mod(a2t, p), p))
                                : Int(mx * mod_floor(Int(-a4t * inv_mod(2 * a2t, p)), p));
                E.rst(r2, 0, 0);
                mx *= p;
                ++ix;
            }
            out.kodaira = "I" + std::to_string(ix + iy - 5) + "*";
            out.conductor_exponent = vD - ix - iy + 1;
            return out;
        }
        // triple root
        Int rr;
        if (p == 2)
            rr = b;
        else if (p == 3)
            rr = proot(-d, p);
        else
            rr = -b * inv_mod(3, p);
        rr = p * mod_floor(rr, p);
        E.rst(rr, 0, 0);
        Int p2 = p * p, p4 = p2 * p2;
        Int a3t = E.a3 / p2, a6t = E.a6 / p4;
        if (!divides(p, a3t * a3t + 4 * a6t)) {
            out.kodaira = "IV*";
            out.conductor_exponent = vD - 6;
            return out;
        }
        Int tt = p == 2 ? Int(-p2 * proot(a6t, p)) : Int(p2 * mod_floor(Int(-a3t * inv_mod(2, p)), p));
        E.rst(0, 0, tt);
        if (val_or_big(E.a4, p) < 4) {
            out.kodaira = "III*";
            out.conductor_exponent = vD - 7;
            return out;
        }
        if (val_or_big(E.a6, p) < 6) {
            out.kodaira = "II*";
            out.conductor_exponent = vD - 8;
            return out;
        }
        // not minimal at p: rescale by u = p and start again
        E.a1 /= p;
        E.a2 /= p2;
        E.a3 /= p2 * p;
        E.a4 /= p4;
        E.a6 /= p4 * p2;
    }
}

std::vector<LocalReductionData> bad_reduction_data(const WeierstrassCurve& c)
{
    WeierstrassCurve m = minimal_model(c);
    std::vector<LocalReductionData> out;
    for (const Int& p : prime_divisors(Int(m.discriminant().get_num()))) out.push_back(tate_local(m, p));
    return out;
}

Int conductor(const WeierstrassCurve& c)
{
    Int n = 1;
    for (const auto& d : bad_reduction_data(c)) n *= pow_int(d.prime, static_cast<unsigned long>(d.conductor_exponent));
    return n;
}

WeierstrassCurve minimal_model(const WeierstrassCurve& c)
{
    invariants(c);
    WeierstrassCurve e = integral_model(c);
    Int disc = e.discriminant().get_num();
    Int u = 1;
    for (const auto& [p, k] : factor_integer(disc)) {
        if (k < 12) continue;
        int steps = tate_local(e, p).minimalization_steps;
        u *= pow_int(p, static_cast<unsigned long>(steps));
    }
    Int c4 = Int(e.c4().get_num()), c6 = Int(e.c6().get_num());
    Int u4 = pow_int(u, 4), u6 = pow_int(u, 6);
    c4 /= u4;
    c6 /= u6;
    static const int candidates[] = {0, 1, -4, 4, -3, 5};
    for (int b2i : candidates) {
        Int b2 = b2i;
        Int num4 = b2 * b2 - c4;
        if (!divides(Int(24), num4)) continue;
        Int b4 = num4 / 24;
        Int num6 = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
        if (!divides(Int(216), num6)) continue;
        Int b6 = num6 / 216;
        Int a1 = mod_floor(b2, 2);
        Int a2 = (b2 - a1) / 4;
        Int a3 = mod_floor(b6, 2);
        Int a4n = b4 - a1 * a3;
        Int a6n = b6 - a3;
        if (!divides(Int(2), a4n) || !divides(Int(4), a6n)) continue;
        WeierstrassCurve m(Rat(a1), Rat(a2), Rat(a3), Rat(a4n / 2), Rat(a6n / 4));
        if (m.c4() != Rat(c4) || m.c6() != Rat(c6)) continue;
        m.minimal_ = true;
        return m;
    }
    throw precondition_error("minimal_model: no integral model with the minimal c4, c6 of " + c.to_string());
}

WeierstrassCurve quadratic_twist(const WeierstrassCurve& c, const SquarefreeInt& d)
{
    auto inv = invariants(c);
    const Int& dv = d.value();
    Rat D(dv);
    WeierstrassCurve tw(0, 0, 0, -27 * inv.c4 * D * D, -54 * inv.c6 * D * D * D);
    return minimal_model(tw);
}

Int count_points_ap(const WeierstrassCurve& c_in, const Int& q)
{
    if (!is_prime(q)) throw precondition_error("count_points_ap needs a prime");
    WeierstrassCurve c = minimal_model(c_in);
    Int disc = c.discriminant().get_num();
    if (divides(q, disc)) throw precondition_error("count_points_ap: bad prime " + q.get_str());
    if (q > Int(100000000)) throw budget_error("count_points_ap: prime too large for naive counting");
    long Q = q.get_si();
    auto m = [&](const Rat& x) { return mod_floor(Int(x.get_num()), q).get_si(); };
    long a1 = m(c.a1()), a2 = m(c.a2()), a3 = m(c.a3()), a4 = m(c.a4()), a6 = m(c.a6());
    long count = 1;
    if (Q <= 3) {
        for (long x = 0; x < Q; ++x)
            for (long y = 0; y < Q; ++y) {
                long lhs = y * y + a1 * x * y + a3 * y;
                long rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if ((lhs - rhs) % Q == 0) ++count;
            }
    } else {
        std::vector<signed char> chi(static_cast<std::size_t>(Q), -1);
        chi[0] = 0;
        for (long y = 1; y < Q; ++y) chi[static_cast<std::size_t>(y * y % Q)] = 1;
        long b2 = m(c.b2()), b4 = m(c.b4()), b6 = m(c.b6());
        for (long x = 0; x < Q; ++x) {
            long f = (((4 * x % Q + b2) % Q * x % Q + 2 * b4) % Q * x % Q + b6) % Q;
            count += 1 + chi[static_cast<std::size_t>(f)];
        }
    }
    return q + 1 - count;
}

Int ap(const WeierstrassCurve& c, const Int& q)
{
    WeierstrassCurve m = minimal_model(c);
    if (!divides(q, Int(m.discriminant().get_num()))) return count_points_ap(m, q);
    switch (tate_local(m, q).reduction_kind) {
    case ReductionKind::split_multiplicative: return 1;
    case ReductionKind::nonsplit_multiplicative: return -1;
    default: return 0;
    }
}

PolyQ two_division_poly(const WeierstrassCurve& c)
{
    return PolyQ({c.b6() / 4, c.b4() / 2, c.b2() / 4, Rat(1)});
}

PolyQ two_division_poly_integral(const WeierstrassCurve& c)
{
    return PolyQ({16 * c.b6(), 8 * c.b4(), c.b2(), Rat(1)});
}

int rational_two_torsion_dim(const WeierstrassCurve& c)
{
    auto n = rational_roots(two_division_poly(c)).size();
    return n == 3 ? 2 : static_cast<int>(n);
}

ApTable ap_table(const WeierstrassCurve& c, const Int& bound)
{
    WeierstrassCurve m = minimal_model(c);
    ApTable t;
    t.level = conductor(m);
    for (std::int64_t q : primes_up_to(bound.get_si())) t.entries[Int(q)] = {ap(m, Int(q)), ApProvenance::counted};
    for (const auto& d : bad_reduction_data(m)) t.entries[d.prime] = {ap(m, d.prime), ApProvenance::counted};
    return t;
}

}  // namespace selcomp
