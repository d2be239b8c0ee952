#include "selcomp/congruence.hpp"

#include "selcomp/cubicfield.hpp"
#include "selcomp/error.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace selcomp {

namespace {

bool is_odd(const Int& n) { return mpz_odd_p(n.get_mpz_t()) != 0; }

// u/v with u = a v mod m and |u|, v <= sqrt(m/2); nullopt when none exists.
std::optional<Rat> rational_reconstruction(const Int& a, const Int& m)
{
    Int bound = isqrt(m / 2);
    Int r0 = m, r1 = mod_floor(a, m), t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    Int g;
    mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
    if (g != 1) return std::nullopt;
    Rat out(r1, t1);
    out.canonicalize();
    return out;
}

Int inverse_mod(const Int& a, const Int& m)
{
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), Int(mod_floor(a, m)).get_mpz_t(), m.get_mpz_t()) == 0)
        throw precondition_error("non-invertible residue in interpolation");
    return inv;
}

// Coefficients c0, c1, c2 mod m of the quadratic through (r_i, s_i).
std::array<Int, 3> interpolate(const std::array<Int, 3>& r, const std::array<Int, 3>& s, const Int& m)
{
    std::array<Int, 3> c{0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3, k = (i + 2) % 3;
        Int den = inverse_mod((r[i] - r[j]) * (r[i] - r[k]), m);
        Int w = mod_floor(Int(s[i] * den), m);
        // w (x - r_j)(x - r_k)
        c[0] += w * r[j] * r[k];
        c[1] -= w * (r[j] + r[k]);
        c[2] += w;
    }
    for (auto& x : c) x = mod_floor(x, m);
    return c;
}

PolyQ compose(const PolyQ& f, const PolyQ& a, const PolyQ& modulus)
{
    PolyQ acc;
    for (int i = f.degree(); i >= 0; --i) acc = divmod(acc * a + PolyQ::constant(f.coeff(i)), modulus).remainder;
    return acc;
}

std::optional<std::vector<Rat>> find_root_in_field(const PolyQ& h1, const PolyQ& h2, const Int& budget, int precision)
{
    Int D = poly_discriminant(h1).get_num() * poly_discriminant(h2).get_num();
    for (Int p = 3; p <= budget; p = next_prime(p)) {
        if (mpz_divisible_p(D.get_mpz_t(), p.get_mpz_t())) continue;
        if (!splits_completely_mod_p(h1, p) || !splits_completely_mod_p(h2, p)) continue;
        for (int prec : {precision, precision * 4, precision * 16}) {
            auto r = padic_integral_roots(h1, p, prec);
            auto s = padic_integral_roots(h2, p, prec);
            if (r.size() != 3 || s.size() != 3) break;
            Int m = pow_int(p, static_cast<unsigned long>(prec));
            std::array<Int, 3> rr{r[0], r[1], r[2]};
            std::array<int, 3> perm{0, 1, 2};
            do {
                std::array<Int, 3> ss{s[static_cast<std::size_t>(perm[0])], s[static_cast<std::size_t>(perm[1])],
                                      s[static_cast<std::size_t>(perm[2])]};
                auto c = interpolate(rr, ss, m);
                std::vector<Rat> coeffs;
                bool ok = true;
                for (const Int& x : c) {
                    auto q = rational_reconstruction(x, m);
                    if (!q) {
                        ok = false;
                        break;
                    }
                    coeffs.push_back(*q);
                }
                if (!ok) continue;
                PolyQ alpha(coeffs);
                if (compose(h2, alpha, h1).is_zero()) {
                    coeffs.resize(3, Rat(0));
                    return coeffs;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        return std::nullopt;
    }
    return std::nullopt;
}

Int odd_part(Int n)
{
    n = abs(n);
    while (n != 0 && !is_odd(n)) n /= 2;
    return n;
}

bool squarefree(const Int& n)
{
    for (const auto& [p, e] : factor_integer(n))
        if (e > 1) return false;
    return true;
}

HypothesisStatus combine(HypothesisStatus a, HypothesisStatus b)
{
    if (a == HypothesisStatus::fails || b == HypothesisStatus::fails) return HypothesisStatus::fails;
    if (a == HypothesisStatus::undecided || b == HypothesisStatus::undecided) return HypothesisStatus::undecided;
    return HypothesisStatus::holds;
}

CurveHypotheses curve_hypotheses(const WeierstrassCurve& c)
{
    CurveHypotheses h;
    WeierstrassCurve m = minimal_model(c);
    h.conductor = conductor(m);
    h.local_data = bad_reduction_data(m);
    PolyQ g = two_division_poly_integral(m);
    h.residual_irreducible = rational_roots(g).empty();
    h.ramified_at_2 = splitting_field_ramified_at_2(g);
    h.two_ordinary = is_odd(ap(m, Int(2)));
    for (const auto& L : h.local_data) {
        if (L.prime == 2) continue;
        if (L.reduction_kind == ReductionKind::additive)
            h.hyp_II[L.prime] = HypothesisStatus::undecided;
        else if (L.conductor_exponent == 1)
            h.hyp_II[L.prime] = (L.ord_delta_min % 2 == 1) ? HypothesisStatus::holds : HypothesisStatus::fails;
    }
    return h;
}

}  // namespace

Int gamma0_index(const Int& N)
{
    if (N < 1) throw precondition_error("level must be positive");
    Int out = 1;
    for (const auto& [p, e] : factor_integer(N)) out *= pow_int(p, static_cast<unsigned long>(e - 1)) * (p + 1);
    return out;
}

Rat sturm_bound(const Int& N, int k)
{
    Int I = gamma0_index(N);
    Rat out = Rat(Int(k) * I, 12) - Rat(I - 1, N);
    out.canonicalize();
    return out;
}

std::string to_string(Congruence c) { return c == Congruence::congruent ? "congruent" : "not_congruent"; }

CongruenceVerdict check_mod2_congruence(const WeierstrassCurve& c1, const WeierstrassCurve& c2,
                                        const std::vector<Int>& extra_primes)
{
    WeierstrassCurve m1 = minimal_model(c1), m2 = minimal_model(c2);
    Int N1 = conductor(m1), N2 = conductor(m2);
    if (N1 != N2)
        throw precondition_error("conductors differ (" + N1.get_str() + " vs " + N2.get_str() +
                                 "); the Sturm comparison needs a common level, so this case is undecided");
    CongruenceVerdict v;
    v.level = N1;
    v.sturm_bound = sturm_bound(N1, 2);
    std::set<Int> primes;
    for (auto p : primes_up_to(floor_of(v.sturm_bound).get_si())) primes.insert(Int(p));
    for (const Int& p : prime_divisors(N1)) primes.insert(p);
    for (const Int& p : extra_primes) {
        if (!is_prime(p)) throw precondition_error("extra prime " + p.get_str() + " is not prime");
        primes.insert(p);
    }
    v.primes_checked.assign(primes.begin(), primes.end());
    for (const Int& q : v.primes_checked) {
        Int a1 = ap(m1, q), a2 = ap(m2, q);
        v.traces[q] = {a1, a2};
        if (is_odd(a1) != is_odd(a2) && !v.witness) v.witness = q;
    }
    v.verdict = v.witness ? Congruence::not_congruent : Congruence::congruent;
    return v;
}

Mod4Scan mod4_heuristic_scan(const WeierstrassCurve& c1, const WeierstrassCurve& c2, const Int& bound)
{
    WeierstrassCurve m1 = minimal_model(c1), m2 = minimal_model(c2);
    Mod4Scan out;
    out.bound = bound;
    for (auto p : primes_up_to(bound.get_si())) {
        Int q(p);
        out.primes_checked.push_back(q);
        if (mod_floor(ap(m1, q) - ap(m2, q), Int(4)) != 0) out.mismatches.push_back(q);
    }
    return out;
}

std::string to_string(FieldRelation r)
{
    switch (r) {
    case FieldRelation::same_field: return "same_field";
    case FieldRelation::different_field: return "different_field";
    case FieldRelation::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

FieldComparison residual_field_compare(const PolyQ& g1, const PolyQ& g2, const Int& budget, int precision_start)
{
    if (g1.degree() != 3 || g2.degree() != 3 || !g1.is_monic() || !g2.is_monic())
        throw precondition_error("residual_field_compare needs monic cubics");
    if (poly_discriminant(g1) == 0 || poly_discriminant(g2) == 0)
        throw precondition_error("residual_field_compare needs separable cubics");
    auto [h1, s1] = integral_monic_model(g1);
    auto [h2, s2] = integral_monic_model(g2);
    FieldComparison out;
    Int D1 = poly_discriminant(h1).get_num(), D2 = poly_discriminant(h2).get_num();
    for (Int p = 2; p <= budget; p = next_prime(p)) {
        if (mpz_divisible_p(D1.get_mpz_t(), p.get_mpz_t()) || mpz_divisible_p(D2.get_mpz_t(), p.get_mpz_t())) continue;
        if (factorization_type(factor_mod_p(h1, p)) != factorization_type(factor_mod_p(h2, p))) {
            out.relation = FieldRelation::different_field;
            out.witness = p;
            out.detail = "factorization types differ modulo " + p.get_str();
            return out;
        }
    }
    if (squarefree_part(D1).core.value() != squarefree_part(D2).core.value()) {
        out.detail = "discriminant square classes differ but no witness prime was found below the budget";
        return out;
    }
    std::size_t roots = rational_roots(h1).size();
    if (roots != rational_roots(h2).size()) {
        out.detail = "rational root counts differ but no witness prime was found below the budget";
        return out;
    }
    if (roots == 3) {
        out.relation = FieldRelation::same_field;
        out.detail = "both cubics split over Q";
        return out;
    }
    if (roots == 1) {
        out.relation = FieldRelation::same_field;
        out.detail = "both splitting fields are Q(sqrt(" + squarefree_part(D1).core.value().get_str() + "))";
        return out;
    }
    if (precision_start < 8) throw precondition_error("p-adic precision must be at least 8");
    auto root = find_root_in_field(h1, h2, budget, precision_start);
    if (!root) {
        out.detail = "factorization types agree below the budget but no root of g2 was found in Q[x]/(g1)";
        return out;
    }
    // back to the original cubics: theta1' = s1 theta1 and the root of g2 is alpha'/s2
    std::vector<Rat> coords;
    for (int i = 0; i < 3; ++i) coords.push_back((*root)[static_cast<std::size_t>(i)] * pow_rat(Rat(s1), i) / Rat(s2));
    out.relation = FieldRelation::same_field;
    out.root_of_g2_in_g1 = coords;
    out.detail = "factorization types agree below the budget and g2 has an exact root in Q[x]/(g1)";
    return out;
}

bool splitting_field_ramified_at_2(const PolyQ& g)
{
    PolyQ h = integral_monic_model(g).first;
    auto roots = rational_roots(h);
    if (roots.size() == 3) return false;
    Int D = poly_discriminant(h).get_num();
    bool resolvent_ramified = mod_floor(squarefree_part(D).core.value(), Int(4)) != 1;
    if (roots.size() == 1) return resolvent_ramified;
    NumberField F(h);
    return resolvent_ramified || !is_odd(F.discriminant());
}

std::string to_string(HypothesisStatus s)
{
    switch (s) {
    case HypothesisStatus::holds: return "holds";
    case HypothesisStatus::fails: return "fails";
    case HypothesisStatus::undecided: return "undecided";
    }
    return "undecided";
}

HypothesisReport check_hypotheses(const WeierstrassCurve& c1, const WeierstrassCurve& c2)
{
    HypothesisReport r;
    r.curve1 = curve_hypotheses(c1);
    r.curve2 = curve_hypotheses(c2);
    r.level_odd_squarefree = squarefree(odd_part(r.curve1.conductor)) && squarefree(odd_part(r.curve2.conductor));
    std::set<Int> odd_primes;
    for (const Int& N : {r.curve1.conductor, r.curve2.conductor})
        for (const Int& p : prime_divisors(N))
            if (p != 2) odd_primes.insert(p);
    for (const Int& l : odd_primes) {
        HypothesisStatus s = HypothesisStatus::holds;
        for (const CurveHypotheses* h : {&r.curve1, &r.curve2}) {
            auto it = h->hyp_II.find(l);
            if (it != h->hyp_II.end()) s = combine(s, it->second);
        }
        r.hyp_II_per_prime[l] = s;
        if (s == HypothesisStatus::undecided)
            r.notes.push_back("hypothesis II at " + l.get_str() + " is undecided: additive reduction");
    }
    r.notes.push_back("hypotheses I and III hold: both newforms have rational coefficients");
    r.notes.push_back("clause (i)(b) always holds over Q");
    if (!r.curve1.two_ordinary || !r.curve2.two_ordinary) r.notes.push_back("a_2 is even for at least one curve: not 2-ordinary");
    if (!r.level_odd_squarefree) r.notes.push_back("the odd part of a conductor is not squarefree");
    return r;
}

Ramification quadratic_field_ramification(const Int& l, const SquarefreeInt& d)
{
    Int disc = mod_floor(d.value(), Int(4)) == 1 ? d.value() : Int(4 * d.value());
    return mpz_divisible_p(disc.get_mpz_t(), l.get_mpz_t()) ? Ramification::ramified : Ramification::unramified;
}

ApplicabilityReport theorem_applicability(const WeierstrassCurve& c1, const WeierstrassCurve& c2, const SquarefreeInt& d)
{
    ApplicabilityReport a;
    a.d = d.value();
    a.has_real_place = d.value() > 0;
    HypothesisReport h = check_hypotheses(c1, c2);
    bool hyp_ok = h.level_odd_squarefree && h.curve1.two_ordinary && h.curve2.two_ordinary;
    bool hyp_undecided = false;
    for (const auto& [l, s] : h.hyp_II_per_prime) {
        Ramification ram = quadratic_field_ramification(l, d);
        a.bad_prime_ramification[l] = ram;
        if (s == HypothesisStatus::fails) hyp_ok = false;
        if (s == HypothesisStatus::undecided || ram == Ramification::ramified) {
            hyp_undecided = true;
            a.notes.push_back("hypothesis II over K at " + l.get_str() + " is undecided");
        }
    }
    PolyQ g1 = two_division_poly_integral(minimal_model(c1)), g2 = two_division_poly_integral(minimal_model(c2));
    a.residual_isomorphic = residual_field_compare(g1, g2).relation == FieldRelation::same_field;
    if (!h.curve1.ramified_at_2)
        a.ramified_above_2 = "no";
    else if (quadratic_field_ramification(Int(2), d) == Ramification::unramified)
        a.ramified_above_2 = "yes";
    else
        a.ramified_above_2 = "undecided";
    if (!hyp_ok || !a.residual_isomorphic || a.has_real_place || a.ramified_above_2 == "no")
        a.clause = "none";
    else if (hyp_undecided || a.ramified_above_2 == "undecided")
        a.clause = "undecided";
    else
        a.clause = "(ii)";
    a.notes.push_back("clause (i) needs a mod-4 isomorphism and is not checked");
    return a;
}

}  // namespace selcomp
