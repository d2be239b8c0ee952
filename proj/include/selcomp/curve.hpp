#pragma once

// Elliptic curves over Q in long Weierstrass form.

#include "selcomp/arith.hpp"
#include "selcomp/poly.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace selcomp {

class WeierstrassCurve {
public:
    WeierstrassCurve() = default;
    WeierstrassCurve(Rat a1, Rat a2, Rat a3, Rat a4, Rat a6);
    static WeierstrassCurve from_ainvs(const std::array<long, 5>& a);

    const Rat& a1() const { return a_[0]; }
    const Rat& a2() const { return a_[1]; }
    const Rat& a3() const { return a_[2]; }
    const Rat& a4() const { return a_[3]; }
    const Rat& a6() const { return a_[4]; }
    const std::array<Rat, 5>& ainvs() const { return a_; }

    Rat b2() const;
    Rat b4() const;
    Rat b6() const;
    Rat b8() const;
    Rat c4() const;
    Rat c6() const;
    Rat discriminant() const;

    bool is_integral() const;
    /// Set only by minimal_model.
    bool is_minimal() const { return minimal_; }

    /// (u, r, s, t) change of coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
    WeierstrassCurve transform(const Rat& u, const Rat& r, const Rat& s, const Rat& t) const;

    std::string to_string() const;
    friend bool operator==(const WeierstrassCurve& a, const WeierstrassCurve& b) { return a.a_ == b.a_; }

private:
    friend WeierstrassCurve minimal_model(const WeierstrassCurve& c);
    std::array<Rat, 5> a_{};
    bool minimal_ = false;
};

struct CurveInvariants {
    Rat c4;
    Rat c6;
    Rat discriminant;
    Rat j;
};
/// Throws a precondition error for a singular model.
CurveInvariants invariants(const WeierstrassCurve& c);

/// Global minimal integral model in reduced form (a1, a3 in {0,1}, a2 in {-1,0,1}).
WeierstrassCurve minimal_model(const WeierstrassCurve& c);

enum class ReductionKind { good, split_multiplicative, nonsplit_multiplicative, additive };
std::string to_string(ReductionKind k);

struct LocalReductionData {
    Int prime;
    std::string kodaira;
    int conductor_exponent = 0;
    int ord_delta_min = 0;
    int ord_j_denominator = 0;
    ReductionKind reduction_kind = ReductionKind::good;
    /// Number of u = p rescalings needed to reach a p-minimal model.
    int minimalization_steps = 0;
};
LocalReductionData tate_local(const WeierstrassCurve& c, const Int& p);
Int conductor(const WeierstrassCurve& c);
std::vector<LocalReductionData> bad_reduction_data(const WeierstrassCurve& c);

/// Minimal model of the twist dy^2 = g(x).
WeierstrassCurve quadratic_twist(const WeierstrassCurve& c, const SquarefreeInt& d);

/// q + 1 - #E(F_q) for a prime q of good reduction.
Int count_points_ap(const WeierstrassCurve& c, const Int& q);
/// a_q at any prime: counted when good, +1/-1/0 for split/nonsplit/additive.
Int ap(const WeierstrassCurve& c, const Int& q);

/// Monic cubic x^3 + b2/4 x^2 + b4/2 x + b6/4 of the completed-square model.
PolyQ two_division_poly(const WeierstrassCurve& c);
/// Integral cubic X^3 + b2 X^2 + 8 b4 X + 16 b6 = 64 g(X/4); descent works with this model.
PolyQ two_division_poly_integral(const WeierstrassCurve& c);
/// Number of rational roots of the 2-division cubic, i.e. dim E(Q)[2] as 0, 1 or 2 (3 roots).
int rational_two_torsion_dim(const WeierstrassCurve& c);

enum class ApProvenance { counted, ingested };
struct ApEntry {
    Int value;
    ApProvenance provenance = ApProvenance::counted;
};
struct ApTable {
    Int level;
    int weight = 2;
    std::map<Int, ApEntry> entries;
};
/// a_q for all primes q <= bound, plus the bad primes.
ApTable ap_table(const WeierstrassCurve& c, const Int& bound);

}  // namespace selcomp
