#pragma once

// Mod-2 congruences between the newforms of two elliptic curves over Q and the
// hypothesis report for the companion theorem.

#include "selcomp/arith.hpp"
#include "selcomp/curve.hpp"
#include "selcomp/poly.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace selcomp {

/// [SL_2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p).
Int gamma0_index(const Int& N);
/// k I / 12 - (I - 1) / N with I = gamma0_index(N).
Rat sturm_bound(const Int& N, int k);

enum class Congruence { congruent, not_congruent };
std::string to_string(Congruence c);

struct CongruenceVerdict {
    Int level;
    Rat sturm_bound;
    std::vector<Int> primes_checked;  // ascending
    std::map<Int, std::pair<Int, Int>> traces;  // q -> (a_q(E1), a_q(E2))
    Congruence verdict = Congruence::congruent;
    std::optional<Int> witness;  // first prime with different a_q parity
};

/// Rejects curves of different conductors.
CongruenceVerdict check_mod2_congruence(const WeierstrassCurve& c1, const WeierstrassCurve& c2,
                                        const std::vector<Int>& extra_primes = {});

/// Comparison of a_q mod 4 up to a bound. It proves nothing about a mod-4 congruence.
struct Mod4Scan {
    Int bound;
    std::vector<Int> primes_checked;
    std::vector<Int> mismatches;
    bool certifying = false;
};
Mod4Scan mod4_heuristic_scan(const WeierstrassCurve& c1, const WeierstrassCurve& c2, const Int& bound);

enum class FieldRelation { same_field, different_field, inconclusive };
std::string to_string(FieldRelation r);

struct FieldComparison {
    FieldRelation relation = FieldRelation::inconclusive;
    std::optional<Int> witness;            // prime with different factorization types
    std::vector<Rat> root_of_g2_in_g1;     // power-basis coordinates of a root of g2 in Q[x]/(g1)
    std::string detail;
};
/// Compares the splitting fields of two separable monic cubics. Witness primes run up to
/// budget; root search starts at p-adic precision precision_start.
FieldComparison residual_field_compare(const PolyQ& g1, const PolyQ& g2, const Int& budget = Int(10000),
                                       int precision_start = 64);

/// Whether the splitting field of a separable cubic is ramified at 2.
bool splitting_field_ramified_at_2(const PolyQ& g);

enum class HypothesisStatus { holds, fails, undecided };
std::string to_string(HypothesisStatus s);

struct CurveHypotheses {
    Int conductor;
    bool residual_irreducible = false;
    bool ramified_at_2 = false;
    bool two_ordinary = false;  // a_2 odd
    std::map<Int, HypothesisStatus> hyp_II;
    std::vector<LocalReductionData> local_data;
};

struct HypothesisReport {
    bool level_odd_squarefree = false;
    bool hyp_I_III = true;
    std::map<Int, HypothesisStatus> hyp_II_per_prime;  // odd primes dividing the conductors
    CurveHypotheses curve1;
    CurveHypotheses curve2;
    bool clause_i_b_over_Q = true;
    std::vector<std::string> notes;
};
HypothesisReport check_hypotheses(const WeierstrassCurve& c1, const WeierstrassCurve& c2);

enum class Ramification { ramified, unramified };
/// Ramification of the prime l in Q(sqrt(d)).
Ramification quadratic_field_ramification(const Int& l, const SquarefreeInt& d);

/// Which clause of the companion theorem could apply over K = Q(sqrt(d)); a report, not a proof.
struct ApplicabilityReport {
    Int d;
    bool has_real_place = false;
    std::map<Int, Ramification> bad_prime_ramification;  // odd primes of the conductors, in K
    bool residual_isomorphic = false;
    std::string ramified_above_2;  // "yes", "no" or "undecided"
    std::string clause;            // "(ii)", "none" or "undecided"
    std::vector<std::string> notes;
};
ApplicabilityReport theorem_applicability(const WeierstrassCurve& c1, const WeierstrassCurve& c2, const SquarefreeInt& d);

}  // namespace selcomp
