// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "selcomp/congruence.hpp"
#include "selcomp/descent.hpp"
#include "selcomp/error.hpp"
#include "selcomp/lab.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

using namespace selcomp;

namespace {

// Tolerances. Dimension and symbol checks are exact; only runtimes carry limits.
constexpr double kSturmSeconds = 0.001;
constexpr double kCongruenceSeconds = 5.0;
constexpr double kDescentSeconds = 60.0;
constexpr double kScanSeconds = 600.0;
constexpr double kDivergenceSeconds = 600.0;
constexpr int kMinDescentCurves = 20;
constexpr int kLocalPairs = 100;
constexpr int kHilbertPairs = 1000;
constexpr long kScanRange = 50;
constexpr long kDivergenceBudget = 100000;
constexpr int kDivergenceTarget = 2;

WeierstrassCurve fixture_curve(const std::string& label)
{
    auto r = FixtureCache(std::string(SELCOMP_FIXTURES) + "/lmfdb").load(label);
    if (!r) throw std::runtime_error("missing fixture record " + label);
    return curve_from_record(*r);
}

const WeierstrassCurve kE1 = fixture_curve("158.a1");
const WeierstrassCurve kE2 = fixture_curve("158.b1");
// 2-division cubics x^3 - x and x^3 - x + 1 (the latter's field equals that of x^3 - x - 1).
const WeierstrassCurve kToy1 = WeierstrassCurve::from_ainvs({0, 0, 0, -1, 0});
const WeierstrassCurve kToy2 = WeierstrassCurve::from_ainvs({0, 0, 0, -1, 1});

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

int v_or_big(const Int& n, const Int& p) { return n == 0 ? 1 << 20 : valuation(n, p); }

// Number of roots in Z_p of a monic integral cubic, by a residue tree.
int padic_root_count(const PolyQ& g, const Int& p)
{
    PolyQ dg = g.derivative();
    int count = 0;
    std::vector<std::pair<Int, int>> stack;
    for (Int x = 0; x < p; ++x) stack.push_back({x, 1});
    while (!stack.empty()) {
        auto [x, k] = stack.back();
        stack.pop_back();
        Int gx = g.eval(Rat(x)).get_num();
        Int pk = pow_int(p, static_cast<unsigned long>(k));
        if (mod_floor(gx, pk) != 0) continue;
        int vd = v_or_big(dg.eval(Rat(x)).get_num(), p);
        if (k > vd) {
            if (v_or_big(gx, p) >= k + vd) ++count;
            continue;
        }
        if (k > 80) throw std::runtime_error("root tree too deep");
        for (Int a = 0; a < p; ++a) stack.push_back({x + a * pk, k + 1});
    }
    return count;
}

int closed_form_local_dim(const WeierstrassCurve& m, const Place& v, const Int& d)
{
    PolyQ g = descent_cubic(m);
    PolyQ gd({g.coeff(0) * d * d * d, g.coeff(1) * d * d, g.coeff(2) * d, Rat(1)});
    if (v.is_infinite()) return discriminant(gd) > 0 ? 1 : 0;
    int roots = padic_root_count(gd, v.prime());
    int torsion = roots == 3 ? 2 : roots;
    return v.prime() == 2 ? torsion + 1 : torsion;
}

int hilbert_ref(Int a, Int b, const Int& p)
{
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    int alpha = 0, beta = 0;
    while (a % p == 0) { a /= p; ++alpha; }
    while (b % p == 0) { b /= p; ++beta; }
    if (p == 2) {
        auto eps = [](const Int& u) { return static_cast<int>(mod_floor((u - 1) / 2, 2).get_si()); };
        auto omega = [](const Int& u) { return static_cast<int>(mod_floor((u * u - 1) / 8, 2).get_si()); };
        return (eps(a) * eps(b) + alpha * omega(b) + beta * omega(a)) % 2 == 0 ? 1 : -1;
    }
    auto legendre = [&](const Int& u) {
        Int r, e = (p - 1) / 2, base = mod_floor(u, p);
        mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r == 1 ? 1 : -1;
    };
    int s = ((alpha * beta) % 2 == 1 && mod_floor(p, 4) == 3) ? -1 : 1;
    if (beta % 2 == 1) s *= legendre(a);
    if (alpha % 2 == 1) s *= legendre(b);
    return s;
}

Outcome sturm()
{
    auto t0 = std::chrono::steady_clock::now();
    Rat b = sturm_bound(Int(158), 2);
    double t = seconds_since(t0);
    bool ok = b == Rat(6081, 158) && t < kSturmSeconds;
    return {ok, "sturm_bound(158, 2) = " + b.get_str() + " ~ " + fmt(b.get_d()) + ", " + fmt(t * 1000) + " ms"};
}

Outcome congruence()
{
    auto t0 = std::chrono::steady_clock::now();
    CongruenceVerdict v = check_mod2_congruence(kE1, kE2, {Int(2), Int(79)});
    double t = seconds_since(t0);
    bool ok = v.verdict == Congruence::congruent && !v.witness;
    auto has = [&](long q) {
        return std::find(v.primes_checked.begin(), v.primes_checked.end(), Int(q)) != v.primes_checked.end();
    };
    for (std::int64_t q : primes_up_to(38)) ok = ok && has(static_cast<long>(q));
    ok = ok && has(2) && has(79);
    // q-expansions: f1 = q - q^2 - q^3 ..., f2 = q - q^2 + q^3 ...
    auto a3 = v.traces.at(Int(3));
    ok = ok && a3.first == -1 && a3.second == 1;
    ok = ok && t < kCongruenceSeconds;
    return {ok, to_string(v.verdict) + " over " + std::to_string(v.primes_checked.size()) + " primes, a_3 = (" +
                    a3.first.get_str() + ", " + a3.second.get_str() + "), " + fmt(t) + " s"};
}

Outcome hypotheses()
{
    HypothesisReport h = check_hypotheses(kE1, kE2);
    bool ok = h.curve1.residual_irreducible && h.curve2.residual_irreducible;
    ok = ok && h.curve1.ramified_at_2 && h.curve2.ramified_at_2;
    ok = ok && h.hyp_II_per_prime.count(Int(79)) && h.hyp_II_per_prime.at(Int(79)) == HypothesisStatus::holds;
    std::string ords;
    for (const CurveHypotheses* c : {&h.curve1, &h.curve2}) {
        bool found = false;
        for (const LocalReductionData& d : c->local_data)
            if (d.prime == 79) {
                found = true;
                ok = ok && d.conductor_exponent == 1 && d.ord_delta_min % 2 == 1;
                ords += (ords.empty() ? "" : ",") + std::to_string(d.ord_delta_min);
            }
        ok = ok && found;
    }
    bool unram = quadratic_field_ramification(Int(79), SquarefreeInt(Int(-3))) == Ramification::unramified;
    ok = ok && unram;
    return {ok, "irreducible, ramified at 2, f_79 = 1, ord_79(Delta_min) = (" + ords + "), 79 " +
                    (unram ? "unramified" : "ramified") + " in Q(sqrt(-3))"};
}

Outcome descent_fixtures()
{
    std::ifstream in(std::string(SELCOMP_FIXTURES) + "/selmer_dims.csv");
    if (!in) return {false, "fixture file missing"};
    std::string line;
    std::getline(in, line);
    int n = 0, bad = 0;
    bool saw32 = false, saw37 = false;
    auto t0 = std::chrono::steady_clock::now();
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        WeierstrassCurve c{Rat(f[1]), Rat(f[2]), Rat(f[3]), Rat(f[4]), Rat(f[5])};
        int expected = std::stoi(f[7]);
        int got = -1;
        try {
            got = two_selmer(c).dim;
        } catch (const Error&) {
        }
        ++n;
        if (got != expected) ++bad;
        if (f[0] == "32.a3") saw32 = expected == 2 && got == 2;
        if (f[0] == "37.a1") saw37 = expected == 1 && got == 1;
    }
    double t = seconds_since(t0);
    bool ok = bad == 0 && n >= kMinDescentCurves && saw32 && saw37 && t < kDescentSeconds;
    return {ok, std::to_string(n - bad) + "/" + std::to_string(n) + " curves match (32.a3 -> 2, 37.a1 -> 1), " +
                    fmt(t) + " s"};
}

Outcome local_gate()
{
    std::vector<std::array<long, 5>> curves = {{0, 0, 0, -1, 0},  {0, 0, 1, -1, 0},     {1, 1, 0, -3, 1},
                                               {1, 0, 1, -5217, -145452}, {0, 0, 0, -1, 1}, {0, 1, 1, -2, 0},
                                               {0, 0, 0, 0, 17},  {0, 0, 0, -25, 0},    {1, -1, 1, 0, 0},
                                               {0, -1, 1, -10, -20}, {0, 0, 0, -6, 9}, {0, 0, 0, 0, -3024}};
    std::vector<long> ds = {1, -1, 2, -2, 3, -3, 5, -6, 7, -10, 11, -13, 17, -19, 41, -43};
    std::mt19937_64 rng(20251015);
    int bad = 0;
    for (int i = 0; i < kLocalPairs; ++i) {
        WeierstrassCurve m = minimal_model(WeierstrassCurve::from_ainvs(curves[rng() % curves.size()]));
        Int d(ds[rng() % ds.size()]);
        std::vector<Place> places = {Place::infinity()};
        for (const Int& p : prime_divisors(abs(2 * d * m.discriminant().get_num()))) places.push_back(Place::finite(p));
        places.push_back(Place::finite(next_prime(Int(static_cast<long>(3 + rng() % 200)))));
        Place v = places[rng() % places.size()];
        try {
            if (local_image(m, v, d).dim != closed_form_local_dim(m, v, d)) ++bad;
        } catch (const Error&) {
            ++bad;
        }
    }
    return {bad == 0, std::to_string(kLocalPairs - bad) + "/" + std::to_string(kLocalPairs) + " (curve, place) pairs"};
}

Outcome hilbert_product()
{
    std::mt19937_64 rng(1729);
    std::uniform_int_distribution<long> dist(-100000, 100000);
    int bad = 0, ref_bad = 0;
    for (int i = 0; i < kHilbertPairs; ++i) {
        long x = 0, y = 0;
        while (x == 0) x = dist(rng);
        while (y == 0) y = dist(rng);
        Int a(x), b(y);
        std::vector<Int> ps = prime_divisors(abs(2 * a * b));
        if (std::find(ps.begin(), ps.end(), Int(2)) == ps.end()) ps.push_back(2);
        int prod = hilbert_symbol(Rat(a), Rat(b), Place::infinity());
        for (const Int& p : ps) {
            int h = hilbert_symbol(Rat(a), Rat(b), Place::finite(p));
            if (h != hilbert_ref(a, b, p)) ++ref_bad;
            prod *= h;
        }
        if (prod != 1) ++bad;
    }
    return {bad == 0 && ref_bad == 0, std::to_string(kHilbertPairs - bad) + "/" + std::to_string(kHilbertPairs) +
                                          " pairs, " + std::to_string(ref_bad) + " disagreements with the formulas"};
}

Outcome near_companion()
{
    ScanOptions o;
    o.range = kScanRange;
    o.coprime_to_conductors = true;
    o.workers = 4;
    auto t0 = std::chrono::steady_clock::now();
    TwistReport r = companion_scan(kE1, kE2, o, "158.a1", "158.b1");
    double t = seconds_since(t0);
    int over = 0;
    for (const TwistRow& row : r.rows)
        if (!row.ok || row.gap > r.bound) ++over;
    bool ok = r.congruence == "congruent" && r.bound_asserted && over == 0 && r.bound_violations == 0 &&
              !r.rows.empty() && t < kScanSeconds;
    return {ok, std::to_string(r.rows.size()) + " twists, max gap " + std::to_string(r.max_gap) + " <= C' = " +
                    std::to_string(r.bound) + ", " + std::to_string(r.error_rows) + " errors, " + fmt(t) + " s"};
}

Outcome divergence()
{
    auto t0 = std::chrono::steady_clock::now();
    CharacterSearchState s = divergence_experiment(kToy1, kToy2, kDivergenceTarget, kDivergenceBudget);
    double t = seconds_since(t0);
    bool ok = s.success && s.gap >= kDivergenceTarget && !s.history.empty() && t < kDivergenceSeconds;
    std::string step;
    if (!s.history.empty()) {
        const DivergenceStep& last = s.history.back();
        ok = ok && last.accepted && last.local_dim1 == 2 && last.local_dim2 == 0;
        step = "q = " + last.q.get_str() + ", local dims (" + std::to_string(last.local_dim1) + ", " +
               std::to_string(last.local_dim2) + ")";
    }
    return {ok, "gap " + std::to_string(s.gap) + " at d = " + s.d.get_str() + ", " + step + ", " + fmt(t) + " s"};
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> criteria = {
        {"sturm-bound", sturm},
        {"congruence-158", congruence},
        {"hypotheses-158", hypotheses},
        {"descent-fixtures", descent_fixtures},
        {"local-dimension-gate", local_gate},
        {"hilbert-product-formula", hilbert_product},
        {"near-companion-bound", near_companion},
        {"divergence-toy-pair", divergence},
    };
    int failures = 0;
    bool scan_ok = false, diverge_ok = false;
    for (const Criterion& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        if (std::string(c.name) == "near-companion-bound") scan_ok = o.pass;
        if (std::string(c.name) == "divergence-toy-pair") diverge_ok = o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    // The general theorems are not checkable directly; their consequences over Q are the two experiments above.
    bool consequences = scan_ok && diverge_ok;
    if (!consequences) ++failures;
    std::printf("%s observable-consequences: bounded gap for the congruent pair and a growing gap for the "
                "non-congruent pair\n",
                consequences ? "PASS" : "FAIL");
    return failures == 0 ? 0 : 1;
}
