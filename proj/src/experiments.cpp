#include "selcomp/error.hpp"
#include "selcomp/lab.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

namespace selcomp {

namespace {

std::vector<Int> scan_values(long range, const Int& avoid)
{
    std::vector<Int> out;
    for (long a = 1; a <= range; ++a) {
        Int A(a);
        bool squarefree = true;
        for (const auto& [p, e] : factor_integer(A))
            if (e > 1) squarefree = false;
        if (!squarefree) continue;
        if (avoid != 0 && gcd(A, avoid) != 1) continue;
        out.push_back(-A);
        out.push_back(A);
    }
    return out;
}

TwistRow scan_row(const WeierstrassCurve& c1, const WeierstrassCurve& c2, const Int& d, const Int& cap)
{
    TwistRow row;
    row.d = d;
    try {
        row.dim1 = two_selmer_twist(c1, d, cap).dim;
        row.dim2 = two_selmer_twist(c2, d, cap).dim;
        row.gap = std::abs(row.dim1 - row.dim2);
        row.equal = row.gap == 0;
    } catch (const Error& e) {
        row.ok = false;
        row.dim1 = row.dim2 = row.gap = 0;
        row.equal = false;
        row.notes = e.what();
    }
    return row;
}

std::vector<Int> pair_bad_set(const WeierstrassCurve& m1, const WeierstrassCurve& m2)
{
    Int prod = 2 * m1.discriminant().get_num() * m2.discriminant().get_num() * conductor(m1) * conductor(m2);
    std::vector<Int> S = prime_divisors(abs(prod));
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    return S;
}

Int squarefree_product(const Int& a, const Int& b)
{
    return squarefree_part(a * b).core.value();
}

}  // namespace

TwistReport companion_scan(const WeierstrassCurve& c1, const WeierstrassCurve& c2, const ScanOptions& options,
                           const std::string& label1, const std::string& label2)
{
    if (options.range < 0) throw precondition_error("scan range must be nonnegative");
    if (options.workers < 1) throw precondition_error("scan needs at least one worker");
    WeierstrassCurve m1 = minimal_model(c1), m2 = minimal_model(c2);

    TwistReport report;
    report.label1 = label1;
    report.label2 = label2;
    try {
        report.congruence = to_string(check_mod2_congruence(m1, m2).verdict);
    } catch (const Error&) {
        report.congruence = "undecided";
    }
    report.bound = near_companion_constant(m1, m2, options.congruence_constant).total;
    report.bound_asserted = report.congruence == "congruent";

    Int avoid = options.coprime_to_conductors ? Int(conductor(m1) * conductor(m2)) : Int(0);
    std::vector<Int> ds = scan_values(options.range, avoid);
    report.rows.resize(ds.size());
    if (ds.empty()) return report;

    // Descent algebras and field engines are shared; build them once before the workers start.
    try {
        two_selmer(m1, options.field_cap);
        two_selmer(m2, options.field_cap);
    } catch (const Error&) {
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < ds.size(); i = next++) report.rows[i] = scan_row(m1, m2, ds[i], options.field_cap);
    };
    int n = std::min<int>(options.workers, static_cast<int>(ds.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    for (const TwistRow& row : report.rows) {
        if (!row.ok) {
            ++report.error_rows;
            continue;
        }
        report.max_gap = std::max(report.max_gap, row.gap);
        if (row.equal) ++report.equal_rows;
        if (report.bound_asserted && row.gap > report.bound) ++report.bound_violations;
    }
    return report;
}

bool verify_X_prime(const XPrimeCertificate& cert, const PolyQ& g1, const PolyQ& g2, const std::vector<Int>& S)
{
    const Int& q = cert.q;
    if (q < 3 || !is_prime(q)) return false;
    if (std::find(S.begin(), S.end(), q) != S.end()) return false;
    if (mod_floor(q, 8) != 1 || cert.q_star != q) return false;
    std::vector<FpFactor> f1 = factor_mod_p(g1, q), f2 = factor_mod_p(g2, q);
    if (factorization_type(f1) != std::vector<int>{1, 1, 1}) return false;
    for (const FpFactor& f : f1)
        if (f.multiplicity != 1) return false;
    if (factorization_type(f2) != std::vector<int>{3}) return false;
    if (cert.g1_factors.size() != f1.size() || cert.g2_factors.size() != f2.size()) return false;
    for (std::size_t i = 0; i < f1.size(); ++i)
        if (!(cert.g1_factors[i].factor == f1[i].factor)) return false;
    if (!(cert.g2_factors[0].factor == f2[0].factor)) return false;
    for (const Int& l : S) {
        if (l == 2) continue;
        if (kronecker(cert.q_star, l) != 1) return false;
    }
    Rat dd = discriminant(g1) * discriminant(g2);
    Int prod = mod_floor(dd.get_num() * dd.get_den(), q);
    if (prod == 0 || kronecker(prod, q) != 1) return false;
    return cert.disc_product_square;
}

XPrimeSearch find_X_primes(const WeierstrassCurve& c1, const WeierstrassCurve& c2, long budget, std::size_t max_count)
{
    WeierstrassCurve m1 = minimal_model(c1), m2 = minimal_model(c2);
    PolyQ g1 = descent_cubic(m1), g2 = descent_cubic(m2);
    FieldComparison cmp = residual_field_compare(g1, g2);
    if (cmp.relation != FieldRelation::different_field)
        throw precondition_error("the 2-division fields are not known to differ (" + to_string(cmp.relation) +
                                 "); the set of X-primes is empty by design");
    XPrimeSearch out;
    out.S = pair_bad_set(m1, m2);
    Rat dd = discriminant(g1) * discriminant(g2);
    Int dprod = dd.get_num() * dd.get_den();

    for (std::int64_t qq : primes_up_to(budget)) {
        if (out.primes.size() >= max_count) break;
        Int q(static_cast<long>(qq));
        if (mod_floor(q, 8) != 1) continue;
        if (std::binary_search(out.S.begin(), out.S.end(), q)) continue;
        bool locally_trivial = true;
        for (const Int& l : out.S)
            if (l != 2 && kronecker(q, l) != 1) locally_trivial = false;
        if (!locally_trivial) continue;
        if (!splits_completely_mod_p(g1, q) || !is_irreducible_mod_p(g2, q)) continue;
        XPrimeCertificate cert;
        cert.q = q;
        cert.q_star = q;
        cert.g1_factors = factor_mod_p(g1, q);
        cert.g2_factors = factor_mod_p(g2, q);
        for (const Int& l : out.S)
            if (l != 2) cert.kronecker_at_S[l] = kronecker(q, l);
        Int r = mod_floor(dprod, q);
        cert.disc_product_square = r != 0 && kronecker(r, q) == 1;
        if (!verify_X_prime(cert, g1, g2, out.S)) continue;
        out.primes.push_back(std::move(cert));
    }
    if (out.primes.size() < max_count) {
        out.budget_exhausted = true;
        out.warning = "prime bound " + std::to_string(budget) + " reached after " + std::to_string(out.primes.size()) +
                      " X-primes; more exist but no effective bound is known";
    }
    return out;
}

CharacterSearchState divergence_experiment(const WeierstrassCurve& c1, const WeierstrassCurve& c2, int target_gap,
                                           long budget, const Int& field_cap)
{
    WeierstrassCurve m1 = minimal_model(c1), m2 = minimal_model(c2);
    CharacterSearchState st;
    st.target_gap = target_gap;
    if (target_gap <= 0) {
        st.success = true;
        st.message = "target gap already met";
        return st;
    }
    XPrimeSearch search = find_X_primes(m1, m2, budget);
    st.S = search.S;
    st.found_primes = search.primes;
    st.d = 1;
    st.dim1 = two_selmer(m1, field_cap).dim;
    st.dim2 = two_selmer(m2, field_cap).dim;
    st.gap = st.dim1 - st.dim2;
    if (st.gap >= target_gap) {
        st.success = true;
        st.message = "target gap already met by the untwisted pair";
        return st;
    }
    for (const XPrimeCertificate& cert : search.primes) {
        DivergenceStep step;
        step.q = cert.q;
        step.q_star = cert.q_star;
        step.d = squarefree_product(st.d, cert.q_star);
        try {
            step.dim1 = two_selmer_twist(m1, step.d, field_cap).dim;
            step.dim2 = two_selmer_twist(m2, step.d, field_cap).dim;
            Place v = Place::finite(cert.q);
            step.local_dim1 = local_image(m1, v, step.d, 400000, field_cap).dim;
            step.local_dim2 = local_image(m2, v, step.d, 400000, field_cap).dim;
        } catch (const Error& e) {
            step.notes = e.what();
            st.history.push_back(step);
            continue;
        }
        step.gap = step.dim1 - step.dim2;
        step.expected_pattern = step.dim1 == st.dim1 + 2 && step.dim2 == st.dim2;
        step.accepted = step.gap > st.gap;
        if (!step.expected_pattern)
            step.notes = "dim1 " + std::to_string(step.dim1 - st.dim1) + ", dim2 " + std::to_string(step.dim2 - st.dim2);
        st.history.push_back(step);
        if (step.accepted) {
            st.d = step.d;
            st.dim1 = step.dim1;
            st.dim2 = step.dim2;
            st.gap = step.gap;
        }
        if (st.gap >= target_gap) {
            st.success = true;
            st.message = "gap " + std::to_string(st.gap) + " reached at d = " + st.d.get_str();
            return st;
        }
    }
    st.message = "X-primes up to " + std::to_string(budget) + " exhausted at gap " + std::to_string(st.gap);
    if (!search.warning.empty()) st.message += "; " + search.warning;
    return st;
}

}  // namespace selcomp
