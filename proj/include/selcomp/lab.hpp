#pragma once

// Experiments over twist families, LMFDB ingestion with a local fixture cache,
// and report serialization.

#include "selcomp/arith.hpp"
#include "selcomp/congruence.hpp"
#include "selcomp/curve.hpp"
#include "selcomp/descent.hpp"

#include <array>
#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace selcomp {

struct LabConfig {
    std::string lmfdb_base_url = "https://www.lmfdb.org";
    std::string cache_dir = ".selcomp-cache";
    Int minkowski_cap = 1000000;  // cap on |disc| of descent fields
    int precision_start = 64;     // p-adic digits for root searches
    int scan_workers = 1;
    long search_budget = 100000;  // prime bound for X-prime searches
    bool offline = false;
};
/// key = value lines; '#' starts a comment; unknown keys are rejected.
LabConfig parse_config(const std::string& text);
LabConfig load_config(const std::string& path);

struct CurveRecord {
    std::string label;
    std::array<Int, 5> ainvs;
    Int conductor;
    std::map<Int, Int> aq;  // optional traces a_q
    std::string source;     // where the record was first obtained
};
WeierstrassCurve curve_from_record(const CurveRecord& r);
std::string record_to_json(const CurveRecord& r);
/// Strict: every required field present with the right type, and no unknown fields.
CurveRecord record_from_json(const std::string& text);
bool is_curve_label(const std::string& label);

/// One JSON file per label plus manifest.json holding SHA-256 digests.
class FixtureCache {
public:
    explicit FixtureCache(std::string dir);
    std::optional<CurveRecord> load(const std::string& label) const;
    void store(const CurveRecord& r) const;
    const std::string& dir() const { return dir_; }

private:
    std::string dir_;
};

std::string sha256_hex(const std::string& data);

/// Cache first, then the LMFDB API (unless offline). Requests are spaced at least 500 ms apart.
CurveRecord lmfdb_fetch(const std::string& label, const LabConfig& config);

struct TwistRow {
    Int d;
    bool ok = true;  // false when the descent for this twist failed; dims are then meaningless
    int dim1 = 0;
    int dim2 = 0;
    bool equal = false;
    int gap = 0;
    std::string notes;
};

struct TwistReport {
    std::string label1;
    std::string label2;
    std::vector<TwistRow> rows;
    int max_gap = 0;
    int equal_rows = 0;
    int error_rows = 0;
    std::string congruence;  // "congruent", "not_congruent" or "undecided"
    int bound = 0;           // near-companion constant
    bool bound_asserted = false;
    int bound_violations = 0;
};

struct ScanOptions {
    long range = 0;
    bool coprime_to_conductors = false;
    int workers = 1;
    int congruence_constant = 0;
    Int field_cap = 1000000;
};
TwistReport companion_scan(const WeierstrassCurve& c1, const WeierstrassCurve& c2, const ScanOptions& options,
                           const std::string& label1 = "E1", const std::string& label2 = "E2");

enum class ReportFormat { csv, json };
std::string emit_report(const TwistReport& report, ReportFormat format);
TwistReport parse_report_json(const std::string& text);
std::vector<TwistRow> parse_report_csv(const std::string& text);

struct XPrimeCertificate {
    Int q;
    Int q_star;  // +-q with q_star = 1 mod 4
    std::vector<FpFactor> g1_factors;
    std::vector<FpFactor> g2_factors;
    std::map<Int, int> kronecker_at_S;  // odd l in S -> kronecker(q_star, l)
    bool disc_product_square = false;   // disc(g1) disc(g2) is a square mod q
};

struct XPrimeSearch {
    std::vector<Int> S;
    std::vector<XPrimeCertificate> primes;
    bool budget_exhausted = false;
    std::string warning;
};
/// Primes q <= budget with g1 split, g2 irreducible mod q, q not in S, q_star = 1 mod 8,
/// q_star > 0 and kronecker(q_star, l) = 1 for odd l in S. Stops after max_count primes.
XPrimeSearch find_X_primes(const WeierstrassCurve& c1, const WeierstrassCurve& c2, long budget,
                           std::size_t max_count = 32);
/// Recomputes every condition of the certificate from scratch.
bool verify_X_prime(const XPrimeCertificate& cert, const PolyQ& g1, const PolyQ& g2, const std::vector<Int>& S);

struct DivergenceStep {
    Int q;
    Int q_star;
    Int d;  // twist tried at this step
    int dim1 = 0;
    int dim2 = 0;
    int gap = 0;  // dim1 - dim2
    int local_dim1 = 0;  // local image dims at q
    int local_dim2 = 0;
    bool accepted = false;
    bool expected_pattern = false;  // dim1 rose by 2 and dim2 stayed
    std::string notes;
};

struct CharacterSearchState {
    std::vector<Int> S;
    std::vector<XPrimeCertificate> found_primes;
    Int d = 1;
    int dim1 = 0;
    int dim2 = 0;
    int gap = 0;
    int target_gap = 0;
    bool success = false;
    std::vector<DivergenceStep> history;
    std::string message;
};
CharacterSearchState divergence_experiment(const WeierstrassCurve& c1, const WeierstrassCurve& c2, int target_gap,
                                           long budget, const Int& field_cap = Int(1000000));

std::string to_json(const CongruenceVerdict& v);
std::string to_json(const HypothesisReport& r);
std::string to_json(const ApplicabilityReport& a);
std::string to_json(const SelmerResult& r);
std::string to_json(const CharacterSearchState& s);
std::string to_json(const XPrimeSearch& s);
std::string to_json(const CurveRecord& r);

}  // namespace selcomp
