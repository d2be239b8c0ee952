#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selcomp/error.hpp"
#include "selcomp/lab.hpp"

#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

using namespace selcomp;
namespace fs = std::filesystem;

namespace {

const WeierstrassCurve kE1 = WeierstrassCurve::from_ainvs({1, 1, 0, -3, 1});
const WeierstrassCurve kE2 = WeierstrassCurve::from_ainvs({1, 0, 1, -5217, -145452});
const WeierstrassCurve kToy1 = WeierstrassCurve::from_ainvs({0, 0, 0, -1, 0});
const WeierstrassCurve kToy2 = WeierstrassCurve::from_ainvs({0, 0, 0, -1, 1});

fs::path fresh_dir(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("selcomp-test-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

// Serves canned bodies for ec_curvedata queries and records request times.
class MockLmfdb {
public:
    MockLmfdb()
    {
        server_.Get("/api/ec_curvedata/", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard<std::mutex> lock(mutex_);
            times_.push_back(std::chrono::steady_clock::now());
            std::string label = req.get_param_value("lmfdb_label");
            auto it = bodies_.find(label);
            std::string body = it == bodies_.end() ? R"({"data": []})" : it->second;
            res.set_content(body, "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockLmfdb()
    {
        server_.stop();
        thread_.join();
    }
    void set(const std::string& label, const std::string& body)
    {
        std::lock_guard<std::mutex> lock(mutex_);
        bodies_[label] = body;
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    std::vector<std::chrono::steady_clock::time_point> times()
    {
        std::lock_guard<std::mutex> lock(mutex_);
        return times_;
    }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::mutex mutex_;
    std::map<std::string, std::string> bodies_;
    std::vector<std::chrono::steady_clock::time_point> times_;
};

std::string api_body(const std::string& label, const std::string& ainvs, const std::string& conductor,
                     const std::string& extra = "")
{
    return R"({"data": [{"lmfdb_label": ")" + label + R"(", "ainvs": )" + ainvs + R"(, "conductor": )" + conductor +
           extra + "}]}";
}

bool is_prime_ref(long n)
{
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long powmod(long b, long e, long m)
{
    long r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = static_cast<long>((__int128)r * b % m);
        b = static_cast<long>((__int128)b * b % m);
        e >>= 1;
    }
    return r;
}

}  // namespace

TEST_CASE("config parsing")
{
    LabConfig c = parse_config("# comment\nlmfdb_base_url = http://x\ncache_dir=/tmp/c\nminkowski_cap = 5000\n"
                               "precision_start = 32\nscan_workers = 4\nsearch_budget = 777\n");
    CHECK(c.lmfdb_base_url == "http://x");
    CHECK(c.cache_dir == "/tmp/c");
    CHECK(c.minkowski_cap == 5000);
    CHECK(c.precision_start == 32);
    CHECK(c.scan_workers == 4);
    CHECK(c.search_budget == 777);
    CHECK_THROWS_AS(parse_config("colour = blue\n"), Error);
    CHECK_THROWS_AS(parse_config("scan_workers = two\n"), Error);
    CHECK_THROWS_AS(parse_config("scan_workers\n"), Error);
    CHECK_THROWS_AS(parse_config("scan_workers = 0\n"), Error);
}

TEST_CASE("labels and records")
{
    CHECK(is_curve_label("158.a1"));
    CHECK(is_curve_label("5077.abc12"));
    CHECK_FALSE(is_curve_label("158a1"));
    CHECK_FALSE(is_curve_label("158.A1"));
    CHECK_FALSE(is_curve_label("0158.a1"));
    CHECK_FALSE(is_curve_label("158.a0"));

    CurveRecord r;
    r.label = "158.a1";
    r.ainvs = {Int(1), Int(1), Int(0), Int(-3), Int(1)};
    r.conductor = 158;
    r.aq[Int(3)] = -1;
    r.source = "test";
    CurveRecord back = record_from_json(record_to_json(r));
    CHECK(back.label == r.label);
    CHECK(back.ainvs == r.ainvs);
    CHECK(back.conductor == r.conductor);
    CHECK(back.aq == r.aq);
    CHECK(curve_from_record(back) == kE1);
    CHECK_THROWS_AS(record_from_json(R"({"label": "1.a1", "ainvs": [0,0,0,0,1], "conductor": 36, "source": "", "rank": 0})"),
                    Error);
    CHECK_THROWS_AS(record_from_json(R"({"label": "1.a1", "ainvs": [0,0,0,1], "conductor": 36, "source": ""})"), Error);
    CHECK_THROWS_AS(record_from_json(R"({"label": "1.a1", "ainvs": [0,0,0,0,"x"], "conductor": 36, "source": ""})"),
                    Error);
}

TEST_CASE("pinned fixture records are served offline")
{
    LabConfig c;
    c.cache_dir = std::string(SELCOMP_FIXTURES) + "/lmfdb";
    c.offline = true;
    CurveRecord a = lmfdb_fetch("158.a1", c);
    CHECK(a.conductor == 158);
    CHECK(a.ainvs == std::array<Int, 5>{Int(1), Int(1), Int(0), Int(-3), Int(1)});
    CurveRecord b = lmfdb_fetch("158.b1", c);
    CHECK(curve_from_record(b) == kE2);
    CHECK(conductor(curve_from_record(b)) == b.conductor);
    try {
        lmfdb_fetch("158.z9", c);
        FAIL("offline miss must fail");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::network);
    }
    try {
        lmfdb_fetch("not-a-label", c);
        FAIL("malformed label must fail");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::precondition);
    }
}

TEST_CASE("cache digests guard against tampering")
{
    fs::path dir = fresh_dir("cache");
    FixtureCache cache(dir.string());
    CHECK_FALSE(cache.load("11.a1"));
    CurveRecord r;
    r.label = "11.a1";
    r.ainvs = {Int(0), Int(-1), Int(1), Int(-7820), Int(-263580)};
    r.conductor = 11;
    r.source = "test";
    cache.store(r);
    REQUIRE(cache.load("11.a1"));
    CHECK(cache.load("11.a1")->ainvs == r.ainvs);
    {
        std::ofstream out(dir / "11.a1.json", std::ios::app);
        out << " ";
    }
    try {
        cache.load("11.a1");
        FAIL("tampered entry accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::network);
    }
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    fs::remove_all(dir);
}

TEST_CASE("fetching through the API")
{
    MockLmfdb mock;
    mock.set("158.a1", api_body("158.a1", "[1, 1, 0, -3, 1]", "158"));
    mock.set("11.a1", api_body("11.a1", "[0, -1, 1, -7820, -263580]", "11"));
    mock.set("37.a1", api_body("37.a1", "[0, 0, 1, -1, 0]", "37", R"(, "rank": 1)"));
    mock.set("43.a1", api_body("43.a1", "[0, 1, 1, 0, 0]", "44"));
    fs::path dir = fresh_dir("fetch");
    LabConfig c;
    c.lmfdb_base_url = mock.url();
    c.cache_dir = dir.string();

    CurveRecord r = lmfdb_fetch("158.a1", c);
    CHECK(r.conductor == 158);
    CHECK(curve_from_record(r) == kE1);
    CHECK(FixtureCache(dir.string()).load("158.a1"));
    lmfdb_fetch("11.a1", c);

    auto kind_of = [&](const std::string& label) {
        try {
            lmfdb_fetch(label, c);
        } catch (const Error& e) {
            return e.kind();
        }
        FAIL("fetch of " << label << " did not fail");
        return ErrorKind::budget;
    };
    CHECK(kind_of("158.z9") == ErrorKind::precondition);  // empty result set
    CHECK(kind_of("37.a1") == ErrorKind::network);        // unexpected field
    CHECK(kind_of("43.a1") == ErrorKind::network);        // conductor does not match the curve

    auto times = mock.times();
    REQUIRE(times.size() == 5);
    for (std::size_t i = 1; i < times.size(); ++i)
        CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(times[i] - times[i - 1]).count() >= 490);

    // Served from the cache without touching the server, also offline.
    c.offline = true;
    CHECK(lmfdb_fetch("158.a1", c).conductor == 158);
    CHECK(mock.times().size() == 5);
    CHECK(kind_of("5077.a1") == ErrorKind::network);
    fs::remove_all(dir);
}

TEST_CASE("an unreachable server is a network error")
{
    fs::path dir = fresh_dir("down");
    LabConfig c;
    c.lmfdb_base_url = "http://127.0.0.1:1";
    c.cache_dir = dir.string();
    try {
        lmfdb_fetch("11.a1", c);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::network);
    }
}

TEST_CASE("report serialization")
{
    TwistReport empty;
    CHECK(emit_report(empty, ReportFormat::csv) == "d,dim1,dim2,equal,gap,notes\n");
    CHECK(parse_report_csv(emit_report(empty, ReportFormat::csv)).empty());

    TwistReport one;
    one.rows.push_back({Int(-3), true, 1, 0, false, 1, ""});
    std::string csv = emit_report(one, ReportFormat::csv);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv == "d,dim1,dim2,equal,gap,notes\n-3,1,0,false,1,\n");

    TwistReport r;
    r.label1 = "A";
    r.label2 = "B";
    r.congruence = "congruent";
    r.bound = 12;
    r.bound_asserted = true;
    r.rows.push_back({Int(5), true, 2, 2, true, 0, ""});
    r.rows.push_back({Int(-5), true, 3, 1, false, 2, "a, \"quoted\" note"});
    r.rows.push_back({Int(1), false, 0, 0, false, 0, "descent failed"});
    r.rows.push_back({Int(-1), true, 0, 0, true, 0, ""});
    r.max_gap = 2;
    r.equal_rows = 2;
    r.error_rows = 1;

    std::vector<TwistRow> rows = parse_report_csv(emit_report(r, ReportFormat::csv));
    REQUIRE(rows.size() == 4);
    // Ordered by |d|, negative first.
    CHECK(rows[0].d == -1);
    CHECK(rows[1].d == 1);
    CHECK(rows[2].d == -5);
    CHECK(rows[3].d == 5);
    CHECK_FALSE(rows[1].ok);
    CHECK(rows[1].notes == "descent failed");
    CHECK(rows[2].notes == "a, \"quoted\" note");
    CHECK(rows[2].gap == 2);

    TwistReport back = parse_report_json(emit_report(r, ReportFormat::json));
    CHECK(back.label1 == "A");
    CHECK(back.bound == 12);
    CHECK(back.bound_asserted);
    CHECK(back.max_gap == 2);
    CHECK(back.error_rows == 1);
    REQUIRE(back.rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(back.rows[i].d == rows[i].d);
        CHECK(back.rows[i].ok == rows[i].ok);
        CHECK(back.rows[i].dim1 == rows[i].dim1);
        CHECK(back.rows[i].dim2 == rows[i].dim2);
        CHECK(back.rows[i].equal == rows[i].equal);
        CHECK(back.rows[i].gap == rows[i].gap);
        CHECK(back.rows[i].notes == rows[i].notes);
    }
    CHECK(emit_report(back, ReportFormat::json) == emit_report(r, ReportFormat::json));
}

TEST_CASE("companion scans")
{
    ScanOptions o;
    o.range = 0;
    CHECK(companion_scan(kE1, kE2, o).rows.empty());

    o.range = 12;
    TwistReport self = companion_scan(kE1, kE1, o);
    CHECK(self.rows.size() == 16);
    CHECK(self.max_gap == 0);
    CHECK(self.equal_rows == 16);
    CHECK(self.congruence == "congruent");

    o.coprime_to_conductors = true;
    o.workers = 1;
    TwistReport serial = companion_scan(kE1, kE2, o, "158.a1", "158.b1");
    o.workers = 4;
    TwistReport parallel = companion_scan(kE1, kE2, o, "158.a1", "158.b1");
    CHECK(emit_report(serial, ReportFormat::json) == emit_report(parallel, ReportFormat::json));
    for (const TwistRow& row : serial.rows) {
        CHECK(row.ok);
        CHECK(gcd(row.d, Int(158)) == 1);
        CHECK(row.gap == std::abs(row.dim1 - row.dim2));
        CHECK(row.gap <= serial.bound);
    }
    CHECK(serial.bound_asserted);
    CHECK(serial.bound_violations == 0);

    // Different conductors: no verdict, nothing asserted.
    TwistReport free = companion_scan(kE1, kToy2, o);
    CHECK(free.congruence == "undecided");
    CHECK_FALSE(free.bound_asserted);
}

TEST_CASE("X-primes for the toy pair")
{
    XPrimeSearch s = find_X_primes(kToy1, kToy2, 400);
    CHECK(s.S == std::vector<Int>{Int(2), Int(23)});
    // Independent sieve: q = 1 mod 8, q a square mod 23, x^3 - x - 1... shifted cubic has no root mod q.
    std::vector<Int> expected;
    for (long q = 3; q <= 400; ++q) {
        if (!is_prime_ref(q) || q % 8 != 1 || q == 23) continue;
        if (powmod(q % 23, 11, 23) != 1) continue;
        bool root = false;
        for (long x = 0; x < q && !root; ++x) root = ((x * x % q) * x % q - 16 * x % q + 64 + 2 * q) % q == 0;
        if (!root) expected.push_back(Int(q));
    }
    std::vector<Int> got;
    for (const auto& c : s.primes) got.push_back(c.q);
    CHECK(got == expected);
    CHECK(got == std::vector<Int>{Int(41), Int(73), Int(193), Int(233), Int(257), Int(353)});
    CHECK(s.budget_exhausted);
    CHECK_FALSE(s.warning.empty());

    PolyQ g1 = descent_cubic(kToy1), g2 = descent_cubic(kToy2);
    for (const auto& c : s.primes) CHECK(verify_X_prime(c, g1, g2, s.S));
    XPrimeCertificate forged = s.primes.front();
    forged.q = 17;
    forged.q_star = 17;
    CHECK_FALSE(verify_X_prime(forged, g1, g2, s.S));
    XPrimeCertificate swapped = s.primes.front();
    CHECK_FALSE(verify_X_prime(swapped, g2, g1, s.S));

    CHECK_THROWS_AS(find_X_primes(kE1, kE2, 1000), Error);
}

TEST_CASE("divergence experiment")
{
    CharacterSearchState zero = divergence_experiment(kToy1, kToy2, 0, 1000);
    CHECK(zero.success);
    CHECK(zero.history.empty());

    CharacterSearchState st = divergence_experiment(kToy1, kToy2, 2, 100000);
    REQUIRE(st.success);
    CHECK(st.gap >= 2);
    REQUIRE_FALSE(st.history.empty());
    const DivergenceStep& last = st.history.back();
    CHECK(last.accepted);
    CHECK(last.local_dim1 == 2);
    CHECK(last.local_dim2 == 0);
    CHECK(last.expected_pattern);
    CHECK(two_selmer_twist(kToy1, st.d).dim == st.dim1);
    CHECK(two_selmer_twist(kToy2, st.d).dim == st.dim2);

    CharacterSearchState far = divergence_experiment(kToy1, kToy2, 5, 100000);
    CHECK(far.success);
    CHECK(far.gap >= 5);
    for (const DivergenceStep& step : far.history)
        if (step.accepted) CHECK(step.gap > 0);

    CHECK_THROWS_AS(divergence_experiment(kE1, kE2, 2, 1000), Error);
}
