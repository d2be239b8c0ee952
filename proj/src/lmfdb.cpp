#include "selcomp/error.hpp"
#include "selcomp/lab.hpp"

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

namespace selcomp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long parse_long(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw precondition_error("config key '" + key + "' needs an integer, got '" + value + "'");
    }
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw network_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& p, const std::string& data)
{
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw network_error("cannot write " + tmp.string());
        out << data;
    }
    fs::rename(tmp, p);
}

Int json_int(const json& j, const std::string& what)
{
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        const std::string& s = j.get_ref<const std::string&>();
        static const std::regex digits("-?[0-9]+");
        if (std::regex_match(s, digits)) return Int(s);
    }
    throw network_error("schema drift: " + what + " is not an integer");
}

json int_json(const Int& n)
{
    if (n.fits_slong_p()) return n.get_si();
    return n.get_str();
}

std::mutex rate_mutex;
std::chrono::steady_clock::time_point last_request{};

void respect_rate_limit()
{
    auto next = last_request + std::chrono::milliseconds(500);
    auto now = std::chrono::steady_clock::now();
    if (last_request.time_since_epoch().count() != 0 && now < next) std::this_thread::sleep_for(next - now);
    last_request = std::chrono::steady_clock::now();
}

CurveRecord record_from_api(const std::string& body, const std::string& label, const std::string& url)
{
    json j;
    try {
        j = json::parse(body);
    } catch (const std::exception& e) {
        throw network_error(std::string("schema drift: response is not JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("data") || !j["data"].is_array())
        throw network_error("schema drift: response lacks a 'data' array");
    const json& data = j["data"];
    if (data.empty()) throw precondition_error("unknown label " + label);
    if (data.size() != 1) throw network_error("schema drift: more than one record for " + label);
    const json& rec = data[0];
    if (!rec.is_object()) throw network_error("schema drift: record is not an object");
    for (const auto& [key, value] : rec.items()) {
        (void)value;
        if (key != "lmfdb_label" && key != "ainvs" && key != "conductor")
            throw network_error("schema drift: unexpected field '" + key + "'");
    }
    for (const char* key : {"lmfdb_label", "ainvs", "conductor"})
        if (!rec.contains(key)) throw network_error(std::string("schema drift: missing field '") + key + "'");
    if (!rec["lmfdb_label"].is_string() || rec["lmfdb_label"].get<std::string>() != label)
        throw network_error("schema drift: label mismatch");
    if (!rec["ainvs"].is_array() || rec["ainvs"].size() != 5) throw network_error("schema drift: ainvs must have 5 entries");
    CurveRecord r;
    r.label = label;
    for (std::size_t i = 0; i < 5; ++i) r.ainvs[i] = json_int(rec["ainvs"][i], "ainvs entry");
    r.conductor = json_int(rec["conductor"], "conductor");
    r.source = url;
    return r;
}

}  // namespace

LabConfig parse_config(const std::string& text)
{
    LabConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw precondition_error("config line " + std::to_string(lineno) + " has no '='");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key == "lmfdb_base_url")
            c.lmfdb_base_url = value;
        else if (key == "cache_dir")
            c.cache_dir = value;
        else if (key == "minkowski_cap")
            c.minkowski_cap = Int(parse_long(key, value));
        else if (key == "precision_start")
            c.precision_start = static_cast<int>(parse_long(key, value));
        else if (key == "scan_workers")
            c.scan_workers = static_cast<int>(parse_long(key, value));
        else if (key == "search_budget")
            c.search_budget = parse_long(key, value);
        else
            throw precondition_error("unknown config key '" + key + "'");
    }
    if (c.minkowski_cap < 1) throw precondition_error("minkowski_cap must be positive");
    if (c.precision_start < 8) throw precondition_error("precision_start must be at least 8");
    if (c.scan_workers < 1) throw precondition_error("scan_workers must be at least 1");
    if (c.search_budget < 1) throw precondition_error("search_budget must be positive");
    return c;
}

LabConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw precondition_error("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

bool is_curve_label(const std::string& label)
{
    static const std::regex re("[1-9][0-9]*\\.[a-z]+[1-9][0-9]*");
    return std::regex_match(label, re);
}

WeierstrassCurve curve_from_record(const CurveRecord& r)
{
    return WeierstrassCurve(Rat(r.ainvs[0]), Rat(r.ainvs[1]), Rat(r.ainvs[2]), Rat(r.ainvs[3]), Rat(r.ainvs[4]));
}

std::string record_to_json(const CurveRecord& r)
{
    json j;
    j["label"] = r.label;
    json a = json::array();
    for (const Int& x : r.ainvs) a.push_back(int_json(x));
    j["ainvs"] = a;
    j["conductor"] = int_json(r.conductor);
    if (!r.aq.empty()) {
        json aq = json::object();
        for (const auto& [q, v] : r.aq) aq[q.get_str()] = int_json(v);
        j["aq"] = aq;
    }
    j["source"] = r.source;
    return j.dump(2) + "\n";
}

CurveRecord record_from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw network_error(std::string("record is not JSON: ") + e.what());
    }
    if (!j.is_object()) throw network_error("record is not a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "label" && key != "ainvs" && key != "conductor" && key != "aq" && key != "source")
            throw network_error("record has unexpected field '" + key + "'");
    }
    for (const char* key : {"label", "ainvs", "conductor", "source"})
        if (!j.contains(key)) throw network_error(std::string("record lacks '") + key + "'");
    if (!j["label"].is_string() || !j["source"].is_string()) throw network_error("record label/source must be strings");
    if (!j["ainvs"].is_array() || j["ainvs"].size() != 5) throw network_error("record ainvs must have 5 entries");
    CurveRecord r;
    r.label = j["label"].get<std::string>();
    r.source = j["source"].get<std::string>();
    for (std::size_t i = 0; i < 5; ++i) r.ainvs[i] = json_int(j["ainvs"][i], "ainvs entry");
    r.conductor = json_int(j["conductor"], "conductor");
    if (j.contains("aq")) {
        if (!j["aq"].is_object()) throw network_error("record aq must be an object");
        for (const auto& [q, v] : j["aq"].items()) {
            Int Q;
            if (Q.set_str(q, 10) != 0 || !is_prime(Q)) throw network_error("record aq key '" + q + "' is not a prime");
            r.aq[Q] = json_int(v, "aq value");
        }
    }
    return r;
}

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

FixtureCache::FixtureCache(std::string dir) : dir_(std::move(dir)) {}

std::optional<CurveRecord> FixtureCache::load(const std::string& label) const
{
    fs::path manifest = fs::path(dir_) / "manifest.json";
    if (!fs::exists(manifest)) return std::nullopt;
    json m;
    try {
        m = json::parse(read_file(manifest));
    } catch (const json::exception& e) {
        throw network_error(std::string("cache manifest is corrupt: ") + e.what());
    }
    if (!m.contains("entries") || !m["entries"].contains(label)) return std::nullopt;
    const json& e = m["entries"][label];
    std::string file = e.value("file", ""), digest = e.value("sha256", "");
    if (file.empty() || file.find('/') != std::string::npos) throw network_error("cache manifest entry for " + label + " is malformed");
    std::string body = read_file(fs::path(dir_) / file);
    if (sha256_hex(body) != digest) throw network_error("cache entry for " + label + " does not match its digest");
    CurveRecord r = record_from_json(body);
    if (r.label != label) throw network_error("cache entry for " + label + " holds " + r.label);
    return r;
}

void FixtureCache::store(const CurveRecord& r) const
{
    fs::create_directories(dir_);
    std::string file = r.label + ".json";
    std::string body = record_to_json(r);
    write_file_atomic(fs::path(dir_) / file, body);
    fs::path manifest = fs::path(dir_) / "manifest.json";
    json m = {{"entries", json::object()}};
    if (fs::exists(manifest)) {
        try {
            m = json::parse(read_file(manifest));
        } catch (const json::exception&) {
            m = {{"entries", json::object()}};
        }
    }
    m["entries"][r.label] = {{"file", file}, {"sha256", sha256_hex(body)}};
    write_file_atomic(manifest, m.dump(2) + "\n");
}

CurveRecord lmfdb_fetch(const std::string& label, const LabConfig& config)
{
    if (!is_curve_label(label)) throw precondition_error("unknown label " + label + ": not of the form N.xk");
    FixtureCache cache(config.cache_dir);
    if (auto hit = cache.load(label)) return *hit;
    if (config.offline) throw network_error("offline mode and " + label + " is not cached in " + config.cache_dir);

    std::string path = "/api/ec_curvedata/?lmfdb_label=" + label + "&_format=json&_fields=lmfdb_label,ainvs,conductor";
    httplib::Result res;
    {
        std::lock_guard<std::mutex> lock(rate_mutex);
        respect_rate_limit();
        httplib::Client cli(config.lmfdb_base_url);
        cli.set_connection_timeout(10);
        cli.set_read_timeout(30);
        cli.set_follow_location(true);
        res = cli.Get(path);
    }
    if (!res) throw network_error("request to " + config.lmfdb_base_url + " failed: " + httplib::to_string(res.error()));
    if (res->status == 404) throw precondition_error("unknown label " + label);
    if (res->status != 200) throw network_error("LMFDB answered HTTP " + std::to_string(res->status));
    CurveRecord r = record_from_api(res->body, label, config.lmfdb_base_url + path);
    Int N = conductor(minimal_model(curve_from_record(r)));
    if (N != r.conductor)
        throw network_error("schema drift: stated conductor " + r.conductor.get_str() + " differs from the computed " + N.get_str());
    cache.store(r);
    return r;
}

}  // namespace selcomp
