#include "selcomp/error.hpp"
#include "selcomp/lab.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace selcomp {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json int_json(const Int& n)
{
    if (n.fits_slong_p()) return n.get_si();
    return n.get_str();
}

Int json_int(const json& j)
{
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    if (j.is_string()) return Int(j.get<std::string>());
    throw precondition_error("report field is not an integer");
}

std::string rat_string(const Rat& q) { return q.get_str(); }

ordered_json ints(const std::vector<Int>& v)
{
    ordered_json a = ordered_json::array();
    for (const Int& x : v) a.push_back(int_json(x));
    return a;
}

ordered_json strings(const std::vector<std::string>& v)
{
    ordered_json a = ordered_json::array();
    for (const auto& s : v) a.push_back(s);
    return a;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                out.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.emplace_back();
        } else {
            out.back() += ch;
        }
    }
    if (quoted) throw precondition_error("unterminated quote in CSV line");
    return out;
}

bool report_order(const TwistRow& a, const TwistRow& b)
{
    Int aa = abs(a.d), bb = abs(b.d);
    if (aa != bb) return aa < bb;
    return a.d < b.d;
}

ordered_json poly_factors(const std::vector<FpFactor>& fs)
{
    ordered_json a = ordered_json::array();
    for (const FpFactor& f : fs) a.push_back({{"factor", f.factor.to_string()}, {"multiplicity", f.multiplicity}});
    return a;
}

ordered_json cert_json(const XPrimeCertificate& c)
{
    ordered_json kr = ordered_json::object();
    for (const auto& [l, k] : c.kronecker_at_S) kr[l.get_str()] = k;
    return {{"q", int_json(c.q)},
            {"q_star", int_json(c.q_star)},
            {"g1_factors", poly_factors(c.g1_factors)},
            {"g2_factors", poly_factors(c.g2_factors)},
            {"kronecker_at_S", kr},
            {"disc_product_square", c.disc_product_square}};
}

ordered_json curve_hyp_json(const CurveHypotheses& h)
{
    ordered_json II = ordered_json::object();
    for (const auto& [l, s] : h.hyp_II) II[l.get_str()] = to_string(s);
    ordered_json local = ordered_json::array();
    for (const LocalReductionData& d : h.local_data)
        local.push_back({{"prime", int_json(d.prime)},
                         {"kodaira", d.kodaira},
                         {"conductor_exponent", d.conductor_exponent},
                         {"ord_delta_min", d.ord_delta_min},
                         {"reduction", to_string(d.reduction_kind)}});
    return {{"conductor", int_json(h.conductor)},
            {"residual_irreducible", h.residual_irreducible},
            {"ramified_at_2", h.ramified_at_2},
            {"two_ordinary", h.two_ordinary},
            {"hyp_II", II},
            {"local_data", local}};
}

std::string ainvs_string(const WeierstrassCurve& c)
{
    std::string s = "[";
    for (std::size_t i = 0; i < 5; ++i) s += (i ? "," : "") + c.ainvs()[i].get_str();
    return s + "]";
}

}  // namespace

std::string emit_report(const TwistReport& report, ReportFormat format)
{
    std::vector<TwistRow> rows = report.rows;
    std::stable_sort(rows.begin(), rows.end(), report_order);
    if (format == ReportFormat::csv) {
        std::string out = "d,dim1,dim2,equal,gap,notes\n";
        for (const TwistRow& r : rows) {
            out += r.d.get_str() + ",";
            if (r.ok)
                out += std::to_string(r.dim1) + "," + std::to_string(r.dim2) + "," + (r.equal ? "true" : "false") + "," +
                       std::to_string(r.gap) + ",";
            else
                out += ",,,,";
            out += csv_field(r.notes) + "\n";
        }
        return out;
    }
    ordered_json rj = ordered_json::array();
    for (const TwistRow& r : rows) {
        ordered_json row = {{"d", int_json(r.d)}, {"ok", r.ok}};
        if (r.ok) {
            row["dim1"] = r.dim1;
            row["dim2"] = r.dim2;
            row["equal"] = r.equal;
            row["gap"] = r.gap;
        } else {
            row["dim1"] = nullptr;
            row["dim2"] = nullptr;
            row["equal"] = nullptr;
            row["gap"] = nullptr;
        }
        row["notes"] = r.notes;
        rj.push_back(row);
    }
    ordered_json j = {{"label1", report.label1},
                      {"label2", report.label2},
                      {"congruence", report.congruence},
                      {"bound", report.bound},
                      {"bound_asserted", report.bound_asserted},
                      {"rows", rj},
                      {"summary",
                       {{"rows", rows.size()},
                        {"max_gap", report.max_gap},
                        {"equal_rows", report.equal_rows},
                        {"error_rows", report.error_rows},
                        {"bound_violations", report.bound_violations}}}};
    return j.dump(2) + "\n";
}

TwistReport parse_report_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw precondition_error(std::string("report is not JSON: ") + e.what());
    }
    try {
        TwistReport r;
        r.label1 = j.at("label1").get<std::string>();
        r.label2 = j.at("label2").get<std::string>();
        r.congruence = j.at("congruence").get<std::string>();
        r.bound = j.at("bound").get<int>();
        r.bound_asserted = j.at("bound_asserted").get<bool>();
        const json& s = j.at("summary");
        r.max_gap = s.at("max_gap").get<int>();
        r.equal_rows = s.at("equal_rows").get<int>();
        r.error_rows = s.at("error_rows").get<int>();
        r.bound_violations = s.at("bound_violations").get<int>();
        for (const json& row : j.at("rows")) {
            TwistRow t;
            t.d = json_int(row.at("d"));
            t.ok = row.at("ok").get<bool>();
            if (t.ok) {
                t.dim1 = row.at("dim1").get<int>();
                t.dim2 = row.at("dim2").get<int>();
                t.equal = row.at("equal").get<bool>();
                t.gap = row.at("gap").get<int>();
            }
            t.notes = row.at("notes").get<std::string>();
            r.rows.push_back(std::move(t));
        }
        return r;
    } catch (const json::exception& e) {
        throw precondition_error(std::string("malformed report: ") + e.what());
    }
}

std::vector<TwistRow> parse_report_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "d,dim1,dim2,equal,gap,notes")
        throw precondition_error("CSV report must start with the header d,dim1,dim2,equal,gap,notes");
    std::vector<TwistRow> rows;
    std::string pending;
    while (std::getline(in, line)) {
        pending += line;
        if (std::count(pending.begin(), pending.end(), '"') % 2 == 1) {
            pending += "\n";
            continue;
        }
        std::vector<std::string> f = csv_split(pending);
        pending.clear();
        if (f.size() != 6) throw precondition_error("CSV row must have 6 fields");
        TwistRow r;
        r.d = Int(f[0]);
        r.ok = !f[1].empty();
        if (r.ok) {
            r.dim1 = std::stoi(f[1]);
            r.dim2 = std::stoi(f[2]);
            r.equal = f[3] == "true";
            r.gap = std::stoi(f[4]);
        }
        r.notes = f[5];
        rows.push_back(std::move(r));
    }
    if (!pending.empty()) throw precondition_error("CSV report ends inside a quoted field");
    return rows;
}

std::string to_json(const CongruenceVerdict& v)
{
    ordered_json traces = ordered_json::object();
    for (const auto& [q, t] : v.traces) traces[q.get_str()] = {int_json(t.first), int_json(t.second)};
    ordered_json j = {{"level", int_json(v.level)},
                      {"sturm_bound", rat_string(v.sturm_bound)},
                      {"sturm_bound_approx", v.sturm_bound.get_d()},
                      {"verdict", to_string(v.verdict)},
                      {"primes_checked", ints(v.primes_checked)},
                      {"traces", traces}};
    j["witness"] = v.witness ? int_json(*v.witness) : ordered_json(nullptr);
    return j.dump(2) + "\n";
}

std::string to_json(const HypothesisReport& r)
{
    ordered_json II = ordered_json::object();
    for (const auto& [l, s] : r.hyp_II_per_prime) II[l.get_str()] = to_string(s);
    ordered_json j = {{"level_odd_squarefree", r.level_odd_squarefree},
                      {"hyp_I_III", r.hyp_I_III},
                      {"hyp_II", II},
                      {"clause_i_b_over_Q", r.clause_i_b_over_Q},
                      {"curve1", curve_hyp_json(r.curve1)},
                      {"curve2", curve_hyp_json(r.curve2)},
                      {"notes", strings(r.notes)}};
    return j.dump(2) + "\n";
}

std::string to_json(const ApplicabilityReport& a)
{
    ordered_json ram = ordered_json::object();
    for (const auto& [l, s] : a.bad_prime_ramification) ram[l.get_str()] = s == Ramification::ramified ? "ramified" : "unramified";
    ordered_json j = {{"d", int_json(a.d)},
                      {"has_real_place", a.has_real_place},
                      {"bad_prime_ramification", ram},
                      {"residual_isomorphic", a.residual_isomorphic},
                      {"ramified_above_2", a.ramified_above_2},
                      {"clause", a.clause},
                      {"notes", strings(a.notes)}};
    return j.dump(2) + "\n";
}

std::string to_json(const SelmerResult& r)
{
    ordered_json basis = ordered_json::array();
    for (const SelmerClass& c : r.basis) {
        ordered_json comps = ordered_json::array();
        for (const FieldElt& e : c.components) {
            ordered_json coords = ordered_json::array();
            for (const Rat& x : e) coords.push_back(rat_string(x));
            comps.push_back(coords);
        }
        basis.push_back(comps);
    }
    ordered_json locals = ordered_json::array();
    for (const LocalImage& li : r.local_images) {
        ordered_json xs = ordered_json::array();
        for (const Rat& x : li.sample_x) xs.push_back(rat_string(x));
        locals.push_back({{"place", li.place.to_string()}, {"dim", li.dim}, {"sample_x", xs}});
    }
    ordered_json j = {{"curve", ainvs_string(r.curve)},
                      {"d", int_json(r.d)},
                      {"S", ints(r.S)},
                      {"dim", r.dim},
                      {"torsion_floor", r.torsion_floor},
                      {"basis", basis},
                      {"local_images", locals}};
    return j.dump(2) + "\n";
}

std::string to_json(const XPrimeSearch& s)
{
    ordered_json ps = ordered_json::array();
    for (const XPrimeCertificate& c : s.primes) ps.push_back(cert_json(c));
    ordered_json j = {{"S", ints(s.S)}, {"primes", ps}, {"budget_exhausted", s.budget_exhausted}, {"warning", s.warning}};
    return j.dump(2) + "\n";
}

std::string to_json(const CharacterSearchState& s)
{
    ordered_json found = ordered_json::array();
    for (const XPrimeCertificate& c : s.found_primes) found.push_back(cert_json(c));
    ordered_json hist = ordered_json::array();
    for (const DivergenceStep& st : s.history)
        hist.push_back({{"q", int_json(st.q)},
                        {"q_star", int_json(st.q_star)},
                        {"d", int_json(st.d)},
                        {"dim1", st.dim1},
                        {"dim2", st.dim2},
                        {"gap", st.gap},
                        {"local_dim1", st.local_dim1},
                        {"local_dim2", st.local_dim2},
                        {"accepted", st.accepted},
                        {"expected_pattern", st.expected_pattern},
                        {"notes", st.notes}});
    ordered_json j = {{"S", ints(s.S)},
                      {"d", int_json(s.d)},
                      {"dim1", s.dim1},
                      {"dim2", s.dim2},
                      {"gap", s.gap},
                      {"target_gap", s.target_gap},
                      {"success", s.success},
                      {"message", s.message},
                      {"history", hist},
                      {"found_primes", found}};
    return j.dump(2) + "\n";
}

std::string to_json(const CurveRecord& r) { return record_to_json(r); }

}  // namespace selcomp
