// Command line front end for the selcomp library.

#include "selcomp/congruence.hpp"
#include "selcomp/cubicfield.hpp"
#include "selcomp/descent.hpp"
#include "selcomp/error.hpp"
#include "selcomp/lab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace selcomp;

namespace {

struct Globals {
    std::string config_path;
    std::string cache_dir;
    bool offline = false;
};

LabConfig make_config(const Globals& g)
{
    LabConfig c = g.config_path.empty() ? LabConfig{} : load_config(g.config_path);
    if (!g.cache_dir.empty()) c.cache_dir = g.cache_dir;
    if (g.offline) c.offline = true;
    return c;
}

struct NamedCurve {
    std::string name;
    WeierstrassCurve curve;
};

// A curve is a label, a path to a record JSON file, or an inline "[a1,a2,a3,a4,a6]".
NamedCurve resolve_curve(const std::string& spec, const LabConfig& config)
{
    if (!spec.empty() && spec.front() == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(spec);
        } catch (const std::exception&) {
            throw precondition_error("cannot parse a-invariants " + spec);
        }
        if (!j.is_array() || j.size() != 5) throw precondition_error("a-invariants need exactly five entries");
        std::array<Rat, 5> a;
        for (std::size_t i = 0; i < 5; ++i) {
            if (j[i].is_number_integer())
                a[i] = Rat(std::to_string(j[i].get<long long>()));
            else if (j[i].is_string())
                a[i] = parse_rational(j[i].get<std::string>());
            else
                throw precondition_error("a-invariant " + std::to_string(i + 1) + " is not a number");
        }
        return {spec, WeierstrassCurve(a[0], a[1], a[2], a[3], a[4])};
    }
    if (std::filesystem::exists(spec)) {
        std::ifstream in(spec);
        std::ostringstream ss;
        ss << in.rdbuf();
        CurveRecord r = record_from_json(ss.str());
        return {r.label, curve_from_record(r)};
    }
    CurveRecord r = lmfdb_fetch(spec, config);
    return {r.label, curve_from_record(r)};
}

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw precondition_error("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mod-2 congruences, 2-Selmer groups of quadratic twists and Selmer divergence experiments"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "key = value configuration file");
    app.add_option("--cache-dir", g.cache_dir, "fixture cache directory");
    app.add_flag("--offline", g.offline, "serve curve records from the cache only");

    std::string label;
    auto* fetch = app.add_subcommand("fetch", "fetch a curve record and store it in the cache");
    fetch->add_option("label", label, "curve label such as 158.a1")->required();

    std::string spec1, spec2, output;
    std::vector<long> extra;
    auto* cong = app.add_subcommand("congruence", "check a_q(E1) = a_q(E2) mod 2 up to the Sturm bound");
    cong->add_option("curve1", spec1)->required();
    cong->add_option("curve2", spec2)->required();
    cong->add_option("--extra", extra, "additional primes to compare");

    long field_d = 0;
    auto* hyp = app.add_subcommand("hypotheses", "report the hypotheses of the companion theorem");
    hyp->add_option("curve1", spec1)->required();
    hyp->add_option("curve2", spec2)->required();
    hyp->add_option("--field", field_d, "also report applicability over Q(sqrt(d))");

    long twist = 1;
    auto* sel = app.add_subcommand("selmer", "2-Selmer group of a curve or one of its quadratic twists");
    sel->add_option("curve", spec1)->required();
    sel->add_option("--twist", twist, "squarefree twist parameter d");

    long range = 0;
    bool coprime = false;
    int workers = 0, constant = 0;
    std::string format = "csv";
    auto* scan = app.add_subcommand("scan", "compare 2-Selmer dimensions over the quadratic twist family");
    scan->add_option("curve1", spec1)->required();
    scan->add_option("curve2", spec2)->required();
    scan->add_option("--range", range, "scan squarefree d with |d| <= range")->required()->check(CLI::NonNegativeNumber);
    scan->add_flag("--coprime-to-conductors", coprime, "skip d sharing a prime with either conductor");
    scan->add_option("--workers", workers, "worker threads (default from config)")->check(CLI::NonNegativeNumber);
    scan->add_option("--congruence-constant", constant, "constant added to the asserted gap bound")
        ->check(CLI::NonNegativeNumber);
    scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    scan->add_option("-o,--output", output, "write the report here instead of stdout");

    int target_gap = 2;
    long budget = 0;
    auto* div = app.add_subcommand("diverge", "grow the Selmer gap by twisting at X-primes");
    div->add_option("curve1", spec1)->required();
    div->add_option("curve2", spec2)->required();
    div->add_option("--target-gap", target_gap)->check(CLI::NonNegativeNumber);
    div->add_option("--budget", budget, "prime bound for the X-prime search (default from config)")
        ->check(CLI::PositiveNumber);
    div->add_option("-o,--output", output);

    std::string poly, check_file;
    auto* fd = app.add_subcommand("fielddata", "class groups and units of the descent fields");
    auto* fd_curve = fd->add_option("--curve", spec1, "use the descent cubic of this curve");
    auto* fd_poly = fd->add_option("--poly", poly, "use this monic integral polynomial");
    auto* fd_check = fd->add_option("--check", check_file, "validate an external field data JSON file");
    fd_curve->excludes(fd_poly);
    fd_check->excludes(fd_curve)->excludes(fd_poly);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        LabConfig config = make_config(g);
        if (*fetch) {
            std::cout << to_json(lmfdb_fetch(label, config));
        } else if (*cong) {
            auto c1 = resolve_curve(spec1, config), c2 = resolve_curve(spec2, config);
            std::vector<Int> ex;
            for (long p : extra) ex.emplace_back(p);
            std::cout << to_json(check_mod2_congruence(c1.curve, c2.curve, ex));
        } else if (*hyp) {
            auto c1 = resolve_curve(spec1, config), c2 = resolve_curve(spec2, config);
            std::cout << to_json(check_hypotheses(c1.curve, c2.curve));
            if (field_d != 0)
                std::cout << to_json(theorem_applicability(c1.curve, c2.curve, SquarefreeInt(Int(field_d))));
        } else if (*sel) {
            auto c = resolve_curve(spec1, config);
            if (twist == 0) throw precondition_error("twist parameter must be nonzero");
            std::cout << to_json(two_selmer_twist(c.curve, Int(twist), config.minkowski_cap));
        } else if (*scan) {
            // Records are fetched here, before any worker starts.
            auto c1 = resolve_curve(spec1, config), c2 = resolve_curve(spec2, config);
            ScanOptions opts;
            opts.range = range;
            opts.coprime_to_conductors = coprime;
            opts.workers = workers > 0 ? workers : config.scan_workers;
            opts.congruence_constant = constant;
            opts.field_cap = config.minkowski_cap;
            TwistReport r = companion_scan(c1.curve, c2.curve, opts, c1.name, c2.name);
            write_output(emit_report(r, format == "json" ? ReportFormat::json : ReportFormat::csv), output);
            if (r.bound_violations > 0) {
                std::cerr << "gap exceeded the near-companion bound " << r.bound << " on " << r.bound_violations
                          << " rows\n";
                return 1;
            }
        } else if (*div) {
            auto c1 = resolve_curve(spec1, config), c2 = resolve_curve(spec2, config);
            long b = budget > 0 ? budget : config.search_budget;
            CharacterSearchState st = divergence_experiment(c1.curve, c2.curve, target_gap, b, config.minkowski_cap);
            write_output(to_json(st), output);
            if (!st.success) return 3;
        } else if (*fd) {
            if (!check_file.empty()) {
                std::ifstream in(check_file);
                if (!in) throw precondition_error("cannot read " + check_file);
                std::ostringstream ss;
                ss << in.rdbuf();
                std::cout << class_unit_data_to_json(class_unit_data_from_json(ss.str()));
                return 0;
            }
            PolyQ f;
            if (!poly.empty())
                f = PolyQ::parse(poly);
            else if (!spec1.empty())
                f = descent_cubic(resolve_curve(spec1, config).curve);
            else
                throw precondition_error("fielddata needs --curve, --poly or --check");
            EtaleAlgebra alg(f, config.minkowski_cap);
            nlohmann::ordered_json out = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < alg.component_count(); ++i) {
                if (alg.factor(i).degree() == 1) continue;
                out.push_back(nlohmann::ordered_json::parse(
                    class_unit_data_to_json(class_group_and_units(alg.factor(i), config.minkowski_cap))));
            }
            std::cout << out.dump(2) << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
