#include "selcomp/cubicfield.hpp"

#include "selcomp/error.hpp"

#include <json.hpp>

#include <algorithm>

namespace selcomp {

namespace {

std::mutex engine_mutex;
std::map<std::string, std::shared_ptr<SUnitEngine>> engine_cache;

std::vector<std::string> elt_strings(const FieldElt& a)
{
    std::vector<std::string> out;
    for (const Rat& x : a) out.push_back(x.get_str());
    return out;
}

FieldElt elt_from(const nlohmann::json& j)
{
    FieldElt out;
    for (const auto& x : j) out.push_back(parse_rational(x.get<std::string>()));
    return out;
}

}  // namespace

std::shared_ptr<SUnitEngine> field_engine(const PolyQ& f, const Int& cap)
{
    std::string key = f.to_string();
    {
        std::lock_guard<std::mutex> lock(engine_mutex);
        auto it = engine_cache.find(key);
        if (it != engine_cache.end()) {
            if (abs(it->second->field().discriminant()) > cap)
                throw budget_error("field discriminant " + it->second->field().discriminant().get_str() +
                                   " exceeds the configured cap; supply external field data");
            return it->second;
        }
    }
    auto field = std::make_shared<const NumberField>(f);
    if (abs(field->discriminant()) > cap)
        throw budget_error("field discriminant " + field->discriminant().get_str() +
                           " exceeds the configured cap; supply external field data");
    auto engine = std::make_shared<SUnitEngine>(field);
    std::lock_guard<std::mutex> lock(engine_mutex);
    return engine_cache.emplace(key, engine).first->second;
}

ClassUnitData maximal_order(const PolyQ& g)
{
    NumberField F(g);
    ClassUnitData d;
    d.defining_poly = g;
    d.integral_basis = F.integral_basis();
    d.field_discriminant = F.discriminant();
    return d;
}

ClassUnitData class_group_and_units(const PolyQ& f, const Int& cap)
{
    auto engine = field_engine(f, cap);
    auto cg = engine->class_group();
    ClassUnitData d;
    d.defining_poly = f;
    d.integral_basis = engine->field().integral_basis();
    d.field_discriminant = engine->field().discriminant();
    d.class_number = cg.h;
    d.class_group_invariants = cg.invariants;
    d.class_group_2rank = cg.two_rank;
    d.class_gens = cg.generators;
    d.fundamental_units = cg.units;
    d.torsion_unit = cg.torsion_unit;
    d.certified = cg.certified && cg.units_saturated;
    d.source = "computed";
    return d;
}

std::string class_unit_data_to_json(const ClassUnitData& d)
{
    nlohmann::json j;
    j["defining_poly"] = d.defining_poly.to_string();
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& row : d.integral_basis) basis.push_back(elt_strings(row));
    j["integral_basis"] = basis;
    j["field_disc"] = d.field_discriminant.get_str();
    j["h"] = d.class_number.get_str();
    nlohmann::json inv = nlohmann::json::array();
    for (const Int& x : d.class_group_invariants) inv.push_back(x.get_str());
    j["class_group_invariants"] = inv;
    j["class_group_2rank"] = d.class_group_2rank;
    j["class_gens"] = d.class_gens;
    nlohmann::json units = nlohmann::json::array();
    for (const auto& u : d.fundamental_units) units.push_back(elt_strings(u));
    j["units"] = units;
    j["torsion_unit"] = elt_strings(d.torsion_unit);
    j["certified"] = d.certified;
    j["source"] = d.source;
    return j.dump(2);
}

ClassUnitData class_unit_data_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw precondition_error(std::string("field data JSON: ") + e.what());
    }
    for (const char* key : {"defining_poly", "integral_basis", "field_disc", "h", "class_gens", "units"})
        if (!j.contains(key)) throw precondition_error(std::string("field data JSON lacks '") + key + "'");
    ClassUnitData d;
    try {
        d.defining_poly = PolyQ::parse(j["defining_poly"].get<std::string>());
        for (const auto& row : j["integral_basis"]) d.integral_basis.push_back(elt_from(row));
        d.field_discriminant = Int(j["field_disc"].get<std::string>());
        d.class_number = Int(j["h"].get<std::string>());
        d.class_gens = j["class_gens"].get<std::vector<std::string>>();
        for (const auto& u : j["units"]) d.fundamental_units.push_back(elt_from(u));
        if (j.contains("class_group_invariants"))
            for (const auto& x : j["class_group_invariants"]) d.class_group_invariants.emplace_back(x.get<std::string>());
        if (j.contains("class_group_2rank")) d.class_group_2rank = j["class_group_2rank"].get<int>();
        if (j.contains("torsion_unit")) d.torsion_unit = elt_from(j["torsion_unit"]);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw precondition_error(std::string("field data JSON: ") + e.what());
    }
    d.certified = false;
    d.source = "unverified-external";
    return d;
}

EtaleAlgebra::EtaleAlgebra(const PolyQ& g, const Int& cap) : g_(g)
{
    if (g.degree() != 3 || !g.is_monic() || !g.has_integer_coeffs())
        throw precondition_error("etale algebra needs a monic integral cubic");
    if (poly_discriminant(g) == 0) throw precondition_error("etale algebra needs a separable cubic");
    auto roots = rational_roots(g);
    PolyQ rest = g;
    for (const Rat& r : roots) {
        PolyQ lin({-r, Rat(1)});
        factors_.push_back(lin);
        rest = divmod(rest, lin).quotient;
    }
    if (rest.degree() > 0) factors_.push_back(rest);
    for (const auto& f : factors_) engines_.push_back(field_engine(f, cap));
}

std::vector<FieldElt> EtaleAlgebra::components(const PolyQ& a) const
{
    std::vector<FieldElt> out;
    for (const auto& e : engines_) out.push_back(e->field().from_poly(a));
    return out;
}

SelmerFieldGroup selmer_field_group(const EtaleAlgebra& alg, const std::set<Int>& S)
{
    SelmerFieldGroup out;
    out.S.assign(S.begin(), S.end());
    for (std::size_t i = 0; i < alg.component_count(); ++i) {
        out.parts.push_back(alg.engine(i).selmer_group(S));
        out.dimension += out.parts.back().dimension;
    }
    return out;
}

}  // namespace selcomp
