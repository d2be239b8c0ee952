#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selcomp/cubicfield.hpp"
#include "selcomp/error.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace selcomp;

namespace {

struct FieldRow {
    std::string poly;
    Int disc;
    Int h;
    std::vector<std::size_t> dims;
};

std::vector<FieldRow> field_rows()
{
    std::ifstream in(std::string(SELCOMP_FIXTURES) + "/field_sunits.csv");
    REQUIRE(in);
    std::vector<FieldRow> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        FieldRow r{f[0], Int(f[1]), Int(f[2]), {}};
        for (std::size_t i = 3; i < f.size(); ++i) r.dims.push_back(std::stoul(f[i]));
        rows.push_back(r);
    }
    return rows;
}

const std::vector<std::set<Int>> kSets = {{}, {2}, {2, 3}, {2, 3, 5, 7}};

}  // namespace

TEST_CASE("field discriminants and splitting of primes")
{
    for (const FieldRow& r : field_rows()) {
        NumberField K(PolyQ::parse(r.poly));
        INFO(r.poly);
        CHECK(K.discriminant() == r.disc);
        for (std::int64_t p : primes_up_to(60)) {
            Int P(static_cast<long>(p));
            int sum = 0;
            for (const PrimeIdeal& Q : K.primes_above(P)) sum += Q.e * Q.f;
            CHECK(sum == K.degree());
            bool ramified = false;
            for (const PrimeIdeal& Q : K.primes_above(P)) ramified = ramified || Q.e > 1;
            CHECK(ramified == (r.disc % P == 0));
        }
    }
}

TEST_CASE("norms are multiplicative and valuations add up")
{
    NumberField K(PolyQ::parse("x^3 - x^2 - 4*x + 2"));
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long> dist(-9, 9);
    for (int i = 0; i < 100; ++i) {
        OrderElt a = {Int(dist(rng)), Int(dist(rng)), Int(dist(rng))};
        OrderElt b = {Int(dist(rng)), Int(dist(rng)), Int(dist(rng))};
        if (K.norm(a) == 0 || K.norm(b) == 0) continue;
        CHECK(K.norm(K.mul(a, b)) == K.norm(a) * K.norm(b));
        for (long p : {2L, 3L, 5L}) {
            Int n = abs(K.norm(a));
            int total = 0;
            for (const PrimeIdeal& P : K.primes_above(Int(p))) total += P.f * K.valuation(a, P);
            CHECK(total == valuation(n, Int(p)));
        }
    }
}

TEST_CASE("class numbers and S-unit square classes match the fixture table")
{
    for (const FieldRow& r : field_rows()) {
        INFO(r.poly);
        PolyQ f = PolyQ::parse(r.poly);
        try {
            ClassUnitData d = class_group_and_units(f);
            CHECK(d.field_discriminant == r.disc);
            CHECK(d.class_number == r.h);
            auto engine = field_engine(f);
            for (std::size_t i = 0; i < kSets.size(); ++i) CHECK(engine->selmer_group(kSets[i]).dimension == r.dims[i]);
        } catch (const Error& e) {
            // The relation search may run out of budget; it must say so rather than return wrong data.
            CHECK(e.kind() == ErrorKind::budget);
            MESSAGE("budget exhausted for " << r.poly << ": " << e.what());
        }
    }
}

TEST_CASE("Selmer group generators have even valuation outside S")
{
    auto engine = field_engine(PolyQ::parse("x^3 - 7"));
    const NumberField& K = engine->field();
    auto sel = engine->selmer_group({2, 3});
    CHECK(sel.dimension == 5);
    for (const ModRow& combo : sel.combos) {
        OrderElt x = K.one();
        for (std::size_t j = 0; j < combo.size(); ++j)
            if (combo[j]) x = K.mul(x, sel.generators[j].element);
        Int n = abs(K.norm(x));
        for (const auto& [p, e] : factor_integer(n)) {
            if (p == 2 || p == 3) continue;
            for (const PrimeIdeal& P : K.primes_above(p)) CHECK(K.valuation(x, P) % 2 == 0);
        }
    }
}

TEST_CASE("etale algebra splits reducible cubics")
{
    EtaleAlgebra split(PolyQ::parse("x^3 - 16*x"));
    CHECK(split.component_count() == 3);
    EtaleAlgebra partial(PolyQ::parse("x^3 - 2*x^2 + x - 2"));
    CHECK(partial.component_count() == 2);
    EtaleAlgebra field(PolyQ::parse("x^3 - x - 1"));
    CHECK(field.component_count() == 1);
    auto comps = split.components(PolyQ::parse("x + 1"));
    REQUIRE(comps.size() == 3);
    for (const FieldElt& c : comps) CHECK(c.size() == 1);
}

TEST_CASE("field data JSON round trip and the discriminant cap")
{
    ClassUnitData d = class_group_and_units(PolyQ::parse("x^3 - x^2 - 4*x + 2"));
    CHECK(d.certified);
    ClassUnitData back = class_unit_data_from_json(class_unit_data_to_json(d));
    CHECK(back.field_discriminant == d.field_discriminant);
    CHECK(back.class_number == d.class_number);
    CHECK(back.fundamental_units == d.fundamental_units);
    CHECK(back.class_group_invariants == d.class_group_invariants);
    // External data is never trusted as certified.
    CHECK_FALSE(back.certified);
    CHECK(back.source == "unverified-external");
    CHECK_THROWS_AS(class_unit_data_from_json("{\"class_number\": 1}"), Error);
    try {
        class_group_and_units(PolyQ::parse("x^3 - 2*x + 1001"), Int(1000));
        FAIL("cap was not enforced");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::budget);
    }
}
