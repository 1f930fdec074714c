#include "tdelay/catalog.hpp"
#include "tdelay/constants.hpp"
#include "tdelay/error.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace tdelay;

namespace {

const std::string kHeader = "name,mass_mev,width_mev,lifetime_s,expected_n,expected_n0\n";

ParseError parse_failure(const std::string& text, CatalogFormat fmt = CatalogFormat::Csv)
{
    try {
        parse_catalog(text, fmt);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a parse error");
    throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("fixture contents")
{
    const auto& c = table1_fixture();
    REQUIRE(c.records.size() == 12);
    const auto& first = c.records.front();
    CHECK(first.name == "n");
    CHECK(first.mass_mev == 939);
    CHECK(first.width_mev == 7.43e-25);
    CHECK_FALSE(first.lifetime_s);
    CHECK(first.expected_n == 97);
    CHECK(first.expected_n0 == 93);
    const auto& last = c.records.back();
    CHECK(last.name == "Δ(1232) P33");
    CHECK(last.mass_mev == 1232);
    CHECK(last.width_mev == 120);
    CHECK(last.expected_n == 6);
    CHECK(last.expected_n0 == 6);
    for (const auto& r : c.records) CHECK_NOTHROW(r.validate());
}

TEST_CASE("shipped data file matches the fixture")
{
    std::ifstream in(std::string(TDELAY_DATA_DIR) + "/table1.csv");
    REQUIRE(in);
    const auto c = parse_catalog(in, CatalogFormat::Csv);
    CHECK(c.records == table1_fixture().records);
}

TEST_CASE("width and lifetime conversions")
{
    CHECK(width_to_lifetime(7.43e-25) == doctest::Approx(885.88).epsilon(1e-5));
    CHECK(width_to_lifetime(120) == doctest::Approx(5.485e-24).epsilon(1e-4));
    CHECK(convert_width_lifetime(1.0, ConversionDirection::LifetimeToWidth) == kHbarMeVs);
    CHECK(convert_width_lifetime(kHbarMeVs, ConversionDirection::LifetimeToWidth) == doctest::Approx(1.0).epsilon(1e-15));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lg(-60.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::exp(lg(rng));
        const double back = lifetime_to_width(width_to_lifetime(x));
        CHECK(std::abs(back - x) / x < 1e-15);
    }
    for (double bad : {0.0, -1.0, double(INFINITY), double(NAN)}) {
        try {
            width_to_lifetime(bad);
            FAIL("expected NonPositive");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonPositive);
        }
        CHECK_THROWS_AS(lifetime_to_width(bad), Error);
    }
}

TEST_CASE("record accessors derive the missing quantity")
{
    const ParticleRecord w{"a", 10, 2.0, {}, {}, {}};
    CHECK(w.width() == 2.0);
    CHECK(w.lifetime() == kHbarMeVs / 2.0);
    const ParticleRecord t{"b", 10, {}, 1e-20, {}, {}};
    CHECK(t.lifetime() == 1e-20);
    CHECK(t.width() == kHbarMeVs / 1e-20);
    CHECK(t.width(2 * kHbarMeVs) == 2 * kHbarMeVs / 1e-20);
}

TEST_CASE("csv parsing")
{
    SUBCASE("columns in any order, comments, quotes, scientific notation")
    {
        const auto c = parse_catalog(
            "\xEF\xBB\xBF# leading comment\n"
            "expected_n0,lifetime_s,name,width_mev,mass_mev,expected_n\n"
            ",,\"x, y\",1.5E-3,1e3,\n"
            "# between rows\n"
            ",8.8e-10,z,,2,\n",
            CatalogFormat::Csv);
        REQUIRE(c.records.size() == 2);
        CHECK(c.records[0].name == "x, y");
        CHECK(c.records[0].mass_mev == 1000.0);
        CHECK(c.records[0].width_mev == 1.5e-3);
        CHECK(c.records[1].lifetime_s == 8.8e-10);
        CHECK_FALSE(c.records[1].width_mev);
    }
    SUBCASE("empty catalog")
    {
        CHECK(parse_catalog(kHeader, CatalogFormat::Csv).records.empty());
    }
    SUBCASE("both width and lifetime")
    {
        const auto e = parse_failure(kHeader + "a,1,2,3,,\n");
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(e.row() == 2);
    }
    SUBCASE("zero width")
    {
        const auto e = parse_failure(kHeader + "ok,1,2,,,\nbad,1,0,,,\n");
        CHECK(e.row() == 3);
        CHECK(e.column() == 3);
        CHECK(e.reason().find("width") != std::string::npos);
    }
    SUBCASE("neither width nor lifetime")
    {
        CHECK(parse_failure(kHeader + "a,1,,,,\n").code() == ErrorCode::ParseError);
    }
    SUBCASE("duplicate names")
    {
        const auto e = parse_failure(kHeader + "a,1,2,,,\na,3,4,,,\n");
        CHECK(e.code() == ErrorCode::DuplicateName);
        CHECK(e.row() == 3);
    }
    SUBCASE("missing column")
    {
        CHECK(parse_failure("name,mass_mev,width_mev,lifetime_s,expected_n\n").code() ==
              ErrorCode::MissingRequiredColumn);
        CHECK(parse_failure("").code() == ErrorCode::MissingRequiredColumn);
    }
    SUBCASE("unknown column is rejected unless allowed")
    {
        const std::string text = "name,mass_mev,width_mev,lifetime_s,expected_n,expected_n0,extra\na,1,2,,,,zzz\n";
        CHECK(parse_failure(text).code() == ErrorCode::ParseError);
        CHECK(parse_catalog(text, CatalogFormat::Csv, {true}).records.size() == 1);
    }
    SUBCASE("malformed cells")
    {
        CHECK(parse_failure(kHeader + "a,abc,2,,,\n").column() == 2);
        CHECK(parse_failure(kHeader + "a,1,2,,6.5,\n").column() == 5);
        CHECK(parse_failure(kHeader + "a,1,2,,0,\n").code() == ErrorCode::ParseError);
        CHECK(parse_failure(kHeader + "a,1,2,,\n").code() == ErrorCode::ParseError);
        CHECK(parse_failure(kHeader + "\"a,1,2,,,\n").code() == ErrorCode::ParseError);
        CHECK(parse_failure(kHeader + ",1,2,,,\n").code() == ErrorCode::ParseError);
        CHECK(parse_failure(kHeader + "a,-1,2,,,\n").code() == ErrorCode::ParseError);
    }
}

TEST_CASE("json parsing")
{
    const auto c = parse_catalog(R"([{"name": "a", "mass_mev": 1, "width_mev": 0.5, "lifetime_s": null},
                                     {"name": "b", "mass_mev": 2, "lifetime_s": 1e-20, "expected_n": 3}])",
                                 CatalogFormat::Json);
    REQUIRE(c.records.size() == 2);
    CHECK(c.records[0].width_mev == 0.5);
    CHECK_FALSE(c.records[0].lifetime_s);
    CHECK(c.records[1].expected_n == 3);

    CHECK(parse_catalog("[]", CatalogFormat::Json).records.empty());
    CHECK(parse_failure("{}", CatalogFormat::Json).code() == ErrorCode::ParseError);
    CHECK(parse_failure("[1,", CatalogFormat::Json).code() == ErrorCode::ParseError);
    CHECK(parse_failure(R"([{"name": "a", "mass_mev": 1, "width_mev": 0}])", CatalogFormat::Json).row() == 1);
    CHECK(parse_failure(R"([{"name": "a", "mass_mev": "1", "width_mev": 1}])", CatalogFormat::Json).code() ==
          ErrorCode::ParseError);
    CHECK(parse_failure(R"([{"name": "a", "width_mev": 1}])", CatalogFormat::Json).code() ==
          ErrorCode::MissingRequiredColumn);
    CHECK(parse_failure(R"([{"name": "a", "mass_mev": 1, "width_mev": 1}, {"name": "a", "mass_mev": 1, "width_mev": 1}])",
                        CatalogFormat::Json)
              .code() == ErrorCode::DuplicateName);
    const std::string extra = R"([{"name": "a", "mass_mev": 1, "width_mev": 1, "n_eq1": 4}])";
    CHECK(parse_failure(extra, CatalogFormat::Json).code() == ErrorCode::ParseError);
    CHECK(parse_catalog(extra, CatalogFormat::Json, {true}).records.size() == 1);
}

TEST_CASE("serialize then parse is the identity")
{
    Catalog mixed = table1_fixture();
    mixed.records.push_back({"timed, quoted \"x\"", 493.677, {}, 1.238e-8, {}, {}});
    mixed.records.push_back({"tiny", 1e-300, 3.0e-310, {}, 400, 1});
    for (auto fmt : {CatalogFormat::Csv, CatalogFormat::Json}) {
        const auto back = parse_catalog(serialize_catalog(mixed, fmt), fmt);
        CHECK(back.records == mixed.records);
    }

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> lg(-100.0, 100.0);
    Catalog random;
    for (int i = 0; i < 200; ++i) {
        ParticleRecord r{"p" + std::to_string(i), std::exp(lg(rng)), {}, {}, {}, {}};
        if (i % 2) r.width_mev = std::exp(lg(rng));
        else r.lifetime_s = std::exp(lg(rng));
        if (i % 3 == 0) r.expected_n = 1 + i;
        random.records.push_back(r);
    }
    for (auto fmt : {CatalogFormat::Csv, CatalogFormat::Json}) {
        CHECK(parse_catalog(serialize_catalog(random, fmt), fmt).records == random.records);
    }
}

TEST_CASE("format names")
{
    CHECK(parse_catalog_format("csv") == CatalogFormat::Csv);
    CHECK(parse_catalog_format("json") == CatalogFormat::Json);
    CHECK_FALSE(parse_catalog_format("xml"));
}
