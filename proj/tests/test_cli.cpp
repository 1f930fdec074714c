#include "commands.hpp"

#include "tdelay/catalog.hpp"
#include "tdelay/error.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace tdelay;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "tdelay");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), {out, err});
    return {code, out.str(), err.str()};
}

fs::path scratch_dir()
{
    const fs::path dir = fs::temp_directory_path() / "tdelay_cli_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text)
{
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << text;
    return p;
}

const std::string kTable = std::string(TDELAY_DATA_DIR) + "/table1.csv";

}  // namespace

TEST_CASE("table1 command")
{
    const auto text = invoke({"table1"});
    CHECK(text.code == cli::kExitOk);
    CHECK(text.out.find("MISMATCH") == std::string::npos);
    CHECK(text.out.find("Δ(1232) P33") != std::string::npos);

    const auto json = invoke({"table1", "--format", "json"});
    REQUIRE(json.code == cli::kExitOk);
    const auto doc = nlohmann::json::parse(json.out);
    REQUIRE(doc.is_array());
    CHECK(doc.size() == 12);
    for (const auto& row : doc) {
        CHECK(row["n_match"] == true);
        CHECK(row["n0_match"] == true);
    }
    const double span = doc.front()["ratio"].get<double>() / doc.back()["ratio"].get<double>();
    CHECK(span > 1e26);
}

TEST_CASE("index command round-trips its csv and json output")
{
    const auto csv = invoke({"index", "--input", kTable, "--format", "csv"});
    REQUIRE(csv.code == cli::kExitOk);
    const auto back = parse_catalog(csv.out, CatalogFormat::Csv, {true});
    CHECK(back.records == table1_fixture().records);
    CHECK(csv.out.rfind("name,mass_mev,width_mev,lifetime_s,expected_n,expected_n0,ratio,n_eq1,n0_eq19", 0) == 0);

    const auto json = invoke({"index", "-i", kTable, "-f", "json"});
    REQUIRE(json.code == cli::kExitOk);
    CHECK(parse_catalog(json.out, CatalogFormat::Json, {true}).records == table1_fixture().records);

    const fs::path out = scratch_dir() / "index_out.csv";
    CHECK(invoke({"index", "-i", kTable, "-f", "csv", "-o", out.string()}).code == cli::kExitOk);
    std::ifstream in(out);
    CHECK(parse_catalog(in, CatalogFormat::Csv, {true}).records.size() == 12);
}

TEST_CASE("index command edge cases")
{
    const auto empty = write_file("empty.csv", "name,mass_mev,width_mev,lifetime_s,expected_n,expected_n0\n");
    const auto e = invoke({"index", "-i", empty.string(), "-f", "csv"});
    CHECK(e.code == cli::kExitOk);
    CHECK(std::count(e.out.begin(), e.out.end(), '\n') == 1);

    const auto wrong =
        write_file("wrong.csv", "name,mass_mev,width_mev,lifetime_s,expected_n,expected_n0\nΔ,1232,120,,7,6\n");
    const auto w = invoke({"index", "-i", wrong.string()});
    CHECK(w.code == cli::kExitMismatch);
    CHECK(w.out.find("MISMATCH") != std::string::npos);
    CHECK(w.err.find("expected 7") != std::string::npos);

    const auto bad = write_file("bad.csv", "name,mass_mev,width_mev,lifetime_s,expected_n,expected_n0\nx,1,0,,,\n");
    const auto b = invoke({"index", "-i", bad.string()});
    CHECK(b.code == cli::kExitUsage);
    CHECK(b.err.find("row 2") != std::string::npos);

    CHECK(invoke({"index", "-i", (scratch_dir() / "missing.csv").string()}).code == cli::kExitUsage);
    CHECK(invoke({"index"}).code == cli::kExitUsage);

    const auto as_json = write_file("cat.data", R"([{"name": "x", "mass_mev": 8, "width_mev": 3}])");
    const auto j = invoke({"index", "-i", as_json.string(), "--input-format", "json", "-f", "csv"});
    CHECK(j.code == cli::kExitOk);
    CHECK(j.out.find("x,8,3,,,,") != std::string::npos);
}

TEST_CASE("locate command")
{
    const auto ok = invoke({"locate", "--estar", "1000", "--resonances", "300:100,700:1", "-f", "json"});
    REQUIRE(ok.code == cli::kExitOk);
    const auto doc = nlohmann::json::parse(ok.out);
    CHECK(doc[0]["resolution_depth"] == 4);
    CHECK(doc[1]["resolution_depth"] == 10);

    const auto one = invoke({"locate", "--estar", "1000", "--resonances", "123:4", "-f", "csv"});
    CHECK(one.code == cli::kExitOk);
    CHECK(one.out == "e0,gamma,isolation_depth,resolution_depth\n123,4,0,8\n");

    CHECK(invoke({"locate", "--estar", "1000", "--resonances", "1001:1"}).code == cli::kExitUsage);
    CHECK(invoke({"locate", "--estar", "1000", "--resonances", "300-100"}).code == cli::kExitUsage);
    CHECK(invoke({"locate", "--estar", "1000", "--resonances", "300:abc"}).code == cli::kExitUsage);
    CHECK(invoke({"locate", "--estar", "1000", "--resonances", "300:1,300:2"}).code == cli::kExitUsage);
}

TEST_CASE("resonance list parsing")
{
    const auto rs = cli::parse_resonance_list("300:100, 700:1e0");
    REQUIRE(rs.size() == 2);
    CHECK(rs[1] == Resonance(700, 1));
    try {
        cli::parse_resonance_list("1:1,2:0");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
    }
    CHECK_THROWS_AS(cli::parse_resonance_list(""), ParseError);
    CHECK_THROWS_AS(cli::parse_resonance_list("1:1,"), ParseError);
}

TEST_CASE("scatter command")
{
    const auto s4 = invoke({"scatter", "--v0", "4", "--radius", "1", "--ell", "0", "-f", "json"});
    REQUIRE(s4.code == cli::kExitOk);
    const auto d4 = nlohmann::json::parse(s4.out);
    CHECK(d4["bound_states"] == 1);
    CHECK(d4["levinson_residual"].get<double>() < 0.05);

    const auto s1 = invoke({"scatter", "--v0", "1", "-f", "json"});
    CHECK(nlohmann::json::parse(s1.out)["bound_states"] == 0);

    const fs::path prefix = scratch_dir() / "shape";
    const auto sr = invoke({"scatter", "--v0", "9.8", "--ell", "1", "--e-max", "0.1", "-o", prefix.string(), "-f", "json"});
    REQUIRE(sr.code == cli::kExitOk);
    const auto dr = nlohmann::json::parse(sr.out);
    CHECK(std::lround(dr["resonance_count"].get<double>()) == 1);
    CHECK(dr["resonances"].size() == 1);

    std::ifstream phase(prefix.string() + ".phase.csv"), delay(prefix.string() + ".delay.csv");
    std::string line;
    REQUIRE(std::getline(phase, line));
    CHECK(line == "k,value");
    REQUIRE(std::getline(delay, line));
    CHECK(line == "E,value");
    int rows = 0;
    while (std::getline(delay, line)) ++rows;
    CHECK(rows == 2000);

    const auto text = invoke({"scatter", "--v0", "4"});
    CHECK(text.out.find("bound states          1") != std::string::npos);

    CHECK(invoke({"scatter", "--v0", "4", "--ell", "3"}).code == cli::kExitUsage);
    CHECK(invoke({"scatter", "--v0", "-4"}).code == cli::kExitUsage);
    CHECK(invoke({"scatter", "--v0", "4", "--e-max", "0"}).code == cli::kExitUsage);
}

TEST_CASE("verify command")
{
    const auto clean = invoke({"verify"});
    CHECK(clean.code == cli::kExitOk);
    CHECK(clean.out.find("FAIL") == std::string::npos);

    const auto json = invoke({"verify", "--json"});
    const auto doc = nlohmann::json::parse(json.out);
    CHECK(doc["passed"] == true);
    CHECK(doc["checks"].size() >= 5);

    const auto hbar = invoke({"verify", "--perturb-hbar", "1.1", "--json"});
    CHECK(hbar.code == cli::kExitMismatch);
    const auto hdoc = nlohmann::json::parse(hbar.out);
    CHECK(hdoc["passed"] == false);
    bool n0_failed = false;
    for (const auto& c : hdoc["checks"]) {
        if (c["name"] == "table-n0") n0_failed = c["passed"] == false;
    }
    CHECK(n0_failed);

    CHECK(invoke({"verify", "--perturb-slope", "0.9"}).code == cli::kExitMismatch);
}

TEST_CASE("commands are deterministic")
{
    CHECK(invoke({"table1", "-f", "csv"}).out == invoke({"table1", "-f", "csv"}).out);
    CHECK(invoke({"scatter", "--v0", "9.8", "--ell", "1", "--e-max", "0.1"}).out ==
          invoke({"scatter", "--v0", "9.8", "--ell", "1", "--e-max", "0.1"}).out);
    CHECK(invoke({"verify", "--json"}).out == invoke({"verify", "--json"}).out);
}

TEST_CASE("usage errors")
{
    CHECK(invoke({}).code == cli::kExitUsage);
    CHECK(invoke({"frobnicate"}).code == cli::kExitUsage);
    CHECK(invoke({"table1", "--format", "xml"}).code == cli::kExitUsage);
    const auto help = invoke({"--help"});
    CHECK(help.code == cli::kExitOk);
    CHECK(help.out.find("verify") != std::string::npos);
}
