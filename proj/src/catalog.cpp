#include "tdelay/catalog.hpp"

#include "tdelay/error.hpp"
#include "tdelay/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

namespace tdelay {

namespace {

constexpr std::array<std::string_view, 6> kColumns = {"name",     "mass_mev",   "width_mev",
                                                      "lifetime_s", "expected_n", "expected_n0"};

enum Column : std::size_t { kName, kMass, kWidth, kLifetime, kExpectedN, kExpectedN0 };

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV line; double quotes group a field and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row)
{
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            if (!trim(current).empty()) {
                throw ParseError(ErrorCode::ParseError, row, fields.size() + 1, "stray quote inside field");
            }
            current.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? current : trim(current));
            current.clear();
            was_quoted = false;
        } else {
            current += c;
        }
    }
    if (quoted) throw ParseError(ErrorCode::ParseError, row, fields.size() + 1, "unterminated quoted field");
    fields.push_back(was_quoted ? current : trim(current));
    return fields;
}

double parse_double(const std::string& text, std::size_t row, std::size_t column)
{
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(ErrorCode::ParseError, row, column, "not a number: '" + text + "'");
    }
    return value;
}

int parse_int(const std::string& text, std::size_t row, std::size_t column)
{
    int value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw ParseError(ErrorCode::ParseError, row, column, "not an integer: '" + text + "'");
    }
    return value;
}

// Field-level checks shared by both readers; column is 0 for JSON.
void check_record(const ParticleRecord& rec, std::size_t row, const std::array<std::size_t, 6>& columns)
{
    if (rec.name.empty()) throw ParseError(ErrorCode::ParseError, row, columns[kName], "name is empty");
    if (!positive_finite(rec.mass_mev)) {
        throw ParseError(ErrorCode::ParseError, row, columns[kMass], "mass_mev must be positive and finite");
    }
    if (rec.width_mev && rec.lifetime_s) {
        throw ParseError(ErrorCode::ParseError, row, columns[kLifetime],
                         "both width_mev and lifetime_s given (ambiguous)");
    }
    if (!rec.width_mev && !rec.lifetime_s) {
        throw ParseError(ErrorCode::ParseError, row, columns[kWidth], "one of width_mev or lifetime_s is required");
    }
    if (rec.width_mev && !positive_finite(*rec.width_mev)) {
        throw ParseError(ErrorCode::ParseError, row, columns[kWidth], "width_mev must be positive and finite");
    }
    if (rec.lifetime_s && !positive_finite(*rec.lifetime_s)) {
        throw ParseError(ErrorCode::ParseError, row, columns[kLifetime], "lifetime_s must be positive and finite");
    }
    if (rec.expected_n && *rec.expected_n < 1) {
        throw ParseError(ErrorCode::ParseError, row, columns[kExpectedN], "expected_n must be >= 1");
    }
    if (rec.expected_n0 && *rec.expected_n0 < 1) {
        throw ParseError(ErrorCode::ParseError, row, columns[kExpectedN0], "expected_n0 must be >= 1");
    }
}

Catalog parse_csv(std::istream& input, const ParseOptions& options)
{
    Catalog catalog;
    catalog.source = "csv";
    std::set<std::string> names;
    std::array<std::size_t, 6> index{};  // 0-based field index of each schema column
    std::array<std::size_t, 6> column_no{};
    std::size_t field_count = 0;
    bool have_header = false;

    std::string line;
    std::size_t row = 0;
    while (std::getline(input, line)) {
        ++row;
        if (row == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        auto fields = split_csv_line(line, row);

        if (!have_header) {
            std::map<std::string, std::size_t> seen;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (!seen.emplace(fields[i], i).second) {
                    throw ParseError(ErrorCode::ParseError, row, i + 1, "duplicate column '" + fields[i] + "'");
                }
            }
            for (std::size_t c = 0; c < kColumns.size(); ++c) {
                auto it = seen.find(std::string(kColumns[c]));
                if (it == seen.end()) {
                    throw ParseError(ErrorCode::MissingRequiredColumn, row, 0,
                                     "missing column '" + std::string(kColumns[c]) + "'");
                }
                index[c] = it->second;
                column_no[c] = it->second + 1;
                seen.erase(it);
            }
            if (!seen.empty() && !options.allow_extra_fields) {
                throw ParseError(ErrorCode::ParseError, row, seen.begin()->second + 1,
                                 "unknown column '" + seen.begin()->first + "'");
            }
            field_count = fields.size();
            have_header = true;
            continue;
        }

        if (fields.size() != field_count) {
            throw ParseError(ErrorCode::ParseError, row, 0,
                             "expected " + std::to_string(field_count) + " fields, found " +
                                 std::to_string(fields.size()));
        }
        auto cell = [&](Column c) -> const std::string& { return fields[index[c]]; };

        ParticleRecord rec;
        rec.name = cell(kName);
        if (cell(kMass).empty()) throw ParseError(ErrorCode::ParseError, row, column_no[kMass], "mass_mev is required");
        rec.mass_mev = parse_double(cell(kMass), row, column_no[kMass]);
        if (!cell(kWidth).empty()) rec.width_mev = parse_double(cell(kWidth), row, column_no[kWidth]);
        if (!cell(kLifetime).empty()) rec.lifetime_s = parse_double(cell(kLifetime), row, column_no[kLifetime]);
        if (!cell(kExpectedN).empty()) rec.expected_n = parse_int(cell(kExpectedN), row, column_no[kExpectedN]);
        if (!cell(kExpectedN0).empty()) rec.expected_n0 = parse_int(cell(kExpectedN0), row, column_no[kExpectedN0]);
        check_record(rec, row, column_no);
        if (!names.insert(rec.name).second) {
            throw ParseError(ErrorCode::DuplicateName, row, column_no[kName], "duplicate name '" + rec.name + "'");
        }
        catalog.records.push_back(std::move(rec));
    }
    if (!have_header) throw ParseError(ErrorCode::MissingRequiredColumn, 0, 0, "input has no header line");
    return catalog;
}

Catalog parse_json(std::istream& input, const ParseOptions& options)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(input);
    } catch (const json::parse_error& e) {
        throw ParseError(ErrorCode::ParseError, 0, 0, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError(ErrorCode::ParseError, 0, 0, "top-level JSON value must be an array");

    Catalog catalog;
    catalog.source = "json";
    std::set<std::string> names;
    const std::array<std::size_t, 6> no_columns{};
    std::size_t row = 0;
    for (const auto& obj : doc) {
        ++row;
        if (!obj.is_object()) throw ParseError(ErrorCode::ParseError, row, 0, "array element is not an object");
        if (!options.allow_extra_fields) {
            for (const auto& [key, _] : obj.items()) {
                if (std::find(kColumns.begin(), kColumns.end(), key) == kColumns.end()) {
                    throw ParseError(ErrorCode::ParseError, row, 0, "unknown key '" + key + "'");
                }
            }
        }
        auto present = [&](Column c) {
            auto it = obj.find(std::string(kColumns[c]));
            return it != obj.end() && !it->is_null();
        };
        auto number = [&](Column c) {
            const auto& v = obj.at(std::string(kColumns[c]));
            if (!v.is_number()) {
                throw ParseError(ErrorCode::ParseError, row, 0, std::string(kColumns[c]) + " must be a number");
            }
            return v.get<double>();
        };
        auto integer = [&](Column c) {
            const auto& v = obj.at(std::string(kColumns[c]));
            if (!v.is_number_integer()) {
                throw ParseError(ErrorCode::ParseError, row, 0, std::string(kColumns[c]) + " must be an integer");
            }
            return v.get<int>();
        };

        ParticleRecord rec;
        if (!present(kName) || !obj.at("name").is_string()) {
            throw ParseError(ErrorCode::MissingRequiredColumn, row, 0, "name must be a string");
        }
        rec.name = obj.at("name").get<std::string>();
        if (!present(kMass)) throw ParseError(ErrorCode::MissingRequiredColumn, row, 0, "mass_mev is required");
        rec.mass_mev = number(kMass);
        if (present(kWidth)) rec.width_mev = number(kWidth);
        if (present(kLifetime)) rec.lifetime_s = number(kLifetime);
        if (present(kExpectedN)) rec.expected_n = integer(kExpectedN);
        if (present(kExpectedN0)) rec.expected_n0 = integer(kExpectedN0);
        check_record(rec, row, no_columns);
        if (!names.insert(rec.name).second) {
            throw ParseError(ErrorCode::DuplicateName, row, 0, "duplicate name '" + rec.name + "'");
        }
        catalog.records.push_back(std::move(rec));
    }
    return catalog;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"#") == std::string::npos && trim(s) == s) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void ParticleRecord::validate() const
{
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "particle name is empty");
    if (!positive_finite(mass_mev)) throw Error(ErrorCode::InvalidArgument, name + ": mass must be positive");
    if (width_mev.has_value() == lifetime_s.has_value()) {
        throw Error(ErrorCode::InvalidArgument, name + ": exactly one of width or lifetime is required");
    }
    if (width_mev && !positive_finite(*width_mev)) {
        throw Error(ErrorCode::InvalidArgument, name + ": width must be positive");
    }
    if (lifetime_s && !positive_finite(*lifetime_s)) {
        throw Error(ErrorCode::InvalidArgument, name + ": lifetime must be positive");
    }
}

double ParticleRecord::width(double hbar_mev_s) const
{
    return width_mev ? *width_mev : lifetime_to_width(lifetime_s.value(), hbar_mev_s);
}

double ParticleRecord::lifetime(double hbar_mev_s) const
{
    return lifetime_s ? *lifetime_s : width_to_lifetime(width_mev.value(), hbar_mev_s);
}

std::optional<CatalogFormat> parse_catalog_format(std::string_view name)
{
    if (name == "csv") return CatalogFormat::Csv;
    if (name == "json") return CatalogFormat::Json;
    return std::nullopt;
}

double width_to_lifetime(double width_mev, double hbar_mev_s)
{
    if (!positive_finite(width_mev)) throw Error(ErrorCode::NonPositive, "width must be positive and finite");
    return hbar_mev_s / width_mev;
}

double lifetime_to_width(double lifetime_s, double hbar_mev_s)
{
    if (!positive_finite(lifetime_s)) throw Error(ErrorCode::NonPositive, "lifetime must be positive and finite");
    return hbar_mev_s / lifetime_s;
}

double convert_width_lifetime(double value, ConversionDirection direction, double hbar_mev_s)
{
    return direction == ConversionDirection::WidthToLifetime ? width_to_lifetime(value, hbar_mev_s)
                                                             : lifetime_to_width(value, hbar_mev_s);
}

Catalog parse_catalog(std::istream& input, CatalogFormat format, const ParseOptions& options)
{
    return format == CatalogFormat::Csv ? parse_csv(input, options) : parse_json(input, options);
}

Catalog parse_catalog(std::string_view text, CatalogFormat format, const ParseOptions& options)
{
    std::istringstream in{std::string(text)};
    return parse_catalog(in, format, options);
}

std::string serialize_catalog(const Catalog& catalog, CatalogFormat format)
{
    if (format == CatalogFormat::Json) {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : catalog.records) {
            nlohmann::json obj;
            obj["name"] = r.name;
            obj["mass_mev"] = r.mass_mev;
            obj["width_mev"] = r.width_mev ? nlohmann::json(*r.width_mev) : nlohmann::json(nullptr);
            obj["lifetime_s"] = r.lifetime_s ? nlohmann::json(*r.lifetime_s) : nlohmann::json(nullptr);
            obj["expected_n"] = r.expected_n ? nlohmann::json(*r.expected_n) : nlohmann::json(nullptr);
            obj["expected_n0"] = r.expected_n0 ? nlohmann::json(*r.expected_n0) : nlohmann::json(nullptr);
            doc.push_back(std::move(obj));
        }
        return doc.dump(2) + "\n";
    }
    std::string out = "name,mass_mev,width_mev,lifetime_s,expected_n,expected_n0\n";
    auto opt_num = [](const std::optional<double>& v) { return v ? format_roundtrip(*v) : std::string(); };
    auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    for (const auto& r : catalog.records) {
        out += csv_field(r.name) + ',' + format_roundtrip(r.mass_mev) + ',' + opt_num(r.width_mev) + ',' +
               opt_num(r.lifetime_s) + ',' + opt_int(r.expected_n) + ',' + opt_int(r.expected_n0) + '\n';
    }
    return out;
}

const Catalog& table1_fixture()
{
    static const Catalog fixture = [] {
        Catalog c;
        c.source = "embedded reference table (12 hadrons)";
        auto add = [&](std::string name, double mass, double width, int n, int n0) {
            c.records.push_back({std::move(name), mass, width, std::nullopt, n, n0});
        };
        add("n", 939, 7.43e-25, 97, 93);
        add("Λ", 1120, 2.5e-12, 54, 52);
        add("B⁰", 5280, 4.39e-10, 49, 46);
        add("J/ψ(1S)", 3100, 8.8e-2, 19, 18);
        add("χc1(1P)", 3510, 8.8e-1, 16, 15);
        add("Ds1(2536)±", 2536, 4.5, 13, 12);
        add("ψ(4415)", 4415, 43, 10, 10);
        add("Ξ(1820) D13", 1820, 24, 9, 9);
        add("Λ(1690) D03", 1690, 60, 8, 8);
        add("Σ(1750) S11", 1750, 110, 7, 7);
        add("N(1520) D13", 1520, 123, 6, 7);
        add("Δ(1232) P33", 1232, 120, 6, 6);
        return c;
    }();
    return fixture;
}

}  // namespace tdelay
