#include "commands.hpp"

#include "tdelay/dyadic_locator.hpp"
#include "tdelay/error.hpp"
#include "tdelay/format.hpp"
#include "tdelay/square_well.hpp"
#include "tdelay/stability_index.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace tdelay::cli {

namespace {

using nlohmann::ordered_json;

struct IndexRow
{
    ParticleRecord record;
    IndexReport report;
    std::optional<bool> n_match;
    std::optional<bool> n0_match;
};

std::vector<IndexRow> build_rows(const Catalog& catalog)
{
    std::vector<IndexRow> rows;
    rows.reserve(catalog.records.size());
    for (const auto& rec : catalog.records) {
        IndexRow row{rec, build_index_report(rec), {}, {}};
        if (rec.expected_n) row.n_match = *rec.expected_n == row.report.n_eq1;
        if (rec.expected_n0) row.n0_match = *rec.expected_n0 == row.report.n0_eq19;
        rows.push_back(std::move(row));
    }
    return rows;
}

bool any_mismatch(const std::vector<IndexRow>& rows)
{
    for (const auto& r : rows) {
        if ((r.n_match && !*r.n_match) || (r.n0_match && !*r.n0_match)) return true;
    }
    return false;
}

// Display width in code points; every name in use is single-width per code point.
std::size_t display_width(std::string_view s)
{
    std::size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n;
}

std::string pad(std::string_view s, std::size_t width)
{
    std::string out(s);
    const std::size_t w = display_width(s);
    if (w < width) out.append(width - w, ' ');
    return out;
}

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }
std::string opt_num(const std::optional<double>& v) { return v ? format_roundtrip(*v) : std::string(); }
std::string opt_bool(const std::optional<bool>& v) { return v ? (*v ? "true" : "false") : ""; }

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void write_rows(std::ostream& out, const std::vector<IndexRow>& rows, ReportFormat format)
{
    switch (format) {
    case ReportFormat::Csv:
        out << "name,mass_mev,width_mev,lifetime_s,expected_n,expected_n0,ratio,n_eq1,n0_eq19,agrees_within,n_match,"
               "n0_match\n";
        for (const auto& r : rows) {
            const auto& rec = r.record;
            out << csv_field(rec.name) << ',' << format_roundtrip(rec.mass_mev) << ',' << opt_num(rec.width_mev) << ','
                << opt_num(rec.lifetime_s) << ',' << opt_int(rec.expected_n) << ',' << opt_int(rec.expected_n0) << ','
                << format_roundtrip(r.report.ratio) << ',' << r.report.n_eq1 << ',' << r.report.n0_eq19 << ','
                << r.report.agrees_within << ',' << opt_bool(r.n_match) << ',' << opt_bool(r.n0_match) << '\n';
        }
        return;
    case ReportFormat::Json: {
        ordered_json doc = ordered_json::array();
        for (const auto& r : rows) {
            const auto& rec = r.record;
            ordered_json o;
            o["name"] = rec.name;
            o["mass_mev"] = rec.mass_mev;
            o["width_mev"] = rec.width_mev ? ordered_json(*rec.width_mev) : ordered_json(nullptr);
            o["lifetime_s"] = rec.lifetime_s ? ordered_json(*rec.lifetime_s) : ordered_json(nullptr);
            o["expected_n"] = rec.expected_n ? ordered_json(*rec.expected_n) : ordered_json(nullptr);
            o["expected_n0"] = rec.expected_n0 ? ordered_json(*rec.expected_n0) : ordered_json(nullptr);
            o["ratio"] = r.report.ratio;
            o["n_eq1"] = r.report.n_eq1;
            o["n0_eq19"] = r.report.n0_eq19;
            o["agrees_within"] = r.report.agrees_within;
            o["n_match"] = r.n_match ? ordered_json(*r.n_match) : ordered_json(nullptr);
            o["n0_match"] = r.n0_match ? ordered_json(*r.n0_match) : ordered_json(nullptr);
            doc.push_back(std::move(o));
        }
        out << doc.dump(2) << '\n';
        return;
    }
    case ReportFormat::Text: {
        std::size_t name_w = 4;
        for (const auto& r : rows) name_w = std::max(name_w, display_width(r.record.name));
        out << pad("name", name_w)
            << fmt::format("  {:>8}  {:>10}  {:>10}  {:>4} {:>4}  {:>4} {:>4}  {}\n", "mass", "width", "M/Gamma", "n",
                           "(exp)", "n0", "(exp)", "status");
        for (const auto& r : rows) {
            const bool bad = (r.n_match && !*r.n_match) || (r.n0_match && !*r.n0_match);
            const bool checked = r.n_match || r.n0_match;
            out << pad(r.record.name, name_w)
                << fmt::format("  {:>8.6g}  {:>10.3g}  {:>10.4g}  {:>4} {:>4}  {:>4} {:>4}  {}\n", r.record.mass_mev,
                               r.record.width(), r.report.ratio, r.report.n_eq1, opt_int(r.record.expected_n),
                               r.report.n0_eq19, opt_int(r.record.expected_n0),
                               bad ? "MISMATCH" : (checked ? "ok" : "-"));
        }
        return;
    }
    }
}

std::optional<CatalogFormat> format_from_path(const std::string& path)
{
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) return std::nullopt;
    return parse_catalog_format(path.substr(dot + 1));
}

struct Check
{
    std::string name;
    bool passed = false;
    std::string detail;
};

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view name)
{
    if (name == "text") return ReportFormat::Text;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    return std::nullopt;
}

std::vector<Resonance> parse_resonance_list(std::string_view text)
{
    std::vector<Resonance> out;
    std::size_t item = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        std::string_view piece = text.substr(start, end - start);
        ++item;
        while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
        while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
        const auto colon = piece.find(':');
        auto number = [&](std::string_view s, const char* what) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
                throw ParseError(ErrorCode::ParseError, item, 0,
                                 std::string("bad ") + what + " in '" + std::string(piece) + "'");
            }
            return v;
        };
        if (colon == std::string_view::npos) {
            throw ParseError(ErrorCode::ParseError, item, 0, "expected E0:gamma, got '" + std::string(piece) + "'");
        }
        const double e0 = number(piece.substr(0, colon), "E0");
        const double gamma = number(piece.substr(colon + 1), "gamma");
        try {
            out.emplace_back(e0, gamma);
        } catch (const Error& e) {
            throw ParseError(ErrorCode::ParseError, item, 0, e.what());
        }
        start = end + 1;
    }
    return out;
}

int cmd_index(const IndexOptions& options, Streams io)
{
    Catalog catalog;
    try {
        const CatalogFormat fmt = options.input_format.value_or(format_from_path(options.input).value_or(CatalogFormat::Csv));
        if (options.input == "-") {
            catalog = parse_catalog(std::cin, fmt);
        } else {
            std::ifstream in(options.input);
            if (!in) {
                io.err << "error: cannot open '" << options.input << "'\n";
                return kExitUsage;
            }
            catalog = parse_catalog(in, fmt);
        }
    } catch (const ParseError& e) {
        io.err << "error: " << options.input << ": " << e.what() << '\n';
        return kExitUsage;
    }

    std::vector<IndexRow> rows;
    try {
        rows = build_rows(catalog);
    } catch (const Error& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (options.output.empty()) {
        write_rows(io.out, rows, options.format);
    } else {
        std::ofstream out(options.output);
        if (!out) {
            io.err << "error: cannot write '" << options.output << "'\n";
            return kExitUsage;
        }
        write_rows(out, rows, options.format);
        if (!out) {
            io.err << "error: write to '" << options.output << "' failed\n";
            return kExitUsage;
        }
    }
    if (any_mismatch(rows)) {
        for (const auto& r : rows) {
            if (r.n_match && !*r.n_match) {
                io.err << "mismatch: " << r.record.name << ": n = " << r.report.n_eq1 << ", expected "
                       << *r.record.expected_n << '\n';
            }
            if (r.n0_match && !*r.n0_match) {
                io.err << "mismatch: " << r.record.name << ": n0 = " << r.report.n0_eq19 << ", expected "
                       << *r.record.expected_n0 << '\n';
            }
        }
        return kExitMismatch;
    }
    return kExitOk;
}

int cmd_table1(ReportFormat format, Streams io)
{
    const auto rows = build_rows(table1_fixture());
    write_rows(io.out, rows, format);
    if (any_mismatch(rows)) {
        io.err << "error: embedded table no longer reproduces its published indices\n";
        return kExitMismatch;
    }
    return kExitOk;
}

int cmd_locate(const LocateOptions& options, Streams io)
{
    std::vector<LocationResult> results;
    try {
        const auto resonances = parse_resonance_list(options.resonances);
        results = locate(options.estar, resonances);
    } catch (const Error& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    switch (options.format) {
    case ReportFormat::Csv:
        io.out << "e0,gamma,isolation_depth,resolution_depth\n";
        for (const auto& r : results) {
            io.out << format_roundtrip(r.resonance.e0()) << ',' << format_roundtrip(r.resonance.gamma()) << ','
                   << r.isolation_depth << ',' << r.resolution_depth << '\n';
        }
        break;
    case ReportFormat::Json: {
        ordered_json doc = ordered_json::array();
        for (const auto& r : results) {
            doc.push_back({{"e0", r.resonance.e0()},
                           {"gamma", r.resonance.gamma()},
                           {"isolation_depth", r.isolation_depth},
                           {"resolution_depth", r.resolution_depth}});
        }
        io.out << doc.dump(2) << '\n';
        break;
    }
    case ReportFormat::Text:
        io.out << fmt::format("E* = {}\n{:>14}  {:>12}  {:>9}  {:>10}\n", format_roundtrip(options.estar), "E0", "Gamma",
                              "isolated", "resolved");
        for (const auto& r : results) {
            io.out << fmt::format("{:>14.8g}  {:>12.6g}  {:>9}  {:>10}\n", r.resonance.e0(), r.resonance.gamma(),
                                  r.isolation_depth, r.resolution_depth);
        }
        break;
    }
    return kExitOk;
}

int cmd_scatter(const ScatterOptions& options, Streams io)
{
    try {
        const SquareWell well(options.depth, options.radius, options.ell);
        if (!(options.e_max > options.e_threshold) || options.delay_points < 2) {
            throw Error(ErrorCode::InvalidArgument, "need e_max > e_threshold and at least two delay points");
        }
        LevinsonOptions lopts;
        lopts.tolerance = options.levinson_tolerance;
        const auto lev = levinson_check(well, lopts);

        ScanOptions sopts;
        sopts.e_threshold = options.e_threshold;
        const auto scan = resonance_scan(well, options.e_max, sopts);

        if (!options.output.empty()) {
            const std::string phase_path = options.output + ".phase.csv";
            const std::string delay_path = options.output + ".delay.csv";
            std::ofstream phase(phase_path);
            std::ofstream delay(delay_path);
            if (!phase || !delay) {
                io.err << "error: cannot write '" << options.output << ".*.csv'\n";
                return kExitUsage;
            }
            write_phase_table(phase, scan.curve);
            write_delay_table(delay, scan.curve, scan.curve.e_min(), options.e_max, options.delay_points);
            if (!phase || !delay) {
                io.err << "error: write to '" << options.output << ".*.csv' failed\n";
                return kExitUsage;
            }
        }

        if (options.format == ReportFormat::Json) {
            ordered_json doc;
            doc["depth"] = options.depth;
            doc["radius"] = options.radius;
            doc["ell"] = options.ell;
            doc["bound_states"] = lev.bound_states;
            doc["phase_at_threshold"] = lev.phase_at_threshold;
            doc["levinson_residual"] = lev.check.lhs;
            doc["levinson_holds"] = lev.check.holds;
            doc["e_max"] = options.e_max;
            doc["resonance_count"] = scan.count;
            doc["resonances"] = ordered_json::array();
            for (const auto& f : scan.resonances) {
                doc["resonances"].push_back(
                    {{"e0", f.resonance.e0()}, {"gamma", f.resonance.gamma()}, {"peak_delay", f.peak_delay}});
            }
            io.out << doc.dump(2) << '\n';
        } else {
            io.out << fmt::format("square well V0 = {}, R = {}, l = {}\n", options.depth, options.radius, options.ell);
            io.out << fmt::format("bound states          {}\n", lev.bound_states);
            io.out << fmt::format("delta(0+)             {:.6f}\n", lev.phase_at_threshold);
            io.out << fmt::format("Levinson residual     {:.3e} ({} tolerance {})\n", lev.check.lhs,
                                  lev.check.holds ? "within" : "OUTSIDE", options.levinson_tolerance);
            io.out << fmt::format("resonance count       {:.4f} (E up to {})\n", scan.count, options.e_max);
            for (const auto& f : scan.resonances) {
                io.out << fmt::format("resonance             E0 = {:.6g}, Gamma = {:.6g}, peak delay {:.4g} (4/Gamma {:.4g})\n",
                                      f.resonance.e0(), f.resonance.gamma(), f.peak_delay, 4.0 / f.resonance.gamma());
            }
        }
        return lev.check.holds ? kExitOk : kExitMismatch;
    } catch (const Error& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

int cmd_verify(const VerifyOptions& options, Streams io)
{
    PhysicalConstants c;
    c.hbar_mev_s *= options.hbar_scale;
    c.slope_factor *= options.slope_scale;

    std::vector<Check> checks;
    auto add = [&](std::string name, const std::function<std::pair<bool, std::string>()>& body) {
        try {
            auto [ok, detail] = body();
            checks.push_back({std::move(name), ok, std::move(detail)});
        } catch (const Error& e) {
            checks.push_back({std::move(name), false, std::string("error: ") + e.what()});
        }
    };

    // Table rows re-enter through their lifetimes so that hbar takes part.
    const auto& fixture = table1_fixture().records;
    std::vector<IndexReport> reports;
    for (const auto& rec : fixture) {
        const ParticleRecord timed{rec.name, rec.mass_mev, {}, width_to_lifetime(*rec.width_mev), {}, {}};
        reports.push_back(build_index_report(timed, c));
    }
    auto column = [&](bool n0) {
        int hits = 0;
        std::string misses;
        for (std::size_t i = 0; i < fixture.size(); ++i) {
            const int got = n0 ? reports[i].n0_eq19 : reports[i].n_eq1;
            const int want = n0 ? *fixture[i].expected_n0 : *fixture[i].expected_n;
            if (got == want) {
                ++hits;
            } else {
                misses += fmt::format(" {} ({} vs {})", fixture[i].name, got, want);
            }
        }
        return std::pair{hits == static_cast<int>(fixture.size()),
                         fmt::format("{}/{} rows{}", hits, fixture.size(), misses)};
    };
    add("table-n", [&] { return column(false); });
    add("table-n0", [&] { return column(true); });

    add("delay-maximum", [&] {
        double worst = 0.0;
        for (double g : {0.1, 1.0, 100.0}) {
            const Resonance r(1000.0, g);
            const auto found = delay_profile_max_slope_numeric(r);
            const double loc = r.e0() - g / (2.0 * std::sqrt(3.0));
            const double val = c.slope_factor / (g * g);
            worst = std::max({worst, std::abs(found.location - loc) / std::abs(loc), std::abs(found.value - val) / val});
        }
        return std::pair{worst < 1e-6, fmt::format("worst relative error {:.2e} (limit 1e-6)", worst)};
    });

    add("quadrature", [&] {
        const Resonance r(500.0, 2.0);
        double worst = 0.0;
        for (double w : {1.0, 10.0, 100.0}) {
            const DelayProfile p{{r}, r.e0() - w * r.gamma(), r.e0() + w * r.gamma()};
            const double exact = 4.0 * std::atan(2.0 * w);
            worst = std::max(worst, std::abs(integrate_time_delay(p).value - exact) / exact);
        }
        const DelayProfile wide{{r}, r.e0() - 50 * r.gamma(), r.e0() + 50 * r.gamma()};
        const double count = count_resonances(wide);
        const bool ok = worst < 1e-9 && std::abs(count - 0.9936) <= 0.001;
        return std::pair{ok, fmt::format("worst relative error {:.2e}, count over +-50 Gamma {:.5f}", worst, count)};
    });

    add("bracket", [&] {
        int good = 0;
        std::string misses;
        for (std::size_t i = 0; i < fixture.size(); ++i) {
            const auto& rec = fixture[i];
            const Resonance r(rec.mass_mev, lifetime_to_width(width_to_lifetime(*rec.width_mev), c.hbar_mev_s));
            const int n0 = *rec.expected_n0;
            const auto at = check_bracket_inequality(rec.mass_mev, r, n0, c);
            bool ok = at.inequality.holds && at.bracket_positive;
            if (n0 > 1) ok = ok && !check_bracket_inequality(rec.mass_mev, r, n0 - 1, c).bracket_positive;
            if (ok) {
                ++good;
            } else {
                misses += " " + rec.name;
            }
        }
        return std::pair{good == static_cast<int>(fixture.size()),
                         fmt::format("{}/{} rows positive at n0 and not below{}", good, fixture.size(), misses)};
    });

    add("series", [&] {
        bool ok = true;
        std::string table;
        for (const auto& rec : fixture) {
            const int n0 = *rec.expected_n0;
            const auto s = series_lower_bound(n0, c);
            const double eq1 = std::ldexp(1.0, n0) / n0;
            ok = ok && s.closed_form < eq1;
            if (s.partial_sum) ok = ok && std::abs(*s.partial_sum - s.closed_form) <= 1e-12 * s.closed_form;
            table += fmt::format(" {}:{:.4f}", n0, s.closed_form / eq1);
        }
        return std::pair{ok, "n0:ratio" + table};
    });

    add("partition", [&] {
        const double estar = 1024.0;
        const int n = 12;
        const DelayProfile p{{Resonance(512.375, 2.5)}, 0.0, estar};
        const auto chk = check_partition_inequality(estar, p, n, 2048 - n / 2 + 1);
        return std::pair{chk.inequality.holds && chk.resonances_covered == 1, chk.inequality.context};
    });

    bool all = true;
    for (const auto& ch : checks) all = all && ch.passed;

    if (options.json) {
        ordered_json doc;
        doc["passed"] = all;
        doc["hbar_scale"] = options.hbar_scale;
        doc["slope_scale"] = options.slope_scale;
        doc["checks"] = ordered_json::array();
        for (const auto& ch : checks) doc["checks"].push_back({{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
        io.out << doc.dump(2) << '\n';
    } else {
        for (const auto& ch : checks) io.out << fmt::format("{} {:<14} {}\n", ch.passed ? "PASS" : "FAIL", ch.name, ch.detail);
        io.out << (all ? "all checks passed\n" : "some checks FAILED\n");
    }
    return all ? kExitOk : kExitMismatch;
}

int run(int argc, const char* const* argv, Streams io)
{
    CLI::App app{"Stability indices and time-delay checks for unstable particles"};
    app.require_subcommand(1);

    const std::map<std::string, ReportFormat> formats{
        {"text", ReportFormat::Text}, {"csv", ReportFormat::Csv}, {"json", ReportFormat::Json}};
    const std::map<std::string, CatalogFormat> catalog_formats{{"csv", CatalogFormat::Csv}, {"json", CatalogFormat::Json}};

    IndexOptions index_opts;
    std::optional<CatalogFormat> input_format;
    auto* index = app.add_subcommand("index", "Compute both indices for every record of a catalog");
    index->add_option("-i,--input", index_opts.input, "Catalog file (csv or json), '-' for stdin")->required();
    index->add_option("--input-format", input_format, "csv or json (default: from extension)")
        ->transform(CLI::CheckedTransformer(catalog_formats, CLI::ignore_case));
    index->add_option("-f,--format", index_opts.format, "text, csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    index->add_option("-o,--output", index_opts.output, "Output file (default: stdout)");

    ReportFormat table_format = ReportFormat::Text;
    auto* table = app.add_subcommand("table1", "Reproduce the embedded twelve-hadron table");
    table->add_option("-f,--format", table_format, "text, csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

    LocateOptions locate_opts;
    auto* loc = app.add_subcommand("locate", "Isolation and resolution depths in the dyadic subdivision of [0, E*]");
    loc->add_option("--estar", locate_opts.estar, "Window end E* in MeV")->required();
    loc->add_option("--resonances", locate_opts.resonances, "Comma-separated E0:gamma pairs")->required();
    loc->add_option("-f,--format", locate_opts.format, "text, csv or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

    ScatterOptions scatter_opts;
    auto* scat = app.add_subcommand("scatter", "Square-well phase shifts, Levinson check and resonance count");
    scat->add_option("--depth,--v0", scatter_opts.depth, "Well depth V0 (units 2m = hbar = 1)")->required();
    scat->add_option("--radius", scatter_opts.radius, "Well radius R")->capture_default_str();
    scat->add_option("--ell", scatter_opts.ell, "Partial wave, 0 or 1")->capture_default_str();
    scat->add_option("--e-max", scatter_opts.e_max, "Upper end of the counting integral")->capture_default_str();
    scat->add_option("--e-threshold", scatter_opts.e_threshold, "Lower end of the counting integral")
        ->capture_default_str();
    scat->add_option("--levinson-tolerance", scatter_opts.levinson_tolerance, "Allowed |delta(0+) - pi n_B|")
        ->capture_default_str();
    scat->add_option("--delay-points", scatter_opts.delay_points, "Rows in the delay table")->capture_default_str();
    scat->add_option("-o,--output", scatter_opts.output, "Prefix for <prefix>.phase.csv and <prefix>.delay.csv");
    scat->add_option("-f,--format", scatter_opts.format, "text or json")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

    VerifyOptions verify_opts;
    auto* ver = app.add_subcommand("verify", "Run the numerical self-checks");
    ver->add_option("--perturb-hbar", verify_opts.hbar_scale, "Scale hbar (negative control)")->capture_default_str();
    ver->add_option("--perturb-slope", verify_opts.slope_scale, "Scale the 3 sqrt 3 factor (negative control)")
        ->capture_default_str();
    ver->add_flag("--json", verify_opts.json, "Machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, io.out, io.err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (index->parsed()) {
        index_opts.input_format = input_format;
        return cmd_index(index_opts, io);
    }
    if (table->parsed()) return cmd_table1(table_format, io);
    if (loc->parsed()) return cmd_locate(locate_opts, io);
    if (scat->parsed()) return cmd_scatter(scatter_opts, io);
    if (ver->parsed()) return cmd_verify(verify_opts, io);
    return kExitUsage;
}

}  // namespace tdelay::cli
