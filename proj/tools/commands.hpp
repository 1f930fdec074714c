#pragma once
// Subcommands of the tdelay tool. Each returns the process exit status:
// 0 ok, 1 scientific mismatch, 2 usage or I/O error.
#include "tdelay/catalog.hpp"
#include "tdelay/constants.hpp"
#include "tdelay/resonance.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tdelay::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

enum class ReportFormat
{
    Text,
    Csv,
    Json,
};

std::optional<ReportFormat> parse_report_format(std::string_view name);

struct Streams
{
    std::ostream& out;
    std::ostream& err;
};

struct IndexOptions
{
    std::string input;                          // path, "-" for stdin
    std::optional<CatalogFormat> input_format;  // default: from extension, else CSV
    ReportFormat format = ReportFormat::Text;
    std::string output;                         // empty: standard output
};

struct LocateOptions
{
    double estar = 0.0;
    std::string resonances;  // "E0:gamma,E0:gamma,..."
    ReportFormat format = ReportFormat::Text;
};

struct ScatterOptions
{
    double depth = 0.0;
    double radius = 1.0;
    int ell = 0;
    double e_max = 1.0;
    std::string output;               // prefix for <prefix>.phase.csv and <prefix>.delay.csv
    int delay_points = 2000;
    double levinson_tolerance = 0.05;
    double e_threshold = 1e-8;
    ReportFormat format = ReportFormat::Text;
};

struct VerifyOptions
{
    double hbar_scale = 1.0;   // multiplies hbar in the index computations
    double slope_scale = 1.0;  // multiplies the 3 sqrt 3 slope factor
    bool json = false;
};

/// "300:100, 700:1" -> resonances. Throws ParseError naming the bad item.
std::vector<Resonance> parse_resonance_list(std::string_view text);

int cmd_index(const IndexOptions& options, Streams io);
int cmd_table1(ReportFormat format, Streams io);
int cmd_locate(const LocateOptions& options, Streams io);
int cmd_scatter(const ScatterOptions& options, Streams io);
int cmd_verify(const VerifyOptions& options, Streams io);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, Streams io);

}  // namespace tdelay::cli
