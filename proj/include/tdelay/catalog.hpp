#pragma once

#include "tdelay/constants.hpp"
#include "tdelay/format.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tdelay {

/// A named particle with its mass and either a width or a lifetime.
///
/// Exactly one of width/lifetime is stored, as ingested; the other is derived
/// through Gamma * tau = hbar. Masses and widths are in MeV, lifetimes in
/// seconds. For a decaying particle the mass doubles as the energy scale E*.
struct ParticleRecord
{
    std::string name;
    double mass_mev = 0.0;
    std::optional<double> width_mev;
    std::optional<double> lifetime_s;
    std::optional<int> expected_n;
    std::optional<int> expected_n0;

    /// Throws Error(InvalidArgument) when the record breaks its invariants.
    void validate() const;

    double width(double hbar_mev_s = kHbarMeVs) const;
    double lifetime(double hbar_mev_s = kHbarMeVs) const;

    friend bool operator==(const ParticleRecord&, const ParticleRecord&) = default;
};

struct Catalog
{
    std::vector<ParticleRecord> records;
    std::string source;
};

enum class CatalogFormat
{
    Csv,
    Json,
};

std::optional<CatalogFormat> parse_catalog_format(std::string_view name);

// Width <-> lifetime, Gamma = hbar / tau. Both throw Error(NonPositive)
// unless the value is finite and positive.
double width_to_lifetime(double width_mev, double hbar_mev_s = kHbarMeVs);
double lifetime_to_width(double lifetime_s, double hbar_mev_s = kHbarMeVs);

enum class ConversionDirection
{
    WidthToLifetime,
    LifetimeToWidth,
};

double convert_width_lifetime(double value, ConversionDirection direction, double hbar_mev_s = kHbarMeVs);

struct ParseOptions
{
    // Accept and ignore columns (CSV) or keys (JSON) beyond the catalog
    // schema. Used when re-reading report tables that append derived columns.
    bool allow_extra_fields = false;
};

/// Strict reader for the catalog CSV and JSON schemas.
///
/// CSV: header naming the six columns name, mass_mev, width_mev, lifetime_s,
/// expected_n, expected_n0 (any order); empty cell = absent; lines starting
/// with '#' are comments; fields may be double-quoted. JSON: an array of
/// objects with the same keys; a missing key or null means absent.
///
/// Throws ParseError with codes ParseError, DuplicateName or
/// MissingRequiredColumn; rows are numbered from 1 at the header line (CSV)
/// or at the first array element (JSON).
Catalog parse_catalog(std::istream& input, CatalogFormat format, const ParseOptions& options = {});
Catalog parse_catalog(std::string_view text, CatalogFormat format, const ParseOptions& options = {});

/// Writes the catalog in the schema parse_catalog reads. Numbers are printed
/// with round-trip precision.
std::string serialize_catalog(const Catalog& catalog, CatalogFormat format);

/// The twelve hadrons of the reference comparison table, verbatim.
const Catalog& table1_fixture();

}  // namespace tdelay
