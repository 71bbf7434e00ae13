#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rodimpact {

// Shortest decimal string that round-trips to exactly the same binary64
// value (via std::to_chars). This pins CSV output byte-for-byte: identical
// runs serialize to identical files.
std::string format_double(double value);

// One CSV cell: engaged doubles are formatted shortest-round-trip, integers
// verbatim, strings as-is (values never contain commas or newlines here);
// disengaged optionals become empty fields, which is how quantities that do
// not exist for a method keep the column count constant.
struct CsvCell {
    CsvCell(double v) : text(format_double(v)) {}
    CsvCell(int v) : text(std::to_string(v)) {}
    CsvCell(long v) : text(std::to_string(v)) {}
    CsvCell(std::string v) : text(std::move(v)) {}
    CsvCell(const char* v) : text(v) {}
    CsvCell(std::optional<double> v) : text(v ? format_double(*v) : std::string{}) {}

    std::string text;
};

// A rectangular CSV payload with a schema identifier. The identifier is
// written as a leading '#' comment so consumers can hard-fail on layout
// drift; the header row follows, then the data rows.
struct CsvTable {
    std::string schema;  // e.g. "rodimpact-series v1"
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;

    // Throws ValidationError when a row width disagrees with the header.
    void validate() const;
};

void write_csv(std::ostream& os, const CsvTable& table);
std::string to_csv_string(const CsvTable& table);

// Space-padded fixed-width rendering of the same table for terminals; empty
// cells print as '-'. Column widths adapt to the content.
std::string to_aligned_text(const CsvTable& table);

}  // namespace rodimpact
