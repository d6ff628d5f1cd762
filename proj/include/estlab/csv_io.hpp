#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "estlab/core_model.hpp"

namespace estlab {

struct CsvRecord {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

/// RFC-4180 style: comma separator, optional double quotes with "" escapes, CRLF tolerated.
[[nodiscard]] std::vector<CsvRecord> read_csv(std::istream& in);

/// Role (y, x, z, phi1, phi2, responder, stratum) to column name.
using ColumnSchema = std::map<std::string, std::string>;

/// Parses "y=COL,x=COL,..."; an empty string maps every role present in the header to itself.
[[nodiscard]] ColumnSchema parse_schema(const std::string& spec);

/// Parses a finite decimal number; throws parse errors naming the line and column.
[[nodiscard]] double parse_number(const std::string& text, std::size_t line, const std::string& column);

[[nodiscard]] FinitePopulation load_population(std::istream& in, const ColumnSchema& schema);
/// Throws io errors with the path when the file cannot be opened.
[[nodiscard]] FinitePopulation load_population(const std::string& path, const ColumnSchema& schema);

}  // namespace estlab
