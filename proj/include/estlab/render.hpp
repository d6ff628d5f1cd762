#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace estlab {

using Value = std::variant<std::monostate, std::string, double, std::int64_t, bool>;

struct Table {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
};

enum class Format { text, csv, jsonl };

/// Throws validation errors for names other than text, csv, jsonl.
[[nodiscard]] Format format_from_string(const std::string& s);

/// Shortest decimal string that parses back to the same double.
[[nodiscard]] std::string shortest_repr(double v);

/// text: aligned columns, numbers at 6 significant digits.
/// csv and jsonl: full round-trip precision, one line per row after the csv header.
void render(const Table& t, Format f, std::ostream& out);

/// Writes to `path`, or to stdout when it is empty; io errors name the path.
void render_to(const Table& t, Format f, const std::optional<std::string>& path);

}  // namespace estlab
