#include "estlab/render.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "estlab/errors.hpp"

namespace estlab {

Format format_from_string(const std::string& s) {
    if (s == "text") return Format::text;
    if (s == "csv") return Format::csv;
    if (s == "jsonl" || s == "json-lines") return Format::jsonl;
    fail(ErrorKind::validation, "unknown format '" + s + "' (expected text, csv or jsonl)");
}

std::string shortest_repr(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

namespace {

std::string text_cell(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "-";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return x;
            } else if constexpr (std::is_same_v<T, double>) {
                std::array<char, 64> buf{};
                std::snprintf(buf.data(), buf.size(), "%.6g", x == 0 ? 0.0 : x);
                return buf.data();
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "yes" : "no";
            } else {
                return std::to_string(x);
            }
        },
        v);
}

std::string csv_cell(const Value& v) {
    std::string s = std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, std::string>) return x;
            else if constexpr (std::is_same_v<T, double>) return shortest_repr(x);
            else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else return std::to_string(x);
        },
        v);
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

nlohmann::json json_cell(const Value& v) {
    return std::visit(
        [](const auto& x) -> nlohmann::json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, double>) return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
            else return x;
        },
        v);
}

}  // namespace

void render(const Table& t, Format f, std::ostream& out) {
    switch (f) {
        case Format::text: {
            std::vector<std::vector<std::string>> cells;
            std::vector<std::size_t> width(t.columns.size());
            for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
            for (const auto& row : t.rows) {
                auto& r = cells.emplace_back();
                for (std::size_t c = 0; c < t.columns.size(); ++c) {
                    r.push_back(c < row.size() ? text_cell(row[c]) : "");
                    width[c] = std::max(width[c], r.back().size());
                }
            }
            if (!t.title.empty()) out << t.title << '\n';
            const auto line = [&](const std::vector<std::string>& r) {
                for (std::size_t c = 0; c < r.size(); ++c) {
                    out << r[c];
                    if (c + 1 < r.size()) out << std::string(width[c] - r[c].size() + 2, ' ');
                }
                out << '\n';
            };
            line(t.columns);
            for (const auto& r : cells) line(r);
            break;
        }
        case Format::csv: {
            for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << csv_cell(t.columns[c]);
            out << '\n';
            for (const auto& row : t.rows) {
                for (std::size_t c = 0; c < t.columns.size(); ++c) {
                    out << (c ? "," : "") << (c < row.size() ? csv_cell(row[c]) : "");
                }
                out << '\n';
            }
            break;
        }
        case Format::jsonl: {
            for (const auto& row : t.rows) {
                nlohmann::ordered_json j;
                for (std::size_t c = 0; c < t.columns.size(); ++c) {
                    j[t.columns[c]] = c < row.size() ? json_cell(row[c]) : nlohmann::json(nullptr);
                }
                out << j.dump() << '\n';
            }
            break;
        }
    }
}

void render_to(const Table& t, Format f, const std::optional<std::string>& path) {
    if (!path || path->empty()) {
        render(t, f, std::cout);
        return;
    }
    std::ofstream out(*path);
    if (!out) fail(ErrorKind::io, "cannot open '" + *path + "' for writing");
    render(t, f, out);
    out.flush();
    if (!out) fail(ErrorKind::io, "write to '" + *path + "' failed");
}

}  // namespace estlab
