#include "estlab/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "estlab/errors.hpp"

namespace estlab {

std::vector<CsvRecord> read_csv(std::istream& in) {
    std::vector<CsvRecord> out;
    std::string field;
    CsvRecord rec;
    std::size_t line = 1;
    rec.line = 1;
    bool quoted = false, atFieldStart = true, any = false;
    char ch;
    const auto end_record = [&] {
        rec.fields.push_back(std::move(field));
        field.clear();
        const bool blank = rec.fields.size() == 1 && rec.fields[0].empty();
        if (!blank) out.push_back(std::move(rec));
        rec = CsvRecord{};
        atFieldStart = true;
        any = false;
    };
    while (in.get(ch)) {
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        if (!any) {
            rec.line = line;
            any = true;
        }
        if (ch == '"' && atFieldStart) {
            quoted = true;
            atFieldStart = false;
        } else if (ch == ',') {
            rec.fields.push_back(std::move(field));
            field.clear();
            atFieldStart = true;
        } else if (ch == '\r') {
            if (in.peek() != '\n') field.push_back(ch);
        } else if (ch == '\n') {
            end_record();
            ++line;
        } else {
            field.push_back(ch);
            atFieldStart = false;
        }
    }
    if (quoted) fail(ErrorKind::parse, "line " + std::to_string(rec.line) + ": unterminated quoted field");
    if (any) end_record();
    return out;
}

namespace {

const std::set<std::string>& known_roles() {
    static const std::set<std::string> roles{"y", "x", "z", "phi1", "phi2", "responder", "stratum"};
    return roles;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

ColumnSchema parse_schema(const std::string& spec) {
    ColumnSchema out;
    std::size_t pos = 0;
    while (pos <= spec.size() && !spec.empty()) {
        const auto comma = spec.find(',', pos);
        const std::string item = trim(spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        const auto eq = item.find('=');
        if (eq == std::string::npos) fail(ErrorKind::validation, "schema item '" + item + "' is not ROLE=COLUMN");
        const std::string role = trim(item.substr(0, eq)), col = trim(item.substr(eq + 1));
        if (!known_roles().count(role)) fail(ErrorKind::validation, "unknown schema role '" + role + "'");
        if (col.empty()) fail(ErrorKind::validation, "schema role '" + role + "' has no column");
        out[role] = col;
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

double parse_number(const std::string& text, std::size_t line, const std::string& column) {
    const std::string t = trim(text);
    double v = 0;
    const char* b = t.data();
    const char* e = b + t.size();
    if (b != e && *b == '+') ++b;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (t.empty() || ec != std::errc() || ptr != e || !std::isfinite(v)) {
        fail(ErrorKind::parse, "line " + std::to_string(line) + ", column '" + column + "': cannot parse '" + text +
                                   "' as a number");
    }
    return v;
}

FinitePopulation load_population(std::istream& in, const ColumnSchema& schemaIn) {
    const auto records = read_csv(in);
    if (records.empty()) fail(ErrorKind::schema, "input has no header row");
    const auto& header = records.front().fields;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) index[trim(header[i])] = i;

    ColumnSchema schema = schemaIn;
    if (schema.empty()) {
        for (const auto& r : known_roles()) {
            if (index.count(r)) schema[r] = r;
        }
    }
    if (!schema.count("y")) fail(ErrorKind::schema, "schema does not map the study variable y");
    std::string missing;
    for (const auto& [role, col] : schema) {
        if (!index.count(col)) missing += (missing.empty() ? "" : ", ") + col;
    }
    if (!missing.empty()) fail(ErrorKind::schema, "missing columns: " + missing);

    std::map<std::string, std::vector<double>> num;
    std::vector<std::string> strata;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size()) {
            fail(ErrorKind::parse, "line " + std::to_string(rec.line) + ": expected " + std::to_string(header.size()) +
                                       " fields, found " + std::to_string(rec.fields.size()));
        }
        for (const auto& [role, col] : schema) {
            const auto& cell = rec.fields[index[col]];
            if (role == "stratum") strata.push_back(trim(cell));
            else num[role].push_back(parse_number(cell, rec.line, col));
        }
    }

    const auto as_bits = [&](const std::string& role) {
        std::vector<int> v;
        for (std::size_t i = 0; i < num[role].size(); ++i) {
            const double d = num[role][i];
            if (d != 0 && d != 1) {
                fail(ErrorKind::validation, "line " + std::to_string(records[i + 1].line) + ", column '" +
                                                schema.at(role) + "': attribute values must be 0 or 1");
            }
            v.push_back(static_cast<int>(d));
        }
        return v;
    };
    PopulationColumns cols;
    cols.y = num["y"];
    if (schema.count("x")) cols.x = num["x"];
    if (schema.count("z")) cols.z = num["z"];
    if (schema.count("phi1")) cols.phi1 = as_bits("phi1");
    if (schema.count("phi2")) cols.phi2 = as_bits("phi2");
    if (schema.count("responder")) cols.responder = as_bits("responder");
    if (schema.count("stratum")) cols.stratum = strata;
    return FinitePopulation(std::move(cols));
}

FinitePopulation load_population(const std::string& path, const ColumnSchema& schema) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
    return load_population(in, schema);
}

}  // namespace estlab
