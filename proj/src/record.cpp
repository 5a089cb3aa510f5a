#include "urarq/record.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include "urarq/errors.hpp"

namespace urarq {

void Table::add_row(std::vector<Value> row) {
    if (row.size() != columns.size()) {
        throw UsageError("row width does not match column count");
    }
    rows.push_back(std::move(row));
}

std::string format_value(const Value& v) {
    if (std::holds_alternative<std::int64_t>(v)) {
        return std::to_string(std::get<std::int64_t>(v));
    }
    if (std::holds_alternative<double>(v)) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.9g", std::get<double>(v));
        return buf;
    }
    return std::get<std::string>(v);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string json_cell(const Value& v) {
    if (std::holds_alternative<std::string>(v)) {
        return json_escape(std::get<std::string>(v));
    }
    return format_value(v);
}

} // namespace

void write_csv(const Table& table, std::ostream& os) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) os << ',';
        os << csv_escape(table.columns[c]);
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << csv_escape(format_value(row[c]));
        }
        os << '\n';
    }
}

void write_structured(const Table& table, std::ostream& os) {
    os << "{\n  \"columns\": [";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) os << ", ";
        os << json_escape(table.columns[c]);
    }
    os << "],\n  \"rows\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        os << (r ? ",\n    [" : "\n    [");
        const auto& row = table.rows[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ", ";
            os << json_cell(row[c]);
        }
        os << ']';
    }
    os << "\n  ]\n}\n";
}

Table read_csv(std::istream& is) {
    std::string text(std::istreambuf_iterator<char>(is), {});
    std::vector<std::vector<std::string>> lines;
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool line_open = false;

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                line_open = true;
                break;
            case ',':
                fields.push_back(std::move(cur));
                cur.clear();
                line_open = true;
                break;
            case '\r':
                break;
            case '\n':
                if (line_open || !cur.empty()) {
                    fields.push_back(std::move(cur));
                    cur.clear();
                    lines.push_back(std::move(fields));
                    fields.clear();
                    line_open = false;
                }
                break;
            default:
                cur += c;
                line_open = true;
        }
    }
    if (quoted) throw UsageError("unterminated quoted CSV field");
    if (line_open || !cur.empty()) {
        fields.push_back(std::move(cur));
        lines.push_back(std::move(fields));
    }
    if (lines.empty()) throw UsageError("CSV input has no header");

    Table table;
    table.columns = lines.front();
    for (std::size_t r = 1; r < lines.size(); ++r) {
        std::vector<Value> row;
        row.reserve(lines[r].size());
        for (auto& f : lines[r]) row.emplace_back(std::move(f));
        table.add_row(std::move(row));
    }
    return table;
}

} // namespace urarq
