#ifndef URARQ_RECORD_HPP
#define URARQ_RECORD_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace urarq {

using Value = std::variant<std::int64_t, double, std::string>;

// A rectangular result table. Every row carries exactly one value per
// column, so downstream parsing never has to guess at layout.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    void add_row(std::vector<Value> row);
};

// Doubles are printed with nine significant digits; this is the single
// formatting point shared by both writers, so reruns are byte-identical.
std::string format_value(const Value& v);

// RFC 4180 CSV: header row, CRLF-free LF line ends, minimal quoting.
void write_csv(const Table& table, std::ostream& os);

// JSON document {"columns": [...], "rows": [[...], ...]} with the same
// value formatting as the CSV writer.
void write_structured(const Table& table, std::ostream& os);

// Parse CSV produced by write_csv. All fields come back as strings.
Table read_csv(std::istream& is);

} // namespace urarq

#endif
