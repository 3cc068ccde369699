#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nvadjust {

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(const std::string& name);

/**
 * A rectangular result table with a fixed column order, writable as CSV or
 * as a JSON array of row objects. Numeric cells are rendered with %.12g and
 * a '.' decimal separator regardless of locale, so identical values always
 * produce identical bytes.
 */
class Table {
public:
    explicit Table(std::vector<std::string> columns);

    Table& begin_row();
    Table& cell(double value);
    Table& cell(std::size_t value);
    Table& cell(const std::string& value);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t row_count() const { return rows_.size(); }

    std::string to_csv() const;
    std::string to_json() const;

    /// Writes to dir/<stem>.csv or dir/<stem>.json; returns the path used.
    std::string write(const std::string& dir, const std::string& stem,
                      OutputFormat format) const;

private:
    struct Cell {
        std::string text;
        bool quoted = false; // strings are quoted in JSON output
    };
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

std::string format_double(double value);

} // namespace nvadjust
