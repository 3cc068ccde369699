#include "nvadjust/table.hpp"

#include "nvadjust/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nvadjust {

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("unknown output format: '" + name + "' (expected csv or json)");
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

Table& Table::begin_row() {
    rows_.emplace_back();
    rows_.back().reserve(columns_.size());
    return *this;
}

Table& Table::cell(double value) {
    rows_.back().push_back({format_double(value), false});
    return *this;
}

Table& Table::cell(std::size_t value) {
    rows_.back().push_back({std::to_string(value), false});
    return *this;
}

Table& Table::cell(const std::string& value) {
    rows_.back().push_back({value, true});
    return *this;
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (c) out += ',';
        out += columns_[c];
    }
    out += '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += row[c].text;
        }
        out += '\n';
    }
    return out;
}

std::string Table::to_json() const {
    std::string out = "[";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        out += r ? ",\n " : "\n ";
        out += '{';
        for (std::size_t c = 0; c < rows_[r].size(); ++c) {
            if (c) out += ',';
            out += '"';
            out += columns_[c];
            out += "\":";
            if (rows_[r][c].quoted) {
                out += '"';
                out += rows_[r][c].text;
                out += '"';
            } else {
                out += rows_[r][c].text;
            }
        }
        out += '}';
    }
    out += "\n]\n";
    return out;
}

std::string Table::write(const std::string& dir, const std::string& stem,
                         OutputFormat format) const {
    std::filesystem::create_directories(dir);
    const std::string path =
        (std::filesystem::path(dir) / (stem + (format == OutputFormat::csv ? ".csv" : ".json")))
            .string();
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open output file: " + path);
    }
    out << (format == OutputFormat::csv ? to_csv() : to_json());
    if (!out) {
        throw DataError("failed writing output file: " + path);
    }
    return path;
}

} // namespace nvadjust
