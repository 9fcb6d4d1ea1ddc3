#include "catlift/emit.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace catlift::io {

namespace {

// shortest decimal that round-trips the double
std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::runtime_error("Table: row width does not match header");
    rows.push_back(std::move(row));
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (const double* d = std::get_if<double>(&row[i]))
                out += format_double(*d);
            else
                out += std::get<std::string>(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (const double* d = std::get_if<double>(&row[i]))
                obj[table.columns[i]] = *d;
            else
                obj[table.columns[i]] = std::get<std::string>(row[i]);
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

std::string render(const Table& table, const std::string& format) {
    if (format == "csv") return to_csv(table);
    if (format == "json") return to_json(table);
    throw std::runtime_error("unknown output format: " + format);
}

void write_atomic(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("rename failed for: " + path);
    }
}

}  // namespace catlift::io
