// Deterministic CSV/JSON table emission with atomic file writes.

#pragma once

#include <string>
#include <variant>
#include <vector>

namespace catlift::io {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

std::string to_csv(const Table& table);
std::string to_json(const Table& table);
std::string render(const Table& table, const std::string& format);

// Writes via a temporary file and rename, so a failed run leaves no partial
// output behind. Throws std::runtime_error on I/O failure.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace catlift::io
