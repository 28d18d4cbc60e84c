#pragma once

// Comma-separated output with '#' comment lines. Numbers use the shortest
// round-trip form so the bytes depend only on the values.

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace cachesec::experiments {

using Cell = std::optional<double>;

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void comment(const std::string& line) { comments_ += "# " + line + "\n"; }
    void preamble(const std::string& text) { preamble_ += text; }

    /// Appends one row; text cells are written verbatim, missing numbers as empty cells.
    void row(const std::vector<std::string>& cells)
    {
        if (cells.size() != columns_.size()) {
            throw Error("csv: row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(columns_.size()));
        }
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                line += ',';
            }
            line += cells[i];
        }
        rows_ += line + "\n";
    }

    void footer(const std::string& line) { footer_ += "# " + line + "\n"; }

    std::string str() const
    {
        std::string header;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i > 0) {
                header += ',';
            }
            header += columns_[i];
        }
        return preamble_ + comments_ + header + "\n" + rows_ + footer_;
    }

private:
    std::vector<std::string> columns_;
    std::string preamble_;
    std::string comments_;
    std::string rows_;
    std::string footer_;
};

inline std::string cell(Cell value)
{
    return value ? format_number(*value) : std::string{};
}

inline std::string count_cell(std::size_t value)
{
    return std::to_string(value);
}

} // namespace cachesec::experiments
