#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace gupqm::cli {

using Json = nlohmann::ordered_json;

/// A cell: text, integer, or double (printed with 17 significant digits).
using Cell = std::variant<std::string, std::int64_t, double>;

/// Column-ordered rows for CSV or JSON output.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    void write_csv(std::ostream& os) const;
    Json to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// %.17g, with nan/inf spelled out.
std::string format_double(double x);

/// JSON number, or null when not finite.
Json json_number(double x);

}  // namespace gupqm::cli
