#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace gupqm::cli {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("table: row width mismatch");
    rows_.push_back(std::move(row));
}

namespace {

struct CsvCell {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
};

struct JsonCell {
    Json operator()(const std::string& s) const { return s; }
    Json operator()(std::int64_t v) const { return v; }
    Json operator()(double v) const { return json_number(v); }
};

}  // namespace

void Table::write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << columns_[c];
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << std::visit(CsvCell{}, row[c]);
        os << '\n';
    }
}

Json Table::to_json() const {
    Json rows = Json::array();
    for (const auto& row : rows_) {
        Json obj = Json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[columns_[c]] = std::visit(JsonCell{}, row[c]);
        rows.push_back(std::move(obj));
    }
    return rows;
}

}  // namespace gupqm::cli
