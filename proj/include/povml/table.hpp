#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "povml/schema.hpp"

namespace povml {

// Parsed survey rows in schema column order. Numeric-role cells are stored as
// value + missing flag, id-role cells as raw text. Immutable after load and
// safe to share read-only across threads.
class RawTable {
public:
    RawTable(Schema schema, std::size_t n_rows);

    const Schema& schema() const { return schema_; }
    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return schema_.size(); }

    bool is_missing(std::size_t row, std::size_t col) const;
    double number(std::size_t row, std::size_t col) const;
    const std::string& text(std::size_t row, std::size_t col) const;

private:
    friend RawTable load_csv(const std::string&, const Schema&);

    struct NumericColumn {
        std::vector<double> values;
        std::vector<unsigned char> missing;
    };

    Schema schema_;
    std::size_t n_rows_;
    std::vector<NumericColumn> numeric_;       // indexed by column, empty for id columns
    std::vector<std::vector<std::string>> text_;  // indexed by column, empty for numeric
};

// Parses a UTF-8 comma-separated file with a header row (quoted fields
// allowed) against the schema. The header must contain exactly the schema's
// column names, in any order. In numeric-role columns the tokens "yes"/"no"
// map to 1/0; empty cells and anything else that fails numeric parsing become
// missing.
RawTable load_csv(const std::string& path, const Schema& schema);

struct DatasetProfile {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::map<std::string, std::size_t> missing_by_column;
    std::map<int, std::size_t> class_counts;
    std::size_t urban_count = 0;

    nlohmann::json to_json() const;
};

// Exact per-column missing counts, per-class counts and the urban count
// (area1 == 1). Total over a valid table.
DatasetProfile profile(const RawTable& table);

}  // namespace povml
