#include "povml/table.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"

namespace povml {

using nlohmann::json;

RawTable::RawTable(Schema schema, std::size_t n_rows)
    : schema_(std::move(schema)), n_rows_(n_rows) {
    numeric_.resize(schema_.size());
    text_.resize(schema_.size());
    for (std::size_t c = 0; c < schema_.size(); ++c) {
        if (is_numeric_role(schema_.at(c).role)) {
            numeric_[c].values.resize(n_rows, 0.0);
            numeric_[c].missing.resize(n_rows, 0);
        } else {
            text_[c].resize(n_rows);
        }
    }
}

bool RawTable::is_missing(std::size_t row, std::size_t col) const {
    if (!is_numeric_role(schema_.at(col).role)) return text_[col][row].empty();
    return numeric_[col].missing[row] != 0;
}

double RawTable::number(std::size_t row, std::size_t col) const {
    return numeric_[col].values[row];
}

const std::string& RawTable::text(std::size_t row, std::size_t col) const {
    return text_[col][row];
}

namespace {

// RFC4180-ish: comma-separated, double quotes enclose fields, "" escapes a
// quote inside a quoted field. A quoted field may contain commas but not
// newlines (the survey data has none).
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') return false;
    out = v;
    return true;
}

}  // namespace

RawTable load_csv(const std::string& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open dataset file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw InputError("dataset file '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // strip a UTF-8 BOM if present
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
        line.erase(0, 3);

    const std::vector<std::string> header = split_csv_line(line);

    // Header must be a permutation of the schema names (exact, case-sensitive).
    std::vector<std::size_t> col_of_field(header.size());
    std::vector<bool> seen(schema.size(), false);
    std::vector<std::string> unknown;
    for (std::size_t f = 0; f < header.size(); ++f) {
        auto idx = schema.find(header[f]);
        if (!idx || seen[*idx]) {
            unknown.push_back(header[f]);
            continue;
        }
        seen[*idx] = true;
        col_of_field[f] = *idx;
    }
    std::vector<std::string> absent;
    for (std::size_t c = 0; c < schema.size(); ++c)
        if (!seen[c]) absent.push_back(schema.at(c).name);
    if (!unknown.empty() || !absent.empty()) {
        std::ostringstream msg;
        msg << "header mismatch in '" << path << "':";
        if (!unknown.empty()) {
            msg << " unknown columns [";
            for (std::size_t i = 0; i < unknown.size(); ++i)
                msg << (i ? ", " : "") << "'" << unknown[i] << "'";
            msg << "]";
        }
        if (!absent.empty()) {
            msg << " absent columns [";
            for (std::size_t i = 0; i < absent.size(); ++i)
                msg << (i ? ", " : "") << "'" << absent[i] << "'";
            msg << "]";
        }
        throw InputError(msg.str());
    }

    // First pass: collect raw lines so the table can be sized up front.
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;  // trailing newline
        lines.push_back(std::move(line));
    }

    RawTable table(schema, lines.size());
    for (std::size_t r = 0; r < lines.size(); ++r) {
        const std::vector<std::string> fields = split_csv_line(lines[r]);
        if (fields.size() != header.size())
            throw InputError("row " + std::to_string(r + 2) + " in '" + path + "' has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        for (std::size_t f = 0; f < fields.size(); ++f) {
            const std::size_t c = col_of_field[f];
            const VariableSpec& var = schema.at(c);
            if (!is_numeric_role(var.role)) {
                table.text_[c][r] = fields[f];
                continue;
            }
            const std::string token = trim(fields[f]);
            double value = 0.0;
            if (token.empty()) {
                table.numeric_[c].missing[r] = 1;
            } else if (token == "yes") {
                table.numeric_[c].values[r] = 1.0;
            } else if (token == "no") {
                table.numeric_[c].values[r] = 0.0;
            } else if (parse_number(token, value)) {
                table.numeric_[c].values[r] = value;
            } else {
                table.numeric_[c].missing[r] = 1;
            }
        }
    }
    return table;
}

DatasetProfile profile(const RawTable& table) {
    DatasetProfile p;
    p.n_rows = table.n_rows();
    p.n_cols = table.n_cols();
    const Schema& schema = table.schema();

    for (std::size_t c = 0; c < schema.size(); ++c) {
        std::size_t missing = 0;
        for (std::size_t r = 0; r < table.n_rows(); ++r)
            if (table.is_missing(r, c)) ++missing;
        p.missing_by_column[schema.at(c).name] = missing;
    }

    const std::size_t target = schema.target_index();
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        if (table.is_missing(r, target)) continue;
        p.class_counts[static_cast<int>(table.number(r, target))]++;
    }

    if (auto area1 = schema.find("area1")) {
        for (std::size_t r = 0; r < table.n_rows(); ++r)
            if (!table.is_missing(r, *area1) && table.number(r, *area1) == 1.0) ++p.urban_count;
    }
    return p;
}

json DatasetProfile::to_json() const {
    json j;
    j["n_rows"] = n_rows;
    j["n_cols"] = n_cols;
    json missing = json::object();
    for (const auto& [name, count] : missing_by_column) missing[name] = count;
    j["missing_by_column"] = std::move(missing);
    json classes = json::object();
    for (const auto& [cls, count] : class_counts) classes[std::to_string(cls)] = count;
    j["class_counts"] = std::move(classes);
    j["urban_count"] = urban_count;
    return j;
}

}  // namespace povml
