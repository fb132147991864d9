#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "povml/matrix.hpp"
#include "povml/table.hpp"

namespace povml {

struct AgeBin {
    std::string label;
    double lo = 0;  // inclusive
    double hi = 0;  // inclusive
};

struct MergeGroup {
    std::string name;
    std::vector<std::string> members;
};

// Rows where every member of the named merge group is zero are removed.
struct DropRowRule {
    std::string group;
    std::optional<std::size_t> expected_drops;  // documented count, checked in the audit
};

// Declarative cleaning rules: which columns go, how categorical groups are
// dummy-encoded, how age is binned, which columns get median imputation, and
// which all-zero group rows are deleted. Serializes to JSON so audits can
// diff the applied rules.
struct WranglePlan {
    std::vector<std::string> drop_columns;
    std::vector<MergeGroup> merge_groups;
    std::string age_column;  // empty = no binning
    std::vector<AgeBin> age_bins;
    std::vector<std::string> impute_median_columns;
    std::vector<DropRowRule> drop_row_rules;

    static WranglePlan from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// The full set of published cleaning rules for the canonical schema.
WranglePlan build_default_plan();

// Order-statistic median; mean of the two central values for even counts.
// Throws on empty input.
double median(std::vector<double> values);

struct ImputerState {
    std::map<std::string, double> medians;

    static ImputerState from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Structural pass: row drops, column drops, dummy validation and age binning.
// Cells of impute_median_columns that were missing stay NaN until impute()
// runs, so evaluation code can fit medians on training rows only.
struct StructuredTable {
    FeatureMatrix matrix;               // may contain NaN in imputable columns
    std::vector<std::string> audit;     // one line per dropped row/column/event
    std::size_t rule_dropped = 0;
    std::size_t contradictory_dropped = 0;
};

StructuredTable wrangle_structural(const RawTable& table, const WranglePlan& plan);

// Medians over the observed (non-NaN) cells of the named columns, optionally
// restricted to a row subset.
ImputerState fit_imputer(const FeatureMatrix& m, const std::vector<std::string>& columns,
                         const std::vector<std::size_t>* rows = nullptr);

void impute(FeatureMatrix& m, const ImputerState& state);

struct WrangleResult {
    FeatureMatrix matrix;
    ImputerState imputer;
    std::vector<std::string> audit;
};

// Structural pass + median imputation fitted on all rows.
WrangleResult apply_plan(const RawTable& table, const WranglePlan& plan);

}  // namespace povml
