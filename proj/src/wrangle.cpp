#include "povml/wrangle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"

namespace povml {

using nlohmann::json;

WranglePlan build_default_plan() {
    WranglePlan plan;

    // Identifiers, the two mostly-missing columns, duplicate household-size
    // columns (r4t3 stays), near-duplicates where the categorical twin stays,
    // and the squared transforms.
    plan.drop_columns = {
        "Id",         "idhogar",        "v2a1",
        "v18q1",      "tamhog",         "tamviv",
        "Hhsize",     "hogar_nin",      "hogar_adul",
        "hogar_mayor", "hogar_total",   "bedrooms",
        "qmobilephone", "SQBescolari",  "SQBage",
        "SQBhogar_total", "SQBedjefe",  "SQBhogar_nin",
        "SQBovercrowding", "SQBdependency", "SQBmeaned",
        "Agesq",
    };

    plan.merge_groups = {
        {"walls",
         {"paredblolad", "paredzocalo", "paredpreb", "pareddes", "paredmad", "paredzinc",
          "paredfibras", "paredother"}},
        {"floor",
         {"pisomoscer", "pisocemento", "pisooother", "pcionatur", "pcionotiene", "pisomadera"}},
        {"roof", {"techozinc", "techoentrepiso", "techocane", "techootro"}},
        {"water", {"abastaguadentro", "abastaguafuera", "abastaguano"}},
        {"electricity", {"Public", "planpri", "noelec", "coopele"}},
        {"sanitation", {"sanitario1", "sanitario2", "sanitario3", "sanitario5", "sanitario6"}},
        {"cooking_energy", {"energcocinar1", "energcocinar2", "energcocinar3", "energcocinar4"}},
        {"rubbish", {"elimbasu1", "elimbasu2", "elimbasu3", "elimbasu4", "elimbasu5", "elimbasu6"}},
        {"wall_quality", {"epared1", "epared2", "epared3"}},
        {"roof_quality", {"etecho1", "etecho2", "etecho3"}},
        {"floor_quality", {"eviv1", "eviv2", "eviv3"}},
        {"sex", {"Male", "female"}},
        {"civil_status",
         {"estadocivil1", "estadocivil2", "estadocivil3", "estadocivil4", "estadocivil5",
          "estadocivil6", "estadocivil7"}},
        {"household_role",
         {"parentesco1", "parentesco2", "parentesco3", "parentesco4", "parentesco5", "parentesco6",
          "parentesco7", "parentesco8", "parentesco9", "parentesco10", "parentesco11",
          "parentesco12"}},
        {"education_level",
         {"instlevel1", "instlevel2", "instlevel3", "instlevel4", "instlevel5", "instlevel6",
          "instlevel7", "instlevel8", "instlevel9"}},
        {"dwelling", {"tipovivi1", "tipovivi2", "tipovivi3", "tipovivi4", "tipovivi5"}},
        {"region", {"lugar1", "lugar2", "lugar3", "lugar4", "lugar5", "lugar6"}},
        {"area", {"area1", "area2"}},
    };

    plan.age_column = "Age";
    plan.age_bins = {
        {"children", 0, 12},           {"adolescents", 13, 17}, {"young_adults", 18, 29},
        {"adults", 30, 44},            {"middle_aged_adults", 45, 64},
        {"old_adults", 65, 100},
    };

    plan.impute_median_columns = {"dependency", "Edjefe", "Edjefa", "meaneduc"};

    plan.drop_row_rules = {
        {"roof", 66},
        {"electricity", 15},
        {"education_level", 3},
    };
    return plan;
}

double median(std::vector<double> values) {
    if (values.empty()) throw StageError("wrangle", "median of empty value list");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

void validate_plan(const WranglePlan& plan, const Schema& schema) {
    auto require = [&](const std::string& name, const char* what) {
        if (!schema.find(name))
            throw StageError("wrangle", std::string(what) + " references unknown column '" +
                                            name + "'");
    };
    for (const auto& c : plan.drop_columns) require(c, "drop_columns");
    std::unordered_set<std::string> member_seen;
    for (const auto& g : plan.merge_groups) {
        if (g.members.empty())
            throw StageError("wrangle", "merge group '" + g.name + "' has no members");
        for (const auto& m : g.members) {
            require(m, "merge group");
            if (!member_seen.insert(m).second)
                throw StageError("wrangle", "column '" + m + "' appears in two merge groups");
        }
    }
    for (const auto& c : plan.impute_median_columns) require(c, "impute_median_columns");
    for (const auto& r : plan.drop_row_rules) {
        bool found = false;
        for (const auto& g : plan.merge_groups) found = found || g.name == r.group;
        if (!found)
            throw StageError("wrangle",
                             "drop_row_rules references unknown group '" + r.group + "'");
    }
    if (!plan.age_column.empty()) {
        require(plan.age_column, "age_column");
        if (plan.age_bins.empty()) throw StageError("wrangle", "age_column set but no age bins");
        for (std::size_t i = 0; i < plan.age_bins.size(); ++i) {
            const AgeBin& b = plan.age_bins[i];
            if (b.hi < b.lo)
                throw StageError("wrangle", "age bin '" + b.label + "' has hi < lo");
            if (i > 0 && plan.age_bins[i].lo != plan.age_bins[i - 1].hi + 1)
                throw StageError("wrangle", "age bins must be contiguous, gap before '" +
                                                b.label + "'");
        }
    }
}

std::size_t age_bin_index(const std::vector<AgeBin>& bins, double age) {
    for (std::size_t i = 0; i < bins.size(); ++i)
        if (age <= bins[i].hi) return i;
    return bins.size() - 1;  // above the top bound: clamp into the last bin
}

}  // namespace

StructuredTable wrangle_structural(const RawTable& table, const WranglePlan& plan) {
    const Schema& schema = table.schema();
    validate_plan(plan, schema);

    StructuredTable out;

    std::unordered_set<std::string> dropped_cols(plan.drop_columns.begin(),
                                                 plan.drop_columns.end());
    std::unordered_map<std::string, std::size_t> group_of;  // member -> merge group index
    for (std::size_t g = 0; g < plan.merge_groups.size(); ++g)
        for (const auto& m : plan.merge_groups[g].members) group_of[m] = g;

    const std::size_t target_col = schema.target_index();

    // Member column indices per group, for the row scans.
    std::vector<std::vector<std::size_t>> group_cols(plan.merge_groups.size());
    for (std::size_t g = 0; g < plan.merge_groups.size(); ++g)
        for (const auto& m : plan.merge_groups[g].members)
            group_cols[g].push_back(*schema.find(m));

    auto group_index = [&](const std::string& name) {
        for (std::size_t g = 0; g < plan.merge_groups.size(); ++g)
            if (plan.merge_groups[g].name == name) return g;
        return plan.merge_groups.size();
    };

    // Row scan: drop rules first, then contradictory multi-hot groups.
    std::vector<std::size_t> kept;
    std::vector<std::size_t> rule_drop_counts(plan.drop_row_rules.size(), 0);
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        if (table.is_missing(r, target_col))
            throw StageError("wrangle",
                             "row " + std::to_string(r + 1) + " has a missing target value");

        bool dropped = false;
        for (std::size_t ri = 0; ri < plan.drop_row_rules.size() && !dropped; ++ri) {
            const std::size_t g = group_index(plan.drop_row_rules[ri].group);
            bool any_set = false;
            for (std::size_t c : group_cols[g])
                any_set = any_set || (!table.is_missing(r, c) && table.number(r, c) == 1.0);
            if (!any_set) {
                dropped = true;
                ++rule_drop_counts[ri];
                ++out.rule_dropped;
                out.audit.push_back("drop row " + std::to_string(r + 1) + ": no " +
                                    plan.drop_row_rules[ri].group + " member set");
            }
        }
        if (dropped) continue;

        for (std::size_t g = 0; g < plan.merge_groups.size() && !dropped; ++g) {
            std::size_t set_count = 0;
            bool bad_value = false;
            for (std::size_t c : group_cols[g]) {
                if (table.is_missing(r, c)) continue;
                const double v = table.number(r, c);
                if (v == 1.0)
                    ++set_count;
                else if (v != 0.0)
                    bad_value = true;
            }
            if (set_count > 1 || bad_value) {
                dropped = true;
                ++out.contradictory_dropped;
                out.audit.push_back("drop row " + std::to_string(r + 1) + ": contradictory " +
                                    plan.merge_groups[g].name + " group");
            }
        }
        if (dropped) continue;

        if (!plan.age_column.empty() && table.is_missing(r, *schema.find(plan.age_column))) {
            ++out.contradictory_dropped;
            out.audit.push_back("drop row " + std::to_string(r + 1) + ": missing " +
                                plan.age_column);
            continue;
        }
        kept.push_back(r);
    }

    for (std::size_t ri = 0; ri < plan.drop_row_rules.size(); ++ri) {
        std::ostringstream line;
        line << "rule '" << plan.drop_row_rules[ri].group << "' dropped "
             << rule_drop_counts[ri] << " rows";
        if (plan.drop_row_rules[ri].expected_drops)
            line << " (documented: " << *plan.drop_row_rules[ri].expected_drops << ")";
        out.audit.push_back(line.str());
    }

    // Output columns in schema order; the age column expands to its bins.
    struct OutCol {
        std::string name;
        std::size_t source = 0;      // schema column
        bool is_group_member = false;
        int age_bin = -1;            // >= 0: one-hot of this bin
        bool imputable = false;
        bool numeric = false;        // discrete/continuous/squared role
    };
    std::vector<OutCol> out_cols;
    const std::unordered_set<std::string> imputable(plan.impute_median_columns.begin(),
                                                    plan.impute_median_columns.end());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        const VariableSpec& var = schema.at(c);
        if (var.role == Role::target) continue;
        if (dropped_cols.count(var.name)) {
            out.audit.push_back("drop column " + var.name);
            continue;
        }
        if (var.role == Role::id) {
            out.audit.push_back("drop column " + var.name + " (identifier)");
            continue;
        }
        if (!plan.age_column.empty() && var.name == plan.age_column) {
            for (std::size_t b = 0; b < plan.age_bins.size(); ++b) {
                OutCol oc;
                oc.name = "age_" + plan.age_bins[b].label;
                oc.source = c;
                oc.age_bin = static_cast<int>(b);
                out_cols.push_back(std::move(oc));
            }
            continue;
        }
        OutCol oc;
        oc.name = var.name;
        oc.source = c;
        oc.is_group_member = group_of.count(var.name) > 0;
        oc.imputable = imputable.count(var.name) > 0;
        oc.numeric = var.role == Role::discrete || var.role == Role::continuous ||
                     var.role == Role::squared;
        out_cols.push_back(std::move(oc));
    }

    FeatureMatrix& m = out.matrix;
    m.values = Matrix(kept.size(), out_cols.size());
    for (const auto& oc : out_cols) {
        m.feature_names.push_back(oc.name);
        if (oc.numeric) m.numeric_feature_names.push_back(oc.name);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const std::size_t r = kept[i];
        for (std::size_t j = 0; j < out_cols.size(); ++j) {
            const OutCol& oc = out_cols[j];
            if (oc.age_bin >= 0) {
                const double age = table.number(r, oc.source);
                m.values(i, j) =
                    age_bin_index(plan.age_bins, age) == static_cast<std::size_t>(oc.age_bin)
                        ? 1.0
                        : 0.0;
                continue;
            }
            if (table.is_missing(r, oc.source)) {
                if (oc.is_group_member) {
                    m.values(i, j) = 0.0;  // unset dummy
                } else if (oc.imputable) {
                    m.values(i, j) = nan;
                } else {
                    throw StageError("wrangle", "column '" + oc.name +
                                                    "' has missing cells but no imputation rule");
                }
                continue;
            }
            m.values(i, j) = table.number(r, oc.source);
        }
        const double t = table.number(r, target_col);
        if (t != std::floor(t))
            throw StageError("wrangle", "non-integer target value in row " + std::to_string(r + 1));
        m.labels.push_back(static_cast<int>(t));
    }

    out.audit.push_back("rows in " + std::to_string(table.n_rows()) + ", rows out " +
                        std::to_string(kept.size()) + " (rule drops " +
                        std::to_string(out.rule_dropped) + ", contradictory " +
                        std::to_string(out.contradictory_dropped) + ")");
    out.audit.push_back("feature columns " + std::to_string(out_cols.size()) +
                        " (feature count excludes the label column)");
    out.audit.push_back("numeric feature columns " +
                        std::to_string(m.numeric_feature_names.size()));
    return out;
}

ImputerState fit_imputer(const FeatureMatrix& m, const std::vector<std::string>& columns,
                         const std::vector<std::size_t>* rows) {
    ImputerState state;
    for (const auto& name : columns) {
        const std::size_t j = m.feature_index(name);
        if (j == FeatureMatrix::npos)
            throw StageError("impute", "unknown column '" + name + "'");
        std::vector<double> observed;
        auto consider = [&](std::size_t r) {
            const double v = m.values(r, j);
            if (!std::isnan(v)) observed.push_back(v);
        };
        if (rows) {
            for (std::size_t r : *rows) consider(r);
        } else {
            for (std::size_t r = 0; r < m.n_rows(); ++r) consider(r);
        }
        if (observed.empty())
            throw StageError("impute", "column '" + name + "' has no observed values");
        state.medians[name] = median(std::move(observed));
    }
    return state;
}

void impute(FeatureMatrix& m, const ImputerState& state) {
    for (const auto& [name, med] : state.medians) {
        const std::size_t j = m.feature_index(name);
        if (j == FeatureMatrix::npos)
            throw StageError("impute", "unknown column '" + name + "'");
        for (std::size_t r = 0; r < m.n_rows(); ++r)
            if (std::isnan(m.values(r, j))) m.values(r, j) = med;
    }
}

WrangleResult apply_plan(const RawTable& table, const WranglePlan& plan) {
    StructuredTable st = wrangle_structural(table, plan);
    WrangleResult res;
    res.imputer = fit_imputer(st.matrix, plan.impute_median_columns);
    impute(st.matrix, res.imputer);

    for (const auto& [name, med] : res.imputer.medians) {
        std::ostringstream line;
        line << "imputed column " << name << " with median " << med;
        st.audit.push_back(line.str());
    }
    for (std::size_t j = 0; j < st.matrix.n_features(); ++j)
        for (std::size_t r = 0; r < st.matrix.n_rows(); ++r)
            if (std::isnan(st.matrix.values(r, j)))
                throw StageError("wrangle", "missing cells remain in column '" +
                                                st.matrix.feature_names[j] + "' after imputation");

    res.matrix = std::move(st.matrix);
    res.audit = std::move(st.audit);
    return res;
}

namespace {
json bins_to_json(const std::vector<AgeBin>& bins) {
    json arr = json::array();
    for (const auto& b : bins) arr.push_back({{"label", b.label}, {"lo", b.lo}, {"hi", b.hi}});
    return arr;
}
}  // namespace

WranglePlan WranglePlan::from_json(const json& j) {
    WranglePlan p;
    p.drop_columns = j.value("drop_columns", std::vector<std::string>{});
    for (const auto& g : j.value("merge_groups", json::array()))
        p.merge_groups.push_back(
            {g.at("name").get<std::string>(), g.at("members").get<std::vector<std::string>>()});
    p.age_column = j.value("age_column", std::string{});
    for (const auto& b : j.value("age_bins", json::array()))
        p.age_bins.push_back({b.at("label").get<std::string>(), b.at("lo").get<double>(),
                              b.at("hi").get<double>()});
    p.impute_median_columns = j.value("impute_median_columns", std::vector<std::string>{});
    for (const auto& r : j.value("drop_row_rules", json::array())) {
        DropRowRule rule;
        rule.group = r.at("group").get<std::string>();
        if (r.contains("expected_drops")) rule.expected_drops = r["expected_drops"].get<std::size_t>();
        p.drop_row_rules.push_back(std::move(rule));
    }
    return p;
}

json WranglePlan::to_json() const {
    json j;
    j["drop_columns"] = drop_columns;
    json groups = json::array();
    for (const auto& g : merge_groups)
        groups.push_back({{"name", g.name}, {"members", g.members}});
    j["merge_groups"] = std::move(groups);
    j["age_column"] = age_column;
    j["age_bins"] = bins_to_json(age_bins);
    j["impute_median_columns"] = impute_median_columns;
    json rules = json::array();
    for (const auto& r : drop_row_rules) {
        json e{{"group", r.group}};
        if (r.expected_drops) e["expected_drops"] = *r.expected_drops;
        rules.push_back(std::move(e));
    }
    j["drop_row_rules"] = std::move(rules);
    return j;
}

ImputerState ImputerState::from_json(const json& j) {
    ImputerState s;
    for (auto it = j.at("medians").begin(); it != j.at("medians").end(); ++it)
        s.medians[it.key()] = it.value().get<double>();
    return s;
}

json ImputerState::to_json() const {
    json m = json::object();
    for (const auto& [k, v] : medians) m[k] = v;
    return json{{"medians", std::move(m)}};
}

}  // namespace povml
