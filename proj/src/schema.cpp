#include "povml/schema.hpp"

#include <nlohmann/json.hpp>

#include "povml/errors.hpp"

namespace povml {

using nlohmann::json;

const char* role_name(Role r) {
    switch (r) {
        case Role::id: return "id";
        case Role::binary: return "binary";
        case Role::discrete: return "discrete";
        case Role::continuous: return "continuous";
        case Role::squared: return "squared";
        case Role::target: return "target";
    }
    return "?";
}

std::optional<Role> role_from_name(const std::string& s) {
    if (s == "id") return Role::id;
    if (s == "binary") return Role::binary;
    if (s == "discrete") return Role::discrete;
    if (s == "continuous") return Role::continuous;
    if (s == "squared") return Role::squared;
    if (s == "target") return Role::target;
    return std::nullopt;
}

Schema::Schema(std::vector<VariableSpec> vars) : vars_(std::move(vars)) {
    std::size_t targets = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (!index_.emplace(vars_[i].name, i).second)
            throw InputError("schema: duplicate column name '" + vars_[i].name + "'");
        if (vars_[i].role == Role::target) {
            target_index_ = i;
            ++targets;
        }
    }
    if (targets != 1)
        throw InputError("schema: expected exactly one target column, found " +
                         std::to_string(targets));
}

std::optional<std::size_t> Schema::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Schema Schema::from_json(const json& j) {
    std::vector<VariableSpec> vars;
    for (const auto& e : j.at("columns")) {
        VariableSpec v;
        v.name = e.at("name").get<std::string>();
        auto role = role_from_name(e.at("role").get<std::string>());
        if (!role) throw InputError("schema: unknown role '" + e.at("role").get<std::string>() +
                                    "' for column '" + v.name + "'");
        v.role = *role;
        v.expected_missing = e.value("expected_missing", 0u);
        vars.push_back(std::move(v));
    }
    return Schema(std::move(vars));
}

json Schema::to_json() const {
    json cols = json::array();
    for (const auto& v : vars_) {
        json e;
        e["name"] = v.name;
        e["role"] = role_name(v.role);
        e["expected_missing"] = v.expected_missing;
        cols.push_back(std::move(e));
    }
    return json{{"columns", std::move(cols)}};
}

namespace {

struct Entry {
    const char* name;
    Role role;
    std::size_t missing;
};

// Column table of the published household survey: name, role, known missing
// count. Name spellings (including mixed case) are the contract.
constexpr Entry kCanonical[] = {
    {"Id", Role::id, 0},
    {"v2a1", Role::continuous, 6860},
    {"hacdor", Role::binary, 0},
    {"Rooms", Role::discrete, 0},
    {"hacapo", Role::binary, 0},
    {"v14a", Role::binary, 0},
    {"Refrig", Role::binary, 0},
    {"v18q", Role::binary, 0},
    {"v18q1", Role::discrete, 7342},
    {"r4h1", Role::discrete, 0},
    {"r4h2", Role::discrete, 0},
    {"r4h3", Role::discrete, 0},
    {"r4m1", Role::discrete, 0},
    {"r4m2", Role::discrete, 0},
    {"r4m3", Role::discrete, 0},
    {"r4t1", Role::discrete, 0},
    {"r4t2", Role::discrete, 0},
    {"r4t3", Role::discrete, 0},
    {"tamhog", Role::discrete, 0},
    {"tamviv", Role::discrete, 0},
    {"escolari", Role::discrete, 0},
    {"rez_esc", Role::discrete, 0},
    {"Hhsize", Role::discrete, 0},
    {"paredblolad", Role::binary, 0},
    {"paredzocalo", Role::binary, 0},
    {"paredpreb", Role::binary, 0},
    {"pareddes", Role::binary, 0},
    {"paredmad", Role::binary, 0},
    {"paredzinc", Role::binary, 0},
    {"paredfibras", Role::binary, 0},
    {"paredother", Role::binary, 0},
    {"pisomoscer", Role::binary, 0},
    {"pisocemento", Role::binary, 0},
    {"pisooother", Role::binary, 0},
    {"pcionatur", Role::binary, 0},
    {"pcionotiene", Role::binary, 0},
    {"pisomadera", Role::binary, 0},
    {"techozinc", Role::binary, 0},
    {"techoentrepiso", Role::binary, 0},
    {"techocane", Role::binary, 0},
    {"techootro", Role::binary, 0},
    {"cielorazo", Role::binary, 0},
    {"abastaguadentro", Role::binary, 0},
    {"abastaguafuera", Role::binary, 0},
    {"abastaguano", Role::binary, 0},
    {"Public", Role::binary, 0},
    {"planpri", Role::binary, 0},
    {"noelec", Role::binary, 0},
    {"coopele", Role::binary, 0},
    {"sanitario1", Role::binary, 0},
    {"sanitario2", Role::binary, 0},
    {"sanitario3", Role::binary, 0},
    {"sanitario5", Role::binary, 0},
    {"sanitario6", Role::binary, 0},
    {"energcocinar1", Role::binary, 0},
    {"energcocinar2", Role::binary, 0},
    {"energcocinar3", Role::binary, 0},
    {"energcocinar4", Role::binary, 0},
    {"elimbasu1", Role::binary, 0},
    {"elimbasu2", Role::binary, 0},
    {"elimbasu3", Role::binary, 0},
    {"elimbasu4", Role::binary, 0},
    {"elimbasu5", Role::binary, 0},
    {"elimbasu6", Role::binary, 0},
    {"epared1", Role::binary, 0},
    {"epared2", Role::binary, 0},
    {"epared3", Role::binary, 0},
    {"etecho1", Role::binary, 0},
    {"etecho2", Role::binary, 0},
    {"etecho3", Role::binary, 0},
    {"eviv1", Role::binary, 0},
    {"eviv2", Role::binary, 0},
    {"eviv3", Role::binary, 0},
    {"Dis", Role::binary, 0},
    {"Male", Role::binary, 0},
    {"female", Role::binary, 0},
    {"estadocivil1", Role::binary, 0},
    {"estadocivil2", Role::binary, 0},
    {"estadocivil3", Role::binary, 0},
    {"estadocivil4", Role::binary, 0},
    {"estadocivil5", Role::binary, 0},
    {"estadocivil6", Role::binary, 0},
    {"estadocivil7", Role::binary, 0},
    {"parentesco1", Role::binary, 0},
    {"parentesco2", Role::binary, 0},
    {"parentesco3", Role::binary, 0},
    {"parentesco4", Role::binary, 0},
    {"parentesco5", Role::binary, 0},
    {"parentesco6", Role::binary, 0},
    {"parentesco7", Role::binary, 0},
    {"parentesco8", Role::binary, 0},
    {"parentesco9", Role::binary, 0},
    {"parentesco10", Role::binary, 0},
    {"parentesco11", Role::binary, 0},
    {"parentesco12", Role::binary, 0},
    {"idhogar", Role::id, 0},
    {"hogar_nin", Role::discrete, 0},
    {"hogar_adul", Role::discrete, 0},
    {"hogar_mayor", Role::discrete, 0},
    {"hogar_total", Role::discrete, 0},
    {"dependency", Role::continuous, 2192},
    {"Edjefe", Role::discrete, 123},
    {"Edjefa", Role::discrete, 69},
    {"meaneduc", Role::continuous, 5},
    {"instlevel1", Role::binary, 0},
    {"instlevel2", Role::binary, 0},
    {"instlevel3", Role::binary, 0},
    {"instlevel4", Role::binary, 0},
    {"instlevel5", Role::binary, 0},
    {"instlevel6", Role::binary, 0},
    {"instlevel7", Role::binary, 0},
    {"instlevel8", Role::binary, 0},
    {"instlevel9", Role::binary, 0},
    {"bedrooms", Role::discrete, 0},
    {"overcrowding", Role::continuous, 0},
    {"tipovivi1", Role::binary, 0},
    {"tipovivi2", Role::binary, 0},
    {"tipovivi3", Role::binary, 0},
    {"tipovivi4", Role::binary, 0},
    {"tipovivi5", Role::binary, 0},
    {"computer", Role::binary, 0},
    {"television", Role::binary, 0},
    {"mobilephone", Role::binary, 0},
    {"qmobilephone", Role::discrete, 0},
    {"lugar1", Role::binary, 0},
    {"lugar2", Role::binary, 0},
    {"lugar3", Role::binary, 0},
    {"lugar4", Role::binary, 0},
    {"lugar5", Role::binary, 0},
    {"lugar6", Role::binary, 0},
    {"area1", Role::binary, 0},
    {"area2", Role::binary, 0},
    {"Age", Role::discrete, 0},
    {"SQBescolari", Role::squared, 0},
    {"SQBage", Role::squared, 0},
    {"SQBhogar_total", Role::squared, 0},
    {"SQBedjefe", Role::squared, 0},
    {"SQBhogar_nin", Role::squared, 0},
    {"SQBovercrowding", Role::squared, 0},
    {"SQBdependency", Role::squared, 0},
    {"SQBmeaned", Role::squared, 5},
    {"Agesq", Role::squared, 0},
    {"Target", Role::target, 0},
};

}  // namespace

const Schema& Schema::canonical() {
    static const Schema schema = [] {
        std::vector<VariableSpec> vars;
        vars.reserve(std::size(kCanonical));
        for (const auto& e : kCanonical) vars.push_back({e.name, e.role, e.missing});
        return Schema(std::move(vars));
    }();
    return schema;
}

}  // namespace povml
