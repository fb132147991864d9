#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace povml {

enum class Role { id, binary, discrete, continuous, squared, target };

const char* role_name(Role r);
std::optional<Role> role_from_name(const std::string& s);

// True for every role whose cells parse as numbers (everything except id).
inline bool is_numeric_role(Role r) { return r != Role::id; }

struct VariableSpec {
    std::string name;
    Role role = Role::binary;
    std::size_t expected_missing = 0;
};

// Ordered column contract for a dataset. Names are compared exactly and
// case-sensitively. Exactly one column carries the target role.
class Schema {
public:
    explicit Schema(std::vector<VariableSpec> vars);

    // The embedded 143-column household-survey schema.
    static const Schema& canonical();

    static Schema from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    std::size_t size() const { return vars_.size(); }
    const VariableSpec& at(std::size_t i) const { return vars_[i]; }
    const std::vector<VariableSpec>& variables() const { return vars_; }

    std::optional<std::size_t> find(const std::string& name) const;
    std::size_t target_index() const { return target_index_; }

private:
    std::vector<VariableSpec> vars_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t target_index_ = 0;
};

}  // namespace povml
