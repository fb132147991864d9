#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace povml::testing {

// Shape of a generated survey file: exact class counts, urban count, missing
// counts and all-zero group rows are planted by construction, so tests know
// the ground truth the pipeline must recover. The label signal rides mostly
// on meaneduc (plus a few biased dummies), making the data learnable.
struct FixtureSpec {
    std::size_t n_rows = 9557;
    std::map<int, std::size_t> class_counts = {{1, 755}, {2, 1597}, {3, 1209}, {4, 5996}};
    std::size_t urban_count = 6829;
    std::size_t missing_v2a1 = 6860;
    std::size_t missing_v18q1 = 7342;
    std::size_t missing_dependency = 2192;
    std::size_t missing_edjefe = 123;
    std::size_t missing_edjefa = 69;
    std::size_t missing_meaneduc = 5;  // same rows carry the missing SQBmeaned
    std::size_t roof_dropped = 66;
    std::size_t electricity_dropped = 15;
    std::size_t education_dropped = 3;
    std::uint64_t seed = 20240101;

    std::size_t expected_wrangled_rows() const {
        return n_rows - roof_dropped - electricity_dropped - education_dropped;
    }
};

// A 400-row variant with proportionally scaled counts, for fast tests.
FixtureSpec small_fixture_spec();

std::string make_fixture_csv(const FixtureSpec& spec);

void write_fixture(const std::string& path, const FixtureSpec& spec);

}  // namespace povml::testing
