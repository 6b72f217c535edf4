#pragma once

#include <roughsel/roughsel.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rstest {

inline roughsel::DecisionSystem make_numeric_system(std::vector<std::vector<double>> cols,
                                                    std::vector<std::int32_t> decision) {
    std::vector<roughsel::AttributeColumn> columns;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        roughsel::AttributeColumn c;
        c.id = static_cast<roughsel::AttrId>(i);
        c.name = "a" + std::to_string(i + 1);
        c.kind = roughsel::AttributeKind::numeric;
        c.numeric = std::move(cols[i]);
        columns.push_back(std::move(c));
    }
    std::int32_t k = 0;
    for (auto d : decision) k = std::max(k, d + 1);
    std::vector<std::string> labels;
    for (std::int32_t i = 0; i < k; ++i) labels.push_back(std::to_string(i));
    return roughsel::DecisionSystem(std::move(columns), std::move(decision), std::move(labels));
}

// a1 = (0,0,1,1), a2 = (0,1,0,1), d = (0,1,1,1)
inline roughsel::DecisionSystem s1() {
    return make_numeric_system({{0, 0, 1, 1}, {0, 1, 0, 1}}, {0, 1, 1, 1});
}

// two classes separated by a wide gap on a single attribute
inline roughsel::DecisionSystem gap1d() {
    return make_numeric_system({{0.0, 0.05, 0.9, 0.95}}, {0, 0, 1, 1});
}

// parity: no single attribute has any positive-region gain, both together do
inline roughsel::DecisionSystem xor_system() {
    return make_numeric_system({{0, 0, 1, 1}, {0, 1, 0, 1}}, {0, 1, 1, 0});
}

inline roughsel::DecisionSystem constant_system(roughsel::SampleIdx n, std::int32_t classes) {
    std::vector<std::int32_t> d(static_cast<std::size_t>(n));
    for (roughsel::SampleIdx i = 0; i < n; ++i)
        d[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i) % classes;
    return make_numeric_system({std::vector<double>(static_cast<std::size_t>(n), 0.5)},
                               std::move(d));
}

inline std::vector<roughsel::SampleIdx> vec(const roughsel::SampleSet& s) {
    return s.indices();
}

}  // namespace rstest
