#pragma once

#include <string>

#include <json.hpp>

#include "roughsel/harness.hpp"
#include "roughsel/oracle.hpp"
#include "roughsel/reduction.hpp"

// JSON views of every report the library produces, all sharing one channel:
// { "kind": ..., ...payload }.

namespace roughsel {

inline nlohmann::json to_json(const Instrumentation& c) {
    return {{"granule_evals", c.granule_evals},
            {"candidate_evals", c.candidate_evals},
            {"samples_touched", c.samples_touched},
            {"wall_time_seconds", c.wall_time.count()}};
}

inline nlohmann::json to_json(const ReductionReport& r) {
    nlohmann::json j{{"kind", "reduction_report"},
                     {"algorithm", to_string(r.algorithm)},
                     {"mode", to_string(r.mode)},
                     {"reduct", r.reduct},
                     {"redundant", r.redundant},
                     {"final_pos_size", r.final_pos_size},
                     {"universe_size", r.universe_size},
                     {"final_gamma", r.final_gamma()},
                     {"gamma_trace", r.gamma_trace},
                     {"counters", to_json(r.counters)},
                     {"config", nlohmann::json{{"threads", r.threads}}}};
    if (r.mode == Mode::neighborhood) j["config"]["radius"] = r.radius;
    return j;
}

inline nlohmann::json to_json(const AuditRecord& rec) {
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : rec.reports) reports.push_back(to_json(r));
    nlohmann::json j{{"kind", "audit_record"},
                     {"reports", reports},
                     {"reducts_identical", rec.reducts_identical},
                     {"pos_sizes_identical", rec.pos_sizes_identical},
                     {"oracle_checked", rec.oracle_checked},
                     {"stalled", rec.stalled},
                     {"violations", rec.violations},
                     {"ok", rec.ok()}};
    if (rec.oracle_checked) j["oracle_pos_size"] = rec.oracle_pos_size;
    return j;
}

inline nlohmann::json to_json(const std::vector<Counterexample>& list, const std::string& suite,
                              std::uint64_t seed, std::uint64_t trials) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& c : list) items.push_back({{"trial", c.trial}, {"what", c.what}});
    return {{"kind", "verification_report"},
            {"suite", suite},
            {"seed", seed},
            {"trials", trials},
            {"counterexamples", items},
            {"ok", list.empty()}};
}

inline nlohmann::json to_json(const BenchReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rep.rows) {
        if (!row.error.empty()) {
            rows.push_back({{"dataset", row.dataset}, {"error", row.error}});
            continue;
        }
        nlohmann::json j{{"dataset", row.dataset},
                         {"n_samples", row.n_samples},
                         {"n_attributes", row.n_attributes},
                         {"mode", to_string(row.mode)},
                         {"variant", to_string(row.variant)},
                         {"median_wall_seconds", row.median_wall_seconds},
                         {"report", to_json(row.report)}};
        if (row.mode == Mode::neighborhood) j["radius"] = row.radius;
        rows.push_back(std::move(j));
    }
    return {{"kind", "bench_report"},
            {"rows", rows},
            {"violations", rep.violations},
            {"ok", rep.ok()}};
}

}  // namespace roughsel
