#pragma once

#include <chrono>
#include <utility>
#include <variant>
#include <vector>

#include "roughsel/granulation.hpp"
#include "roughsel/reduction.hpp"
#include "roughsel/types.hpp"

// Reference implementations of the active-region machinery, fully
// materialized: partitions or per-sample granule views over U', per-candidate
// active regions, and a step-wise reduction driver built from them. The
// production engine (detail/engine.hpp) fuses these passes; this module is
// the readable form the engine is checked against, and is meant for small
// instances (the granule view alone is quadratic in |U'|).

namespace roughsel {

struct GranuleView {
    SampleSet universe;               // U'
    std::vector<SampleSet> granules;  // aligned with universe order: N_R(x) ∩ U'

    void validate() const {
        if (granules.size() != static_cast<std::size_t>(universe.size()))
            throw InvariantError("granule view: one granule per universe sample required");
        for (std::size_t i = 0; i < granules.size(); ++i)
            if (!granules[i].contains(universe[static_cast<SampleIdx>(i)]))
                throw InvariantError("granule view: sample missing from its own granule");
    }
};

// current structure of U' under the selected attributes
using Structure = std::variant<Partition, GranuleView>;

inline Structure build_structure(const DecisionSystem& sys, const SampleSet& universe,
                                 const AttrSet& r, Mode mode,
                                 const NeighborhoodConfig& cfg = {}) {
    if (mode == Mode::classic) return partition_by(sys, universe, r);
    cfg.validate();
    GranuleView gv;
    gv.universe = universe;
    gv.granules.reserve(static_cast<std::size_t>(universe.size()));
    for (SampleIdx x : universe)
        gv.granules.push_back(r.empty() ? universe : neighborhood(sys, x, r, cfg, universe));
    return gv;
}

namespace detail {

inline const Partition& as_partition(const Structure& p) {
    if (const auto* part = std::get_if<Partition>(&p)) return *part;
    throw ConfigError("classic mode requires a partition structure");
}

inline const GranuleView& as_granules(const Structure& p) {
    if (const auto* gv = std::get_if<GranuleView>(&p)) return *gv;
    throw ConfigError("neighborhood mode requires a granule-view structure");
}

inline bool block_single_key(const DecisionSystem& sys, const SampleSet& block, AttrId a) {
    const auto& col = sys.column(a);
    const std::uint64_t key = attr_key(col, block[0]);
    for (SampleIdx s : block)
        if (attr_key(col, s) != key) return false;
    return true;
}

inline bool granule_inside(const DecisionSystem& sys, SampleIdx x, const SampleSet& granule,
                           AttrId a, double radius) {
    const auto& col = sys.column(a);
    for (SampleIdx y : granule)
        if (attr_distance(col, x, y) > radius) return false;
    return true;
}

inline bool granule_pure(const DecisionSystem& sys, const SampleSet& g) {
    for (SampleIdx y : g)
        if (sys.decision(y) != sys.decision(g[0])) return false;
    return true;
}

}  // namespace detail

// Samples the candidate can still tell apart. Classic: the union of blocks
// not contained in one block of U/a. Neighborhood: every x whose current
// granule on U' is not already inside N_a(x).
inline SampleSet active_region(const DecisionSystem& sys, const SampleSet& universe,
                               const Structure& p, AttrId a, Mode mode,
                               const NeighborhoodConfig& cfg = {}) {
    if (a < 0 || a >= sys.n_attributes())
        throw DomainError("active_region: attribute out of range");
    std::vector<SampleIdx> members;
    if (mode == Mode::classic) {
        const auto& part = detail::as_partition(p);
        for (const auto& block : part.blocks)
            if (!detail::block_single_key(sys, block, a))
                members.insert(members.end(), block.begin(), block.end());
    } else {
        cfg.validate();
        const auto& gv = detail::as_granules(p);
        for (std::size_t i = 0; i < gv.granules.size(); ++i) {
            const SampleIdx x = gv.universe[static_cast<SampleIdx>(i)];
            if (!detail::granule_inside(sys, x, gv.granules[i], a, cfg.radius))
                members.push_back(x);
        }
    }
    (void)universe;
    return SampleSet::of(std::move(members));
}

// Refines only the parts of the structure the active region touches and
// carries the rest over verbatim; the result equals the unrestricted
// refinement exactly, which debug builds re-verify on every call. The gain
// is the number of samples whose block/granule became decision-consistent.
inline std::pair<Structure, SampleIdx> restricted_refine(const DecisionSystem& sys,
                                                         const SampleSet& universe,
                                                         const Structure& p, AttrId a,
                                                         const SampleSet& active, Mode mode,
                                                         const NeighborhoodConfig& cfg = {}) {
    if (!(active == active_region(sys, universe, p, a, mode, cfg)))
        throw InvariantError("restricted_refine: stale active set for this structure");

    SampleIdx gain = 0;
    Structure out;
    if (mode == Mode::classic) {
        const auto& part = detail::as_partition(p);
        Partition next;
        next.universe = part.universe;
        for (const auto& block : part.blocks) {
            if (!active.contains(block[0])) {
                next.blocks.push_back(block);
                continue;
            }
            const bool was_pure = block_is_pure(sys, block);
            std::vector<SampleSet> kids;
            split_block(sys, block, a, kids);
            for (auto& kid : kids) {
                if (!was_pure && block_is_pure(sys, kid)) gain += kid.size();
                next.blocks.push_back(std::move(kid));
            }
        }
        canonicalize(next);
#ifndef NDEBUG
        const Partition full = refine(part, sys, a);
        if (!same_blocks(full, next))
            throw InvariantError("restricted_refine: output diverged from full refinement");
#endif
        out = std::move(next);
    } else {
        cfg.validate();
        const auto& gv = detail::as_granules(p);
        GranuleView next;
        next.universe = gv.universe;
        next.granules.reserve(gv.granules.size());
        const auto& col = sys.column(a);
        for (std::size_t i = 0; i < gv.granules.size(); ++i) {
            const SampleIdx x = gv.universe[static_cast<SampleIdx>(i)];
            if (!active.contains(x)) {
                next.granules.push_back(gv.granules[i]);
                continue;
            }
            std::vector<SampleIdx> kept;
            for (SampleIdx y : gv.granules[i])
                if (attr_distance(col, x, y) <= cfg.radius) kept.push_back(y);
            SampleSet refined = SampleSet::from_sorted(std::move(kept));
            if (!detail::granule_pure(sys, gv.granules[i]) && detail::granule_pure(sys, refined))
                ++gain;
            next.granules.push_back(std::move(refined));
        }
#ifndef NDEBUG
        for (std::size_t i = 0; i < gv.granules.size(); ++i) {
            const SampleIdx x = gv.universe[static_cast<SampleIdx>(i)];
            std::vector<SampleIdx> full;
            for (SampleIdx y : gv.granules[i])
                if (attr_distance(col, x, y) <= cfg.radius) full.push_back(y);
            if (!(SampleSet::from_sorted(std::move(full)) == next.granules[i]))
                throw InvariantError("restricted_refine: granule diverged from full refinement");
        }
#endif
        out = std::move(next);
    }
    return {std::move(out), gain};
}

// One full iteration of the accelerated search: refresh active regions and
// permanently retire candidates whose region is empty, evaluate the
// survivors by restricted refinement, then commit the best candidate. The
// returned state is terminal when nothing was selected.
inline ReductState lra_step(ReductState state, const DecisionSystem& sys, Mode mode,
                            const NeighborhoodConfig& cfg = {}) {
    state.validate(sys);
    if (state.terminal || state.candidates.empty() || state.universe_remaining.empty()) {
        state.terminal = true;
        return state;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const SampleSet& uprime = state.universe_remaining;
    const Structure structure = build_structure(sys, uprime, state.selected, mode, cfg);

    // phase 1: active regions; an empty region means the candidate refines
    // nothing on U' and, by redundancy permanence, never will again
    std::uint64_t scan_size = static_cast<std::uint64_t>(uprime.size());
    std::uint64_t unit_count = scan_size;
    if (mode == Mode::classic) {
        unit_count = std::get<Partition>(structure).blocks.size();
    } else {
        scan_size = 0;
        for (const auto& g : std::get<GranuleView>(structure).granules)
            scan_size += static_cast<std::uint64_t>(g.size());
    }
    AttrSet survivors;
    std::vector<SampleSet> regions;
    for (AttrId a : state.candidates) {
        SampleSet region = active_region(sys, uprime, structure, a, mode, cfg);
        state.counters.samples_touched += scan_size;
        state.counters.granule_evals += unit_count;
        if (region.empty()) {
            state.redundant.push_back(a);
        } else {
            survivors.push_back(a);
            regions.push_back(std::move(region));
        }
    }

    // phase 2: evaluate survivors on their active regions only
    AttrId best = -1;
    SampleIdx best_gain = 0;
    Structure best_structure;
    for (std::size_t i = 0; i < survivors.size(); ++i) {
        const AttrId a = survivors[i];
        auto [refined, gain] = restricted_refine(sys, uprime, structure, a, regions[i], mode, cfg);
        state.counters.candidate_evals += 1;
        if (mode == Mode::classic) {
            state.counters.samples_touched += static_cast<std::uint64_t>(regions[i].size());
        } else {
            const auto& gv = std::get<GranuleView>(structure);
            for (std::size_t gi = 0; gi < gv.granules.size(); ++gi)
                if (regions[i].contains(gv.universe[static_cast<SampleIdx>(gi)]))
                    state.counters.samples_touched +=
                        static_cast<std::uint64_t>(gv.granules[gi].size());
        }
        if (gain > best_gain) {
            best_gain = gain;
            best = a;
            best_structure = std::move(refined);
        }
    }
    state.candidates = std::move(survivors);

    if (best < 0) {
        state.terminal = true;
        state.counters.wall_time += std::chrono::steady_clock::now() - t0;
        return state;
    }

    // phase 3: commit
    std::vector<SampleIdx> newly;
    if (mode == Mode::classic) {
        for (const auto& block : std::get<Partition>(best_structure).blocks)
            if (block_is_pure(sys, block))
                newly.insert(newly.end(), block.begin(), block.end());
    } else {
        const auto& gv = std::get<GranuleView>(best_structure);
        for (std::size_t i = 0; i < gv.granules.size(); ++i)
            if (detail::granule_pure(sys, gv.granules[i]))
                newly.push_back(gv.universe[static_cast<SampleIdx>(i)]);
    }
    std::sort(newly.begin(), newly.end());
    const SampleSet newly_set = SampleSet::from_sorted(std::move(newly));
    state.pos_accum.members = state.pos_accum.members.unite(newly_set);
    state.universe_remaining = state.universe_remaining.minus(newly_set);
    state.selected.push_back(best);
    AttrSet rest;
    for (AttrId a : state.candidates)
        if (a != best) rest.push_back(a);
    state.candidates = std::move(rest);
    state.gamma_trace.push_back(state.pos_accum.members.size());
    if (state.candidates.empty() || state.universe_remaining.empty()) state.terminal = true;
    state.counters.wall_time += std::chrono::steady_clock::now() - t0;
    return state;
}

// Step-wise reference driver: the lra variant assembled from the
// materializing operations above. Small instances only.
inline ReductionReport reduce_stepwise(const DecisionSystem& sys, Mode mode,
                                       const NeighborhoodConfig& cfg = {}) {
    ReductState st = ReductState::initial(sys);
    while (!st.terminal) st = lra_step(st, sys, mode, cfg);
    ReductionReport rep;
    rep.algorithm = Variant::lra;
    rep.mode = mode;
    rep.reduct = st.selected;
    rep.redundant = st.redundant;
    rep.final_pos_size = st.pos_accum.members.size();
    rep.universe_size = sys.n_samples();
    rep.gamma_trace = st.gamma_trace;
    rep.counters = st.counters;
    rep.radius = mode == Mode::neighborhood ? cfg.radius : 0.0;
    return rep;
}

}  // namespace roughsel
