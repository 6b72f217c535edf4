#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "roughsel/types.hpp"

namespace roughsel {

// ---------------------------------------------------------------------------
// Per-attribute distance and grouping keys
// ---------------------------------------------------------------------------

inline double attr_distance(const AttributeColumn& c, SampleIdx x, SampleIdx y) {
    if (c.kind == AttributeKind::numeric)
        return std::fabs(c.numeric[static_cast<std::size_t>(x)] -
                         c.numeric[static_cast<std::size_t>(y)]);
    return c.symbols[static_cast<std::size_t>(x)] == c.symbols[static_cast<std::size_t>(y)] ? 0.0
                                                                                            : 1.0;
}

// max combiner; stops early once the radius is exceeded
inline bool within_radius(const DecisionSystem& sys, const AttrSet& attrs, SampleIdx x, SampleIdx y,
                          double radius) {
    for (AttrId a : attrs) {
        if (attr_distance(sys.column(a), x, y) > radius) return false;
    }
    return true;
}

// Exact-equality key for classic-mode grouping. Normalized values never
// produce -0.0, so the raw bit pattern is a sound equality key.
inline std::uint64_t attr_key(const AttributeColumn& c, SampleIdx x) {
    if (c.kind == AttributeKind::numeric)
        return std::bit_cast<std::uint64_t>(c.numeric[static_cast<std::size_t>(x)]);
    return static_cast<std::uint64_t>(c.symbols[static_cast<std::size_t>(x)]);
}

// ---------------------------------------------------------------------------
// Partitions (classic mode)
// ---------------------------------------------------------------------------

// Splits one block by an attribute's values. Sub-block order follows first
// occurrence, which keeps results independent of hash iteration order.
inline void split_block(const DecisionSystem& sys, const SampleSet& block, AttrId a,
                        std::vector<SampleSet>& out) {
    const auto& col = sys.column(a);
    std::unordered_map<std::uint64_t, std::size_t> bucket_of;
    std::vector<std::vector<SampleIdx>> buckets;
    for (SampleIdx x : block) {
        const std::uint64_t k = attr_key(col, x);
        auto [it, inserted] = bucket_of.try_emplace(k, buckets.size());
        if (inserted) buckets.emplace_back();
        buckets[it->second].push_back(x);
    }
    for (auto& b : buckets) out.push_back(SampleSet::from_sorted(std::move(b)));
}

inline Partition refine(const Partition& p, const DecisionSystem& sys, AttrId a) {
    Partition out;
    out.universe = p.universe;
    for (const auto& block : p.blocks) split_block(sys, block, a, out.blocks);
    canonicalize(out);
    return out;
}

// Equivalence classes of `universe` under attribute set R (R = {} gives the
// single block covering the universe).
inline Partition partition_by(const DecisionSystem& sys, const SampleSet& universe,
                              const AttrSet& attrs) {
    Partition p;
    p.universe = universe;
    if (!universe.empty()) p.blocks.push_back(universe);
    for (AttrId a : attrs) {
        std::vector<SampleSet> next;
        for (const auto& block : p.blocks) split_block(sys, block, a, next);
        p.blocks = std::move(next);
    }
    canonicalize(p);
    return p;
}

// ---------------------------------------------------------------------------
// Neighborhood granules
// ---------------------------------------------------------------------------

inline SampleSet neighborhood(const DecisionSystem& sys, SampleIdx x, const AttrSet& attrs,
                              const NeighborhoodConfig& cfg, const SampleSet& universe) {
    if (attrs.empty()) throw DomainError("neighborhood: attribute set must be nonempty");
    cfg.validate();
    std::vector<SampleIdx> members;
    for (SampleIdx y : universe) {
        if (within_radius(sys, attrs, x, y, cfg.radius)) members.push_back(y);
    }
    return SampleSet::from_sorted(std::move(members));
}

// ---------------------------------------------------------------------------
// Positive regions and dependency
// ---------------------------------------------------------------------------

inline bool block_is_pure(const DecisionSystem& sys, const SampleSet& block) {
    const std::int32_t d0 = sys.decision(block[0]);
    for (SampleIdx x : block)
        if (sys.decision(x) != d0) return false;
    return true;
}

inline PositiveRegion positive_region_classic(const Partition& p, const DecisionSystem& sys) {
    std::vector<SampleIdx> members;
    for (const auto& block : p.blocks) {
        if (block_is_pure(sys, block))
            members.insert(members.end(), block.begin(), block.end());
    }
    std::sort(members.begin(), members.end());
    return PositiveRegion{SampleSet::from_sorted(std::move(members)), p.universe.size()};
}

inline PositiveRegion positive_region_nbr(const DecisionSystem& sys, const SampleSet& universe,
                                          const AttrSet& attrs, const NeighborhoodConfig& cfg) {
    if (attrs.empty()) throw DomainError("positive_region_nbr: attribute set must be nonempty");
    cfg.validate();
    std::vector<SampleIdx> members;
    for (SampleIdx x : universe) {
        const std::int32_t dx = sys.decision(x);
        bool pure = true;
        for (SampleIdx y : universe) {
            if (within_radius(sys, attrs, x, y, cfg.radius) && sys.decision(y) != dx) {
                pure = false;
                break;
            }
        }
        if (pure) members.push_back(x);
    }
    return PositiveRegion{SampleSet::from_sorted(std::move(members)), universe.size()};
}

// POS under the empty attribute set: one granule/block covering the universe.
inline PositiveRegion positive_region_empty_attrs(const DecisionSystem& sys,
                                                  const SampleSet& universe) {
    if (universe.empty()) return PositiveRegion{SampleSet{}, 0};
    if (block_is_pure(sys, universe)) return PositiveRegion{universe, universe.size()};
    return PositiveRegion{SampleSet{}, universe.size()};
}

// Mode dispatch used by the oracle and tests; R = {} handled by the
// single-block convention in both modes.
inline PositiveRegion positive_region(const DecisionSystem& sys, const SampleSet& universe,
                                      const AttrSet& attrs, Mode mode,
                                      const NeighborhoodConfig& cfg) {
    if (attrs.empty()) return positive_region_empty_attrs(sys, universe);
    if (mode == Mode::classic)
        return positive_region_classic(partition_by(sys, universe, attrs), sys);
    return positive_region_nbr(sys, universe, attrs, cfg);
}

// Comparisons between dependencies are made on integer |members|, never on
// this quotient.
inline double dependency(const PositiveRegion& pos, SampleIdx n_total) {
    if (n_total < 1) throw DomainError("dependency: universe size must be >= 1");
    return static_cast<double>(pos.members.size()) / static_cast<double>(n_total);
}

}  // namespace roughsel
