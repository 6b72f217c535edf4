#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roughsel/data.hpp"
#include "roughsel/granulation.hpp"
#include "roughsel/lra.hpp"
#include "roughsel/reduction.hpp"
#include "roughsel/types.hpp"

// Brute-force ground truth for small instances plus randomized verification
// of the two structural facts the accelerated search depends on:
//   - redundancy permanence: when b refines nothing on U' relative to R,
//     POS of R+a+b equals POS of R+a for every further a, on the full U
//   - restricted refinement exactness: refining only the active region
//     reproduces the unrestricted refinement structure exactly

namespace roughsel {

struct OracleBudget {
    SampleIdx max_samples = 64;
    AttrId max_attributes = 10;
};

struct Counterexample {
    std::uint64_t trial = 0;
    std::string what;
};

inline std::uint32_t attr_mask(const AttrSet& attrs) {
    std::uint32_t m = 0;
    for (AttrId a : attrs) m |= std::uint32_t{1} << a;
    return m;
}

inline std::map<std::uint32_t, PositiveRegion> exhaustive_pos_table(
    const DecisionSystem& sys, Mode mode, const NeighborhoodConfig& cfg = {},
    const OracleBudget& budget = {}) {
    if (sys.n_samples() > budget.max_samples || sys.n_attributes() > budget.max_attributes)
        throw BudgetError("exhaustive_pos_table: system exceeds oracle budget (" +
                          std::to_string(sys.n_samples()) + " samples, " +
                          std::to_string(sys.n_attributes()) + " attributes)");
    const SampleSet full = SampleSet::full(sys.n_samples());
    std::map<std::uint32_t, PositiveRegion> table;
    const std::uint32_t top = std::uint32_t{1} << sys.n_attributes();
    for (std::uint32_t mask = 1; mask < top; ++mask) {
        AttrSet attrs;
        for (AttrId a = 0; a < sys.n_attributes(); ++a)
            if (mask & (std::uint32_t{1} << a)) attrs.push_back(a);
        table.emplace(mask, positive_region(sys, full, attrs, mode, cfg));
    }
    return table;
}

// ---------------------------------------------------------------------------
// randomized small systems
// ---------------------------------------------------------------------------

namespace detail {

// n in [4,32], 2..6 attributes of mixed kind, numeric values on a 0.1 grid,
// 2..3 classes. The coarse grid makes coincidences (duplicate-ish columns,
// premise-satisfying tuples) common enough to exercise every code path.
inline DecisionSystem random_system(SynthRng& rng) {
    const SampleIdx n = 4 + static_cast<SampleIdx>(rng.below(29));
    const AttrId attrs = 2 + static_cast<AttrId>(rng.below(5));
    const std::int32_t classes = 2 + static_cast<std::int32_t>(rng.below(2));

    std::vector<AttributeColumn> columns(static_cast<std::size_t>(attrs));
    for (AttrId a = 0; a < attrs; ++a) {
        auto& col = columns[static_cast<std::size_t>(a)];
        col.id = a;
        col.name = "a" + std::to_string(a);
        if (rng.below(2) == 0) {
            col.kind = AttributeKind::numeric;
            col.numeric.resize(static_cast<std::size_t>(n));
            for (auto& v : col.numeric) v = static_cast<double>(rng.below(11)) / 10.0;
        } else {
            col.kind = AttributeKind::categorical;
            const auto card = 2 + rng.below(3);
            col.alphabet.clear();
            for (std::uint64_t s = 0; s < card; ++s)
                col.alphabet.push_back("v" + std::to_string(s));
            col.symbols.resize(static_cast<std::size_t>(n));
            for (auto& s : col.symbols) s = static_cast<std::int32_t>(rng.below(card));
        }
    }

    std::vector<std::int32_t> raw(static_cast<std::size_t>(n));
    for (auto& d : raw) d = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(classes)));
    // compact to the labels actually drawn so ids stay contiguous
    std::vector<std::int32_t> used;
    for (std::int32_t d : raw)
        if (std::find(used.begin(), used.end(), d) == used.end()) used.push_back(d);
    std::sort(used.begin(), used.end());
    std::vector<std::string> class_labels;
    for (std::size_t i = 0; i < used.size(); ++i)
        class_labels.push_back(std::to_string(i));
    for (auto& d : raw)
        d = static_cast<std::int32_t>(std::find(used.begin(), used.end(), d) - used.begin());
    return DecisionSystem(std::move(columns), std::move(raw), std::move(class_labels));
}

// overwrite column b with a column that can never separate more than column
// r does: a functional recoding for classic mode, a distance contraction
// (scaling / duplication / symbol merge) for neighborhood mode
inline void derive_column(DecisionSystem& sys_in, std::vector<AttributeColumn>& columns,
                          AttrId r, AttrId b, Mode mode, SynthRng& rng) {
    (void)sys_in;
    const auto& src = columns[static_cast<std::size_t>(r)];
    auto& dst = columns[static_cast<std::size_t>(b)];
    const std::string name = dst.name;
    dst = src;
    dst.id = b;
    dst.name = name;
    const std::uint64_t flavor = rng.below(3);
    if (flavor == 0) return;  // exact duplicate works in both modes
    if (src.kind == AttributeKind::numeric) {
        if (mode == Mode::classic && flavor == 1) {
            // coarsen the grid: same-value samples stay same-value
            for (auto& v : dst.numeric) v = static_cast<double>(static_cast<int>(v * 5.0)) / 5.0;
        } else {
            // scale toward zero: |Δ| never grows, so granules never shrink
            for (auto& v : dst.numeric) v *= 0.5;
        }
    } else {
        for (auto& s : dst.symbols) s %= 2;  // merge symbols pairwise
    }
}

inline DecisionSystem rebuild(const DecisionSystem& sys, std::vector<AttributeColumn> columns) {
    std::vector<std::int32_t> dec(sys.decisions());
    std::vector<std::string> labels(sys.class_labels());
    return DecisionSystem(std::move(columns), std::move(dec), std::move(labels),
                          sys.decision_name());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Randomized verification suites
// ---------------------------------------------------------------------------

// For random (sys, R, b) where b refines nothing on U' = U - POS_R, check
// that adding b after any further attribute a never changes the positive
// region on the full universe. Half the trials derive b from a member of R
// so the premise is guaranteed to hold often.
inline std::vector<Counterexample> verify_sr(std::uint64_t seed, std::uint64_t trials, Mode mode,
                                             const NeighborhoodConfig& cfg = {},
                                             const OracleBudget& budget = {}) {
    (void)budget;
    detail::SynthRng rng(seed);
    std::vector<Counterexample> bad;
    for (std::uint64_t t = 0; t < trials; ++t) {
        DecisionSystem sys = detail::random_system(rng);
        const AttrId attrs = sys.n_attributes();
        AttrId b = static_cast<AttrId>(rng.below(static_cast<std::uint64_t>(attrs)));
        AttrId forced_r = -1;
        if (rng.below(2) == 0) {
            forced_r = static_cast<AttrId>(rng.below(static_cast<std::uint64_t>(attrs)));
            if (forced_r == b) forced_r = (forced_r + 1) % attrs;
            std::vector<AttributeColumn> cols(sys.columns().begin(), sys.columns().end());
            detail::derive_column(sys, cols, forced_r, b, mode, rng);
            sys = detail::rebuild(sys, std::move(cols));
        }
        AttrSet r;
        if (forced_r >= 0) r.push_back(forced_r);
        const std::uint64_t extra = rng.below(3);
        for (std::uint64_t i = 0; i < extra; ++i) {
            const AttrId cand = static_cast<AttrId>(rng.below(static_cast<std::uint64_t>(attrs)));
            if (cand != b && std::find(r.begin(), r.end(), cand) == r.end()) r.push_back(cand);
        }
        std::sort(r.begin(), r.end());

        const SampleSet full = SampleSet::full(sys.n_samples());
        const SampleSet uprime =
            full.minus(r.empty() ? positive_region_empty_attrs(sys, full).members
                                 : positive_region(sys, full, r, mode, cfg).members);
        if (!sr_test(sys, uprime, r, b, mode, cfg)) continue;

        for (AttrId a = 0; a < attrs; ++a) {
            if (a == b || std::find(r.begin(), r.end(), a) != r.end()) continue;
            AttrSet ra(r);
            ra.push_back(a);
            std::sort(ra.begin(), ra.end());
            AttrSet rab(ra);
            rab.push_back(b);
            std::sort(rab.begin(), rab.end());
            const auto pos_ra = positive_region(sys, full, ra, mode, cfg);
            const auto pos_rab = positive_region(sys, full, rab, mode, cfg);
            if (!(pos_ra.members == pos_rab.members)) {
                bad.push_back({t, "redundant attribute " + std::to_string(b) +
                                      " changed POS after adding attribute " + std::to_string(a)});
                break;
            }
        }
    }
    return bad;
}

// For random (sys, R, a, U'), check that refining only the active region
// reproduces the unrestricted refinement, structure-for-structure.
inline std::vector<Counterexample> verify_slr(std::uint64_t seed, std::uint64_t trials, Mode mode,
                                              const NeighborhoodConfig& cfg = {},
                                              const OracleBudget& budget = {}) {
    (void)budget;
    detail::SynthRng rng(seed);
    std::vector<Counterexample> bad;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const DecisionSystem sys = detail::random_system(rng);
        const AttrId attrs = sys.n_attributes();
        const AttrId a = static_cast<AttrId>(rng.below(static_cast<std::uint64_t>(attrs)));
        AttrSet r;
        const std::uint64_t extra = rng.below(3);
        for (std::uint64_t i = 0; i < extra; ++i) {
            const AttrId cand = static_cast<AttrId>(rng.below(static_cast<std::uint64_t>(attrs)));
            if (cand != a && std::find(r.begin(), r.end(), cand) == r.end()) r.push_back(cand);
        }
        std::sort(r.begin(), r.end());
        // random nonempty sub-universe
        std::vector<SampleIdx> members;
        for (SampleIdx s = 0; s < sys.n_samples(); ++s)
            if (rng.below(4) != 0) members.push_back(s);
        if (members.empty()) members.push_back(static_cast<SampleIdx>(
            rng.below(static_cast<std::uint64_t>(sys.n_samples()))));
        const SampleSet uprime = SampleSet::of(std::move(members));

        const Structure structure = build_structure(sys, uprime, r, mode, cfg);
        const SampleSet active = active_region(sys, uprime, structure, a, mode, cfg);
        const auto [restricted, gain] =
            restricted_refine(sys, uprime, structure, a, active, mode, cfg);
        (void)gain;

        if (mode == Mode::classic) {
            const Partition full_ref = refine(std::get<Partition>(structure), sys, a);
            if (!same_blocks(full_ref, std::get<Partition>(restricted)))
                bad.push_back({t, "restricted refinement produced different blocks for attribute " +
                                      std::to_string(a)});
        } else {
            const auto& before = std::get<GranuleView>(structure);
            const auto& after = std::get<GranuleView>(restricted);
            const auto& col = sys.column(a);
            for (std::size_t i = 0; i < before.granules.size(); ++i) {
                std::vector<SampleIdx> want;
                for (SampleIdx y : before.granules[i])
                    if (attr_distance(col, before.universe[static_cast<SampleIdx>(i)], y) <=
                        cfg.radius)
                        want.push_back(y);
                if (!(SampleSet::from_sorted(std::move(want)) == after.granules[i])) {
                    bad.push_back({t, "restricted refinement produced a different granule for "
                                      "attribute " + std::to_string(a)});
                    break;
                }
            }
        }
    }
    return bad;
}

// ---------------------------------------------------------------------------
// cross-variant audit
// ---------------------------------------------------------------------------

struct AuditRecord {
    std::vector<ReductionReport> reports;  // plain, fspa, farnemf, lra
    bool reducts_identical = false;
    bool pos_sizes_identical = false;
    bool oracle_checked = false;
    bool stalled = false;  // greedy stopped at a local optimum short of |POS_C|
    SampleIdx oracle_pos_size = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

inline AuditRecord audit_reducts(const DecisionSystem& sys, Mode mode,
                                 const NeighborhoodConfig& cfg = {},
                                 const OracleBudget& budget = {},
                                 const ReduceOptions& opt = {}) {
    AuditRecord rec;
    for (Variant v : {Variant::plain, Variant::fspa, Variant::farnemf, Variant::lra})
        rec.reports.push_back(reduce(sys, mode, v, cfg, opt));

    rec.reducts_identical = true;
    rec.pos_sizes_identical = true;
    for (const auto& rep : rec.reports) {
        if (!(rep.reduct == rec.reports[0].reduct)) rec.reducts_identical = false;
        if (rep.final_pos_size != rec.reports[0].final_pos_size) rec.pos_sizes_identical = false;
    }
    if (!rec.reducts_identical)
        rec.violations.push_back("variants disagree on the selected reduct");
    if (!rec.pos_sizes_identical)
        rec.violations.push_back("variants disagree on final positive-region size");

    if (sys.n_samples() <= budget.max_samples && sys.n_attributes() <= budget.max_attributes) {
        rec.oracle_checked = true;
        const auto table = exhaustive_pos_table(sys, mode, cfg, budget);
        rec.oracle_pos_size =
            table.at((std::uint32_t{1} << sys.n_attributes()) - 1).members.size();
        const auto pos_size_of = [&](AttrSet attrs) -> SampleIdx {
            if (attrs.empty())
                return positive_region(sys, SampleSet::full(sys.n_samples()), attrs, mode, cfg)
                    .members.size();
            std::sort(attrs.begin(), attrs.end());
            return table.at(attr_mask(attrs)).members.size();
        };
        const AttrSet& reduct = rec.reports[0].reduct;
        const SampleIdx reduct_pos = pos_size_of(reduct);
        for (const auto& rep : rec.reports)
            if (rep.final_pos_size != reduct_pos) {
                rec.violations.push_back(std::string(to_string(rep.algorithm)) +
                                         " final POS size " +
                                         std::to_string(rep.final_pos_size) +
                                         " != exhaustive |POS_reduct| " +
                                         std::to_string(reduct_pos));
                break;
            }
        if (reduct_pos != rec.oracle_pos_size) {
            // Zero-gain stopping can halt short of |POS_C| (no single attribute
            // helps even though a combination would).  That is inherent to the
            // greedy; the audit only demands the stop be locally optimal.
            rec.stalled = true;
            for (AttrId a = 0; a < sys.n_attributes(); ++a) {
                if (std::find(reduct.begin(), reduct.end(), a) != reduct.end()) continue;
                AttrSet extended(reduct);
                extended.push_back(a);
                if (pos_size_of(std::move(extended)) > reduct_pos) {
                    rec.violations.push_back(
                        "greedy stopped at POS size " + std::to_string(reduct_pos) +
                        " although attribute " + std::to_string(a) +
                        " still improves the positive region");
                    break;
                }
            }
        }
        // the whole greedy trace must be reproducible from the table
        const auto& lra_rep = rec.reports.back();
        AttrSet prefix;
        for (std::size_t i = 0; i < lra_rep.reduct.size(); ++i) {
            prefix.push_back(lra_rep.reduct[i]);
            AttrSet sorted(prefix);
            std::sort(sorted.begin(), sorted.end());
            const auto& pos = table.at(attr_mask(sorted));
            if (pos.members.size() != lra_rep.gamma_trace[i]) {
                rec.violations.push_back("gamma trace entry " + std::to_string(i) +
                                         " does not match the exhaustive table");
                break;
            }
        }
    }
    return rec;
}

}  // namespace roughsel
