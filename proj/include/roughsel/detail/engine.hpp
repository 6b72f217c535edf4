#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "roughsel/granulation.hpp"
#include "roughsel/types.hpp"

// Shared forward-selection engine behind all four reducer variants. The
// variants differ only in three switches:
//   shrink          - evaluate candidates on U' = U - POS instead of full U
//   eliminate       - permanently drop candidates that refine nothing on U'
//   restrict_active - per candidate, skip blocks/samples previously proven
//                     inert for it (refinement outcome memoized, so a block
//                     is scanned at most once per candidate per iteration)
//
// Work accounting:
//   samples_touched - classic: sum of |block| over refined blocks;
//                     neighborhood: one per (x, y) pair visited in a scan
//   granule_evals   - classic: one per block refinement;
//                     neighborhood: one per granule determination
//   candidate_evals - one per (iteration, live candidate)
// Scans have no data-dependent early exit across samples (only across the
// attributes of one pair), so counters are deterministic and comparable
// across variants.

namespace roughsel::detail {

struct EngineCounters {
    std::uint64_t granule_evals = 0;
    std::uint64_t candidate_evals = 0;
    std::uint64_t samples_touched = 0;

    void absorb(const EngineCounters& o) {
        granule_evals += o.granule_evals;
        candidate_evals += o.candidate_evals;
        samples_touched += o.samples_touched;
    }
};

struct EngineOptions {
    bool shrink = false;
    bool eliminate = false;
    bool restrict_active = false;
    int threads = 1;
    bool check_invariants = false;
};

struct EngineResult {
    AttrSet selected;
    AttrSet redundant;
    std::vector<SampleIdx> gamma_trace;
    SampleSet pos;
    EngineCounters counters;
    double wall_seconds = 0;
};

// cross-checks against the materializing granulation ops are quadratic, so
// they only run on small systems even when enabled
constexpr SampleIdx kInvariantCheckCap = 512;

inline int resolve_threads(int requested) { return requested < 1 ? 1 : requested; }

template <typename Fn>
inline void for_each_candidate(const std::vector<AttrId>& list, int threads, Fn&& fn) {
    const int t = std::min<int>(resolve_threads(threads), static_cast<int>(list.size()));
    if (t <= 1) {
        for (AttrId a : list) fn(a);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < list.size();
                 i += static_cast<std::size_t>(t))
                fn(list[i]);
        });
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// classic mode: partition refinement
// ---------------------------------------------------------------------------

struct ChildBlock {
    std::vector<SampleIdx> members;
    std::int32_t label = 0;
    bool pure = true;
};

struct ClassicEval {
    SampleIdx pure_members = 0;  // over refined blocks only
    bool split_any = false;
    // per input block: children after refining by the candidate; an empty
    // entry means the block was skipped (proven inert for this candidate)
    std::vector<std::vector<ChildBlock>> children;
    EngineCounters local;
};

inline void eval_classic_candidate(const DecisionSystem& sys,
                                   const std::vector<std::int32_t>& labels,
                                   const std::vector<std::vector<SampleIdx>>& blocks, AttrId a,
                                   std::vector<char>* active, ClassicEval& out) {
    const auto& col = sys.column(a);
    out.pure_members = 0;
    out.split_any = false;
    out.children.assign(blocks.size(), {});
    out.local = {};
    std::unordered_map<std::uint64_t, std::size_t> slot;
    slot.reserve(64);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        if (active && !(*active)[bi]) continue;
        const auto& block = blocks[bi];
        auto& kids = out.children[bi];
        slot.clear();
        for (SampleIdx s : block) {
            const std::uint64_t key = attr_key(col, s);
            auto [it, fresh] = slot.try_emplace(key, kids.size());
            if (fresh) kids.push_back({{}, labels[static_cast<std::size_t>(s)], true});
            auto& kid = kids[it->second];
            kid.pure = kid.pure && kid.label == labels[static_cast<std::size_t>(s)];
            kid.members.push_back(s);
        }
        out.local.samples_touched += block.size();
        out.local.granule_evals += 1;
        if (kids.size() > 1) {
            out.split_any = true;
        } else if (active) {
            // whole block shares one key of the candidate, so no future
            // sub-block can ever be split by it
            (*active)[bi] = 0;
        }
        for (const auto& kid : kids)
            if (kid.pure) out.pure_members += static_cast<SampleIdx>(kid.members.size());
    }
}

inline EngineResult run_classic(const DecisionSystem& sys, const EngineOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const SampleIdx n = sys.n_samples();
    const AttrId n_attrs = sys.n_attributes();
    const auto& labels = sys.decisions();

    EngineResult res;
    if (sys.n_classes() == 1) {
        res.pos = SampleSet::full(n);
        return res;
    }

    std::vector<std::vector<SampleIdx>> blocks(1);
    blocks[0].resize(static_cast<std::size_t>(n));
    for (SampleIdx i = 0; i < n; ++i) blocks[0][static_cast<std::size_t>(i)] = i;

    std::vector<char> alive(static_cast<std::size_t>(n_attrs), 1);
    std::vector<std::vector<char>> active;
    if (opt.restrict_active)
        active.assign(static_cast<std::size_t>(n_attrs), std::vector<char>(1, 1));

    std::vector<SampleIdx> pos_members;  // sorted, shrink variants
    SampleIdx pos_size = 0;
    std::vector<ClassicEval> evals(static_cast<std::size_t>(n_attrs));

    while (true) {
        if (opt.shrink && blocks.empty()) break;
        if (!opt.shrink && pos_size == n) break;
        std::vector<AttrId> live;
        for (AttrId a = 0; a < n_attrs; ++a)
            if (alive[static_cast<std::size_t>(a)]) live.push_back(a);
        if (live.empty()) break;

        for_each_candidate(live, opt.threads, [&](AttrId a) {
            eval_classic_candidate(sys, labels, blocks, a,
                                   opt.restrict_active ? &active[static_cast<std::size_t>(a)]
                                                       : nullptr,
                                   evals[static_cast<std::size_t>(a)]);
        });

        AttrId best = -1;
        SampleIdx best_gain = 0;
        for (AttrId a : live) {
            auto& ev = evals[static_cast<std::size_t>(a)];
            ev.local.candidate_evals += 1;
            res.counters.absorb(ev.local);
            // shrink variants refine only impure blocks, so every pure child
            // is newly consistent; plain keeps the full partition of U and
            // pure_members is the whole |POS| under R+a
            const SampleIdx gain = opt.shrink ? ev.pure_members : ev.pure_members - pos_size;
            if (gain > best_gain) {
                best_gain = gain;
                best = a;
            }
        }
        if (best < 0) {
            if (opt.eliminate)
                for (AttrId a : live)
                    if (!evals[static_cast<std::size_t>(a)].split_any) {
                        alive[static_cast<std::size_t>(a)] = 0;
                        res.redundant.push_back(a);
                    }
            break;
        }

        // commit the winner's refinement
        auto& win = evals[static_cast<std::size_t>(best)];
        std::vector<std::vector<SampleIdx>> next_blocks;
        std::vector<std::size_t> parent_of;
        std::vector<SampleIdx> new_pos;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            auto& kids = win.children[bi];
            if (kids.empty()) {  // inert for the winner: carried over verbatim
                next_blocks.push_back(std::move(blocks[bi]));
                parent_of.push_back(bi);
                continue;
            }
            for (auto& kid : kids) {
                if (opt.shrink && kid.pure) {
                    new_pos.insert(new_pos.end(), kid.members.begin(), kid.members.end());
                } else {
                    next_blocks.push_back(std::move(kid.members));
                    parent_of.push_back(bi);
                }
            }
        }
        blocks = std::move(next_blocks);
        if (opt.shrink) {
            std::sort(new_pos.begin(), new_pos.end());
            std::vector<SampleIdx> merged;
            merged.reserve(pos_members.size() + new_pos.size());
            std::set_union(pos_members.begin(), pos_members.end(), new_pos.begin(),
                           new_pos.end(), std::back_inserter(merged));
            pos_members = std::move(merged);
            pos_size = static_cast<SampleIdx>(pos_members.size());
        } else {
            pos_size = win.pure_members;
        }
        alive[static_cast<std::size_t>(best)] = 0;
        res.selected.push_back(best);
        res.gamma_trace.push_back(pos_size);

        if (opt.restrict_active) {
            for (AttrId a = 0; a < n_attrs; ++a) {
                if (!alive[static_cast<std::size_t>(a)]) continue;
                auto& mask = active[static_cast<std::size_t>(a)];
                std::vector<char> next(blocks.size());
                for (std::size_t i = 0; i < blocks.size(); ++i) next[i] = mask[parent_of[i]];
                mask = std::move(next);
            }
        }
        if (opt.eliminate)
            for (AttrId a : live)
                if (a != best && !evals[static_cast<std::size_t>(a)].split_any) {
                    alive[static_cast<std::size_t>(a)] = 0;
                    res.redundant.push_back(a);
                }

        if (opt.check_invariants && n <= kInvariantCheckCap) {
            SampleSet universe =
                opt.shrink ? SampleSet::full(n).minus(SampleSet::from_sorted(pos_members))
                           : SampleSet::full(n);
            Partition expect = partition_by(sys, universe, res.selected);
            Partition got;
            got.universe = universe;
            for (const auto& b : blocks) got.blocks.push_back(SampleSet::of(b));
            canonicalize(got);
            if (!same_blocks(expect, got))
                throw InvariantError("classic engine: maintained partition diverged from "
                                     "reference refinement");
            if (opt.shrink) {
                const auto ref = positive_region(sys, SampleSet::full(n), res.selected,
                                                 Mode::classic, NeighborhoodConfig{});
                if (!(SampleSet::from_sorted(pos_members) == ref.members))
                    throw InvariantError("classic engine: accumulated positive region diverged "
                                         "from reference");
            }
        }
    }

    if (opt.shrink) {
        res.pos = SampleSet::from_sorted(std::move(pos_members));
    } else {
        std::vector<SampleIdx> members;
        for (const auto& b : blocks) {
            bool pure = true;
            for (SampleIdx s : b)
                pure = pure && labels[static_cast<std::size_t>(s)] ==
                                   labels[static_cast<std::size_t>(b.front())];
            if (pure) members.insert(members.end(), b.begin(), b.end());
        }
        std::sort(members.begin(), members.end());
        res.pos = SampleSet::from_sorted(std::move(members));
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

// ---------------------------------------------------------------------------
// neighborhood mode: granule scans
// ---------------------------------------------------------------------------

struct AttrView {
    const double* num = nullptr;
    const std::int32_t* sym = nullptr;
};

inline AttrView view_of(const AttributeColumn& col) {
    if (col.kind == AttributeKind::numeric) return {col.numeric.data(), nullptr};
    return {nullptr, col.symbols.data()};
}

inline bool pair_within(const AttrView& v, SampleIdx x, SampleIdx y, double radius) {
    if (v.num) {
        const double d = v.num[x] - v.num[y];
        return (d < 0 ? -d : d) <= radius;
    }
    return v.sym[x] == v.sym[y] || radius >= 1.0;
}

struct NbrEval {
    SampleIdx pure_count = 0;
    bool split_any = false;
    std::vector<SampleIdx> newly;  // ascending
    EngineCounters local;
};

inline void eval_nbr_candidate(const DecisionSystem& sys, const std::vector<std::int32_t>& labels,
                               const std::vector<SampleIdx>& eval_set,
                               const std::vector<AttrView>& r_views, AttrId a, double radius,
                               std::vector<char>* mask, NbrEval& out) {
    const AttrView cand = view_of(sys.column(a));
    out.pure_count = 0;
    out.split_any = false;
    out.newly.clear();
    out.local = {};
    for (SampleIdx x : eval_set) {
        if (mask && !(*mask)[static_cast<std::size_t>(x)]) continue;
        bool pure = true;
        bool separated = false;
        const std::int32_t lx = labels[static_cast<std::size_t>(x)];
        for (SampleIdx y : eval_set) {
            bool in_r = true;
            for (const auto& v : r_views)
                if (!pair_within(v, x, y, radius)) {
                    in_r = false;
                    break;
                }
            if (!in_r) continue;
            if (pair_within(cand, x, y, radius))
                pure = pure && labels[static_cast<std::size_t>(y)] == lx;
            else
                separated = true;
        }
        out.local.samples_touched += eval_set.size();
        out.local.granule_evals += 1;
        if (pure) {
            out.newly.push_back(x);
            ++out.pure_count;
        }
        if (separated)
            out.split_any = true;
        else if (mask)
            (*mask)[static_cast<std::size_t>(x)] = 0;  // candidate can never shrink x's granule
    }
}

inline EngineResult run_neighborhood(const DecisionSystem& sys, const NeighborhoodConfig& cfg,
                                     const EngineOptions& opt) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const SampleIdx n = sys.n_samples();
    const AttrId n_attrs = sys.n_attributes();
    const auto& labels = sys.decisions();
    const double radius = cfg.radius;

    EngineResult res;
    if (sys.n_classes() == 1) {
        res.pos = SampleSet::full(n);
        return res;
    }

    std::vector<SampleIdx> eval_set(static_cast<std::size_t>(n));
    for (SampleIdx i = 0; i < n; ++i) eval_set[static_cast<std::size_t>(i)] = i;

    std::vector<char> alive(static_cast<std::size_t>(n_attrs), 1);
    std::vector<std::vector<char>> masks;
    if (opt.restrict_active)
        masks.assign(static_cast<std::size_t>(n_attrs),
                     std::vector<char>(static_cast<std::size_t>(n), 1));

    std::vector<SampleIdx> pos_members;
    SampleIdx pos_size = 0;
    std::vector<AttrView> r_views;
    std::vector<NbrEval> evals(static_cast<std::size_t>(n_attrs));

    while (true) {
        if (opt.shrink && eval_set.empty()) break;
        if (!opt.shrink && pos_size == n) break;
        std::vector<AttrId> live;
        for (AttrId a = 0; a < n_attrs; ++a)
            if (alive[static_cast<std::size_t>(a)]) live.push_back(a);
        if (live.empty()) break;

        for_each_candidate(live, opt.threads, [&](AttrId a) {
            eval_nbr_candidate(sys, labels, eval_set, r_views, a, radius,
                               opt.restrict_active ? &masks[static_cast<std::size_t>(a)] : nullptr,
                               evals[static_cast<std::size_t>(a)]);
        });

        AttrId best = -1;
        SampleIdx best_gain = 0;
        for (AttrId a : live) {
            auto& ev = evals[static_cast<std::size_t>(a)];
            ev.local.candidate_evals += 1;
            res.counters.absorb(ev.local);
            const SampleIdx gain = opt.shrink ? ev.pure_count : ev.pure_count - pos_size;
            if (gain > best_gain) {
                best_gain = gain;
                best = a;
            }
        }
        if (best < 0) {
            if (opt.eliminate)
                for (AttrId a : live)
                    if (!evals[static_cast<std::size_t>(a)].split_any) {
                        alive[static_cast<std::size_t>(a)] = 0;
                        res.redundant.push_back(a);
                    }
            break;
        }

        auto& win = evals[static_cast<std::size_t>(best)];
        if (opt.shrink) {
            std::vector<SampleIdx> merged;
            merged.reserve(pos_members.size() + win.newly.size());
            std::set_union(pos_members.begin(), pos_members.end(), win.newly.begin(),
                           win.newly.end(), std::back_inserter(merged));
            pos_members = std::move(merged);
            pos_size = static_cast<SampleIdx>(pos_members.size());
            std::vector<SampleIdx> next_eval;
            next_eval.reserve(eval_set.size() - win.newly.size());
            std::set_difference(eval_set.begin(), eval_set.end(), win.newly.begin(),
                                win.newly.end(), std::back_inserter(next_eval));
            eval_set = std::move(next_eval);
        } else {
            pos_members = win.newly;
            pos_size = win.pure_count;
        }
        alive[static_cast<std::size_t>(best)] = 0;
        res.selected.push_back(best);
        res.gamma_trace.push_back(pos_size);
        r_views.push_back(view_of(sys.column(best)));

        if (opt.eliminate)
            for (AttrId a : live)
                if (a != best && !evals[static_cast<std::size_t>(a)].split_any) {
                    alive[static_cast<std::size_t>(a)] = 0;
                    res.redundant.push_back(a);
                }

        if (opt.check_invariants && n <= kInvariantCheckCap) {
            const auto ref = positive_region(sys, SampleSet::full(n), res.selected,
                                             Mode::neighborhood, cfg);
            if (!(SampleSet::from_sorted(pos_members) == ref.members))
                throw InvariantError("neighborhood engine: accumulated positive region diverged "
                                     "from reference");
        }
    }

    res.pos = SampleSet::from_sorted(std::move(pos_members));
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

inline EngineResult run_engine(const DecisionSystem& sys, Mode mode,
                               const NeighborhoodConfig& cfg, const EngineOptions& opt) {
    return mode == Mode::classic ? run_classic(sys, opt) : run_neighborhood(sys, cfg, opt);
}

}  // namespace roughsel::detail
