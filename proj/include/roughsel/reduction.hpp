#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "roughsel/detail/engine.hpp"
#include "roughsel/granulation.hpp"
#include "roughsel/types.hpp"

namespace roughsel {

// ---------------------------------------------------------------------------
// Forward greedy attribute reduction, four variants over one skeleton:
//   plain   - every candidate re-evaluated on the full universe
//   fspa    - evaluation universe shrinks to U' = U - POS after each pick
//   farnemf - fspa + candidates that refine nothing on U' are dropped for good
//   lra     - farnemf + per-candidate evaluation restricted to the blocks or
//             samples the candidate can still tell apart
// All variants share the stopping rule (stop when the best integer positive-
// region gain is zero) and tie-break (lowest attribute index), so they return
// identical reducts; only the work they spend differs.
// ---------------------------------------------------------------------------

enum class Variant { plain, fspa, farnemf, lra };

inline const char* to_string(Variant v) {
    switch (v) {
        case Variant::plain: return "plain";
        case Variant::fspa: return "fspa";
        case Variant::farnemf: return "farnemf";
        case Variant::lra: return "lra";
    }
    return "?";
}

inline Variant parse_variant(const std::string& s) {
    if (s == "plain") return Variant::plain;
    if (s == "fspa") return Variant::fspa;
    if (s == "farnemf") return Variant::farnemf;
    if (s == "lra") return Variant::lra;
    throw ConfigError("unknown variant: " + s);
}

inline Mode parse_mode(const std::string& s) {
    if (s == "classic") return Mode::classic;
    if (s == "neighborhood") return Mode::neighborhood;
    throw ConfigError("unknown mode: " + s);
}

struct Instrumentation {
    std::uint64_t granule_evals = 0;
    std::uint64_t candidate_evals = 0;
    std::uint64_t samples_touched = 0;
    std::chrono::duration<double> wall_time{0};
};

struct ReduceOptions {
    int threads = 1;
#ifdef NDEBUG
    bool check_invariants = false;
#else
    bool check_invariants = true;
#endif
};

struct ReductionReport {
    Variant algorithm = Variant::plain;
    Mode mode = Mode::classic;
    AttrSet reduct;
    AttrSet redundant;
    SampleIdx final_pos_size = 0;
    SampleIdx universe_size = 0;
    std::vector<SampleIdx> gamma_trace;  // |POS| after each selection
    Instrumentation counters;
    double radius = 0;  // echo, neighborhood only
    int threads = 1;    // echo

    double final_gamma() const {
        return universe_size > 0 ? static_cast<double>(final_pos_size) / universe_size : 0.0;
    }
};

// Search state as seen between iterations; the step-wise driver in lra.hpp
// consumes and produces these. selected/candidates/redundant partition the
// attribute set, universe_remaining is always U minus pos_accum.
struct ReductState {
    AttrSet selected;
    AttrSet candidates;
    AttrSet redundant;
    SampleSet universe_remaining;
    PositiveRegion pos_accum;
    std::vector<SampleIdx> gamma_trace;
    Instrumentation counters;
    bool terminal = false;

    static ReductState initial(const DecisionSystem& sys) {
        ReductState st;
        st.candidates = sys.all_attributes();
        if (sys.n_classes() == 1) {
            st.pos_accum.members = SampleSet::full(sys.n_samples());
            st.terminal = true;
        } else {
            st.universe_remaining = SampleSet::full(sys.n_samples());
        }
        st.pos_accum.universe_size = sys.n_samples();
        return st;
    }

    void validate(const DecisionSystem& sys) const {
        std::vector<char> seen(static_cast<std::size_t>(sys.n_attributes()), 0);
        auto mark = [&](const AttrSet& s) {
            for (AttrId a : s) {
                if (a < 0 || a >= sys.n_attributes() || seen[static_cast<std::size_t>(a)])
                    throw InvariantError("reduct state: attribute sets overlap or leave range");
                seen[static_cast<std::size_t>(a)] = 1;
            }
        };
        mark(selected);
        mark(candidates);
        mark(redundant);
        for (char c : seen)
            if (!c) throw InvariantError("reduct state: attribute sets do not cover C");
        const auto expect = SampleSet::full(sys.n_samples()).minus(pos_accum.members);
        if (!(expect == universe_remaining))
            throw InvariantError("reduct state: universe_remaining != U - pos_accum");
        for (std::size_t i = 1; i < gamma_trace.size(); ++i)
            if (gamma_trace[i] < gamma_trace[i - 1])
                throw InvariantError("reduct state: gamma trace decreased");
    }
};

namespace detail {

inline EngineOptions engine_options(Variant v, const ReduceOptions& opt) {
    EngineOptions eo;
    eo.shrink = v != Variant::plain;
    eo.eliminate = v == Variant::farnemf || v == Variant::lra;
    eo.restrict_active = v == Variant::lra;
    eo.threads = opt.threads;
    eo.check_invariants = opt.check_invariants;
    return eo;
}

}  // namespace detail

inline ReductionReport reduce(const DecisionSystem& sys, Mode mode, Variant variant,
                              const NeighborhoodConfig& cfg = {},
                              const ReduceOptions& opt = {}) {
    if (mode == Mode::neighborhood) cfg.validate();
    const auto er = detail::run_engine(sys, mode, cfg, detail::engine_options(variant, opt));
    ReductionReport rep;
    rep.algorithm = variant;
    rep.mode = mode;
    rep.reduct = er.selected;
    rep.redundant = er.redundant;
    rep.final_pos_size = er.pos.size();
    rep.universe_size = sys.n_samples();
    rep.gamma_trace = er.gamma_trace;
    rep.counters.granule_evals = er.counters.granule_evals;
    rep.counters.candidate_evals = er.counters.candidate_evals;
    rep.counters.samples_touched = er.counters.samples_touched;
    rep.counters.wall_time = std::chrono::duration<double>(er.wall_seconds);
    rep.radius = mode == Mode::neighborhood ? cfg.radius : 0.0;
    rep.threads = detail::resolve_threads(opt.threads);
    return rep;
}

// True when b cannot tell apart anything that the current structure over
// `universe` has not already separated: classic, refining universe/R by b
// changes no block; neighborhood, N_R(x) ∩ universe ⊆ N_b(x) for every x.
// An empty R is the single block / the whole universe.
inline bool sr_test(const DecisionSystem& sys, const SampleSet& universe, const AttrSet& r,
                    AttrId b, Mode mode, const NeighborhoodConfig& cfg = {}) {
    if (b < 0 || b >= sys.n_attributes()) throw DomainError("sr_test: attribute out of range");
    for (AttrId a : r)
        if (a == b) return true;  // refining by a member of R never changes the structure
    if (mode == Mode::classic) {
        const Partition p = partition_by(sys, universe, r);
        const auto& col = sys.column(b);
        for (const auto& block : p.blocks) {
            const std::uint64_t key = attr_key(col, block[0]);
            for (SampleIdx s : block)
                if (attr_key(col, s) != key) return false;
        }
        return true;
    }
    cfg.validate();
    const auto& col = sys.column(b);
    for (SampleIdx x : universe) {
        for (SampleIdx y : universe) {
            bool in_r = true;
            for (AttrId a : r)
                if (attr_distance(sys.column(a), x, y) > cfg.radius) {
                    in_r = false;
                    break;
                }
            if (in_r && attr_distance(col, x, y) > cfg.radius) return false;
        }
    }
    return true;
}

}  // namespace roughsel
