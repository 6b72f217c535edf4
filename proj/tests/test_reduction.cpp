#include <catch2/catch_amalgamated.hpp>

#include <roughsel/oracle.hpp>
#include <roughsel/reduction.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "helpers.hpp"

using namespace roughsel;
using rstest::make_numeric_system;
using rstest::s1;
using rstest::vec;

namespace {

constexpr Variant kAllVariants[] = {Variant::plain, Variant::fspa, Variant::farnemf,
                                    Variant::lra};

NeighborhoodConfig radius(double r) {
    NeighborhoodConfig cfg;
    cfg.radius = r;
    return cfg;
}

}  // namespace

TEST_CASE("variant and mode names round-trip") {
    for (Variant v : kAllVariants) CHECK(parse_variant(to_string(v)) == v);
    CHECK(parse_mode("classic") == Mode::classic);
    CHECK(parse_mode("neighborhood") == Mode::neighborhood);
    REQUIRE_THROWS_AS(parse_variant("quick"), ConfigError);
    REQUIRE_THROWS_AS(parse_mode("fuzzy"), ConfigError);
}

TEST_CASE("worked example: two binary attributes resolve in two steps") {
    const auto sys = s1();
    for (Variant v : kAllVariants) {
        const auto rep = reduce(sys, Mode::classic, v);
        INFO("variant " << to_string(v));
        CHECK(rep.reduct == AttrSet{0, 1});  // ties break to the lower index
        CHECK(rep.gamma_trace == std::vector<SampleIdx>{2, 4});
        CHECK(rep.final_pos_size == 4);
        CHECK(rep.universe_size == 4);
        CHECK(rep.final_gamma() == 1.0);
        CHECK(rep.redundant.empty());
    }
}

TEST_CASE("worked example: one attribute with a wide gap suffices") {
    const auto sys = rstest::gap1d();
    for (Variant v : kAllVariants) {
        const auto rep = reduce(sys, Mode::neighborhood, v, radius(0.16));
        INFO("variant " << to_string(v));
        CHECK(rep.reduct == AttrSet{0});
        CHECK(rep.final_pos_size == 4);
        CHECK(rep.gamma_trace == std::vector<SampleIdx>{4});
        CHECK(rep.radius == 0.16);
    }
}

TEST_CASE("degenerate systems") {
    // all-constant attribute, two classes: nothing separates anything
    const auto flat = rstest::constant_system(6, 2);
    for (Variant v : kAllVariants) {
        const auto rep = reduce(flat, Mode::classic, v);
        CHECK(rep.reduct.empty());
        CHECK(rep.final_pos_size == 0);
        CHECK(rep.gamma_trace.empty());
    }

    // single class: everything is already consistent
    const auto pure = rstest::constant_system(6, 1);
    for (Variant v : kAllVariants) {
        const auto rep = reduce(pure, Mode::classic, v);
        CHECK(rep.reduct.empty());
        CHECK(rep.final_pos_size == 6);
    }
}

TEST_CASE("parity-style data stalls the greedy short of full consistency") {
    const auto sys = rstest::xor_system();
    const auto full_pos = positive_region(sys, SampleSet::full(4), {0, 1}, Mode::classic, {});
    REQUIRE(full_pos.members.size() == 4);  // both attributes together separate everything
    for (Variant v : kAllVariants) {
        const auto rep = reduce(sys, Mode::classic, v);
        INFO("variant " << to_string(v));
        // no single attribute has positive gain, so the zero-gain rule stops at once
        CHECK(rep.reduct.empty());
        CHECK(rep.final_pos_size == 0);
    }
}

TEST_CASE("all four variants agree on randomized systems") {
    detail::SynthRng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const auto sys = detail::random_system(rng);
        for (Mode mode : {Mode::classic, Mode::neighborhood}) {
            const auto base = reduce(sys, mode, Variant::plain, radius(0.16));
            for (Variant v : {Variant::fspa, Variant::farnemf, Variant::lra}) {
                const auto rep = reduce(sys, mode, v, radius(0.16));
                INFO("trial " << trial << " mode " << to_string(mode) << " variant "
                              << to_string(v));
                REQUIRE(rep.reduct == base.reduct);
                REQUIRE(rep.final_pos_size == base.final_pos_size);
                REQUIRE(rep.gamma_trace == base.gamma_trace);
            }
        }
    }
}

TEST_CASE("counter dominance holds on randomized systems") {
    detail::SynthRng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const auto sys = detail::random_system(rng);
        for (Mode mode : {Mode::classic, Mode::neighborhood}) {
            std::vector<std::uint64_t> touched;
            for (Variant v : kAllVariants)
                touched.push_back(reduce(sys, mode, v, radius(0.16)).counters.samples_touched);
            INFO("trial " << trial << " mode " << to_string(mode));
            CHECK(touched[3] <= touched[2]);  // lra <= farnemf
            CHECK(touched[2] <= touched[1]);  // farnemf <= fspa
            CHECK(touched[1] <= touched[0]);  // fspa <= plain
        }
    }
}

TEST_CASE("duplicated attributes are eliminated permanently by the eliminating variants") {
    SynthSpec spec;
    spec.seed = 5;
    spec.n = 120;
    spec.numeric_attrs = 6;
    spec.duplicate_of = {{4, 0}, {5, 1}};
    const auto sys = synth(spec);

    for (Mode mode : {Mode::classic, Mode::neighborhood}) {
        for (Variant v : {Variant::farnemf, Variant::lra}) {
            const auto rep = reduce(sys, mode, v, radius(0.16));
            INFO("mode " << to_string(mode) << " variant " << to_string(v));
            for (AttrId dup : {4, 5}) {
                const bool in_reduct =
                    std::find(rep.reduct.begin(), rep.reduct.end(), dup) != rep.reduct.end();
                CHECK_FALSE(in_reduct);
            }
            // the duplicate of the first pick is provably eliminated
            if (!rep.reduct.empty() && rep.reduct[0] == 0) {
                CHECK(std::find(rep.redundant.begin(), rep.redundant.end(), AttrId{4}) !=
                      rep.redundant.end());
            }
        }
        for (Variant v : {Variant::plain, Variant::fspa}) {
            const auto rep = reduce(sys, mode, v, radius(0.16));
            CHECK(rep.redundant.empty());  // non-eliminating variants never mark anything
        }
    }
}

TEST_CASE("redundancy is permanent: eliminated attributes never help the final reduct") {
    detail::SynthRng rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        const auto sys = detail::random_system(rng);
        for (Mode mode : {Mode::classic, Mode::neighborhood}) {
            const auto rep = reduce(sys, mode, Variant::lra, radius(0.16));
            AttrSet with_reduct(rep.reduct);
            std::sort(with_reduct.begin(), with_reduct.end());
            const auto base = positive_region(sys, SampleSet::full(sys.n_samples()), with_reduct,
                                              mode, radius(0.16));
            for (AttrId b : rep.redundant) {
                AttrSet extended(with_reduct);
                extended.push_back(b);
                std::sort(extended.begin(), extended.end());
                const auto more = positive_region(sys, SampleSet::full(sys.n_samples()), extended,
                                                  mode, radius(0.16));
                INFO("trial " << trial << " mode " << to_string(mode) << " attr " << b);
                REQUIRE(more.members == base.members);
            }
        }
    }
}

TEST_CASE("reports are identical regardless of evaluation thread count") {
    SynthSpec spec;
    spec.seed = 9;
    spec.n = 300;
    spec.numeric_attrs = 8;
    spec.duplicate_of = {{7, 2}};
    const auto sys = synth(spec);

    for (Mode mode : {Mode::classic, Mode::neighborhood}) {
        for (Variant v : {Variant::plain, Variant::lra}) {
            ReduceOptions one;
            one.threads = 1;
            const auto base = reduce(sys, mode, v, radius(0.16), one);
            for (int t : {2, 3, 5}) {
                ReduceOptions opt;
                opt.threads = t;
                const auto rep = reduce(sys, mode, v, radius(0.16), opt);
                INFO("mode " << to_string(mode) << " variant " << to_string(v) << " threads "
                             << t);
                REQUIRE(rep.reduct == base.reduct);
                REQUIRE(rep.redundant == base.redundant);
                REQUIRE(rep.gamma_trace == base.gamma_trace);
                REQUIRE(rep.counters.granule_evals == base.counters.granule_evals);
                REQUIRE(rep.counters.candidate_evals == base.counters.candidate_evals);
                REQUIRE(rep.counters.samples_touched == base.counters.samples_touched);
                CHECK(rep.threads == t);
            }
        }
    }
}

TEST_CASE("pairwise-independence test matches its specification examples") {
    const auto sys = s1();
    const auto u = SampleSet::full(4);

    // a member of R never refines the structure further
    CHECK(sr_test(sys, u, {0}, 0, Mode::classic));

    // the second attribute splits {0,1}, so it is not redundant
    CHECK_FALSE(sr_test(sys, u, {0}, 1, Mode::classic));

    // duplicated column: redundant relative to its twin
    const auto dup = make_numeric_system({{0, 0, 1, 1}, {0, 0, 1, 1}}, {0, 1, 1, 0});
    CHECK(sr_test(dup, u, {0}, 1, Mode::classic));
    CHECK(sr_test(dup, u, {0}, 1, Mode::neighborhood, radius(0.16)));

    // constant column: redundant relative to anything, even the empty set
    const auto with_const = make_numeric_system({{0, 0, 1, 1}, {0.5, 0.5, 0.5, 0.5}}, {0, 1, 1, 0});
    CHECK(sr_test(with_const, u, {}, 1, Mode::classic));
    CHECK(sr_test(with_const, u, {}, 1, Mode::neighborhood, radius(0.16)));

    REQUIRE_THROWS_AS(sr_test(sys, u, {0}, 7, Mode::classic), DomainError);
}

namespace {

DecisionSystem with_extra_column(const DecisionSystem& sys, AttributeColumn col) {
    auto cols = sys.columns();
    col.id = static_cast<AttrId>(cols.size());
    col.name = "extra";
    cols.push_back(std::move(col));
    return DecisionSystem(std::move(cols), sys.decisions(), sys.class_labels(),
                          sys.decision_name());
}

}  // namespace

TEST_CASE("independence of b implies positive regions ignore b under any extension") {
    detail::SynthRng rng(404);
    for (int trial = 0; trial < 12; ++trial) {
        const auto base = detail::random_system(rng);

        AttributeColumn constant;
        constant.kind = AttributeKind::numeric;
        constant.numeric.assign(static_cast<std::size_t>(base.n_samples()), 0.5);
        const auto sys_const = with_extra_column(base, constant);
        const AttrId bc = sys_const.n_attributes() - 1;

        auto twin = base.column(0);
        const auto sys_twin = with_extra_column(base, twin);
        const AttrId bt = sys_twin.n_attributes() - 1;

        for (Mode mode : {Mode::classic, Mode::neighborhood}) {
            INFO("trial " << trial << " mode " << to_string(mode));
            const auto u = SampleSet::full(base.n_samples());

            REQUIRE(sr_test(sys_const, u, {}, bc, mode, radius(0.16)));
            for (AttrId a = 0; a < bc; ++a) {
                const auto lhs = positive_region(sys_const, u, {a, bc}, mode, radius(0.16));
                const auto rhs = positive_region(sys_const, u, {a}, mode, radius(0.16));
                REQUIRE(lhs.members == rhs.members);
            }

            REQUIRE(sr_test(sys_twin, u, {0}, bt, mode, radius(0.16)));
            for (AttrId a = 1; a < bt; ++a) {
                const auto lhs = positive_region(sys_twin, u, {0, a, bt}, mode, radius(0.16));
                const auto rhs = positive_region(sys_twin, u, {0, a}, mode, radius(0.16));
                REQUIRE(lhs.members == rhs.members);
            }
        }
    }
}

TEST_CASE("search state bootstraps and validates") {
    const auto sys = s1();
    auto st = ReductState::initial(sys);
    CHECK(st.candidates == AttrSet{0, 1});
    CHECK_FALSE(st.terminal);
    CHECK(st.universe_remaining == SampleSet::full(4));
    REQUIRE_NOTHROW(st.validate(sys));

    st.selected.push_back(0);  // now 0 appears in both selected and candidates
    REQUIRE_THROWS_AS(st.validate(sys), InvariantError);

    const auto pure = rstest::constant_system(4, 1);
    const auto done = ReductState::initial(pure);
    CHECK(done.terminal);
    CHECK(done.pos_accum.members.size() == 4);
}

TEST_CASE("report invariants hold on randomized systems") {
    detail::SynthRng rng(555);
    for (int trial = 0; trial < 15; ++trial) {
        const auto sys = detail::random_system(rng);
        for (Mode mode : {Mode::classic, Mode::neighborhood}) {
            const auto rep = reduce(sys, mode, Variant::lra, radius(0.16));
            for (AttrId a : rep.reduct) {
                REQUIRE(a >= 0);
                REQUIRE(a < sys.n_attributes());
            }
            REQUIRE(rep.final_pos_size <= sys.n_samples());
            REQUIRE(rep.gamma_trace.size() == rep.reduct.size());
            for (std::size_t i = 1; i < rep.gamma_trace.size(); ++i)
                REQUIRE(rep.gamma_trace[i] >= rep.gamma_trace[i - 1]);
            if (!rep.gamma_trace.empty())
                REQUIRE(rep.gamma_trace.back() == rep.final_pos_size);
            REQUIRE(rep.counters.candidate_evals > 0);
        }
    }
}
