#include <catch2/catch_amalgamated.hpp>

#include <roughsel/oracle.hpp>

#include <vector>

#include "helpers.hpp"

using namespace roughsel;
using rstest::s1;
using rstest::vec;

namespace {

NeighborhoodConfig radius(double r) {
    NeighborhoodConfig cfg;
    cfg.radius = r;
    return cfg;
}

}  // namespace

TEST_CASE("attribute masks are bit positions") {
    CHECK(attr_mask({}) == 0);
    CHECK(attr_mask({0}) == 0b001);
    CHECK(attr_mask({1}) == 0b010);
    CHECK(attr_mask({0, 2}) == 0b101);
}

TEST_CASE("the exhaustive table reproduces the worked example") {
    const auto sys = s1();
    const auto table = exhaustive_pos_table(sys, Mode::classic);
    REQUIRE(table.size() == 3);
    CHECK(vec(table.at(0b01).members) == std::vector<SampleIdx>{2, 3});
    CHECK(vec(table.at(0b10).members) == std::vector<SampleIdx>{1, 3});
    CHECK(vec(table.at(0b11).members) == std::vector<SampleIdx>{0, 1, 2, 3});
}

TEST_CASE("a single-class system is consistent under every subset") {
    const auto sys = rstest::constant_system(5, 1);
    for (Mode mode : {Mode::classic, Mode::neighborhood}) {
        const auto table = exhaustive_pos_table(sys, mode, radius(0.16));
        for (const auto& [mask, pos] : table) CHECK(pos.members.size() == 5);
    }
}

TEST_CASE("the oracle refuses systems beyond its budget") {
    SynthSpec spec;
    spec.seed = 3;
    spec.n = 80;
    spec.numeric_attrs = 3;
    REQUIRE_THROWS_AS(exhaustive_pos_table(synth(spec), Mode::classic), BudgetError);

    spec.n = 32;
    spec.numeric_attrs = 11;
    REQUIRE_THROWS_AS(exhaustive_pos_table(synth(spec), Mode::classic), BudgetError);

    OracleBudget wide;
    wide.max_samples = 128;
    spec.n = 80;
    spec.numeric_attrs = 3;
    REQUIRE_NOTHROW(exhaustive_pos_table(synth(spec), Mode::classic, {}, wide));
}

TEST_CASE("randomized independence checks find no counterexamples") {
    for (Mode mode : {Mode::classic, Mode::neighborhood}) {
        INFO("mode " << to_string(mode));
        CHECK(verify_sr(42, 60, mode, radius(0.16)).empty());
        CHECK(verify_slr(42, 60, mode, radius(0.16)).empty());
    }
}

TEST_CASE("the audit confirms the worked example against the exhaustive table") {
    const auto rec = audit_reducts(s1(), Mode::classic);
    REQUIRE(rec.reports.size() == 4);
    CHECK(rec.reducts_identical);
    CHECK(rec.pos_sizes_identical);
    CHECK(rec.oracle_checked);
    CHECK_FALSE(rec.stalled);
    CHECK(rec.oracle_pos_size == 4);
    CHECK(rec.reports[0].reduct == AttrSet{0, 1});
    CHECK(rec.reports[0].final_pos_size == 4);
    CHECK(rec.ok());
}

TEST_CASE("the audit classifies a locally optimal stall instead of failing it") {
    const auto rec = audit_reducts(rstest::xor_system(), Mode::classic);
    CHECK(rec.reducts_identical);
    CHECK(rec.pos_sizes_identical);
    CHECK(rec.oracle_checked);
    CHECK(rec.stalled);
    CHECK(rec.oracle_pos_size == 4);
    CHECK(rec.reports[0].final_pos_size == 0);
    CHECK(rec.ok());  // no single attribute improves anything, so the stop is sound
}

TEST_CASE("the audit skips the oracle beyond its budget but still compares variants") {
    SynthSpec spec;
    spec.seed = 8;
    spec.n = 200;
    spec.numeric_attrs = 5;
    const auto rec = audit_reducts(synth(spec), Mode::neighborhood, radius(0.16));
    CHECK_FALSE(rec.oracle_checked);
    CHECK(rec.reducts_identical);
    CHECK(rec.pos_sizes_identical);
    CHECK(rec.ok());
}

TEST_CASE("audits of randomized systems come back clean in both modes") {
    detail::SynthRng rng(17);
    for (int trial = 0; trial < 12; ++trial) {
        const auto sys = detail::random_system(rng);
        for (Mode mode : {Mode::classic, Mode::neighborhood}) {
            const auto rec = audit_reducts(sys, mode, radius(0.16));
            INFO("trial " << trial << " mode " << to_string(mode) << ": "
                          << (rec.violations.empty() ? "clean" : rec.violations[0]));
            CHECK(rec.ok());
            CHECK(rec.oracle_checked);
        }
    }
}

TEST_CASE("random oracle systems stay within their own budget") {
    detail::SynthRng rng(1234);
    for (int i = 0; i < 30; ++i) {
        const auto sys = detail::random_system(rng);
        REQUIRE(sys.n_samples() >= 4);
        REQUIRE(sys.n_samples() <= 64);
        REQUIRE(sys.n_attributes() >= 2);
        REQUIRE(sys.n_attributes() <= 10);
        REQUIRE(sys.n_classes() >= 1);  // unused labels compact away
        REQUIRE_NOTHROW(sys.validate());
    }
}
