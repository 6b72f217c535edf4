#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roughsel/report_json.hpp"
#include "roughsel/roughsel.hpp"

// Exit codes: 0 success, 1 verification/assertion failure, 2 usage or input
// error.

namespace {

int g_rc = 0;

void cmd_reduce(const std::string& data, const std::string& schema, const std::string& mode_s,
                const std::string& variant_s, double radius, int threads) {
    const auto mode = roughsel::parse_mode(mode_s);
    const auto variant = roughsel::parse_variant(variant_s);
    const auto sys = roughsel::load_csv(data, schema);
    roughsel::NeighborhoodConfig cfg;
    cfg.radius = radius;
    roughsel::ReduceOptions opt;
    opt.threads = threads;
    const auto rep = roughsel::reduce(sys, mode, variant, cfg, opt);
    auto j = roughsel::to_json(rep);
    std::vector<std::string> names;
    for (roughsel::AttrId a : rep.reduct)
        names.push_back(sys.column(a).name);
    j["reduct_names"] = names;
    std::cout << j.dump(2) << "\n";
}

void cmd_bench(const std::string& spec_path, const std::string& csv_out,
               const std::string& json_out) {
    auto spec = roughsel::parse_bench_spec(spec_path);
    if (spec.threads == 1) spec.threads = roughsel::env_threads();
    const auto rep = roughsel::run_bench(spec);
    const std::string table = roughsel::bench_csv(rep, spec.variants);
    std::cout << table;
    if (!csv_out.empty()) {
        std::ofstream f(csv_out);
        f << table;
    }
    if (!json_out.empty()) {
        std::ofstream f(json_out);
        f << roughsel::to_json(rep).dump(2) << "\n";
    }
    for (const auto& row : rep.rows)
        if (!row.error.empty())
            std::cerr << "dataset " << row.dataset << " failed: " << row.error << "\n";
    for (const auto& v : rep.violations) std::cerr << "violation: " << v << "\n";
    if (!rep.ok()) g_rc = 1;
}

void cmd_verify(const std::string& suite, std::uint64_t seed, std::uint64_t trials,
                const std::string& mode_s, double radius, const std::string& json_out) {
    std::vector<roughsel::Mode> modes;
    if (mode_s == "both")
        modes = {roughsel::Mode::classic, roughsel::Mode::neighborhood};
    else
        modes = {roughsel::parse_mode(mode_s)};
    roughsel::NeighborhoodConfig cfg;
    cfg.radius = radius;

    nlohmann::json reports = nlohmann::json::array();
    std::uint64_t total = 0;
    if (suite == "audit") {
        roughsel::detail::SynthRng rng(seed);
        std::uint64_t violations = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const auto sys = roughsel::detail::random_system(rng);
            for (auto mode : modes) {
                const auto rec = roughsel::audit_reducts(sys, mode, cfg);
                if (!rec.ok()) {
                    ++violations;
                    reports.push_back(roughsel::to_json(rec));
                }
            }
        }
        std::cout << "audit: " << violations << " violations over " << trials << " systems\n";
        total = violations;
    } else {
        for (auto mode : modes) {
            const auto list = suite == "sr" ? roughsel::verify_sr(seed, trials, mode, cfg)
                                            : roughsel::verify_slr(seed, trials, mode, cfg);
            std::cout << suite << " " << roughsel::to_string(mode) << ": " << list.size()
                      << " counterexamples\n";
            total += list.size();
            reports.push_back(roughsel::to_json(list, suite + std::string("/") +
                                                          roughsel::to_string(mode),
                                                seed, trials));
        }
    }
    if (!json_out.empty()) {
        std::ofstream f(json_out);
        f << reports.dump(2) << "\n";
    }
    if (total > 0) g_rc = 1;
}

void cmd_synth(const std::string& out, const std::string& schema_out, std::uint64_t seed,
               std::int64_t n, std::int64_t numeric, std::int64_t categorical,
               std::int64_t classes, std::int64_t dup) {
    roughsel::SynthSpec spec;
    spec.seed = seed;
    spec.n = static_cast<roughsel::SampleIdx>(n);
    spec.numeric_attrs = static_cast<roughsel::AttrId>(numeric);
    spec.categorical_attrs = static_cast<roughsel::AttrId>(categorical);
    spec.classes = static_cast<std::int32_t>(classes);
    roughsel::detail::apply_dup_shorthand(spec, static_cast<roughsel::AttrId>(dup), "synth");
    const auto sys = roughsel::synth(spec);
    roughsel::write_csv(sys, out);
    if (!schema_out.empty()) roughsel::write_schema(sys, schema_out);
    std::cout << "wrote " << sys.n_samples() << " samples, " << sys.n_attributes()
              << " attributes to " << out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"attribute reduction for classic and neighborhood rough sets"};
    app.require_subcommand(1);

    auto* reduce = app.add_subcommand("reduce", "run one reducer on one dataset, print JSON");
    std::string data, schema, mode = "neighborhood", variant = "lra";
    double radius = 0.16;
    int threads = roughsel::env_threads();
    reduce->add_option("--data", data, "CSV data file")->required()->check(CLI::ExistingFile);
    reduce->add_option("--schema", schema, "schema file")->required()->check(CLI::ExistingFile);
    reduce->add_option("--mode", mode, "classic|neighborhood")
        ->check(CLI::IsMember({"classic", "neighborhood"}));
    reduce->add_option("--variant", variant, "plain|fspa|farnemf|lra")
        ->check(CLI::IsMember({"plain", "fspa", "farnemf", "lra"}));
    reduce->add_option("--radius", radius, "neighborhood radius");
    reduce->add_option("--threads", threads, "candidate evaluation threads");
    reduce->callback([&] { cmd_reduce(data, schema, mode, variant, radius, threads); });

    auto* bench = app.add_subcommand("bench", "run a bench spec, print a plot-ready table");
    std::string spec_path, csv_out, json_out;
    bench->add_option("--spec", spec_path, "bench spec file")
        ->required()
        ->check(CLI::ExistingFile);
    bench->add_option("--csv", csv_out, "also write the table to this file");
    bench->add_option("--json", json_out, "write the full JSON report to this file");
    bench->callback([&] { cmd_bench(spec_path, csv_out, json_out); });

    auto* verify = app.add_subcommand("verify", "run randomized verification suites");
    std::string suite, vmode = "both", vjson;
    std::uint64_t seed = 42, trials = 1000;
    double vradius = 0.16;
    verify->add_option("--suite", suite, "sr|slr|audit")
        ->required()
        ->check(CLI::IsMember({"sr", "slr", "audit"}));
    verify->add_option("--seed", seed, "rng seed");
    verify->add_option("--trials", trials, "number of random trials");
    verify->add_option("--mode", vmode, "both|classic|neighborhood")
        ->check(CLI::IsMember({"both", "classic", "neighborhood"}));
    verify->add_option("--radius", vradius, "neighborhood radius");
    verify->add_option("--json", vjson, "write the full JSON report to this file");
    verify->callback([&] { cmd_verify(suite, seed, trials, vmode, vradius, vjson); });

    auto* synth = app.add_subcommand("synth", "emit a seeded synthetic dataset as CSV");
    std::string sout, sschema;
    std::uint64_t sseed = 0;
    std::int64_t sn = 1000, snum = 10, scat = 0, sclasses = 2, sdup = 0;
    synth->add_option("--out", sout, "output CSV path")->required();
    synth->add_option("--schema-out", sschema, "also write a schema file");
    synth->add_option("--seed", sseed, "generator seed");
    synth->add_option("--n", sn, "sample count");
    synth->add_option("--numeric", snum, "numeric attribute count");
    synth->add_option("--categorical", scat, "categorical attribute count");
    synth->add_option("--classes", sclasses, "decision class count");
    synth->add_option("--dup", sdup, "trailing attributes duplicating the leading ones");
    synth->callback([&] {
        cmd_synth(sout, sschema, sseed, sn, snum, scat, sclasses, sdup);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const roughsel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return g_rc;
}
