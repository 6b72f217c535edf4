#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef ROUGHSEL_CLI_PATH
#error "ROUGHSEL_CLI_PATH must be defined by the build"
#endif
#ifndef ROUGHSEL_DATASETS_DIR
#error "ROUGHSEL_DATASETS_DIR must be defined by the build"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const auto dir = std::filesystem::temp_directory_path();
    const auto out_path = dir / "rs_cli_out.txt";
    const auto err_path = dir / "rs_cli_err.txt";
    const std::string cmd = std::string(ROUGHSEL_CLI_PATH) + " " + args + " >" +
                            out_path.string() + " 2>" + err_path.string();
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::string sample(const std::string& name) {
    return std::string(ROUGHSEL_DATASETS_DIR) + "/samples/" + name;
}

}  // namespace

TEST_CASE("reduce prints a machine-readable report") {
    const auto r = run_cli("reduce --data " + sample("s1.csv") + " --schema " +
                           sample("s1.schema") + " --mode classic --variant lra");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["kind"] == "reduction_report");
    CHECK(j["algorithm"] == "lra");
    CHECK(j["mode"] == "classic");
    CHECK(j["reduct"] == nlohmann::json::array({0, 1}));
    CHECK(j["reduct_names"] == nlohmann::json::array({"a1", "a2"}));
    CHECK(j["final_pos_size"] == 4);
    CHECK(j["gamma_trace"] == nlohmann::json::array({2, 4}));
    CHECK(j["counters"]["samples_touched"].get<std::uint64_t>() > 0);
}

TEST_CASE("reduce honors the neighborhood radius") {
    const auto r = run_cli("reduce --data " + sample("demo_mixed.csv") + " --schema " +
                           sample("demo_mixed.schema") +
                           " --mode neighborhood --variant plain --radius 0.16");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["reduct_names"] == nlohmann::json::array({"temp", "wind"}));
    CHECK(j["final_pos_size"] == 8);
    CHECK(j["config"]["radius"] == 0.16);
}

TEST_CASE("usage problems exit with code 2") {
    CHECK(run_cli("reduce --data /nope.csv --schema /nope.schema").exit_code == 2);
    CHECK(run_cli("reduce").exit_code == 2);
    CHECK(run_cli("bench --spec /nonexistent.bench").exit_code == 2);
    CHECK(run_cli("verify --suite unknown").exit_code == 2);
    CHECK(run_cli("definitely-not-a-subcommand").exit_code == 2);
    const auto bad_radius =
        run_cli("reduce --data " + sample("s1.csv") + " --schema " + sample("s1.schema") +
                " --mode neighborhood --variant lra --radius -1");
    CHECK(bad_radius.exit_code == 2);
}

TEST_CASE("verification suites run clean and exit zero") {
    const auto r = run_cli("verify --suite sr --trials 25 --seed 42");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("sr classic: 0 counterexamples") != std::string::npos);
    CHECK(r.out.find("sr neighborhood: 0 counterexamples") != std::string::npos);

    const auto slr = run_cli("verify --suite slr --trials 25 --seed 42 --mode classic");
    REQUIRE(slr.exit_code == 0);
    CHECK(slr.out.find("slr classic: 0 counterexamples") != std::string::npos);
    CHECK(slr.out.find("neighborhood") == std::string::npos);

    const auto audit = run_cli("verify --suite audit --trials 8 --seed 1");
    REQUIRE(audit.exit_code == 0);
    CHECK(audit.out.find("audit: 0 violations") != std::string::npos);
}

TEST_CASE("verify can write its findings as JSON") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto json_path = dir / "rs_verify.json";
    std::filesystem::remove(json_path);
    const auto r = run_cli("verify --suite sr --trials 10 --seed 7 --json " + json_path.string());
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(slurp(json_path));
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 2);  // one entry per mode
    for (const auto& suite : j) {
        CHECK(suite["suite"].get<std::string>().rfind("sr/", 0) == 0);
        CHECK(suite["ok"] == true);
        CHECK(suite["counterexamples"].empty());
    }
}

TEST_CASE("bench prints the wide table and can save artifacts") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto spec_path = dir / "rs_tiny.bench";
    {
        std::ofstream spec(spec_path);
        spec << "mode neighborhood\nradius 0.16\nvariants plain lra\nseed 3\n"
             << "dataset synth name=tiny n=40 numeric=3\n";
    }
    const auto csv_path = dir / "rs_bench.csv";
    const auto json_path = dir / "rs_bench.json";
    const auto r = run_cli("bench --spec " + spec_path.string() + " --csv " + csv_path.string() +
                           " --json " + json_path.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("dataset,n_samples,n_attributes,mode,radius,metric,plain,lra") == 0);
    CHECK(slurp(csv_path) == r.out);
    const auto j = nlohmann::json::parse(slurp(json_path));
    CHECK(j["kind"] == "bench_report");
    CHECK(j["ok"] == true);
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][0]["report"]["final_pos_size"] == j["rows"][1]["report"]["final_pos_size"]);
}

TEST_CASE("bench reports load failures without aborting and exits nonzero") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto spec_path = dir / "rs_ghost.bench";
    {
        std::ofstream spec(spec_path);
        spec << "mode classic\nvariants plain\n"
             << "dataset csv name=ghost path=/none.csv schema=/none.schema\n"
             << "dataset synth name=ok n=20 numeric=2\n";
    }
    const auto r = run_cli("bench --spec " + spec_path.string());
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("ok,20,2,") != std::string::npos);  // the good dataset still ran
    CHECK(r.err.find("ghost") != std::string::npos);
}

TEST_CASE("synth writes a loadable dataset") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv_path = dir / "rs_synth.csv";
    const auto schema_path = dir / "rs_synth.schema";
    const auto r = run_cli("synth --out " + csv_path.string() + " --schema-out " +
                           schema_path.string() +
                           " --seed 5 --n 30 --numeric 3 --categorical 1 --classes 3 --dup 1");
    REQUIRE(r.exit_code == 0);

    const auto reduce = run_cli("reduce --data " + csv_path.string() + " --schema " +
                                schema_path.string() + " --mode classic --variant plain");
    REQUIRE(reduce.exit_code == 0);
    const auto j = nlohmann::json::parse(reduce.out);
    CHECK(j["universe_size"] == 30);
}

TEST_CASE("the bundled quick bench spec parses and the sample files load") {
    const auto spec = std::string(ROUGHSEL_DATASETS_DIR) + "/bench/quick.bench";
    REQUIRE(std::filesystem::exists(spec));
    for (const char* name : {"s1", "xor", "gap", "demo_mixed"}) {
        const auto r = run_cli("reduce --data " + sample(std::string(name) + ".csv") +
                               " --schema " + sample(std::string(name) + ".schema") +
                               " --mode classic --variant farnemf");
        INFO("sample " << name);
        REQUIRE(r.exit_code == 0);
    }
}
