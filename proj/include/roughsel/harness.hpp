#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "roughsel/data.hpp"
#include "roughsel/reduction.hpp"
#include "roughsel/types.hpp"

// Benchmark harness: runs the four variants over a list of datasets (CSV or
// seeded synthetic), medians wall time over repetitions, and emits rows
// suitable for plotting one curve per variant. Efficiency comparisons lean
// on the deterministic counters; wall time is reported, never asserted.

namespace roughsel {

struct DatasetRef {
    std::string name;
    bool is_synth = false;
    SynthSpec synth;
    std::string csv_path;
    std::string schema_path;
};

struct BenchSpec {
    Mode mode = Mode::neighborhood;
    std::vector<double> radii;
    std::vector<Variant> variants = {Variant::plain, Variant::fspa, Variant::farnemf,
                                     Variant::lra};
    int repetitions = 1;
    std::uint64_t seed = 0;
    int threads = 1;
    std::vector<DatasetRef> datasets;

    void validate() const {
        if (repetitions < 1) throw ConfigError("bench spec: repetitions must be >= 1");
        if (variants.empty()) throw ConfigError("bench spec: variants list is empty");
        if (datasets.empty()) throw ConfigError("bench spec: no datasets");
        if (mode == Mode::neighborhood) {
            if (radii.empty()) throw ConfigError("bench spec: neighborhood mode needs radii");
            NeighborhoodConfig cfg;
            for (double r : radii) {
                cfg.radius = r;
                cfg.validate();
            }
        }
    }
};

inline int env_threads() {
    if (const char* s = std::getenv("ROUGHSEL_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    return 1;
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& ctx) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(ctx + ": expected an unsigned integer, got '" + s + "'");
    return v;
}

inline double parse_f64(const std::string& s, const std::string& ctx) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError(ctx + ": expected a number, got '" + s + "'");
    return v;
}

// `dup=k` appends the shorthand: the last k attributes are exact copies of
// the first k
inline void apply_dup_shorthand(SynthSpec& spec, AttrId dup, const std::string& ctx) {
    const AttrId total = spec.numeric_attrs + spec.categorical_attrs;
    if (dup < 0 || dup * 2 > total)
        throw ConfigError(ctx + ": dup must satisfy 2*dup <= total attributes");
    spec.duplicate_of.clear();
    for (AttrId i = 0; i < dup; ++i) spec.duplicate_of[total - dup + i] = i;
}

inline DatasetRef parse_dataset_line(const std::vector<std::string>& toks,
                                     std::uint64_t default_seed, const std::string& ctx) {
    if (toks.size() < 2 || (toks[1] != "synth" && toks[1] != "csv"))
        throw ConfigError(ctx + ": dataset line must be 'dataset synth ...' or 'dataset csv ...'");
    DatasetRef ds;
    ds.is_synth = toks[1] == "synth";
    ds.synth.seed = default_seed;
    AttrId dup = 0;
    for (std::size_t i = 2; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string::npos)
            throw ConfigError(ctx + ": expected key=value, got '" + toks[i] + "'");
        const std::string key = toks[i].substr(0, eq);
        const std::string val = toks[i].substr(eq + 1);
        if (key == "name") ds.name = val;
        else if (ds.is_synth && key == "n") ds.synth.n = static_cast<SampleIdx>(parse_u64(val, ctx));
        else if (ds.is_synth && key == "numeric")
            ds.synth.numeric_attrs = static_cast<AttrId>(parse_u64(val, ctx));
        else if (ds.is_synth && key == "categorical")
            ds.synth.categorical_attrs = static_cast<AttrId>(parse_u64(val, ctx));
        else if (ds.is_synth && key == "classes")
            ds.synth.classes = static_cast<std::int32_t>(parse_u64(val, ctx));
        else if (ds.is_synth && key == "dup") dup = static_cast<AttrId>(parse_u64(val, ctx));
        else if (ds.is_synth && key == "seed") ds.synth.seed = parse_u64(val, ctx);
        else if (!ds.is_synth && key == "path") ds.csv_path = val;
        else if (!ds.is_synth && key == "schema") ds.schema_path = val;
        else throw ConfigError(ctx + ": unknown dataset key '" + key + "'");
    }
    if (ds.name.empty()) throw ConfigError(ctx + ": dataset needs name=");
    if (ds.is_synth) {
        apply_dup_shorthand(ds.synth, dup, ctx);
    } else if (ds.csv_path.empty() || ds.schema_path.empty()) {
        throw ConfigError(ctx + ": csv dataset needs path= and schema=");
    }
    return ds;
}

}  // namespace detail

inline BenchSpec parse_bench_spec_text(const std::string& text) {
    BenchSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string ctx = "bench spec line " + std::to_string(lineno);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        if (key == "mode") {
            if (toks.size() != 2) throw ConfigError(ctx + ": mode needs one value");
            spec.mode = parse_mode(toks[1]);
        } else if (key == "radius") {
            spec.radii.clear();
            for (std::size_t i = 1; i < toks.size(); ++i)
                spec.radii.push_back(detail::parse_f64(toks[i], ctx));
        } else if (key == "variants") {
            spec.variants.clear();
            for (std::size_t i = 1; i < toks.size(); ++i)
                spec.variants.push_back(parse_variant(toks[i]));
        } else if (key == "repetitions") {
            if (toks.size() != 2) throw ConfigError(ctx + ": repetitions needs one value");
            spec.repetitions = static_cast<int>(detail::parse_u64(toks[1], ctx));
        } else if (key == "seed") {
            if (toks.size() != 2) throw ConfigError(ctx + ": seed needs one value");
            spec.seed = detail::parse_u64(toks[1], ctx);
        } else if (key == "threads") {
            if (toks.size() != 2) throw ConfigError(ctx + ": threads needs one value");
            spec.threads = static_cast<int>(detail::parse_u64(toks[1], ctx));
        } else if (key == "dataset") {
            spec.datasets.push_back(detail::parse_dataset_line(toks, spec.seed, ctx));
        } else {
            throw ConfigError(ctx + ": unknown key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

inline BenchSpec parse_bench_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open bench spec: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_bench_spec_text(buf.str());
}

struct BenchRow {
    std::string dataset;
    SampleIdx n_samples = 0;
    AttrId n_attributes = 0;
    Mode mode = Mode::neighborhood;
    double radius = 0;
    Variant variant = Variant::plain;
    ReductionReport report;
    double median_wall_seconds = 0;
    std::string error;  // nonempty: dataset failed to load, other fields empty
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<std::string> violations;

    bool ok() const {
        if (!violations.empty()) return false;
        for (const auto& r : rows)
            if (!r.error.empty()) return false;
        return true;
    }
};

inline BenchReport run_bench(const BenchSpec& spec) {
    spec.validate();
    BenchReport out;
    const std::vector<double> radii =
        spec.mode == Mode::classic ? std::vector<double>{0.0} : spec.radii;
    ReduceOptions opt;
    opt.threads = spec.threads;

    for (const auto& ds : spec.datasets) {
        std::optional<DecisionSystem> loaded;
        try {
            loaded.emplace(ds.is_synth ? synth(ds.synth) : load_csv(ds.csv_path, ds.schema_path));
        } catch (const Error& e) {
            BenchRow row;
            row.dataset = ds.name;
            row.error = e.what();
            out.rows.push_back(std::move(row));
            continue;
        }
        const DecisionSystem& sys = *loaded;
        for (double radius : radii) {
            NeighborhoodConfig cfg;
            cfg.radius = spec.mode == Mode::neighborhood ? radius : cfg.radius;
            std::vector<BenchRow> batch;
            for (Variant v : spec.variants) {
                BenchRow row;
                row.dataset = ds.name;
                row.n_samples = sys.n_samples();
                row.n_attributes = sys.n_attributes();
                row.mode = spec.mode;
                row.radius = spec.mode == Mode::neighborhood ? radius : 0.0;
                row.variant = v;
                std::vector<double> walls;
                for (int rep = 0; rep < spec.repetitions; ++rep) {
                    ReductionReport r = reduce(sys, spec.mode, v, cfg, opt);
                    walls.push_back(r.counters.wall_time.count());
                    if (rep == 0) {
                        row.report = std::move(r);
                    } else if (!(r.reduct == row.report.reduct) ||
                               r.counters.samples_touched !=
                                   row.report.counters.samples_touched ||
                               r.counters.granule_evals != row.report.counters.granule_evals ||
                               r.counters.candidate_evals !=
                                   row.report.counters.candidate_evals) {
                        out.violations.push_back(ds.name + "/" + to_string(v) +
                                                 ": repetitions disagree, run is not "
                                                 "deterministic");
                    }
                }
                std::sort(walls.begin(), walls.end());
                const std::size_t m = walls.size() / 2;
                row.median_wall_seconds =
                    walls.size() % 2 ? walls[m] : (walls[m - 1] + walls[m]) / 2.0;
                batch.push_back(std::move(row));
            }
            for (const auto& row : batch)
                if (row.report.final_pos_size != batch[0].report.final_pos_size)
                    out.violations.push_back(ds.name + ": final POS size differs between " +
                                             to_string(batch[0].variant) + " and " +
                                             to_string(row.variant));
            for (auto& row : batch) out.rows.push_back(std::move(row));
        }
    }
    return out;
}

// wide table: one row per (dataset, radius, metric), one column per variant
inline std::string bench_csv(const BenchReport& rep,
                             const std::vector<Variant>& variants = {Variant::plain, Variant::fspa,
                                                                     Variant::farnemf,
                                                                     Variant::lra}) {
    std::ostringstream out;
    out << "dataset,n_samples,n_attributes,mode,radius,metric";
    for (Variant v : variants) out << ',' << to_string(v);
    out << '\n';
    struct Key {
        std::string dataset;
        double radius;
    };
    std::vector<Key> keys;
    for (const auto& row : rep.rows) {
        if (!row.error.empty()) continue;
        bool seen = false;
        for (const auto& k : keys)
            if (k.dataset == row.dataset && k.radius == row.radius) seen = true;
        if (!seen) keys.push_back({row.dataset, row.radius});
    }
    const char* metrics[] = {"samples_touched", "granule_evals",   "candidate_evals",
                             "median_wall_seconds", "final_pos_size", "reduct_size"};
    for (const auto& k : keys) {
        const BenchRow* sample = nullptr;
        for (const auto& row : rep.rows)
            if (row.error.empty() && row.dataset == k.dataset && row.radius == k.radius) {
                sample = &row;
                break;
            }
        for (const char* metric : metrics) {
            out << k.dataset << ',' << sample->n_samples << ',' << sample->n_attributes << ','
                << to_string(sample->mode) << ',' << detail::format_double(k.radius) << ','
                << metric;
            for (Variant v : variants) {
                const BenchRow* cell = nullptr;
                for (const auto& row : rep.rows)
                    if (row.error.empty() && row.dataset == k.dataset && row.radius == k.radius &&
                        row.variant == v)
                        cell = &row;
                out << ',';
                if (!cell) continue;
                const auto& c = cell->report.counters;
                if (std::string(metric) == "samples_touched") out << c.samples_touched;
                else if (std::string(metric) == "granule_evals") out << c.granule_evals;
                else if (std::string(metric) == "candidate_evals") out << c.candidate_evals;
                else if (std::string(metric) == "median_wall_seconds")
                    out << detail::format_double(cell->median_wall_seconds);
                else if (std::string(metric) == "final_pos_size") out << cell->report.final_pos_size;
                else out << cell->report.reduct.size();
            }
            out << '\n';
        }
    }
    return out.str();
}

}  // namespace roughsel
