#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "roughsel/types.hpp"

namespace roughsel {

// ---------------------------------------------------------------------------
// Schema: maps CSV header names to column roles
// ---------------------------------------------------------------------------

enum class ColumnRole { numeric, categorical, decision };

struct ColumnSpec {
    std::string name;
    ColumnRole role;
};

struct Schema {
    std::vector<ColumnSpec> columns;

    void validate() const {
        int decisions = 0;
        std::unordered_map<std::string, int> seen;
        for (const auto& c : columns) {
            if (c.name.empty()) throw SchemaError("schema: empty column name");
            if (++seen[c.name] > 1) throw SchemaError("schema: duplicate column '" + c.name + "'");
            if (c.role == ColumnRole::decision) ++decisions;
        }
        if (decisions != 1)
            throw SchemaError("schema: exactly one decision column required, found " +
                              std::to_string(decisions));
        if (columns.size() < 2)
            throw SchemaError("schema: need at least one condition attribute and a decision");
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        out.push_back(trim(std::string_view(line).substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

inline double parse_double(const std::string& cell, SampleIdx row, const std::string& col) {
    const char* b = cell.data();
    const char* e = b + cell.size();
    if (b != e && *b == '+') ++b;
    double v = 0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e || !std::isfinite(v))
        throw ParseError("row " + std::to_string(row + 1) + ", column '" + col +
                         "': cannot parse numeric value '" + cell + "'");
    return v;
}

inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// sorted-unique interning: ids follow lexicographic order of the strings
inline std::vector<std::int32_t> intern_sorted(const std::vector<std::string>& raw,
                                               std::vector<std::string>& alphabet) {
    alphabet = raw;
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    std::unordered_map<std::string, std::int32_t> id;
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        id[alphabet[i]] = static_cast<std::int32_t>(i);
    std::vector<std::int32_t> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = id[raw[i]];
    return out;
}

}  // namespace detail

inline Schema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open schema file: " + path);
    Schema schema;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = detail::split_csv_line(t);
        if (fields.size() != 2)
            throw SchemaError(path + ":" + std::to_string(lineno) + ": expected 'name,kind'");
        ColumnRole role;
        if (fields[1] == "numeric")
            role = ColumnRole::numeric;
        else if (fields[1] == "categorical")
            role = ColumnRole::categorical;
        else if (fields[1] == "decision")
            role = ColumnRole::decision;
        else
            throw SchemaError(path + ":" + std::to_string(lineno) + ": unknown kind '" +
                              fields[1] + "'");
        schema.columns.push_back({fields[0], role});
    }
    schema.validate();
    return schema;
}

// ---------------------------------------------------------------------------
// CSV ingestion. First row is a header; columns are matched to the schema by
// name (file order wins for attribute ids). Numeric columns are min-max
// normalized to [0,1]; a constant column maps to all zeros. Missing values
// (empty cells or "?") are rejected.
// ---------------------------------------------------------------------------

inline DecisionSystem load_csv(const std::string& path, const Schema& schema) {
    schema.validate();
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open data file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    const auto header = detail::split_csv_line(line);

    std::unordered_map<std::string, ColumnRole> role_of;
    for (const auto& c : schema.columns) role_of[c.name] = c.role;
    if (header.size() != schema.columns.size())
        throw SchemaError(path + ": header has " + std::to_string(header.size()) +
                          " columns, schema declares " + std::to_string(schema.columns.size()));
    std::vector<ColumnRole> roles(header.size());
    std::unordered_map<std::string, int> seen;
    for (std::size_t i = 0; i < header.size(); ++i) {
        auto it = role_of.find(header[i]);
        if (it == role_of.end())
            throw SchemaError(path + ": column '" + header[i] + "' not declared in schema");
        if (++seen[header[i]] > 1)
            throw SchemaError(path + ": duplicate header column '" + header[i] + "'");
        roles[i] = it->second;
    }

    std::vector<std::vector<std::string>> cells(header.size());
    SampleIdx rows = 0;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError(path + ": row " + std::to_string(rows + 1) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i].empty() || fields[i] == "?")
                throw ParseError(path + ": row " + std::to_string(rows + 1) + ", column '" +
                                 header[i] + "': missing value");
            cells[i].push_back(fields[i]);
        }
        ++rows;
    }
    if (rows == 0) throw ParseError(path + ": no data rows");

    std::vector<AttributeColumn> columns;
    std::vector<std::int32_t> decision;
    std::vector<std::string> class_labels;
    std::string decision_name;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (roles[i] == ColumnRole::decision) {
            decision = detail::intern_sorted(cells[i], class_labels);
            decision_name = header[i];
            continue;
        }
        AttributeColumn col;
        col.id = static_cast<AttrId>(columns.size());
        col.name = header[i];
        if (roles[i] == ColumnRole::numeric) {
            col.kind = AttributeKind::numeric;
            col.numeric.resize(static_cast<std::size_t>(rows));
            double lo = 0, hi = 0;
            for (SampleIdx r = 0; r < rows; ++r) {
                const double v =
                    detail::parse_double(cells[i][static_cast<std::size_t>(r)], r, header[i]);
                col.numeric[static_cast<std::size_t>(r)] = v;
                if (r == 0) lo = hi = v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            const double range = hi - lo;
            for (double& v : col.numeric)
                v = range > 0 ? std::clamp((v - lo) / range, 0.0, 1.0) : 0.0;
        } else {
            col.kind = AttributeKind::categorical;
            col.symbols = detail::intern_sorted(cells[i], col.alphabet);
        }
        columns.push_back(std::move(col));
    }
    return DecisionSystem(std::move(columns), std::move(decision), std::move(class_labels),
                          std::move(decision_name));
}

inline DecisionSystem load_csv(const std::string& csv_path, const std::string& schema_path) {
    return load_csv(csv_path, load_schema(schema_path));
}

// Writes the (normalized) system back out. Numeric values are printed with
// shortest round-trip formatting, so load_csv(write_csv(sys)) == sys for a
// system that is already normalized.
inline void write_csv(const DecisionSystem& sys, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    for (const auto& c : sys.columns()) out << c.name << ',';
    out << sys.decision_name() << '\n';
    for (SampleIdx r = 0; r < sys.n_samples(); ++r) {
        for (const auto& c : sys.columns()) {
            if (c.kind == AttributeKind::numeric)
                out << detail::format_double(c.numeric[static_cast<std::size_t>(r)]);
            else
                out << c.alphabet[static_cast<std::size_t>(c.symbols[static_cast<std::size_t>(r)])];
            out << ',';
        }
        out << sys.class_label(sys.decision(r)) << '\n';
    }
    if (!out) throw ParseError("write failed: " + path);
}

inline void write_schema(const DecisionSystem& sys, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    out << "# column,kind\n";
    for (const auto& c : sys.columns())
        out << c.name << ',' << (c.kind == AttributeKind::numeric ? "numeric" : "categorical")
            << '\n';
    out << sys.decision_name() << ",decision\n";
}

// ---------------------------------------------------------------------------
// Seeded synthetic decision systems.
//
// Shape: samples are split into groups with geometric sizes (1/2, 1/4, ...),
// one group per "informative" attribute. A group member's value on its own
// informative attribute falls in a class-specific band; everyone else sits in
// one narrow "rest" band. Band gaps exceed 0.16 for up to 3 classes, so each
// informative attribute cleanly resolves exactly its group at that radius,
// and the rest band is narrower than 0.16 so a foreign informative attribute
// never separates anything. The number of informative attributes grows with
// log2(n). Numeric values are quantized to a 0.02 grid so classic-mode
// partitions are nontrivial on synthetic data too.
// ---------------------------------------------------------------------------

struct SynthSpec {
    std::uint64_t seed = 0;
    SampleIdx n = 0;
    AttrId numeric_attrs = 0;
    AttrId categorical_attrs = 0;
    std::int32_t classes = 2;
    // attribute -> lower-indexed attribute it duplicates, value for value
    std::map<AttrId, AttrId> duplicate_of;
};

namespace detail {

class SynthRng {
public:
    explicit SynthRng(std::uint64_t seed) : eng_(seed) {}
    // mt19937_64 output is fully specified by the standard; the raw-draw
    // mapping keeps values identical across standard libraries
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

private:
    std::mt19937_64 eng_;
};

inline double quantize_grid(double v) {
    return std::clamp(static_cast<double>(std::llround(v * 50.0)) / 50.0, 0.0, 1.0);
}

struct Band {
    double lo, width;
};

inline Band class_band(std::int32_t classes, std::int32_t c) {
    switch (classes) {
        case 1: return {0.0, 0.16};
        case 2: return c == 0 ? Band{0.0, 0.16} : Band{0.36, 0.16};
        case 3: return Band{0.26 * c, 0.08};
        default: {
            // no separation guarantee past 3 classes
            const double step = 0.72 / classes;
            return {quantize_grid(step * c), std::max(0.02, quantize_grid(step * 0.4))};
        }
    }
}

constexpr Band kRestBand{0.80, 0.16};

}  // namespace detail

inline AttrId synth_informative_count(SampleIdx n, AttrId non_duplicate_attrs) {
    AttrId g = 1;
    while ((SampleIdx{1} << (g + 4)) <= n) ++g;  // floor(log2 n) - 3
    return std::clamp<AttrId>(g, 1, non_duplicate_attrs);
}

inline DecisionSystem synth(const SynthSpec& spec) {
    if (spec.n < 1) throw ConfigError("synth: n must be positive");
    if (spec.classes < 1) throw ConfigError("synth: classes must be positive");
    if (spec.numeric_attrs < 0 || spec.categorical_attrs < 0 ||
        spec.numeric_attrs + spec.categorical_attrs < 1)
        throw ConfigError("synth: need at least one attribute");
    if (spec.n < 2 * spec.classes)
        throw ConfigError("synth: n must be at least twice the class count");
    const AttrId total = spec.numeric_attrs + spec.categorical_attrs;
    for (const auto& [b, a] : spec.duplicate_of) {
        if (b < 0 || b >= total || a < 0 || a >= total)
            throw ConfigError("synth: duplicate_of attribute out of range");
        if (a >= b) throw ConfigError("synth: duplicate_of must reference a lower-indexed attribute");
    }

    detail::SynthRng rng(spec.seed);
    const auto n = spec.n;

    // shuffled sample order, then geometric group sizes over it
    std::vector<SampleIdx> order(static_cast<std::size_t>(n));
    for (SampleIdx i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (SampleIdx i = n - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

    AttrId non_dup = 0;
    std::vector<AttrId> informative_slot(static_cast<std::size_t>(total), -1);
    for (AttrId a = 0; a < total; ++a)
        if (!spec.duplicate_of.count(a)) ++non_dup;
    const AttrId groups = synth_informative_count(n, non_dup);
    {
        AttrId slot = 0;
        for (AttrId a = 0; a < total && slot < groups; ++a) {
            if (spec.duplicate_of.count(a)) continue;
            informative_slot[static_cast<std::size_t>(a)] = slot++;
        }
    }

    std::vector<AttrId> group_of(static_cast<std::size_t>(n));
    std::vector<std::int32_t> decision(static_cast<std::size_t>(n));
    {
        SampleIdx at = 0, remaining = n;
        for (AttrId gi = 0; gi < groups; ++gi) {
            const SampleIdx take = (gi == groups - 1) ? remaining : (remaining + 1) / 2;
            for (SampleIdx j = 0; j < take; ++j, ++at) {
                const SampleIdx s = order[static_cast<std::size_t>(at)];
                group_of[static_cast<std::size_t>(s)] = gi;
                decision[static_cast<std::size_t>(s)] = j % spec.classes;
            }
            remaining -= take;
        }
    }

    std::vector<AttributeColumn> columns(static_cast<std::size_t>(total));
    for (AttrId a = 0; a < total; ++a) {
        auto& col = columns[static_cast<std::size_t>(a)];
        col.id = a;
        const bool is_numeric = a < spec.numeric_attrs;
        col.kind = is_numeric ? AttributeKind::numeric : AttributeKind::categorical;
        col.name = (is_numeric ? "num" : "cat") +
                   std::to_string(is_numeric ? a : a - spec.numeric_attrs);

        if (auto it = spec.duplicate_of.find(a); it != spec.duplicate_of.end()) {
            const auto& src = columns[static_cast<std::size_t>(it->second)];
            col.kind = src.kind;
            col.numeric = src.numeric;
            col.symbols = src.symbols;
            col.alphabet = src.alphabet;
            continue;
        }

        const AttrId slot = informative_slot[static_cast<std::size_t>(a)];
        if (col.kind == AttributeKind::numeric) {
            col.numeric.resize(static_cast<std::size_t>(n));
            for (SampleIdx s = 0; s < n; ++s) {
                const double u = rng.unit();
                double v;
                if (slot < 0) {
                    v = u;
                } else if (group_of[static_cast<std::size_t>(s)] == slot) {
                    const auto band =
                        detail::class_band(spec.classes, decision[static_cast<std::size_t>(s)]);
                    v = band.lo + u * band.width;
                } else {
                    v = detail::kRestBand.lo + u * detail::kRestBand.width;
                }
                col.numeric[static_cast<std::size_t>(s)] = detail::quantize_grid(v);
            }
        } else {
            col.symbols.resize(static_cast<std::size_t>(n));
            std::vector<std::string> raw(static_cast<std::size_t>(n));
            for (SampleIdx s = 0; s < n; ++s) {
                if (slot < 0) {
                    raw[static_cast<std::size_t>(s)] = "s" + std::to_string(rng.below(4));
                } else if (group_of[static_cast<std::size_t>(s)] == slot) {
                    raw[static_cast<std::size_t>(s)] =
                        "c" + std::to_string(decision[static_cast<std::size_t>(s)]);
                } else {
                    raw[static_cast<std::size_t>(s)] = "rest";
                }
            }
            col.symbols = detail::intern_sorted(raw, col.alphabet);
        }
    }

    const int width = static_cast<int>(std::to_string(spec.classes - 1).size());
    std::vector<std::string> class_labels(static_cast<std::size_t>(spec.classes));
    for (std::int32_t c = 0; c < spec.classes; ++c) {
        std::string s = std::to_string(c);
        class_labels[static_cast<std::size_t>(c)] =
            std::string(static_cast<std::size_t>(width) - s.size(), '0') + s;
    }
    return DecisionSystem(std::move(columns), std::move(decision), std::move(class_labels));
}

}  // namespace roughsel
