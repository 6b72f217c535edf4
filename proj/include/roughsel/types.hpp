#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace roughsel {

using SampleIdx = std::int32_t;
using AttrId = std::int32_t;
using AttrSet = std::vector<AttrId>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct BudgetError : Error {
    using Error::Error;
};
// Internal consistency violation (e.g. a stale active set). Never silent.
struct InvariantError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// SampleSet: strictly increasing list of sample indices
// ---------------------------------------------------------------------------

class SampleSet {
public:
    SampleSet() = default;

    static SampleSet full(SampleIdx n) {
        SampleSet s;
        s.idx_.resize(static_cast<std::size_t>(n));
        for (SampleIdx i = 0; i < n; ++i) s.idx_[static_cast<std::size_t>(i)] = i;
        return s;
    }

    // Takes indices in any order; sorts and rejects duplicates.
    static SampleSet of(std::vector<SampleIdx> v) {
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end())
            throw DomainError("SampleSet: duplicate sample index");
        SampleSet s;
        s.idx_ = std::move(v);
        return s;
    }

    // Caller guarantees sorted/unique; checked only with validate().
    static SampleSet from_sorted(std::vector<SampleIdx> v) {
        SampleSet s;
        s.idx_ = std::move(v);
        return s;
    }

    SampleIdx size() const { return static_cast<SampleIdx>(idx_.size()); }
    bool empty() const { return idx_.empty(); }

    SampleIdx operator[](SampleIdx i) const { return idx_[static_cast<std::size_t>(i)]; }

    bool contains(SampleIdx x) const {
        return std::binary_search(idx_.begin(), idx_.end(), x);
    }

    const std::vector<SampleIdx>& indices() const { return idx_; }

    auto begin() const { return idx_.begin(); }
    auto end() const { return idx_.end(); }

    SampleSet intersect(const SampleSet& o) const {
        std::vector<SampleIdx> out;
        std::set_intersection(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                              std::back_inserter(out));
        return from_sorted(std::move(out));
    }

    SampleSet unite(const SampleSet& o) const {
        std::vector<SampleIdx> out;
        std::set_union(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                       std::back_inserter(out));
        return from_sorted(std::move(out));
    }

    SampleSet minus(const SampleSet& o) const {
        std::vector<SampleIdx> out;
        std::set_difference(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                            std::back_inserter(out));
        return from_sorted(std::move(out));
    }

    bool is_subset_of(const SampleSet& o) const {
        return std::includes(o.idx_.begin(), o.idx_.end(), idx_.begin(), idx_.end());
    }

    bool operator==(const SampleSet& o) const { return idx_ == o.idx_; }
    bool operator!=(const SampleSet& o) const { return idx_ != o.idx_; }

    void validate(SampleIdx n_samples) const {
        for (std::size_t i = 0; i < idx_.size(); ++i) {
            if (idx_[i] < 0 || idx_[i] >= n_samples)
                throw InvariantError("SampleSet: index out of range");
            if (i > 0 && idx_[i - 1] >= idx_[i])
                throw InvariantError("SampleSet: indices not strictly increasing");
        }
    }

private:
    std::vector<SampleIdx> idx_;
};

// ---------------------------------------------------------------------------
// Decision system
// ---------------------------------------------------------------------------

enum class AttributeKind { numeric, categorical };

struct AttributeColumn {
    AttrId id = 0;
    std::string name;
    AttributeKind kind = AttributeKind::numeric;
    // kind == numeric: values in [0,1] after normalization
    std::vector<double> numeric;
    // kind == categorical: indices into alphabet
    std::vector<std::int32_t> symbols;
    // categorical only; sorted, symbol ids are positions here
    std::vector<std::string> alphabet;

    SampleIdx size() const {
        return static_cast<SampleIdx>(kind == AttributeKind::numeric ? numeric.size()
                                                                     : symbols.size());
    }
};

class DecisionSystem {
public:
    DecisionSystem() = default;

    DecisionSystem(std::vector<AttributeColumn> columns, std::vector<std::int32_t> decision,
                   std::vector<std::string> class_labels, std::string decision_name = "class")
        : columns_(std::move(columns)),
          decision_(std::move(decision)),
          class_labels_(std::move(class_labels)),
          decision_name_(std::move(decision_name)) {
        n_samples_ = static_cast<SampleIdx>(decision_.size());
        validate();
    }

    SampleIdx n_samples() const { return n_samples_; }
    AttrId n_attributes() const { return static_cast<AttrId>(columns_.size()); }
    std::int32_t n_classes() const { return static_cast<std::int32_t>(class_labels_.size()); }

    const AttributeColumn& column(AttrId a) const {
        if (a < 0 || a >= n_attributes()) throw DomainError("attribute index out of range");
        return columns_[static_cast<std::size_t>(a)];
    }
    const std::vector<AttributeColumn>& columns() const { return columns_; }

    std::int32_t decision(SampleIdx x) const { return decision_[static_cast<std::size_t>(x)]; }
    const std::vector<std::int32_t>& decisions() const { return decision_; }
    const std::string& class_label(std::int32_t k) const {
        return class_labels_[static_cast<std::size_t>(k)];
    }
    const std::vector<std::string>& class_labels() const { return class_labels_; }
    const std::string& decision_name() const { return decision_name_; }

    AttrSet all_attributes() const {
        AttrSet r(columns_.size());
        for (std::size_t i = 0; i < columns_.size(); ++i) r[i] = static_cast<AttrId>(i);
        return r;
    }

    void validate() const {
        if (n_samples_ < 1) throw DomainError("decision system needs at least one sample");
        if (columns_.empty()) throw DomainError("decision system needs at least one condition attribute");
        if (class_labels_.empty()) throw DomainError("decision system needs at least one class");
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            const auto& c = columns_[i];
            if (c.id != static_cast<AttrId>(i))
                throw InvariantError("column id does not match its position");
            if (c.size() != n_samples_)
                throw InvariantError("column length does not match sample count");
            if (c.kind == AttributeKind::numeric) {
                for (double v : c.numeric)
                    if (!(v >= 0.0 && v <= 1.0))
                        throw InvariantError("normalized numeric value outside [0,1]");
            } else {
                for (std::int32_t s : c.symbols)
                    if (s < 0 || s >= static_cast<std::int32_t>(c.alphabet.size()))
                        throw InvariantError("categorical symbol id outside its alphabet");
            }
        }
        const auto k = static_cast<std::int32_t>(class_labels_.size());
        std::vector<bool> seen(static_cast<std::size_t>(k), false);
        for (std::int32_t d : decision_) {
            if (d < 0 || d >= k) throw InvariantError("decision label outside 0..k-1");
            seen[static_cast<std::size_t>(d)] = true;
        }
        for (bool b : seen)
            if (!b) throw InvariantError("decision labels are not a contiguous 0..k-1 range");
    }

private:
    std::vector<AttributeColumn> columns_;
    std::vector<std::int32_t> decision_;
    std::vector<std::string> class_labels_;
    std::string decision_name_ = "class";
    SampleIdx n_samples_ = 0;
};

// ---------------------------------------------------------------------------
// Granulation configuration and results
// ---------------------------------------------------------------------------

enum class Mode { classic, neighborhood };

inline const char* to_string(Mode m) {
    return m == Mode::classic ? "classic" : "neighborhood";
}

// Neighborhood granules use the max combiner over per-attribute distances:
// numeric |a(x)-a(y)|, categorical 0/1. Membership is non-strict (d <= radius).
struct NeighborhoodConfig {
    double radius = 0.16;

    void validate() const {
        if (!(radius > 0.0)) throw ConfigError("neighborhood radius must be > 0");
    }
};

struct Partition {
    SampleSet universe;
    std::vector<SampleSet> blocks;

    // pairwise disjoint, no empty block, union == universe, canonical order
    void validate() const {
        std::vector<SampleIdx> all;
        for (const auto& b : blocks) {
            if (b.empty()) throw InvariantError("partition contains an empty block");
            all.insert(all.end(), b.begin(), b.end());
        }
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end())
            throw InvariantError("partition blocks overlap");
        if (!(SampleSet::from_sorted(std::move(all)) == universe))
            throw InvariantError("partition blocks do not cover the universe");
    }
};

inline void canonicalize(Partition& p) {
    std::sort(p.blocks.begin(), p.blocks.end(),
              [](const SampleSet& a, const SampleSet& b) { return a[0] < b[0]; });
}

// Blocks as sorted sets of sorted blocks, for order-insensitive comparison.
inline bool same_blocks(const Partition& a, const Partition& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    auto key = [](const Partition& p) {
        std::vector<std::vector<SampleIdx>> v;
        v.reserve(p.blocks.size());
        for (const auto& blk : p.blocks) v.push_back(blk.indices());
        std::sort(v.begin(), v.end());
        return v;
    };
    return key(a) == key(b);
}

struct PositiveRegion {
    SampleSet members;
    SampleIdx universe_size = 0;
};

}  // namespace roughsel
