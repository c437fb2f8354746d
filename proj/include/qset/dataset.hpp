#pragma once
#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qset {

enum class RecordKind { live, pad, tombstone };

// A fixed-dimension vector of unsigned integers. Pad and tombstone
// records carry a uid instead of meaningful values and never match
// anything, including each other.
struct Record {
    std::vector<std::uint32_t> values;
    RecordKind kind = RecordKind::live;
    std::uint64_t uid = 0;
};

constexpr std::uint32_t kDefaultValueBound = 1u << 16;

// Ordered record store with stable 0-based indices. Live records are
// pairwise distinct (set semantics); padding keeps the count a power
// of two so index registers are full-width.
struct Dataset {
    std::vector<Record> records;
    std::size_t logical_size = 0;
    std::size_t dimension = 0;
    std::uint32_t value_bound = kDefaultValueBound;
    std::uint64_t next_uid = 0;

    std::size_t padded_size() const { return records.size(); }
};

struct MarkedPair {
    std::size_t i = 0; // index into A
    std::size_t j = 0; // index into B
    friend bool operator==(const MarkedPair&, const MarkedPair&) = default;
    friend auto operator<=>(const MarkedPair&, const MarkedPair&) = default;
};

// Sorted, duplicate-free list of solution pairs.
using MarkedSet = std::vector<MarkedPair>;

inline int match_fn(const Record& a, const Record& b) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("match_fn: dimension mismatch");
    if (a.kind != RecordKind::live || b.kind != RecordKind::live) return 0;
    return a.values == b.values ? 1 : 0;
}

inline void pad_to_pow2(Dataset& ds) {
    if (ds.logical_size == 0)
        throw std::invalid_argument("pad_to_pow2: empty dataset");
    const std::size_t target = std::bit_ceil(ds.records.size());
    while (ds.records.size() < target) {
        Record pad;
        pad.values.assign(ds.dimension, 0);
        pad.kind = RecordKind::pad;
        pad.uid = ds.next_uid++;
        ds.records.push_back(std::move(pad));
    }
}

struct LoadOptions {
    std::uint32_t value_bound = kDefaultValueBound;
    bool reject_duplicates = true; // when false, duplicates are dropped
};

// Parses one record per line, space-separated decimal integers.
// Blank lines are ignored; the result is padded to a power of two.
inline Dataset load_dataset(const std::string& source, std::size_t dimension,
                            const LoadOptions& opts = {}) {
    if (dimension == 0)
        throw std::invalid_argument("load_dataset: dimension must be positive");
    Dataset ds;
    ds.dimension = dimension;
    ds.value_bound = opts.value_bound;
    std::set<std::vector<std::uint32_t>> seen;
    std::istringstream in(source);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::vector<std::uint32_t> vals;
        std::uint64_t v;
        while (ls >> v) {
            if (v >= opts.value_bound)
                throw std::runtime_error("load_dataset: line " + std::to_string(line_no) +
                                         ": value " + std::to_string(v) + " exceeds bound");
            vals.push_back(static_cast<std::uint32_t>(v));
        }
        if (!ls.eof() || vals.size() != dimension)
            throw std::runtime_error("load_dataset: line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(dimension) +
                                     " unsigned integers");
        if (!seen.insert(vals).second) {
            if (opts.reject_duplicates)
                throw std::runtime_error("load_dataset: line " + std::to_string(line_no) +
                                         ": duplicate record");
            continue;
        }
        ds.records.push_back(Record{std::move(vals), RecordKind::live, 0});
    }
    if (ds.records.empty())
        throw std::runtime_error("load_dataset: no records (empty set handled upstream)");
    ds.logical_size = ds.records.size();
    pad_to_pow2(ds);
    return ds;
}

// Builds a padded dataset directly from value vectors (test/experiment path).
inline Dataset make_dataset(std::vector<std::vector<std::uint32_t>> values,
                            std::size_t dimension,
                            std::uint32_t value_bound = kDefaultValueBound) {
    Dataset ds;
    ds.dimension = dimension;
    ds.value_bound = value_bound;
    std::set<std::vector<std::uint32_t>> seen;
    for (auto& v : values) {
        if (v.size() != dimension)
            throw std::invalid_argument("make_dataset: wrong dimension");
        if (!seen.insert(v).second)
            throw std::invalid_argument("make_dataset: duplicate record");
        ds.records.push_back(Record{std::move(v), RecordKind::live, 0});
    }
    if (ds.records.empty())
        throw std::invalid_argument("make_dataset: empty set");
    ds.logical_size = ds.records.size();
    pad_to_pow2(ds);
    return ds;
}

// Exact O(|A|*|B|) ground truth; the verification oracle for everything else.
inline std::vector<std::vector<std::uint32_t>> brute_force_intersection(const Dataset& a,
                                                                        const Dataset& b) {
    if (a.dimension != b.dimension)
        throw std::invalid_argument("brute_force_intersection: dimension mismatch");
    std::set<std::vector<std::uint32_t>> out;
    for (const auto& ra : a.records) {
        if (ra.kind != RecordKind::live) continue;
        for (const auto& rb : b.records) {
            if (rb.kind != RecordKind::live) continue;
            if (ra.values == rb.values) out.insert(ra.values);
        }
    }
    return {out.begin(), out.end()};
}

inline MarkedSet marked_pairs(const Dataset& a, const Dataset& b) {
    if (a.dimension != b.dimension)
        throw std::invalid_argument("marked_pairs: dimension mismatch");
    MarkedSet pairs;
    for (std::size_t i = 0; i < a.records.size(); ++i)
        for (std::size_t j = 0; j < b.records.size(); ++j)
            if (match_fn(a.records[i], b.records[j]) == 1) pairs.push_back({i, j});
    return pairs;
}

// Step2-2 database update: replace both ends of a found pair in place
// with tombstones so they match nothing from then on. Indices of all
// other records are unchanged.
inline void tombstone_pair(Dataset& a, std::size_t i0, Dataset& b, std::size_t j0) {
    if (i0 >= a.records.size() || j0 >= b.records.size())
        throw std::out_of_range("tombstone_pair: index out of range");
    if (match_fn(a.records[i0], b.records[j0]) != 1)
        throw std::invalid_argument("tombstone_pair: pair does not match");
    a.records[i0].kind = RecordKind::tombstone;
    a.records[i0].uid = a.next_uid++;
    b.records[j0].kind = RecordKind::tombstone;
    b.records[j0].uid = b.next_uid++;
}

// FNV-1a over the live records, order-independent input (records are
// hashed in index order, which is stable by construction).
inline std::uint64_t live_checksum(const Dataset& ds) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::uint64_t x) {
        for (int s = 0; s < 64; s += 8) {
            h ^= (x >> s) & 0xFF;
            h *= 0x100000001B3ULL;
        }
    };
    for (const auto& r : ds.records) {
        if (r.kind != RecordKind::live) continue;
        for (auto v : r.values) mix(v);
    }
    return h;
}

inline std::string dataset_manifest(const Dataset& ds) {
    std::ostringstream out;
    out << "logical_size " << ds.logical_size << "\n"
        << "padded_size " << ds.padded_size() << "\n"
        << "dimension " << ds.dimension << "\n"
        << "checksum " << live_checksum(ds) << "\n";
    return out.str();
}

} // namespace qset
