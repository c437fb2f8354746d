#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qset/amplification.hpp"
#include "qset/dataset.hpp"
#include "qset/ledger.hpp"
#include "qset/rng.hpp"

namespace qset {

struct RunConfig {
    std::uint64_t master_seed = 0;
    double cap_factor = 3.0;        // per-call Grover budget, times ceil(sqrt(MN))
    int confirm_repeats = 2;        // R: emptiness confirmations before halting
    int dense_prefilter_samples = -1; // -1 selects 4 * ceil(log2(MN + 1))
    Engine engine = Engine::reduced;
};

enum class RoundKind { found, no_output, rejected_duplicate };

struct RoundOutcome {
    RoundKind kind = RoundKind::no_output;
    std::size_t i0 = 0;
    std::size_t j0 = 0;
    std::uint64_t queries = 0; // G_general applications in this call
};

struct IntersectionResult {
    std::vector<std::vector<std::uint32_t>> elements; // sorted value vectors
    QueryLedger ledger;
    std::uint64_t rounds = 0;
    std::vector<RoundOutcome> trace;
    // ggi_queries up to and including the last Found round; excludes
    // the trailing all-NoSolution confirmation rounds, matching the
    // cost the recursion analysis counts.
    std::uint64_t search_queries = 0;
    std::uint64_t found_calls = 0;
    std::uint64_t total_calls = 0;
    std::uint64_t prefilter_hits = 0;
};

inline int default_prefilter_samples(std::size_t mn) {
    return 4 * static_cast<int>(std::ceil(std::log2(static_cast<double>(mn) + 1.0)));
}

// Classical escape hatch for solution densities above 3/4: sample
// uniform pairs and return the distinct hits. With density > 3/4 each
// sample misses with probability < 1/4.
inline std::vector<std::pair<std::size_t, std::size_t>> dense_prefilter(
    const Dataset& a, const Dataset& b, Rng& rng, int samples,
    QueryLedger* ledger = nullptr) {
    if (samples < 1)
        throw std::invalid_argument("dense_prefilter: samples must be >= 1");
    std::set<std::pair<std::size_t, std::size_t>> hits;
    for (int s = 0; s < samples; ++s) {
        const std::size_t i = rng.uniform_below(a.padded_size());
        const std::size_t j = rng.uniform_below(b.padded_size());
        if (ledger) ledger->classical_checks++;
        if (match_fn(a.records[i], b.records[j]) == 1) hits.insert({i, j});
    }
    return {hits.begin(), hits.end()};
}

// Q_Intersection outer loop: repeat subroutine 1, tombstone each found
// pair, and halt only after confirm_repeats consecutive empty calls.
inline IntersectionResult q_intersection(const Dataset& a_in, const Dataset& b_in,
                                         const RunConfig& config = {}) {
    if (a_in.dimension != b_in.dimension)
        throw std::invalid_argument("q_intersection: dimension mismatch");
    Dataset a = a_in;
    Dataset b = b_in;
    Rng rng(config.master_seed);

    IntersectionResult result;
    std::set<std::vector<std::uint32_t>> elements;
    const std::size_t mn = a.padded_size() * b.padded_size();

    const int samples = config.dense_prefilter_samples >= 0 ? config.dense_prefilter_samples
                                                            : default_prefilter_samples(mn);
    if (samples > 0) {
        for (const auto& [i, j] : dense_prefilter(a, b, rng, samples, &result.ledger)) {
            elements.insert(a.records[i].values);
            tombstone_pair(a, i, b, j);
            result.prefilter_hits++;
        }
    }

    Sub1Options opts;
    opts.engine = config.engine;
    opts.cap_factor = config.cap_factor;

    auto record_found = [&](const Sub1Outcome& out) {
        const auto& value = a.records[out.i0].values;
        const bool fresh = elements.insert(value).second;
        result.trace.push_back({fresh ? RoundKind::found : RoundKind::rejected_duplicate,
                                out.i0, out.j0, out.queries});
        tombstone_pair(a, out.i0, b, out.j0);
        result.search_queries = result.ledger.ggi_queries;
    };

    for (;;) {
        // Step 2: search until subroutine 1 reports no output.
        for (;;) {
            const Sub1Outcome out = subroutine1(a, b, rng, result.ledger, opts);
            result.total_calls++;
            result.rounds++;
            if (!out.found) {
                result.trace.push_back({RoundKind::no_output, 0, 0, out.queries});
                break;
            }
            result.found_calls++;
            record_found(out);
        }
        // Step 3: confirm emptiness; any Found resumes the loop.
        bool resumed = false;
        for (int r = 0; r < config.confirm_repeats; ++r) {
            const Sub1Outcome out = subroutine1(a, b, rng, result.ledger, opts);
            result.total_calls++;
            result.rounds++;
            if (out.found) {
                result.found_calls++;
                record_found(out);
                resumed = true;
                break;
            }
            result.trace.push_back({RoundKind::no_output, 0, 0, out.queries});
        }
        if (!resumed) break;
    }

    result.elements.assign(elements.begin(), elements.end());
    return result;
}

// Union via an explicit universe: A u B = U \ ((U \ A) n (U \ B)).
inline std::vector<std::vector<std::uint32_t>> q_union(const Dataset& a, const Dataset& b,
                                                       const Dataset& universe,
                                                       const RunConfig& config = {}) {
    auto live_values = [](const Dataset& ds) {
        std::set<std::vector<std::uint32_t>> vals;
        for (const auto& r : ds.records)
            if (r.kind == RecordKind::live) vals.insert(r.values);
        return vals;
    };
    const auto ua = live_values(a);
    const auto ub = live_values(b);
    const auto uu = live_values(universe);
    for (const auto& v : ua)
        if (!uu.count(v)) throw std::invalid_argument("q_union: A not contained in universe");
    for (const auto& v : ub)
        if (!uu.count(v)) throw std::invalid_argument("q_union: B not contained in universe");

    std::vector<std::vector<std::uint32_t>> comp_a, comp_b;
    for (const auto& v : uu) {
        if (!ua.count(v)) comp_a.push_back(v);
        if (!ub.count(v)) comp_b.push_back(v);
    }
    std::set<std::vector<std::uint32_t>> excluded;
    if (!comp_a.empty() && !comp_b.empty()) {
        const Dataset da = make_dataset(comp_a, universe.dimension, universe.value_bound);
        const Dataset db = make_dataset(comp_b, universe.dimension, universe.value_bound);
        const auto inter = q_intersection(da, db, config);
        excluded.insert(inter.elements.begin(), inter.elements.end());
    }
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& v : uu)
        if (!excluded.count(v)) out.push_back(v);
    return out;
}

inline std::string intersection_report(const IntersectionResult& r) {
    std::ostringstream out;
    out << "elements " << r.elements.size() << "\n";
    for (const auto& v : r.elements) {
        for (std::size_t c = 0; c < v.size(); ++c) out << (c ? " " : "") << v[c];
        out << "\n";
    }
    out << "rounds " << r.rounds << "\n"
        << "prefilter_hits " << r.prefilter_hits << "\n"
        << "ggi_queries " << r.ledger.ggi_queries << "\n"
        << "search_queries " << r.search_queries << "\n"
        << "measurements " << r.ledger.measurements << "\n"
        << "classical_checks " << r.ledger.classical_checks << "\n"
        << "trace\n";
    for (const auto& t : r.trace) {
        switch (t.kind) {
            case RoundKind::found:
                out << "  found " << t.i0 << " " << t.j0 << " queries " << t.queries << "\n";
                break;
            case RoundKind::rejected_duplicate:
                out << "  rejected-duplicate " << t.i0 << " " << t.j0 << " queries "
                    << t.queries << "\n";
                break;
            case RoundKind::no_output:
                out << "  no-output queries " << t.queries << "\n";
                break;
        }
    }
    return out.str();
}

} // namespace qset
