#pragma once
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qset/dataset.hpp"
#include "qset/full_circuit.hpp"
#include "qset/ledger.hpp"
#include "qset/rng.hpp"
#include "qset/statevector.hpp"

namespace qset {

enum class Engine { reduced, full };

// BBHT-style schedule state for one search call. gamma never exceeds
// sqrt(MN); lambda must stay strictly inside (1, 4/3).
struct BbhtState {
    double gamma = 1.0;
    double lambda_growth = 6.0 / 5.0;
    double gamma_cap = 1.0; // sqrt(MN)
    std::uint64_t total_ggi = 0;
};

// k uniform over the nonnegative integers not bigger than gamma,
// i.e. {0, ..., floor(gamma)}.
inline std::uint64_t choose_iterations(const BbhtState& st, Rng& rng) {
    if (st.gamma < 1.0)
        throw std::invalid_argument("choose_iterations: gamma must be >= 1");
    return rng.uniform_below(static_cast<std::uint64_t>(st.gamma) + 1);
}

inline void grow_gamma(BbhtState& st) {
    st.gamma = std::min(st.lambda_growth * st.gamma, st.gamma_cap);
}

struct Sub1Options {
    Engine engine = Engine::reduced;
    // Total Grover applications allowed per call; 0 means the default
    // cap_factor * ceil(sqrt(MN)).
    std::uint64_t iteration_cap = 0;
    double cap_factor = 3.0;
};

struct Sub1Outcome {
    bool found = false;
    std::size_t i0 = 0;
    std::size_t j0 = 0;
    std::uint64_t queries = 0; // G_general applications in this call
};

inline std::uint64_t default_iteration_cap(std::size_t mn, double cap_factor) {
    return static_cast<std::uint64_t>(
        cap_factor * std::ceil(std::sqrt(static_cast<double>(mn))));
}

// Subroutine 1: search for one matching pair with unknown solution
// count. Each round draws k, applies k general Grover iterations from
// a fresh uniform state, measures, and verifies the outcome against
// the classical database. NoSolution is the definite outcome once the
// per-call Grover budget is exhausted.
inline Sub1Outcome subroutine1(const Dataset& a, const Dataset& b, Rng& rng,
                               QueryLedger& ledger, const Sub1Options& opts = {}) {
    const std::size_t mn = a.padded_size() * b.padded_size();
    const std::uint64_t cap =
        opts.iteration_cap ? opts.iteration_cap : default_iteration_cap(mn, opts.cap_factor);
    const int n_bits = std::countr_zero(a.padded_size());
    const int m_bits = std::countr_zero(b.padded_size());

    const MarkedSet marked = marked_pairs(a, b); // oracle definition, not a query
    std::optional<RegisterLayout> layout;
    if (opts.engine == Engine::full) layout = layout_for(a, b);

    BbhtState st;
    st.gamma_cap = std::sqrt(static_cast<double>(mn));
    for (;;) {
        const std::uint64_t k = choose_iterations(st, rng);
        st.total_ggi += k;
        std::size_t i0, j0;
        if (opts.engine == Engine::reduced) {
            StateVector s = uniform_init(n_bits, m_bits);
            grover_power(s, marked, k, &ledger);
            std::tie(i0, j0) = measure_index(s, rng, &ledger);
        } else {
            CircuitState s = init_superposed(*layout, a, b);
            for (std::uint64_t r = 0; r < k; ++r) apply_ggi(s, a, b, &ledger);
            StateVector reduced = reduce_to_index(s);
            std::tie(i0, j0) = measure_index(reduced, rng, &ledger);
        }
        ledger.classical_checks++;
        if (match_fn(a.records[i0], b.records[j0]) == 1)
            return {true, i0, j0, st.total_ggi};
        if (st.total_ggi > cap) return {false, 0, 0, st.total_ggi};
        grow_gamma(st);
    }
}

struct BbhtOutcome {
    bool found = false;
    std::size_t index = 0;
    std::uint64_t queries = 0;
};

// Original single-register BBHT loop over a flag array, kept
// structurally identical to subroutine1 (same draw sequence) so the
// two can be differential-tested with a degenerate second register.
inline BbhtOutcome bbht_reference(const std::vector<bool>& marked_flags, Rng& rng,
                                  std::uint64_t cap = 0, double cap_factor = 3.0) {
    const std::size_t n = marked_flags.size();
    if (!std::has_single_bit(n))
        throw std::invalid_argument("bbht_reference: N must be a power of two");
    if (cap == 0) cap = default_iteration_cap(n, cap_factor);
    const int n_bits = std::countr_zero(n);

    MarkedSet marked;
    for (std::size_t i = 0; i < n; ++i)
        if (marked_flags[i]) marked.push_back({i, 0});

    BbhtState st;
    st.gamma_cap = std::sqrt(static_cast<double>(n));
    for (;;) {
        const std::uint64_t j = choose_iterations(st, rng);
        st.total_ggi += j;
        StateVector s = uniform_init(n_bits, 0);
        grover_power(s, marked, j);
        const auto [i0, zero] = measure_index(s, rng);
        if (marked_flags[i0]) return {true, i0, st.total_ggi};
        if (st.total_ggi > cap) return {false, 0, st.total_ggi};
        grow_gamma(st);
    }
}

} // namespace qset
