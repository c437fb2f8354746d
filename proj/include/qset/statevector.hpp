#pragma once
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qset/dataset.hpp"
#include "qset/ledger.hpp"
#include "qset/rng.hpp"

namespace qset {

using Amplitude = std::complex<double>;

constexpr int kDefaultIndexBitCap = 26;

// Reduced model: amplitudes over the joint index space (i, j) with
// basis index (i << m_bits) | j. Registers 3-5 of the full circuit
// are projected away; see full_circuit.hpp for the bit-faithful one.
struct StateVector {
    std::vector<Amplitude> amps;
    int n_bits = 0;
    int m_bits = 0;

    std::size_t size() const { return amps.size(); }
    std::size_t index_of(std::size_t i, std::size_t j) const {
        return (i << m_bits) | j;
    }
    std::pair<std::size_t, std::size_t> decode(std::size_t idx) const {
        return {idx >> m_bits, idx & ((std::size_t{1} << m_bits) - 1)};
    }
};

inline StateVector uniform_init(int n_bits, int m_bits,
                                int bit_cap = kDefaultIndexBitCap) {
    if (n_bits < 0 || m_bits < 0 || n_bits + m_bits > bit_cap)
        throw std::invalid_argument("uniform_init: index width exceeds simulator cap");
    StateVector s;
    s.n_bits = n_bits;
    s.m_bits = m_bits;
    const std::size_t len = std::size_t{1} << (n_bits + m_bits);
    s.amps.assign(len, Amplitude{1.0 / std::sqrt(static_cast<double>(len)), 0.0});
    return s;
}

inline void apply_phase_oracle(StateVector& s, const MarkedSet& marked) {
    const std::size_t n = std::size_t{1} << s.n_bits;
    const std::size_t m = std::size_t{1} << s.m_bits;
    for (const auto& p : marked) {
        if (p.i >= n || p.j >= m)
            throw std::out_of_range("apply_phase_oracle: marked pair out of range");
        s.amps[s.index_of(p.i, p.j)] = -s.amps[s.index_of(p.i, p.j)];
    }
}

inline void apply_diffusion(StateVector& s) {
    Amplitude sum{0.0, 0.0};
    for (const auto& a : s.amps) sum += a;
    const Amplitude twice_mean = 2.0 * sum / static_cast<double>(s.amps.size());
    for (auto& a : s.amps) a = twice_mean - a;
}

// k rounds of (diffusion . phase_oracle); each round is one query.
inline void grover_power(StateVector& s, const MarkedSet& marked, std::uint64_t k,
                         QueryLedger* ledger = nullptr) {
    for (std::uint64_t r = 0; r < k; ++r) {
        apply_phase_oracle(s, marked);
        apply_diffusion(s);
    }
    if (ledger) ledger->ggi_queries += k;
}

inline double success_probability(const StateVector& s, const MarkedSet& marked) {
    double p = 0.0;
    for (const auto& pr : marked) p += std::norm(s.amps[s.index_of(pr.i, pr.j)]);
    return p;
}

// Closed form sin^2((2k+1) asin(sqrt(t/mn))); independent oracle for
// the simulated dynamics.
inline double theoretical_success(std::uint64_t k, std::uint64_t t, std::uint64_t mn) {
    if (t == 0)
        throw std::invalid_argument("theoretical_success: undefined for t = 0");
    if (t > mn)
        throw std::invalid_argument("theoretical_success: t exceeds mn");
    const double theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(mn)));
    const double sv = std::sin(static_cast<double>(2 * k + 1) * theta);
    return sv * sv;
}

inline double norm_squared(const StateVector& s) {
    double n = 0.0;
    for (const auto& a : s.amps) n += std::norm(a);
    return n;
}

// Samples (i, j) from |amp|^2. Non-collapsing: the driver always
// restarts from the uniform state, so the post-measurement state is
// never needed. Consumes exactly one uniform draw.
inline std::pair<std::size_t, std::size_t> measure_index(const StateVector& s, Rng& rng,
                                                         QueryLedger* ledger = nullptr) {
    if (std::abs(norm_squared(s) - 1.0) > 1e-9)
        throw std::runtime_error("measure_index: state is not normalized");
    const double u = rng.uniform_real();
    double acc = 0.0;
    std::size_t hit = s.amps.size() - 1;
    for (std::size_t idx = 0; idx < s.amps.size(); ++idx) {
        acc += std::norm(s.amps[idx]);
        if (u < acc) {
            hit = idx;
            break;
        }
    }
    if (ledger) ledger->measurements++;
    return s.decode(hit);
}

} // namespace qset
