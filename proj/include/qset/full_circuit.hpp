#pragma once
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qset/dataset.hpp"
#include "qset/ledger.hpp"
#include "qset/statevector.hpp"

namespace qset {

constexpr int kDefaultCircuitBitCap = 16;

// Five-register layout: |i>|j>|a_i>|b_j>|flag>. Registers 3 and 4
// hold one fixed-width big-endian field per coordinate; the field is
// one bit wider than the live value range so that pad/tombstone
// records get reserved encodings that are never live.
struct RegisterLayout {
    int n_bits = 0;      // register 1, index into A
    int m_bits = 0;      // register 2, index into B
    int value_bits = 0;  // per-coordinate field width
    int dimension = 0;
    std::uint32_t value_bound = 0;

    int record_bits() const { return value_bits * dimension; } // a_bits = b_bits
    int total_bits() const { return n_bits + m_bits + 2 * record_bits() + 1; }
};

inline RegisterLayout layout_for(const Dataset& a, const Dataset& b,
                                 int bit_cap = kDefaultCircuitBitCap) {
    if (a.dimension != b.dimension || a.value_bound != b.value_bound)
        throw std::invalid_argument("layout_for: incompatible datasets");
    RegisterLayout layout;
    layout.n_bits = std::countr_zero(a.padded_size());
    layout.m_bits = std::countr_zero(b.padded_size());
    layout.dimension = static_cast<int>(a.dimension);
    layout.value_bound = a.value_bound;
    layout.value_bits = std::bit_width(a.value_bound); // covers value_bound itself
    if (layout.total_bits() > bit_cap)
        throw std::invalid_argument("layout_for: total width exceeds circuit cap");
    return layout;
}

// Live records encode their coordinates directly; non-live records
// put the (unrepresentable) value_bound marker in the top field and
// their uid below it, so every non-live encoding fails the live test.
inline std::uint64_t encode_record(const Record& r, const RegisterLayout& layout) {
    const int w = layout.value_bits;
    const int d = layout.dimension;
    if (r.kind == RecordKind::live) {
        std::uint64_t enc = 0;
        for (int c = 0; c < d; ++c) {
            if (r.values[c] >= layout.value_bound)
                throw std::runtime_error("encode_record: value exceeds bound");
            enc = (enc << w) | r.values[c];
        }
        return enc;
    }
    const std::uint64_t marker = std::uint64_t{layout.value_bound} << ((d - 1) * w);
    const std::uint64_t enc = marker + r.uid;
    if (enc >= (std::uint64_t{1} << layout.record_bits()))
        throw std::runtime_error("encode_record: reserved encoding overflow");
    return enc;
}

inline bool is_live_encoding(std::uint64_t enc, const RegisterLayout& layout) {
    const std::uint64_t field_mask = (std::uint64_t{1} << layout.value_bits) - 1;
    for (int c = 0; c < layout.dimension; ++c) {
        if (((enc >> (c * layout.value_bits)) & field_mask) >= layout.value_bound)
            return false;
    }
    return true;
}

// Basis index layout (msb to lsb): i | j | x | y | f.
struct CircuitState {
    std::vector<Amplitude> amps;
    RegisterLayout layout;

    std::size_t index_of(std::size_t i, std::size_t j, std::uint64_t x, std::uint64_t y,
                         int f) const {
        const int a = layout.record_bits();
        return (((((((i << layout.m_bits) | j) << a) | x) << a) | y) << 1) |
               static_cast<std::size_t>(f);
    }
};

inline double norm_squared(const CircuitState& s) {
    double n = 0.0;
    for (const auto& a : s.amps) n += std::norm(a);
    return n;
}

// Probability mass on basis states whose registers 3-5 are nonzero.
inline double ancilla_mass(const CircuitState& s) {
    const std::size_t ancilla_states = std::size_t{1} << (2 * s.layout.record_bits() + 1);
    double mass = 0.0;
    for (std::size_t idx = 0; idx < s.amps.size(); ++idx)
        if ((idx & (ancilla_states - 1)) != 0) mass += std::norm(s.amps[idx]);
    return mass;
}

inline CircuitState init_superposed(const RegisterLayout& layout, const Dataset& a,
                                    const Dataset& b) {
    if (a.padded_size() != (std::size_t{1} << layout.n_bits) ||
        b.padded_size() != (std::size_t{1} << layout.m_bits))
        throw std::invalid_argument("init_superposed: layout does not fit datasets");
    for (const auto& r : a.records) encode_record(r, layout); // overflow check
    for (const auto& r : b.records) encode_record(r, layout);
    CircuitState s;
    s.layout = layout;
    s.amps.assign(std::size_t{1} << layout.total_bits(), Amplitude{0.0, 0.0});
    const std::size_t mn = std::size_t{1} << (layout.n_bits + layout.m_bits);
    const double amp = 1.0 / std::sqrt(static_cast<double>(mn));
    for (std::size_t i = 0; i < a.padded_size(); ++i)
        for (std::size_t j = 0; j < b.padded_size(); ++j)
            s.amps[s.index_of(i, j, 0, 0, 0)] = Amplitude{amp, 0.0};
    return s;
}

// U_L with XOR-write semantics: |i,j,x,y,f> -> |i,j, x^enc(a_i), y^enc(b_j), f>.
// Self-inverse, so the uncompute leg reuses this function.
inline void apply_load(CircuitState& s, const Dataset& a, const Dataset& b) {
    const int ab = s.layout.record_bits();
    const std::size_t n = std::size_t{1} << s.layout.n_bits;
    const std::size_t m = std::size_t{1} << s.layout.m_bits;
    const std::size_t slice = std::size_t{1} << (2 * ab + 1);
    std::vector<std::uint64_t> enc_a(n), enc_b(m);
    for (std::size_t i = 0; i < n; ++i) enc_a[i] = encode_record(a.records[i], s.layout);
    for (std::size_t j = 0; j < m; ++j) enc_b[j] = encode_record(b.records[j], s.layout);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t base = ((i << s.layout.m_bits) | j) * slice;
            const std::size_t mask = ((enc_a[i] << ab) | enc_b[j]) << 1;
            if (mask == 0) continue;
            // XOR by a fixed mask pairs states up; swap each pair once.
            for (std::size_t r = 0; r < slice; ++r) {
                const std::size_t t = r ^ mask;
                if (r < t) std::swap(s.amps[base + r], s.amps[base + t]);
            }
        }
    }
}

// O_c: flips the flag wherever register3 = register4 and both hold a
// live encoding. Self-inverse.
inline void apply_compute(CircuitState& s) {
    const int ab = s.layout.record_bits();
    const std::size_t mn = std::size_t{1} << (s.layout.n_bits + s.layout.m_bits);
    const std::size_t codes = std::size_t{1} << ab;
    for (std::size_t ij = 0; ij < mn; ++ij) {
        for (std::uint64_t x = 0; x < codes; ++x) {
            if (!is_live_encoding(x, s.layout)) continue;
            const std::size_t i0 = (((((ij << ab) | x) << ab) | x) << 1);
            std::swap(s.amps[i0], s.amps[i0 | 1]);
        }
    }
}

// O_f: multiplies by (-1)^flag.
inline void apply_phase_flag(CircuitState& s) {
    for (std::size_t idx = 1; idx < s.amps.size(); idx += 2) s.amps[idx] = -s.amps[idx];
}

// Reflection 2|xi><xi| - I on registers 1-2 only, identity elsewhere.
inline void apply_index_diffusion(CircuitState& s) {
    const std::size_t slice = std::size_t{1} << (2 * s.layout.record_bits() + 1);
    const std::size_t mn = std::size_t{1} << (s.layout.n_bits + s.layout.m_bits);
    for (std::size_t r = 0; r < slice; ++r) {
        Amplitude sum{0.0, 0.0};
        for (std::size_t q = 0; q < mn; ++q) sum += s.amps[q * slice + r];
        const Amplitude twice_mean = 2.0 * sum / static_cast<double>(mn);
        for (std::size_t q = 0; q < mn; ++q) {
            auto& a = s.amps[q * slice + r];
            a = twice_mean - a;
        }
    }
}

// One G_general = (2|xi><xi|-I) U_L^dag O_c^dag O_f O_c U_L; one query.
// Requires and restores exactly-zero ancillas.
inline void apply_ggi(CircuitState& s, const Dataset& a, const Dataset& b,
                      QueryLedger* ledger = nullptr) {
    if (ancilla_mass(s) > 1e-12)
        throw std::runtime_error("apply_ggi: ancillas not zero on entry");
    apply_load(s, a, b);
    apply_compute(s);
    apply_phase_flag(s);
    apply_compute(s); // O_c^dag = O_c
    apply_load(s, a, b); // U_L^dag = U_L
    apply_index_diffusion(s);
    if (ancilla_mass(s) > 1e-12)
        throw std::runtime_error("apply_ggi: ancillas entangled on exit");
    if (ledger) ledger->ggi_queries++;
}

// Projection onto registers 1-2 when the state carries no ancilla mass.
inline StateVector reduce_to_index(const CircuitState& s) {
    if (ancilla_mass(s) > 1e-9)
        throw std::runtime_error("reduce_to_index: state entangled with ancillas");
    StateVector out;
    out.n_bits = s.layout.n_bits;
    out.m_bits = s.layout.m_bits;
    const std::size_t slice = std::size_t{1} << (2 * s.layout.record_bits() + 1);
    const std::size_t mn = std::size_t{1} << (out.n_bits + out.m_bits);
    out.amps.resize(mn);
    double norm = 0.0;
    for (std::size_t q = 0; q < mn; ++q) {
        out.amps[q] = s.amps[q * slice];
        norm += std::norm(out.amps[q]);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : out.amps) a *= scale;
    return out;
}

} // namespace qset
