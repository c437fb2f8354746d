#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qset/analysis.hpp"
#include "qset/full_circuit.hpp"
#include "qset/statevector.hpp"

using namespace qset;

namespace {

// d=1 records over a small value range keep the five-register state
// well under the 16-bit cap.
Dataset small_a() { return make_dataset({{1}, {2}, {3}, {5}}, 1, 8); }
Dataset small_b() { return make_dataset({{3}, {7}, {1}, {6}}, 1, 8); }

} // namespace

TEST_CASE("layout_for sizes the registers and enforces the cap") {
    const auto layout = layout_for(small_a(), small_b());
    CHECK(layout.n_bits == 2);
    CHECK(layout.m_bits == 2);
    CHECK(layout.record_bits() == 4); // bit_width(8) = 4
    CHECK(layout.total_bits() == 13);

    const Dataset wide = make_dataset({{1, 1, 1, 1}}, 4); // 64-bit records
    CHECK_THROWS(layout_for(wide, wide));
}

TEST_CASE("record encodings: live direct, non-live reserved") {
    const auto layout = layout_for(small_a(), small_b());
    CHECK(encode_record({{5}, RecordKind::live, 0}, layout) == 5);
    CHECK(is_live_encoding(5, layout));

    const auto pad = encode_record({{0}, RecordKind::pad, 0}, layout);
    const auto tomb = encode_record({{0}, RecordKind::tombstone, 3}, layout);
    CHECK_FALSE(is_live_encoding(pad, layout));
    CHECK_FALSE(is_live_encoding(tomb, layout));
    CHECK(pad != tomb);

    CHECK_THROWS(encode_record({{9}, RecordKind::live, 0}, layout));
    CHECK_THROWS(encode_record({{0}, RecordKind::pad, 99}, layout));
}

TEST_CASE("init_superposed puts uniform mass on zero-ancilla states") {
    const Dataset a = small_a(), b = small_b();
    const auto layout = layout_for(a, b);
    const CircuitState s = init_superposed(layout, a, b);
    CHECK(norm_squared(s) == Catch::Approx(1.0).margin(1e-12));
    CHECK(ancilla_mass(s) == 0.0);
    CHECK(s.amps[s.index_of(1, 2, 0, 0, 0)].real() == Catch::Approx(0.25));
    CHECK(std::abs(s.amps[s.index_of(1, 2, 3, 0, 0)]) == 0.0);
}

TEST_CASE("apply_load realizes the basis map and is self-inverse") {
    const Dataset a = small_a(), b = small_b();
    const auto layout = layout_for(a, b);
    CircuitState s = init_superposed(layout, a, b);
    // pick out |0,1,0,0,0> and check it lands on |0,1,enc(a0),enc(b1),0>
    apply_load(s, a, b);
    CHECK(s.amps[s.index_of(0, 1, 1, 7, 0)].real() == Catch::Approx(0.25));
    CHECK(std::abs(s.amps[s.index_of(0, 1, 0, 0, 0)]) == 0.0);
    // every index pair is entangled with its record values
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const auto x = encode_record(a.records[i], layout);
            const auto y = encode_record(b.records[j], layout);
            CHECK(s.amps[s.index_of(i, j, x, y, 0)].real() == Catch::Approx(0.25));
        }
    apply_load(s, a, b);
    CHECK(ancilla_mass(s) == 0.0);
    CHECK(s.amps[s.index_of(0, 1, 0, 0, 0)].real() == Catch::Approx(0.25));
}

TEST_CASE("apply_compute flips the flag only on live equal registers") {
    const Dataset a = small_a(), b = small_b();
    const auto layout = layout_for(a, b);
    CircuitState s = init_superposed(layout, a, b);
    apply_load(s, a, b);
    apply_compute(s);
    // a2 = b0 = 3 is one of the matches
    CHECK(s.amps[s.index_of(2, 0, 3, 3, 1)].real() == Catch::Approx(0.25));
    CHECK(std::abs(s.amps[s.index_of(2, 0, 3, 3, 0)]) == 0.0);
    // unequal registers keep flag 0
    CHECK(s.amps[s.index_of(0, 1, 1, 7, 0)].real() == Catch::Approx(0.25));
    apply_compute(s);
    CHECK(std::abs(s.amps[s.index_of(2, 0, 3, 3, 1)]) == 0.0);
}

TEST_CASE("equal pad encodings never set the flag") {
    // Identical uid pads in A and B load the same reserved encoding;
    // the liveness gate must still keep f_c = 0.
    const Dataset a = make_dataset({{1}, {2}, {3}}, 1, 8); // one pad, uid 0
    const Dataset b = make_dataset({{4}, {5}, {6}}, 1, 8); // one pad, uid 0
    const auto layout = layout_for(a, b);
    CircuitState s = init_superposed(layout, a, b);
    apply_load(s, a, b);
    apply_compute(s);
    const auto pad_enc = encode_record(a.records[3], layout);
    CHECK(pad_enc == encode_record(b.records[3], layout));
    CHECK(s.amps[s.index_of(3, 3, pad_enc, pad_enc, 0)].real() == Catch::Approx(0.25));
    CHECK(std::abs(s.amps[s.index_of(3, 3, pad_enc, pad_enc, 1)]) == 0.0);
}

TEST_CASE("apply_phase_flag negates exactly the flag-1 components") {
    const Dataset a = small_a(), b = small_b();
    const auto layout = layout_for(a, b);
    CircuitState s = init_superposed(layout, a, b);
    apply_load(s, a, b);
    apply_compute(s);
    apply_phase_flag(s);
    CHECK(s.amps[s.index_of(2, 0, 3, 3, 1)].real() == Catch::Approx(-0.25));
    CHECK(s.amps[s.index_of(0, 1, 1, 7, 0)].real() == Catch::Approx(0.25));
    apply_phase_flag(s);
    CHECK(s.amps[s.index_of(2, 0, 3, 3, 1)].real() == Catch::Approx(0.25));
}

TEST_CASE("apply_ggi is unitary and disentangles the ancillas") {
    const Dataset a = small_a(), b = small_b();
    const auto layout = layout_for(a, b);
    CircuitState s = init_superposed(layout, a, b);
    QueryLedger ledger;
    for (int k = 0; k < 8; ++k) {
        apply_ggi(s, a, b, &ledger);
        REQUIRE(std::abs(norm_squared(s) - 1.0) < 1e-12);
        REQUIRE(ancilla_mass(s) < 1e-12);
    }
    CHECK(ledger.ggi_queries == 8);
}

TEST_CASE("apply_ggi rejects states with dirty ancillas") {
    const Dataset a = small_a(), b = small_b();
    const auto layout = layout_for(a, b);
    CircuitState s = init_superposed(layout, a, b);
    apply_load(s, a, b); // mid-circuit: registers 3-4 loaded
    CHECK_THROWS(apply_ggi(s, a, b));
    CHECK_THROWS(reduce_to_index(s));
}

TEST_CASE("reduce_to_index of the initial state is the uniform state") {
    const Dataset a = small_a(), b = small_b();
    const auto layout = layout_for(a, b);
    const StateVector sv = reduce_to_index(init_superposed(layout, a, b));
    const StateVector ref = uniform_init(layout.n_bits, layout.m_bits);
    for (std::size_t i = 0; i < sv.amps.size(); ++i)
        CHECK(std::abs(sv.amps[i] - ref.amps[i]) < 1e-14);
}

TEST_CASE("full circuit matches the reduced model on random instances") {
    Rng master(314159);
    for (int inst = 0; inst < 12; ++inst) {
        Rng stream = master.derive(inst);
        const std::size_t size_a = std::size_t{1} << stream.uniform_below(3);
        const std::size_t size_b = std::size_t{1} << stream.uniform_below(3);
        const std::size_t c = stream.uniform_below(std::min(size_a, size_b) + 1);
        auto [a, b] = planted_instance(size_a, size_b, c, 1, stream, 16);
        const auto layout = layout_for(a, b);
        const auto marked = marked_pairs(a, b);
        const std::size_t mn = a.padded_size() * b.padded_size();
        const auto k_cap = static_cast<std::uint64_t>(2.0 * std::sqrt(double(mn)));

        CircuitState cs = init_superposed(layout, a, b);
        StateVector sv = uniform_init(layout.n_bits, layout.m_bits);
        for (std::uint64_t k = 1; k <= k_cap; ++k) {
            apply_ggi(cs, a, b);
            grover_power(sv, marked, 1);
            const StateVector red = reduce_to_index(cs);
            for (std::size_t i = 0; i < sv.amps.size(); ++i)
                REQUIRE(std::abs(red.amps[i] - sv.amps[i]) < 1e-10);
        }
    }
}

TEST_CASE("equivalence survives tombstone updates") {
    Dataset a = make_dataset({{1}, {2}, {3}, {4}}, 1, 8);
    Dataset b = make_dataset({{3}, {4}, {5}, {6}}, 1, 8);
    tombstone_pair(a, 2, b, 0);
    const auto layout = layout_for(a, b);
    const auto marked = marked_pairs(a, b);
    REQUIRE(marked.size() == 1);

    CircuitState cs = init_superposed(layout, a, b);
    StateVector sv = uniform_init(layout.n_bits, layout.m_bits);
    for (int k = 0; k < 6; ++k) {
        apply_ggi(cs, a, b);
        grover_power(sv, marked, 1);
    }
    const StateVector red = reduce_to_index(cs);
    for (std::size_t i = 0; i < sv.amps.size(); ++i)
        REQUIRE(std::abs(red.amps[i] - sv.amps[i]) < 1e-10);
}
