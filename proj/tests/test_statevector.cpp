#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "qset/statevector.hpp"

using namespace qset;

namespace {

MarkedSet first_k_marked(std::uint64_t t, int m_bits) {
    MarkedSet marked;
    for (std::uint64_t x = 0; x < t; ++x)
        marked.push_back({static_cast<std::size_t>(x >> m_bits),
                          static_cast<std::size_t>(x & ((1u << m_bits) - 1))});
    return marked;
}

} // namespace

TEST_CASE("uniform_init produces the flat state") {
    const StateVector s = uniform_init(1, 1);
    REQUIRE(s.size() == 4);
    for (const auto& a : s.amps) {
        CHECK(a.real() == Catch::Approx(0.5));
        CHECK(a.imag() == 0.0);
    }
    CHECK(norm_squared(s) == Catch::Approx(1.0).margin(1e-15));

    const StateVector big = uniform_init(6, 6);
    CHECK(big.amps[123].real() == Catch::Approx(1.0 / 64.0));
    CHECK(norm_squared(big) == Catch::Approx(1.0).margin(1e-12));

    CHECK_THROWS(uniform_init(20, 20)); // above the default cap
}

TEST_CASE("phase oracle flips exactly the marked amplitudes") {
    StateVector s = uniform_init(1, 1);
    apply_phase_oracle(s, {{0, 0}});
    CHECK(s.amps[0].real() == Catch::Approx(-0.5));
    CHECK(s.amps[1].real() == Catch::Approx(0.5));
    CHECK(s.amps[2].real() == Catch::Approx(0.5));
    CHECK(s.amps[3].real() == Catch::Approx(0.5));

    apply_phase_oracle(s, {{0, 0}}); // involution
    for (const auto& a : s.amps) CHECK(a.real() == Catch::Approx(0.5));

    apply_phase_oracle(s, {}); // empty marked set is the identity
    for (const auto& a : s.amps) CHECK(a.real() == Catch::Approx(0.5));

    CHECK_THROWS(apply_phase_oracle(s, {{7, 0}}));
}

TEST_CASE("diffusion fixes the uniform state and squares to identity") {
    StateVector s = uniform_init(2, 2);
    apply_diffusion(s);
    for (const auto& a : s.amps) CHECK(a.real() == Catch::Approx(0.25));

    apply_phase_oracle(s, {{1, 2}});
    const auto snapshot = s.amps;
    apply_diffusion(s);
    apply_diffusion(s);
    for (std::size_t i = 0; i < s.amps.size(); ++i)
        CHECK(std::abs(s.amps[i] - snapshot[i]) < 1e-12);
}

TEST_CASE("oracle plus diffusion reaches certainty at MN=4, t=1") {
    StateVector s = uniform_init(1, 1);
    apply_phase_oracle(s, {{0, 0}});
    // (-1/2, 1/2, 1/2, 1/2) -> mean 1/4 -> (1, 0, 0, 0)
    apply_diffusion(s);
    CHECK(s.amps[0].real() == Catch::Approx(1.0));
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(s.amps[i]) < 1e-12);
    CHECK(success_probability(s, {{0, 0}}) == Catch::Approx(1.0));
}

TEST_CASE("grover_power matches the closed form and preserves structure") {
    // MN=64, t=1, k=6: the classic near-certainty point.
    StateVector s = uniform_init(3, 3);
    const MarkedSet marked{{0, 0}};
    QueryLedger ledger;
    grover_power(s, marked, 6, &ledger);
    CHECK(ledger.ggi_queries == 6);
    CHECK(success_probability(s, marked) ==
          Catch::Approx(theoretical_success(6, 1, 64)).margin(1e-12));
    CHECK(theoretical_success(6, 1, 64) == Catch::Approx(0.9966).margin(5e-4));
}

TEST_CASE("exactness across a (t, MN) grid for all k up to 2 sqrt(MN)") {
    const std::array<std::pair<int, int>, 4> widths{{{2, 2}, {3, 2}, {3, 3}, {4, 4}}};
    for (const auto& [n, m] : widths) {
        const std::uint64_t mn = std::uint64_t{1} << (n + m);
        for (std::uint64_t t : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{4}}) {
            const MarkedSet marked = first_k_marked(t, m);
            StateVector s = uniform_init(n, m);
            const auto k_cap =
                static_cast<std::uint64_t>(2.0 * std::sqrt(static_cast<double>(mn)));
            CHECK(success_probability(s, marked) ==
                  Catch::Approx(static_cast<double>(t) / static_cast<double>(mn)));
            for (std::uint64_t k = 1; k <= k_cap; ++k) {
                grover_power(s, marked, 1);
                REQUIRE(std::abs(success_probability(s, marked) -
                                 theoretical_success(k, t, mn)) < 1e-9);
                REQUIRE(std::abs(norm_squared(s) - 1.0) < 1e-12);
                // real invariance: the dynamics never leave the real subspace
                for (const auto& a : s.amps) REQUIRE(std::abs(a.imag()) < 1e-12);
            }
        }
    }
}

TEST_CASE("theoretical_success special values") {
    CHECK(theoretical_success(0, 3, 16) == Catch::Approx(3.0 / 16.0));
    CHECK(theoretical_success(5, 8, 8) == Catch::Approx(1.0));
    CHECK(theoretical_success(1, 1, 4) == Catch::Approx(1.0));
    CHECK_THROWS(theoretical_success(1, 0, 4));
    CHECK_THROWS(theoretical_success(1, 5, 4));
}

TEST_CASE("success_probability is phase-invariant") {
    StateVector s = uniform_init(2, 3);
    const MarkedSet marked{{0, 1}, {2, 5}};
    const double before = success_probability(s, marked);
    apply_phase_oracle(s, marked);
    CHECK(success_probability(s, marked) == Catch::Approx(before));
}

TEST_CASE("measure_index on a deterministic state") {
    StateVector s = uniform_init(1, 1);
    apply_phase_oracle(s, {{0, 0}});
    apply_diffusion(s); // (1, 0, 0, 0)
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const auto [a, b] = measure_index(s, rng);
        CHECK(a == 0);
        CHECK(b == 0);
    }
}

TEST_CASE("measure_index sampling frequencies on the uniform 4-state") {
    const StateVector s = uniform_init(1, 1);
    Rng rng(20240817);
    std::array<int, 4> counts{};
    const int samples = 100000;
    QueryLedger ledger;
    for (int i = 0; i < samples; ++i) {
        const auto [a, b] = measure_index(s, rng, &ledger);
        counts[(a << 1) | b]++;
    }
    CHECK(ledger.measurements == samples);
    for (const int c : counts)
        CHECK(static_cast<double>(c) / samples == Catch::Approx(0.25).margin(0.01));
}

TEST_CASE("same seed gives the same sample sequence") {
    const StateVector s = uniform_init(2, 2);
    Rng r1(99), r2(99);
    for (int i = 0; i < 100; ++i) CHECK(measure_index(s, r1) == measure_index(s, r2));
}

TEST_CASE("measure_index rejects unnormalized states") {
    StateVector s = uniform_init(1, 1);
    s.amps[0] *= 2.0;
    Rng rng(1);
    CHECK_THROWS(measure_index(s, rng));
}
