#pragma once
#include <cstdint>

namespace qset {

// Query accounting for the complexity experiments. One G_general
// application counts as one query regardless of engine; measurements
// and classical record comparisons are tracked separately.
struct QueryLedger {
    std::uint64_t ggi_queries = 0;
    std::uint64_t measurements = 0;
    std::uint64_t classical_checks = 0;

    QueryLedger& operator+=(const QueryLedger& o) {
        ggi_queries += o.ggi_queries;
        measurements += o.measurements;
        classical_checks += o.classical_checks;
        return *this;
    }
};

} // namespace qset
