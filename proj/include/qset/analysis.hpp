#pragma once
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qset/dataset.hpp"
#include "qset/qintersection.hpp"
#include "qset/rng.hpp"

namespace qset {

// Parameters of the cost recursion
//   I_t = c sqrt(MN/t) + (1/2+eps) I_{t-1} + (1/2-eps) I_t,  I_1 = c1 sqrt(MN)
// which rearranges to I_t = I_{t-1} + (2c/(1+2eps)) sqrt(MN/t).
struct RecursionParams {
    double c = 1.0;
    double c1 = 1.0;
    double epsilon = 0.0;
    std::uint64_t mn = 0;
    std::uint64_t t_max = 1;
};

inline std::vector<double> recursion_sequence(const RecursionParams& p) {
    if (p.epsilon < 0.0 || p.epsilon > 0.5)
        throw std::invalid_argument("recursion_sequence: epsilon outside [0, 1/2]");
    if (p.t_max < 1 || p.c <= 0.0 || p.c1 <= 0.0)
        throw std::invalid_argument("recursion_sequence: invalid parameters");
    const double root_mn = std::sqrt(static_cast<double>(p.mn));
    std::vector<double> seq;
    seq.reserve(p.t_max);
    seq.push_back(p.c1 * root_mn);
    const double factor = 2.0 * p.c / (1.0 + 2.0 * p.epsilon);
    for (std::uint64_t t = 2; t <= p.t_max; ++t)
        seq.push_back(seq.back() + factor * root_mn / std::sqrt(static_cast<double>(t)));
    return seq;
}

// Integral bound on the summed recursion increments:
//   I_|C| <= 4c sqrt(|C| MN) + (c1 - 4c) sqrt(MN).
inline double closed_form_bound(const RecursionParams& p, std::uint64_t c_size) {
    if (c_size < 1) throw std::invalid_argument("closed_form_bound: c_size must be >= 1");
    const double root_mn = std::sqrt(static_cast<double>(p.mn));
    return 4.0 * p.c * std::sqrt(static_cast<double>(c_size)) * root_mn +
           (p.c1 - 4.0 * p.c) * root_mn;
}

struct FitResult {
    double slope = 0.0;
    double std_error = 0.0;
    double intercept = 0.0;
};

// OLS slope of log y on log x.
inline FitResult fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_exponent: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        if (x <= 0.0 || y <= 0.0)
            throw std::invalid_argument("fit_exponent: non-positive datum");
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    FitResult fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0;
    for (const auto& [x, y] : points) {
        const double r = std::log(y) - (fit.intercept + fit.slope * std::log(x));
        ss_res += r * r;
    }
    if (points.size() > 2)
        fit.std_error = std::sqrt(ss_res / (n - 2.0) / (sxx - sx * sx / n));
    return fit;
}

struct ScalingPoint {
    std::uint64_t mn = 0;
    std::uint64_t c_size = 0;
    std::uint64_t trials = 0;
    double mean_queries = 0.0;          // total ledger G_general queries
    double median_queries = 0.0;
    double mean_search_queries = 0.0;   // up to the last Found (the I_|C| estimator)
    double median_search_queries = 0.0;
    double p_success_per_call = 0.0;
    std::uint64_t seed = 0;
};

// Random instance with exactly c_size common values between the two
// sets; records are drawn uniformly without replacement.
inline std::pair<Dataset, Dataset> planted_instance(std::size_t size_a, std::size_t size_b,
                                                    std::size_t c_size, std::size_t dimension,
                                                    Rng& rng,
                                                    std::uint32_t value_bound = kDefaultValueBound) {
    if (c_size > size_a || c_size > size_b)
        throw std::invalid_argument("planted_instance: c_size exceeds set size");
    std::set<std::vector<std::uint32_t>> pool;
    const std::size_t needed = size_a + size_b - c_size;
    while (pool.size() < needed) {
        std::vector<std::uint32_t> v(dimension);
        for (auto& x : v) x = static_cast<std::uint32_t>(rng.uniform_below(value_bound));
        pool.insert(std::move(v));
    }
    std::vector<std::vector<std::uint32_t>> all(pool.begin(), pool.end());
    // Fisher-Yates so the common block is not value-ordered.
    for (std::size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[rng.uniform_below(i)]);
    std::vector<std::vector<std::uint32_t>> va(all.begin(), all.begin() + size_a);
    std::vector<std::vector<std::uint32_t>> vb(all.begin(), all.begin() + c_size);
    vb.insert(vb.end(), all.begin() + size_a, all.begin() + needed);
    return {make_dataset(std::move(va), dimension, value_bound),
            make_dataset(std::move(vb), dimension, value_bound)};
}

// Splits mn into register widths as evenly as possible.
inline std::pair<std::size_t, std::size_t> split_mn(std::uint64_t mn) {
    if (!std::has_single_bit(mn)) throw std::invalid_argument("split_mn: mn not a power of two");
    const int bits = std::countr_zero(mn);
    return {std::size_t{1} << ((bits + 1) / 2), std::size_t{1} << (bits / 2)};
}

struct ScalingOptions {
    std::size_t dimension = 4;
    std::uint32_t value_bound = kDefaultValueBound;
    Engine engine = Engine::reduced;
    unsigned threads = 1;
};

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Runs `trials` planted instances per grid point and aggregates ledger
// statistics. Trial t of point p uses the rng stream derived from
// (master_seed, p, t), so results are reproducible and independent of
// the thread count.
inline std::vector<ScalingPoint> run_scaling_experiment(
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& grid, std::uint64_t trials,
    std::uint64_t master_seed, const ScalingOptions& opts = {}) {
    std::vector<ScalingPoint> points;
    const Rng master(master_seed);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const auto [mn, c_size] = grid[p];
        if (static_cast<double>(c_size) > 0.75 * static_cast<double>(mn))
            throw std::invalid_argument("run_scaling_experiment: c_size exceeds 3/4 mn");
        const auto [size_a, size_b] = split_mn(mn);
        std::vector<double> totals(trials), searches(trials);
        std::vector<std::uint64_t> founds(trials), calls(trials);

        auto run_trial = [&](std::uint64_t t) {
            Rng stream = master.derive((std::uint64_t{p} << 32) | t);
            auto [a, b] = planted_instance(size_a, size_b, c_size, opts.dimension, stream,
                                           opts.value_bound);
            RunConfig cfg;
            cfg.master_seed = stream.next_u64();
            cfg.engine = opts.engine;
            const IntersectionResult r = q_intersection(a, b, cfg);
            totals[t] = static_cast<double>(r.ledger.ggi_queries);
            searches[t] = static_cast<double>(r.search_queries);
            founds[t] = r.found_calls;
            calls[t] = r.total_calls;
        };
        if (opts.threads <= 1) {
            for (std::uint64_t t = 0; t < trials; ++t) run_trial(t);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < opts.threads; ++w)
                pool.emplace_back([&, w] {
                    for (std::uint64_t t = w; t < trials; t += opts.threads) run_trial(t);
                });
            for (auto& th : pool) th.join();
        }

        ScalingPoint sp;
        sp.mn = mn;
        sp.c_size = c_size;
        sp.trials = trials;
        sp.seed = master_seed;
        double sum_t = 0, sum_s = 0;
        std::uint64_t sum_f = 0, sum_c = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            sum_t += totals[t];
            sum_s += searches[t];
            sum_f += founds[t];
            sum_c += calls[t];
        }
        sp.mean_queries = sum_t / static_cast<double>(trials);
        sp.mean_search_queries = sum_s / static_cast<double>(trials);
        sp.median_queries = median_of(totals);
        sp.median_search_queries = median_of(searches);
        sp.p_success_per_call =
            sum_c ? static_cast<double>(sum_f) / static_cast<double>(sum_c) : 0.0;
        points.push_back(sp);
    }
    return points;
}

inline std::string scaling_csv(const std::vector<ScalingPoint>& points) {
    std::ostringstream out;
    out << "mn,c_size,trials,mean_queries,median_queries,p_success_per_call,seed,"
           "mean_search_queries,median_search_queries\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& p : points)
        out << p.mn << ',' << p.c_size << ',' << p.trials << ',' << p.mean_queries << ','
            << p.median_queries << ',' << p.p_success_per_call << ',' << p.seed << ','
            << p.mean_search_queries << ',' << p.median_search_queries << '\n';
    return out.str();
}

inline std::string scaling_summary(const std::vector<ScalingPoint>& points) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << std::setw(8) << "mn" << std::setw(8) << "|C|" << std::setw(8) << "trials"
        << std::setw(12) << "mean_q" << std::setw(12) << "median_q" << std::setw(12)
        << "mean_srch" << std::setw(10) << "p_call" << "\n";
    for (const auto& p : points)
        out << std::setw(8) << p.mn << std::setw(8) << p.c_size << std::setw(8) << p.trials
            << std::setw(12) << p.mean_queries << std::setw(12) << p.median_queries
            << std::setw(12) << p.mean_search_queries << std::setw(10) << p.p_success_per_call
            << "\n";
    return out.str();
}

} // namespace qset
