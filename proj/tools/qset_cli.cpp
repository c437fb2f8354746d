// Command-line driver: set intersection/union runs, Grover success
// curves, subroutine-1 Monte Carlo, scaling experiments, and the
// reduced-vs-full-circuit equivalence check. Every command prints the
// resolved seed so any run can be replayed exactly.
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qset/amplification.hpp"
#include "qset/analysis.hpp"
#include "qset/dataset.hpp"
#include "qset/full_circuit.hpp"
#include "qset/qintersection.hpp"
#include "qset/statevector.hpp"

namespace {

qset::Dataset read_dataset(const std::string& path, std::size_t dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return qset::load_dataset(buf.str(), dim);
}

std::uint64_t resolve_seed(bool seed_set, std::uint64_t seed) {
    if (seed_set) return seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) | rd();
}

qset::Engine parse_engine(const std::string& name) {
    if (name == "reduced") return qset::Engine::reduced;
    if (name == "full") return qset::Engine::full;
    throw CLI::ValidationError("--engine must be 'reduced' or 'full'");
}

void print_elements(const std::vector<std::vector<std::uint32_t>>& elements) {
    std::printf("elements %zu\n", elements.size());
    for (const auto& v : elements) {
        for (std::size_t c = 0; c < v.size(); ++c)
            std::printf("%s%" PRIu32, c ? " " : "", v[c]);
        std::printf("\n");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid quantum-classical set operation simulator"};
    app.require_subcommand(1);

    std::string set_a, set_b, universe_path, out_path, engine_name = "reduced";
    std::size_t dim = 4;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t trials = 1000;
    double cap_factor = 3.0;
    int confirm = 2;
    unsigned threads = 1;
    std::uint64_t mn = 64, t_count = 1, k_max = 0, instances = 20;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "master seed (default: generated and printed)")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--threads", threads, "worker threads");
    };

    auto* cmd_intersect = app.add_subcommand("intersect", "compute A n B");
    cmd_intersect->add_option("--set-a", set_a, "record file for A")->required();
    cmd_intersect->add_option("--set-b", set_b, "record file for B")->required();
    cmd_intersect->add_option("--dim", dim, "record dimension")->required();
    cmd_intersect->add_option("--engine", engine_name, "reduced|full");
    cmd_intersect->add_option("--cap-factor", cap_factor, "per-call Grover budget factor");
    cmd_intersect->add_option("--confirm", confirm, "emptiness confirmations");
    add_common(cmd_intersect);

    auto* cmd_union = app.add_subcommand("union", "compute A u B within a universe");
    cmd_union->add_option("--set-a", set_a, "record file for A")->required();
    cmd_union->add_option("--set-b", set_b, "record file for B")->required();
    cmd_union->add_option("--universe", universe_path, "record file for the universe")->required();
    cmd_union->add_option("--dim", dim, "record dimension")->required();
    cmd_union->add_option("--engine", engine_name, "reduced|full");
    cmd_union->add_option("--cap-factor", cap_factor, "per-call Grover budget factor");
    cmd_union->add_option("--confirm", confirm, "emptiness confirmations");
    add_common(cmd_union);

    auto* cmd_curve = app.add_subcommand("grover-curve", "exact vs closed-form success curve");
    cmd_curve->add_option("--mn", mn, "joint index space size (power of two)")->required();
    cmd_curve->add_option("--t", t_count, "number of marked pairs")->required();
    cmd_curve->add_option("--k-max", k_max, "max iteration count (default 2 sqrt(mn))");
    add_common(cmd_curve);

    auto* cmd_bbht = app.add_subcommand("bbht-stats", "Monte Carlo of subroutine 1");
    cmd_bbht->add_option("--mn", mn, "joint index space size (power of two)")->required();
    cmd_bbht->add_option("--t", t_count, "planted intersection size")->required();
    cmd_bbht->add_option("--trials", trials, "number of trials");
    cmd_bbht->add_option("--cap-factor", cap_factor, "per-call Grover budget factor");
    add_common(cmd_bbht);

    auto* cmd_scaling = app.add_subcommand("scaling", "query-count scaling grid to CSV");
    cmd_scaling->add_option("--trials", trials, "trials per grid point");
    cmd_scaling->add_option("--out", out_path, "CSV output path");
    cmd_scaling->add_option("--engine", engine_name, "reduced|full");
    add_common(cmd_scaling);

    auto* cmd_verify = app.add_subcommand("verify-equivalence",
                                          "reduced model vs five-register circuit");
    cmd_verify->add_option("--instances", instances, "random instances to check");
    add_common(cmd_verify);

    CLI11_PARSE(app, argc, argv);

    try {
        seed = resolve_seed(seed_set, seed);
        std::printf("seed %" PRIu64 "\n", seed);
        const qset::Engine engine = parse_engine(engine_name);

        if (cmd_intersect->parsed()) {
            const auto a = read_dataset(set_a, dim);
            const auto b = read_dataset(set_b, dim);
            qset::RunConfig cfg;
            cfg.master_seed = seed;
            cfg.engine = engine;
            cfg.cap_factor = cap_factor;
            cfg.confirm_repeats = confirm;
            const auto result = qset::q_intersection(a, b, cfg);
            std::fputs(qset::intersection_report(result).c_str(), stdout);
        } else if (cmd_union->parsed()) {
            const auto a = read_dataset(set_a, dim);
            const auto b = read_dataset(set_b, dim);
            const auto uni = read_dataset(universe_path, dim);
            qset::RunConfig cfg;
            cfg.master_seed = seed;
            cfg.engine = engine;
            cfg.cap_factor = cap_factor;
            cfg.confirm_repeats = confirm;
            print_elements(qset::q_union(a, b, uni, cfg));
        } else if (cmd_curve->parsed()) {
            const auto [size_a, size_b] = qset::split_mn(mn);
            if (t_count < 1 || t_count > mn)
                throw std::runtime_error("grover-curve: need 1 <= t <= mn");
            qset::MarkedSet marked;
            for (std::uint64_t x = 0; x < t_count; ++x)
                marked.push_back({x / size_b, x % size_b});
            if (k_max == 0)
                k_max = static_cast<std::uint64_t>(2.0 * std::sqrt(static_cast<double>(mn)));
            const int n_bits = std::countr_zero(size_a);
            const int m_bits = std::countr_zero(size_b);
            std::printf("%6s %14s %14s %12s\n", "k", "exact", "theory", "delta");
            qset::StateVector s = qset::uniform_init(n_bits, m_bits);
            for (std::uint64_t k = 0; k <= k_max; ++k) {
                if (k > 0) qset::grover_power(s, marked, 1);
                const double exact = qset::success_probability(s, marked);
                const double theory = qset::theoretical_success(k, t_count, mn);
                std::printf("%6" PRIu64 " %14.10f %14.10f %12.3e\n", k, exact, theory,
                            std::abs(exact - theory));
            }
        } else if (cmd_bbht->parsed()) {
            const auto [size_a, size_b] = qset::split_mn(mn);
            qset::Rng master(seed);
            std::uint64_t found = 0, total_queries = 0;
            for (std::uint64_t i = 0; i < trials; ++i) {
                qset::Rng stream = master.derive(i);
                auto [a, b] = qset::planted_instance(size_a, size_b, t_count, dim, stream);
                qset::QueryLedger ledger;
                qset::Sub1Options opts;
                opts.cap_factor = cap_factor;
                const auto out = qset::subroutine1(a, b, stream, ledger, opts);
                found += out.found ? 1 : 0;
                total_queries += out.queries;
            }
            std::printf("trials %" PRIu64 "\n", trials);
            std::printf("success_rate %.4f\n",
                        static_cast<double>(found) / static_cast<double>(trials));
            std::printf("mean_queries %.2f\n",
                        static_cast<double>(total_queries) / static_cast<double>(trials));
            std::printf("budget %" PRIu64 "\n",
                        qset::default_iteration_cap(mn, cap_factor));
        } else if (cmd_scaling->parsed()) {
            std::vector<std::pair<std::uint64_t, std::uint64_t>> grid;
            for (std::uint64_t m2 : {256, 1024, 4096, 16384}) grid.push_back({m2, 1});
            for (std::uint64_t c : {4, 8, 16, 32, 64}) grid.push_back({4096, c});
            qset::ScalingOptions opts;
            opts.engine = engine;
            opts.threads = threads;
            const auto points = qset::run_scaling_experiment(grid, trials, seed, opts);
            std::fputs(qset::scaling_summary(points).c_str(), stdout);

            std::vector<std::pair<double, double>> vs_mn, vs_c;
            for (const auto& p : points) {
                if (p.c_size == 1)
                    vs_mn.push_back({static_cast<double>(p.mn), p.mean_queries});
                else
                    vs_c.push_back({static_cast<double>(p.c_size), p.mean_search_queries});
            }
            const auto fit_mn = qset::fit_exponent(vs_mn);
            const auto fit_c = qset::fit_exponent(vs_c);
            std::printf("slope_vs_mn %.4f (stderr %.4f)\n", fit_mn.slope, fit_mn.std_error);
            std::printf("slope_vs_c %.4f (stderr %.4f)\n", fit_c.slope, fit_c.std_error);
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                if (!out) throw std::runtime_error("cannot write: " + out_path);
                out << qset::scaling_csv(points);
                std::printf("csv %s\n", out_path.c_str());
            }
        } else if (cmd_verify->parsed()) {
            qset::Rng master(seed);
            double worst_delta = 0.0, worst_ancilla = 0.0;
            for (std::uint64_t inst = 0; inst < instances; ++inst) {
                qset::Rng stream = master.derive(inst);
                const std::size_t size_a = std::size_t{1} << stream.uniform_below(3);
                const std::size_t size_b = std::size_t{1} << stream.uniform_below(3);
                const std::size_t c =
                    stream.uniform_below(std::min(size_a, size_b) + 1);
                auto [a, b] = qset::planted_instance(size_a, size_b, c, 1, stream, 16);
                const auto layout = qset::layout_for(a, b);
                const auto marked = qset::marked_pairs(a, b);
                const std::size_t mn = a.padded_size() * b.padded_size();
                const auto k_cap = static_cast<std::uint64_t>(
                    2.0 * std::sqrt(static_cast<double>(mn)));

                qset::CircuitState cs = qset::init_superposed(layout, a, b);
                qset::StateVector sv = qset::uniform_init(layout.n_bits, layout.m_bits);
                for (std::uint64_t k = 1; k <= k_cap; ++k) {
                    qset::apply_ggi(cs, a, b);
                    worst_ancilla = std::max(worst_ancilla, qset::ancilla_mass(cs));
                    qset::grover_power(sv, marked, 1);
                    const auto reduced = qset::reduce_to_index(cs);
                    for (std::size_t idx = 0; idx < sv.amps.size(); ++idx)
                        worst_delta = std::max(worst_delta,
                                               std::abs(reduced.amps[idx] - sv.amps[idx]));
                }
            }
            std::printf("instances %" PRIu64 "\n", instances);
            std::printf("max_amplitude_delta %.3e\n", worst_delta);
            std::printf("max_ancilla_mass %.3e\n", worst_ancilla);
            if (worst_delta > 1e-10) {
                std::printf("verdict FAIL\n");
                return 1;
            }
            std::printf("verdict PASS\n");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
