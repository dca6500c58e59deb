// Times the OpenMP colony kernels against the serial reference loops on the
// same seeds and checks that both produce identical results.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "dtsp/hybrid.hpp"
#include "dtsp/instance.hpp"

namespace {

double time_run(const dtsp::Instance& inst, const dtsp::HybridParams& params,
                std::uint64_t seed, dtsp::Execution exec, int reps,
                dtsp::RunResult& out) {
    double best = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        out = dtsp::run_hybrid(inst, {}, params, seed, exec);
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;
        if (rep == 0 || elapsed.count() < best) best = elapsed.count();
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial reference vs OpenMP kernels"};
    int n = 120;
    int iters = 40;
    int reps = 3;
    std::uint64_t seed = 1;
    std::uint64_t instance_seed = 42;
    app.add_option("--n", n, "City count");
    app.add_option("--iters", iters, "Iterations");
    app.add_option("--reps", reps, "Repetitions (best time wins)");
    app.add_option("--seed", seed, "Run seed");
    app.add_option("--instance-seed", instance_seed, "Instance seed");
    CLI11_PARSE(app, argc, argv);

    const dtsp::Instance inst =
        dtsp::generate_random_instance(n, 100.0, 100.0, instance_seed);
    dtsp::HybridParams params;
    params.aco.max_iters = iters;

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("n=%d ants=%d iters=%d reps=%d threads=%d\n", n, n, iters, reps, threads);

    dtsp::RunResult serial_result, parallel_result;
    const double serial_s =
        time_run(inst, params, seed, dtsp::Execution::Serial, reps, serial_result);
    const double parallel_s =
        time_run(inst, params, seed, dtsp::Execution::Parallel, reps, parallel_result);

    std::printf("serial    %8.3f s   best=%.6g\n", serial_s, serial_result.best_tour.length);
    std::printf("parallel  %8.3f s   best=%.6g\n", parallel_s,
                parallel_result.best_tour.length);
    std::printf("speedup   %8.2fx\n", serial_s / parallel_s);

    const bool identical =
        serial_result.best_tour.order == parallel_result.best_tour.order &&
        serial_result.best_length_per_iter == parallel_result.best_length_per_iter;
    std::printf("results identical: %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
