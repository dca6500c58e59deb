#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dtsp/execution.hpp"
#include "dtsp/hybrid.hpp"

namespace dtsp {

enum class SolverKind {
    Aco,
    Hybrid,
};

const char* solver_name(SolverKind kind);

struct RandomInstanceSpec {
    int n = 30;
    double width = 100.0;
    double height = 100.0;
    std::uint64_t seed = 1;
};

struct ExperimentConfig {
    std::string instance_path; // empty -> generate from `random`
    RandomInstanceSpec random;
    std::string schedule_path; // empty -> static instance
    SolverKind solver = SolverKind::Hybrid;
    HybridParams params;
    int runs = 10;
    std::uint64_t run_seed_base = 1;
    std::string output_dir = "out";
    Execution exec = Execution::Parallel;

    void validate() const;
};

struct BatchStats {
    double average = 0.0;
    double best = 0.0;
    double worst = 0.0;
    std::vector<std::pair<std::uint64_t, double>> per_run; // (seed, final best length)
};

// Loads or generates the configured instance (and schedule, if any).
Instance load_configured_instance(const ExperimentConfig& cfg);
EventSchedule load_configured_schedule(const ExperimentConfig& cfg);

// Executes the R runs with seeds run_seed_base + 0 .. R-1, in run order, with
// no file output. Runs may execute concurrently; results are by run index.
std::vector<RunResult> execute_runs(const ExperimentConfig& cfg);

// execute_runs plus the CSV artifacts: trace_<seed>.csv per run and
// summary.csv in cfg.output_dir. Byte-identical output for identical config.
BatchStats run_batch(const ExperimentConfig& cfg);

// Iteration at which the final best-so-far value was first reached (the
// start of the trace's final plateau), 1-based.
int iterations_to_best(const RunResult& run);

struct ComparisonRow {
    std::uint64_t seed = 0;
    double length_a = 0.0;
    double length_b = 0.0;
};

struct ComparisonResult {
    BatchStats a;
    BatchStats b;
    std::vector<ComparisonRow> rows;
    int wins_a = 0; // strictly shorter than b on that seed
    int wins_b = 0;
    int ties = 0;
};

// Runs both configs (which must share instance source, schedule, runs and
// seeds), writes each batch under <output_dir>/a and /b plus a side-by-side
// compare.csv.
ComparisonResult compare_solvers(const ExperimentConfig& cfg_a,
                                 const ExperimentConfig& cfg_b);

struct SweepPoint {
    double t = 0.0;
    BatchStats stats;
    double avg_iterations_to_best = 0.0;
};

// One batch per t value (hybrid solver only), each written under
// <output_dir>/t_<value>, plus an aggregate sweep_t.csv.
std::vector<SweepPoint> sweep_t(const ExperimentConfig& cfg,
                                const std::vector<double>& t_values);

// CSV emitters; numbers carry 6 significant digits, seeds print in full.
void emit_summary_csv(const BatchStats& stats, SolverKind solver, int runs,
                      const std::string& path);
void emit_trace_csv(const RunResult& run, const std::string& path);

} // namespace dtsp
