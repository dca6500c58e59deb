#include "dtsp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "dtsp/error.hpp"

namespace fs = std::filesystem;

namespace dtsp {

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + path);
    return out;
}

BatchStats stats_from_runs(const ExperimentConfig& cfg,
                           const std::vector<RunResult>& runs) {
    BatchStats stats;
    stats.per_run.reserve(runs.size());
    for (const RunResult& run : runs) {
        stats.per_run.emplace_back(run.seed, run.best_tour.length);
    }
    stats.best = stats.worst = stats.per_run.front().second;
    double sum = 0.0;
    for (const auto& [seed, length] : stats.per_run) {
        stats.best = std::min(stats.best, length);
        stats.worst = std::max(stats.worst, length);
        sum += length;
    }
    stats.average = sum / static_cast<double>(cfg.runs);
    return stats;
}

void write_batch_outputs(const ExperimentConfig& cfg,
                         const std::vector<RunResult>& runs, const BatchStats& stats) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir)) {
        throw FileError("cannot create output directory " + cfg.output_dir);
    }
    for (const RunResult& run : runs) {
        emit_trace_csv(run, cfg.output_dir + "/trace_" + std::to_string(run.seed) + ".csv");
    }
    emit_summary_csv(stats, cfg.solver, cfg.runs, cfg.output_dir + "/summary.csv");
}

} // namespace

const char* solver_name(SolverKind kind) {
    return kind == SolverKind::Aco ? "aco" : "hybrid";
}

void ExperimentConfig::validate() const {
    params.validate();
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (instance_path.empty()) {
        if (random.n < 3) throw ConfigError("random instance needs n >= 3");
        if (!(random.width > 0.0) || !(random.height > 0.0)) {
            throw ConfigError("bounding box dimensions must be positive");
        }
    }
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

Instance load_configured_instance(const ExperimentConfig& cfg) {
    if (!cfg.instance_path.empty()) {
        return load_instance(cfg.instance_path);
    }
    return generate_random_instance(cfg.random.n, cfg.random.width, cfg.random.height,
                                    cfg.random.seed);
}

EventSchedule load_configured_schedule(const ExperimentConfig& cfg) {
    if (cfg.schedule_path.empty()) return {};
    return load_event_schedule(cfg.schedule_path);
}

std::vector<RunResult> execute_runs(const ExperimentConfig& cfg) {
    cfg.validate();
    const Instance inst = load_configured_instance(cfg);
    const EventSchedule schedule = load_configured_schedule(cfg);
    validate_schedule(inst, schedule);

    std::vector<RunResult> runs(cfg.runs);
    std::vector<std::exception_ptr> failures(cfg.runs);
    const bool parallel_runs = cfg.exec == Execution::Parallel;

    auto one_run = [&](int r) {
        const std::uint64_t seed = cfg.run_seed_base + static_cast<std::uint64_t>(r);
        try {
            runs[r] = cfg.solver == SolverKind::Aco
                          ? run_aco(inst, schedule, cfg.params.aco, seed, cfg.exec)
                          : run_hybrid(inst, schedule, cfg.params, seed, cfg.exec);
        } catch (...) {
            failures[r] = std::current_exception();
        }
    };

    if (parallel_runs) {
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < cfg.runs; ++r) one_run(r);
    } else {
        for (int r = 0; r < cfg.runs; ++r) one_run(r);
    }

    for (int r = 0; r < cfg.runs; ++r) {
        if (!failures[r]) continue;
        try {
            std::rethrow_exception(failures[r]);
        } catch (const std::exception& e) {
            throw Error("run " + std::to_string(r) + ": " + e.what());
        }
    }
    return runs;
}

BatchStats run_batch(const ExperimentConfig& cfg) {
    const std::vector<RunResult> runs = execute_runs(cfg);
    const BatchStats stats = stats_from_runs(cfg, runs);
    write_batch_outputs(cfg, runs, stats);
    return stats;
}

int iterations_to_best(const RunResult& run) {
    const auto& trace = run.best_length_per_iter;
    int first = static_cast<int>(trace.size());
    for (int i = static_cast<int>(trace.size()); i >= 1; --i) {
        if (trace[i - 1] != trace.back()) break;
        first = i;
    }
    return first;
}

ComparisonResult compare_solvers(const ExperimentConfig& cfg_a,
                                 const ExperimentConfig& cfg_b) {
    const bool same_source =
        cfg_a.instance_path == cfg_b.instance_path &&
        cfg_a.random.n == cfg_b.random.n && cfg_a.random.width == cfg_b.random.width &&
        cfg_a.random.height == cfg_b.random.height &&
        cfg_a.random.seed == cfg_b.random.seed &&
        cfg_a.schedule_path == cfg_b.schedule_path;
    if (!same_source || cfg_a.runs != cfg_b.runs ||
        cfg_a.run_seed_base != cfg_b.run_seed_base) {
        throw InvalidComparisonError(
            "compared configs must share instance, schedule, runs and seeds");
    }

    ExperimentConfig a = cfg_a;
    ExperimentConfig b = cfg_b;
    const std::string base_dir = cfg_a.output_dir;
    a.output_dir = base_dir + "/a";
    b.output_dir = base_dir + "/b";

    ComparisonResult result;
    result.a = run_batch(a);
    result.b = run_batch(b);

    std::ofstream out = open_csv(base_dir + "/compare.csv");
    out << "seed,length_a,length_b,winner\n";
    for (int r = 0; r < cfg_a.runs; ++r) {
        const auto& [seed, la] = result.a.per_run[r];
        const double lb = result.b.per_run[r].second;
        const char* winner = "tie";
        if (la < lb) {
            winner = "a";
            ++result.wins_a;
        } else if (lb < la) {
            winner = "b";
            ++result.wins_b;
        } else {
            ++result.ties;
        }
        result.rows.push_back(ComparisonRow{seed, la, lb});
        out << seed << ',' << fmt6(la) << ',' << fmt6(lb) << ',' << winner << '\n';
    }
    return result;
}

std::vector<SweepPoint> sweep_t(const ExperimentConfig& cfg,
                                const std::vector<double>& t_values) {
    if (t_values.empty()) throw ConfigError("sweep needs at least one t value");
    for (double t : t_values) {
        if (t < 0.0) throw ConfigError("t values must be non-negative");
    }
    if (cfg.solver != SolverKind::Hybrid) {
        throw ConfigError("the t sweep applies to the hybrid solver only");
    }
    cfg.validate();

    std::vector<SweepPoint> points;
    points.reserve(t_values.size());
    for (double t : t_values) {
        ExperimentConfig point_cfg = cfg;
        point_cfg.params.t = t;
        point_cfg.output_dir = cfg.output_dir + "/t_" + fmt6(t);
        const std::vector<RunResult> runs = execute_runs(point_cfg);
        const BatchStats stats = stats_from_runs(point_cfg, runs);
        write_batch_outputs(point_cfg, runs, stats);

        SweepPoint point;
        point.t = t;
        point.stats = stats;
        double iter_sum = 0.0;
        for (const RunResult& run : runs) iter_sum += iterations_to_best(run);
        point.avg_iterations_to_best = iter_sum / static_cast<double>(runs.size());
        points.push_back(std::move(point));
    }

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    std::ofstream out = open_csv(cfg.output_dir + "/sweep_t.csv");
    out << "t,average,best,worst,avg_iterations_to_best\n";
    for (const SweepPoint& p : points) {
        out << fmt6(p.t) << ',' << fmt6(p.stats.average) << ',' << fmt6(p.stats.best)
            << ',' << fmt6(p.stats.worst) << ',' << fmt6(p.avg_iterations_to_best) << '\n';
    }
    return points;
}

void emit_summary_csv(const BatchStats& stats, SolverKind solver, int runs,
                      const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "solver,runs,average,best,worst\n";
    out << solver_name(solver) << ',' << runs << ',' << fmt6(stats.average) << ','
        << fmt6(stats.best) << ',' << fmt6(stats.worst) << '\n';
    if (!out.flush()) throw FileError("failed writing " + path);
}

void emit_trace_csv(const RunResult& run, const std::string& path) {
    std::ofstream out = open_csv(path);
    out << "iteration,best_length\n";
    for (std::size_t i = 0; i < run.best_length_per_iter.size(); ++i) {
        out << (i + 1) << ',' << fmt6(run.best_length_per_iter[i]) << '\n';
    }
    if (!out.flush()) throw FileError("failed writing " + path);
}

} // namespace dtsp
