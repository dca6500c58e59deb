#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "dtsp/bench.hpp"
#include "dtsp/error.hpp"

namespace {

struct CliOptions {
    dtsp::ExperimentConfig cfg;
    std::string bbox = "100x100";
    std::string solver = "hybrid";
    std::string solver_a = "aco";
    std::string solver_b = "hybrid";
    std::string t_values = "0.1,0.4,0.8";
    std::string config_path;
    std::uint64_t seed = 1;
    int threads = 0;
};

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// `key = value` per line, # comments, [section] headers as pure grouping.
// Values given on the command line always win over the file.
void apply_config_file(CLI::App* sub, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dtsp::ConfigError("cannot open config file " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw dtsp::ConfigError(path + ":" + std::to_string(line_no) +
                                    ": expected `key = value`");
        }
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        if (key == "config") continue;
        CLI::Option* option = sub->get_option_no_throw("--" + key);
        if (option == nullptr) {
            throw dtsp::ConfigError(path + ":" + std::to_string(line_no) +
                                    ": unknown key `" + key + "`");
        }
        if (option->count() > 0) continue; // set on the command line
        option->add_result(value);
        option->run_callback();
    }
}

std::pair<double, double> parse_bbox(const std::string& text) {
    double w = 0.0, h = 0.0;
    char sep = 0;
    std::istringstream in(text);
    if (in >> w) {
        if (in >> sep >> h) {
            if (sep != 'x' && sep != 'X' && sep != ',') {
                throw dtsp::ConfigError("bbox must look like 100x100");
            }
        } else {
            h = w; // single number means a square box
        }
    }
    if (!(w > 0.0) || !(h > 0.0)) {
        throw dtsp::ConfigError("bbox must look like 100x100 with positive sizes");
    }
    return {w, h};
}

dtsp::SolverKind parse_solver(const std::string& name) {
    if (name == "aco") return dtsp::SolverKind::Aco;
    if (name == "hybrid") return dtsp::SolverKind::Hybrid;
    throw dtsp::ConfigError("solver must be `aco` or `hybrid`");
}

std::vector<double> parse_t_values(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw dtsp::ConfigError("cannot parse t value `" + item + "`");
        }
    }
    if (values.empty()) throw dtsp::ConfigError("--t-values needs at least one number");
    return values;
}

void add_common_options(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--instance", opt.cfg.instance_path,
                    "Instance file (native or TSPLIB EUC_2D)");
    sub->add_option("--random-n", opt.cfg.random.n,
                    "City count for a generated instance");
    sub->add_option("--bbox", opt.bbox, "Bounding box WxH for generated instances");
    sub->add_option("--instance-seed", opt.cfg.random.seed,
                    "Seed for the generated instance");
    sub->add_option("--events", opt.cfg.schedule_path, "Dynamic event schedule file");
    sub->add_option("--iters", opt.cfg.params.aco.max_iters, "Iterations per run");
    sub->add_option("--alpha", opt.cfg.params.aco.alpha, "Pheromone exponent");
    sub->add_option("--beta", opt.cfg.params.aco.beta, "Visibility exponent");
    sub->add_option("--rho", opt.cfg.params.aco.rho, "Evaporation rate in (0,1)");
    sub->add_option("--q", opt.cfg.params.aco.q, "Deposit constant");
    sub->add_option("--ants", opt.cfg.params.aco.m, "Ant count (0 = one per city)");
    sub->add_option("--tau0", opt.cfg.params.aco.tau0,
                    "Initial pheromone (0 = ants / greedy length)");
    sub->add_option("--t", opt.cfg.params.t, "Reinforcement descent step");
    sub->add_option("--tau-max", opt.cfg.params.tau_max, "Pheromone ceiling (0 = q)");
    sub->add_option("--x-max", opt.cfg.params.x_max,
                    "Reinforcement ceiling (0 = tau-max / 10)");
    sub->add_option("--stagnation-window", opt.cfg.params.stagnation_window,
                    "Restart after this many identical colony bests");
    sub->add_flag("--ls-best-only", opt.cfg.params.improve_best_only,
                  "Improve only the colony best tour each iteration");
    sub->add_option("--out", opt.cfg.output_dir, "Output directory");
    sub->add_option("--threads", opt.threads, "OpenMP thread count (0 = default)");
    sub->add_option("--config", opt.config_path, "Key = value file; flags override it");
}

void apply_threads(const CliOptions& opt) {
#ifdef _OPENMP
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
#else
    (void)opt;
#endif
}

void finalize_config(CliOptions& opt) {
    const auto [w, h] = parse_bbox(opt.bbox);
    opt.cfg.random.width = w;
    opt.cfg.random.height = h;
    opt.cfg.solver = parse_solver(opt.solver);
    opt.cfg.validate();
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int run_solve(CliOptions& opt) {
    finalize_config(opt);
    apply_threads(opt);
    opt.cfg.runs = 1;
    opt.cfg.run_seed_base = opt.seed;
    const std::vector<dtsp::RunResult> runs = dtsp::execute_runs(opt.cfg);
    const dtsp::RunResult& run = runs.front();

    std::error_code ec;
    std::filesystem::create_directories(opt.cfg.output_dir, ec);
    if (ec || !std::filesystem::is_directory(opt.cfg.output_dir)) {
        throw dtsp::FileError("cannot create output directory " + opt.cfg.output_dir);
    }
    dtsp::emit_trace_csv(run, opt.cfg.output_dir + "/trace_" + std::to_string(run.seed) +
                                  ".csv");
    dtsp::BatchStats stats;
    stats.average = stats.best = stats.worst = run.best_tour.length;
    stats.per_run = {{run.seed, run.best_tour.length}};
    dtsp::emit_summary_csv(stats, opt.cfg.solver, 1, opt.cfg.output_dir + "/summary.csv");

    const std::string tour_path = opt.cfg.output_dir + "/best_tour.txt";
    std::ofstream tour_file(tour_path, std::ios::binary | std::ios::trunc);
    if (!tour_file) throw dtsp::FileError("cannot write " + tour_path);
    for (int id : run.best_tour.order) tour_file << id << '\n';

    std::cout << "solver=" << dtsp::solver_name(opt.cfg.solver) << " seed=" << run.seed
              << " best=" << fmt6(run.best_tour.length)
              << " iters_to_best=" << dtsp::iterations_to_best(run) << '\n';
    return 0;
}

int run_batch_cmd(CliOptions& opt) {
    finalize_config(opt);
    apply_threads(opt);
    const dtsp::BatchStats stats = dtsp::run_batch(opt.cfg);
    std::cout << "solver=" << dtsp::solver_name(opt.cfg.solver) << " runs=" << opt.cfg.runs
              << " average=" << fmt6(stats.average) << " best=" << fmt6(stats.best)
              << " worst=" << fmt6(stats.worst) << '\n';
    return 0;
}

int run_compare(CliOptions& opt) {
    finalize_config(opt);
    apply_threads(opt);
    dtsp::ExperimentConfig cfg_a = opt.cfg;
    cfg_a.solver = parse_solver(opt.solver_a);
    dtsp::ExperimentConfig cfg_b = opt.cfg;
    cfg_b.solver = parse_solver(opt.solver_b);
    const dtsp::ComparisonResult cmp = dtsp::compare_solvers(cfg_a, cfg_b);

    std::cout << "seed,length_" << dtsp::solver_name(cfg_a.solver) << ",length_"
              << dtsp::solver_name(cfg_b.solver) << '\n';
    for (const dtsp::ComparisonRow& row : cmp.rows) {
        std::cout << row.seed << ',' << fmt6(row.length_a) << ',' << fmt6(row.length_b)
                  << '\n';
    }
    std::cout << "a(" << dtsp::solver_name(cfg_a.solver) << "): average "
              << fmt6(cmp.a.average) << ", best " << fmt6(cmp.a.best) << ", worst "
              << fmt6(cmp.a.worst) << '\n';
    std::cout << "b(" << dtsp::solver_name(cfg_b.solver) << "): average "
              << fmt6(cmp.b.average) << ", best " << fmt6(cmp.b.best) << ", worst "
              << fmt6(cmp.b.worst) << '\n';
    std::cout << "wins_a=" << cmp.wins_a << " wins_b=" << cmp.wins_b
              << " ties=" << cmp.ties << '\n';
    return 0;
}

int run_sweep(CliOptions& opt) {
    finalize_config(opt);
    apply_threads(opt);
    if (opt.cfg.solver != dtsp::SolverKind::Hybrid) {
        throw dtsp::ConfigError("sweep-t requires --solver hybrid");
    }
    const std::vector<double> values = parse_t_values(opt.t_values);
    const std::vector<dtsp::SweepPoint> points = dtsp::sweep_t(opt.cfg, values);
    std::cout << "t,average,best,worst,avg_iterations_to_best\n";
    for (const dtsp::SweepPoint& p : points) {
        std::cout << fmt6(p.t) << ',' << fmt6(p.stats.average) << ',' << fmt6(p.stats.best)
                  << ',' << fmt6(p.stats.worst) << ',' << fmt6(p.avg_iterations_to_best)
                  << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic TSP solver: ant colony baseline and the"
                 " descent-reinforced hybrid, with a benchmark harness"};
    app.require_subcommand(1);

    CliOptions opt;

    CLI::App* solve = app.add_subcommand("solve", "Run one seeded solve");
    add_common_options(solve, opt);
    solve->add_option("--solver", opt.solver, "aco | hybrid");
    solve->add_option("--seed", opt.seed, "Run seed");

    CLI::App* batch = app.add_subcommand("batch", "Run R seeded repetitions");
    add_common_options(batch, opt);
    batch->add_option("--solver", opt.solver, "aco | hybrid");
    batch->add_option("--runs", opt.cfg.runs, "Repetition count");
    batch->add_option("--seed-base", opt.cfg.run_seed_base, "First run seed");

    CLI::App* compare = app.add_subcommand("compare",
                                           "Run two solvers on shared instance and seeds");
    add_common_options(compare, opt);
    compare->add_option("--solver-a", opt.solver_a, "First solver: aco | hybrid");
    compare->add_option("--solver-b", opt.solver_b, "Second solver: aco | hybrid");
    compare->add_option("--runs", opt.cfg.runs, "Repetition count");
    compare->add_option("--seed-base", opt.cfg.run_seed_base, "First run seed");

    CLI::App* sweep = app.add_subcommand("sweep-t", "Batch per t value (hybrid)");
    add_common_options(sweep, opt);
    sweep->add_option("--t-values", opt.t_values, "Comma-separated t list");
    sweep->add_option("--runs", opt.cfg.runs, "Repetition count per t");
    sweep->add_option("--seed-base", opt.cfg.run_seed_base, "First run seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        CLI::App* active = solve->parsed()   ? solve
                           : batch->parsed() ? batch
                           : compare->parsed() ? compare
                                                 : sweep;
        if (!opt.config_path.empty()) apply_config_file(active, opt.config_path);
        if (solve->parsed()) return run_solve(opt);
        if (batch->parsed()) return run_batch_cmd(opt);
        if (compare->parsed()) return run_compare(opt);
        if (sweep->parsed()) return run_sweep(opt);
    } catch (const dtsp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const dtsp::InvalidComparisonError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const dtsp::InvalidArgumentError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const dtsp::InvalidInstanceError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const dtsp::FormatError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const dtsp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
