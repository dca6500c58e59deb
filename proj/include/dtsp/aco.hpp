#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dtsp/execution.hpp"
#include "dtsp/instance.hpp"

namespace dtsp {

// Strictly positive floor so transition weights can never all vanish.
inline constexpr double kDefaultTauMin = 1e-9;

struct AcoParams {
    double alpha = 1.0;
    double beta = 5.0;
    double rho = 0.1;
    double q = 100.0;
    int m = 0;         // ant count; 0 resolves to one ant per city
    double tau0 = 0.0; // initial pheromone; 0 resolves to m / L_nn
    int max_iters = 100;

    // Range checks on the user-settable fields; m and tau0 sentinels are
    // resolved (and re-checked) when a run starts.
    void validate() const;
};

// Symmetric nonnegative edge weights over city positions, with a floor and a
// ceiling. The diagonal is unused and fixed at zero.
class PheromoneMatrix {
public:
    PheromoneMatrix(int n, double tau0, double tau_max, double tau_min = kDefaultTauMin);

    int size() const { return n_; }
    double tau_min() const { return tau_min_; }
    double tau_max() const { return tau_max_; }

    double at(int i, int j) const { return tau_[static_cast<std::size_t>(i) * n_ + j]; }

    // Symmetric write, clamped into [tau_min, tau_max].
    void set(int i, int j, double value);
    void add(int i, int j, double delta) { set(i, j, at(i, j) + delta); }

    // Multiplies every off-diagonal entry by (1 - rho), flooring at tau_min.
    void evaporate(double rho);

    // Adds q / L_k on every edge used by each tour, clamped at tau_max.
    void deposit(const std::vector<Tour>& tours, const Instance& inst, double q);

    // All off-diagonal entries back to tau0.
    void reset(double tau0);

private:
    int n_;
    double tau_min_;
    double tau_max_;
    std::vector<double> tau_;
};

PheromoneMatrix init_pheromone(int n, double tau0, double tau_max);

// One ant mid-construction.
struct AntState {
    int current = 0;           // current city id
    std::vector<bool> visited; // by instance position
    std::vector<int> path;     // visited city ids in order
};

// p(j) proportional to tau^alpha * (1/d)^beta over the not-yet-visited
// cities, indexed by position; exactly 0 on visited positions. Falls back to
// uniform over the allowed set if every weight underflows to zero. An empty
// result signals a complete tour (no allowed city left).
std::vector<double> transition_probabilities(const Instance& inst,
                                             const PheromoneMatrix& ph,
                                             const AntState& ant,
                                             const AcoParams& params);

// Roulette-wheel construction of a complete closed tour from start_id.
Tour construct_tour(const Instance& inst, const PheromoneMatrix& ph, int start_id,
                    const AcoParams& params, std::mt19937_64& rng);

struct RunResult {
    Tour best_tour;
    std::vector<double> best_length_per_iter; // best-so-far after each iteration
    int iterations = 0;
    std::uint64_t seed = 0;
};

// Baseline Ant System: per iteration, apply due events, construct m tours,
// evaporate, deposit, track the best-so-far.
RunResult run_aco(const Instance& inst, const EventSchedule& schedule,
                  const AcoParams& params, std::uint64_t seed,
                  Execution exec = Execution::Parallel);

} // namespace dtsp
