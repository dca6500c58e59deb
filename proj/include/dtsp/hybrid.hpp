#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>

#include "dtsp/aco.hpp"
#include "dtsp/execution.hpp"
#include "dtsp/instance.hpp"

namespace dtsp {

struct HybridParams {
    AcoParams aco;
    double t = 0.4;            // descent step for the reinforcement recurrence
    double tau_max = 0.0;      // pheromone ceiling; 0 resolves to aco.q
    int stagnation_window = 15;
    double x_max = 0.0;        // reinforcement ceiling; 0 resolves to tau_max / 10
    bool improve_best_only = false; // economy mode: local search on the colony best only

    void validate() const;
};

// The reinforcement scalar evolved each iteration from the relative change
// of the colony-best tour length.
struct GradientTermState {
    double x = 0.0;
    std::optional<double> prev_best_length;
};

// One descent step on x: with g the relative best-length change
// (new - prev) / prev, x becomes clamp(x - t * g, 0, x_max). Improvement
// (negative g) grows x; worsening shrinks it toward zero.
GradientTermState gradient_reinforcement(const GradientTermState& state,
                                         double new_best_length, double t, double x_max);

// Evaporate, deposit every ant's q / L_k, then add state.x on the edges of
// the best tour; all entries clamped into [tau_min, tau_max]. With x = 0
// this is exactly evaporate followed by deposit.
void hybrid_pheromone_update(PheromoneMatrix& ph, const std::vector<Tour>& tours,
                             const Tour& best_tour, const Instance& inst,
                             const HybridParams& params, const GradientTermState& state);

// True iff the last `window` entries are all equal within 1e-9.
bool detect_stagnation(std::span<const double> history, int window);

// Uniform tau0 everywhere and x back to zero; the best-so-far tour and
// prev_best_length are deliberately retained by the caller.
void reinit_pheromone(PheromoneMatrix& ph, double tau0, GradientTermState& state);

// Applies the event to the instance and remaps the pheromone matrix: rows
// and columns of removed cities are dropped, new or moved cities start at
// tau0 on all incident edges, and every other entry is preserved untouched.
std::pair<PheromoneMatrix, Instance> handle_dynamic_event(const PheromoneMatrix& ph,
                                                          const Instance& inst,
                                                          const DynamicEvent& ev,
                                                          double tau0);

// Feature switches for the shared colony loop. run_aco and run_hybrid are
// the two named presets; tests exercise the intermediate combinations.
struct ColonyFeatures {
    bool local_search = true;
    bool gradient_term = true;
    bool stagnation_restarts = true;
};

// Read-only view of one finished iteration, for tests and tracing.
struct IterationSnapshot {
    int iteration;
    const Instance& instance;
    const PheromoneMatrix& pheromone;
    const std::vector<Tour>& tours; // post-improvement when local search is on
    const Tour& colony_best;
    double best_so_far;
};

using IterationObserver = std::function<void(const IterationSnapshot&)>;

// The solver engine behind run_aco and run_hybrid.
RunResult run_colony(const Instance& inst, const EventSchedule& schedule,
                     const HybridParams& params, std::uint64_t seed,
                     const ColonyFeatures& features,
                     Execution exec = Execution::Parallel,
                     const IterationObserver& observer = {});

// The full hybrid: per-ant steepest 2-opt improvement, the gradient
// reinforcement term on the best tour, and stagnation-triggered pheromone
// re-initialization.
RunResult run_hybrid(const Instance& inst, const EventSchedule& schedule,
                     const HybridParams& params, std::uint64_t seed,
                     Execution exec = Execution::Parallel);

} // namespace dtsp
