#include <algorithm>
#include <vector>

#include "dtsp/aco.hpp"
#include "dtsp/error.hpp"
#include "dtsp/hybrid.hpp"
#include "dtsp/localsearch.hpp"
#include "dtsp/rng.hpp"

namespace dtsp {

namespace {

struct ResolvedParams {
    AcoParams aco; // m and tau0 resolved to concrete values
    double t = 0.0;
    double tau_max = 0.0;
    double x_max = 0.0;
    int stagnation_window = 2;
    bool improve_best_only = false;
};

ResolvedParams resolve(const HybridParams& params, const Instance& inst) {
    params.validate();
    ResolvedParams r;
    r.aco = params.aco;
    r.t = params.t;
    r.improve_best_only = params.improve_best_only;
    r.stagnation_window = params.stagnation_window;
    if (r.aco.m == 0) r.aco.m = inst.size();
    r.tau_max = params.tau_max > 0.0 ? params.tau_max : params.aco.q;
    r.x_max = params.x_max > 0.0 ? params.x_max : r.tau_max / 10.0;
    if (r.aco.tau0 == 0.0) {
        // Scale-free initialization from the greedy tour length, started at
        // the lowest city id for determinism.
        int lowest = inst.city(0).id;
        for (const City& c : inst.cities()) lowest = std::min(lowest, c.id);
        const double l_nn = nearest_neighbor_tour(inst, lowest).length;
        r.aco.tau0 = static_cast<double>(r.aco.m) / l_nn;
    }
    if (r.aco.tau0 > r.tau_max) {
        throw InvalidArgumentError("tau0 exceeds tau_max");
    }
    return r;
}

// Constructs ant k's tour for this iteration and improves it when asked.
// Must stay a pure function of (seed, iteration, k, inst, ph): the parallel
// and serial loops below both call it and must agree bit for bit.
Tour build_ant_tour(const Instance& inst, const PheromoneMatrix& ph,
                    const ResolvedParams& params, std::uint64_t seed, int iteration,
                    int k, bool improve) {
    auto rng = make_stream(seed, StreamTag::AntConstruction,
                           static_cast<std::uint64_t>(iteration),
                           static_cast<std::uint64_t>(k));
    const int start_id = inst.city(k % inst.size()).id;
    Tour tour = construct_tour(inst, ph, start_id, params.aco, rng);
    if (improve) {
        tour = steepest_descent_improve(inst, tour);
    }
    return tour;
}

} // namespace

RunResult run_colony(const Instance& base, const EventSchedule& schedule,
                     const HybridParams& hybrid_params, std::uint64_t seed,
                     const ColonyFeatures& features, Execution exec,
                     const IterationObserver& observer) {
    const ResolvedParams params = resolve(hybrid_params, base);
    validate_schedule(base, schedule);

    Instance inst = base;
    PheromoneMatrix ph(inst.size(), params.aco.tau0, params.tau_max);
    GradientTermState grad_state;

    Tour best_so_far;
    bool have_best = false;
    std::vector<double> colony_best_history; // since the last event or restart

    RunResult result;
    result.seed = seed;
    result.iterations = params.aco.max_iters;
    result.best_length_per_iter.reserve(params.aco.max_iters);

    const int m = params.aco.m;
    const bool improve_all = features.local_search && !params.improve_best_only;
    HybridParams update_params = hybrid_params;
    update_params.aco = params.aco;
    std::size_t next_event = 0;

    for (int iter = 1; iter <= params.aco.max_iters; ++iter) {
        while (next_event < schedule.events.size() &&
               schedule.events[next_event].at_iteration <= iter) {
            const DynamicEvent& ev = schedule.events[next_event];
            auto updated = handle_dynamic_event(ph, inst, ev, params.aco.tau0);
            ph = std::move(updated.first);
            inst = std::move(updated.second);
            if (ev.kind == EventKind::Move) {
                // City set unchanged: the incumbent stays comparable, but its
                // length must be re-priced against the new coordinates.
                if (have_best) best_so_far = make_tour(inst, best_so_far.order);
            } else {
                have_best = false;
                grad_state.prev_best_length.reset();
            }
            colony_best_history.clear();
            ++next_event;
        }

        std::vector<Tour> tours(m);
        if (exec == Execution::Serial) {
            for (int k = 0; k < m; ++k) {
                tours[k] = build_ant_tour(inst, ph, params, seed, iter, k, improve_all);
            }
        } else {
#pragma omp parallel for schedule(dynamic)
            for (int k = 0; k < m; ++k) {
                tours[k] = build_ant_tour(inst, ph, params, seed, iter, k, improve_all);
            }
        }

        int best_k = 0;
        for (int k = 1; k < m; ++k) {
            if (tours[k].length < tours[best_k].length) best_k = k;
        }
        if (features.local_search && params.improve_best_only) {
            tours[best_k] = steepest_descent_improve(inst, tours[best_k]);
        }
        const Tour colony_best = tours[best_k];

        if (features.gradient_term) {
            grad_state =
                gradient_reinforcement(grad_state, colony_best.length, params.t, params.x_max);
            hybrid_pheromone_update(ph, tours, colony_best, inst, update_params, grad_state);
        } else {
            ph.evaporate(params.aco.rho);
            ph.deposit(tours, inst, params.aco.q);
        }

        if (!have_best || colony_best.length < best_so_far.length) {
            best_so_far = colony_best;
            have_best = true;
        }
        result.best_length_per_iter.push_back(best_so_far.length);

        colony_best_history.push_back(colony_best.length);
        if (features.stagnation_restarts &&
            detect_stagnation(colony_best_history, params.stagnation_window)) {
            reinit_pheromone(ph, params.aco.tau0, grad_state);
            colony_best_history.clear();
        }

        if (observer) {
            observer(IterationSnapshot{iter, inst, ph, tours, colony_best,
                                       best_so_far.length});
        }
    }

    result.best_tour = best_so_far;
    return result;
}

RunResult run_aco(const Instance& inst, const EventSchedule& schedule,
                  const AcoParams& params, std::uint64_t seed, Execution exec) {
    HybridParams hp;
    hp.aco = params;
    return run_colony(inst, schedule, hp, seed,
                      ColonyFeatures{false, false, false}, exec);
}

RunResult run_hybrid(const Instance& inst, const EventSchedule& schedule,
                     const HybridParams& params, std::uint64_t seed, Execution exec) {
    return run_colony(inst, schedule, params, seed, ColonyFeatures{true, true, true}, exec);
}

} // namespace dtsp
