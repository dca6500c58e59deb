#include "dtsp/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dtsp/error.hpp"

namespace dtsp {

void HybridParams::validate() const {
    aco.validate();
    if (t < 0.0) throw InvalidArgumentError("t must be non-negative");
    if (tau_max < 0.0) throw InvalidArgumentError("tau_max must be positive (or 0 for q)");
    if (stagnation_window < 2) {
        throw InvalidArgumentError("stagnation_window must be at least 2");
    }
    if (x_max < 0.0) {
        throw InvalidArgumentError("x_max must be positive (or 0 for tau_max / 10)");
    }
}

GradientTermState gradient_reinforcement(const GradientTermState& state,
                                         double new_best_length, double t, double x_max) {
    if (!(new_best_length > 0.0)) {
        throw InvalidArgumentError("best tour length must be positive");
    }
    if (t < 0.0) throw InvalidArgumentError("t must be non-negative");
    double g = 0.0;
    if (state.prev_best_length) {
        g = (new_best_length - *state.prev_best_length) / *state.prev_best_length;
    }
    GradientTermState next;
    next.x = std::clamp(state.x - t * g, 0.0, x_max);
    next.prev_best_length = new_best_length;
    return next;
}

void hybrid_pheromone_update(PheromoneMatrix& ph, const std::vector<Tour>& tours,
                             const Tour& best_tour, const Instance& inst,
                             const HybridParams& params, const GradientTermState& state) {
    ph.evaporate(params.aco.rho);
    ph.deposit(tours, inst, params.aco.q);
    if (state.x > 0.0) {
        const std::vector<int> positions = to_positions(inst, best_tour.order);
        for (std::size_t k = 0; k < positions.size(); ++k) {
            ph.add(positions[k], positions[(k + 1) % positions.size()], state.x);
        }
    }
}

bool detect_stagnation(std::span<const double> history, int window) {
    if (window < 2) throw InvalidArgumentError("stagnation window must be at least 2");
    if (static_cast<int>(history.size()) < window) return false;
    const double reference = history[history.size() - window];
    for (std::size_t k = history.size() - window + 1; k < history.size(); ++k) {
        if (std::abs(history[k] - reference) > 1e-9) return false;
    }
    return true;
}

void reinit_pheromone(PheromoneMatrix& ph, double tau0, GradientTermState& state) {
    ph.reset(tau0);
    state.x = 0.0;
}

std::pair<PheromoneMatrix, Instance> handle_dynamic_event(const PheromoneMatrix& ph,
                                                          const Instance& inst,
                                                          const DynamicEvent& ev,
                                                          double tau0) {
    if (ph.size() != inst.size()) {
        throw InvalidArgumentError("pheromone matrix does not match instance size");
    }
    Instance next = apply_event(inst, ev);
    PheromoneMatrix next_ph(next.size(), tau0, ph.tau_max(), ph.tau_min());
    // Copy every entry whose endpoints both survive with unchanged
    // coordinates; everything else keeps the fresh tau0.
    const int moved_id = ev.kind == EventKind::Move ? ev.city.id : -1;
    for (int i = 0; i < next.size(); ++i) {
        const int id_i = next.city(i).id;
        if (!inst.has_city(id_i) || id_i == moved_id) continue;
        const int old_i = inst.position_of(id_i);
        for (int j = i + 1; j < next.size(); ++j) {
            const int id_j = next.city(j).id;
            if (!inst.has_city(id_j) || id_j == moved_id) continue;
            next_ph.set(i, j, ph.at(old_i, inst.position_of(id_j)));
        }
    }
    return {std::move(next_ph), std::move(next)};
}

} // namespace dtsp
