#include "dtsp/aco.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dtsp/error.hpp"

namespace dtsp {

namespace {

// Visibility 1/d with a floor on d, so rounded-metric instances with a zero
// edge weight cannot produce infinite weights.
double visibility(double d) { return 1.0 / std::max(d, 1e-12); }

} // namespace

void AcoParams::validate() const {
    if (!(rho > 0.0) || !(rho < 1.0)) {
        throw InvalidArgumentError("rho must lie in (0, 1)");
    }
    if (alpha < 0.0) throw InvalidArgumentError("alpha must be non-negative");
    if (beta < 0.0) throw InvalidArgumentError("beta must be non-negative");
    if (!(q > 0.0)) throw InvalidArgumentError("q must be positive");
    if (m < 0) throw InvalidArgumentError("m must be positive (or 0 for one ant per city)");
    if (tau0 < 0.0) throw InvalidArgumentError("tau0 must be positive (or 0 for m / L_nn)");
    if (max_iters < 1) throw InvalidArgumentError("max_iters must be at least 1");
}

PheromoneMatrix::PheromoneMatrix(int n, double tau0, double tau_max, double tau_min)
    : n_(n), tau_min_(tau_min), tau_max_(tau_max) {
    if (n < 3) throw InvalidArgumentError("pheromone matrix needs n >= 3");
    if (tau_min < 0.0) throw InvalidArgumentError("tau_min must be non-negative");
    if (!(tau0 > 0.0) || tau0 < tau_min || tau0 > tau_max) {
        throw InvalidArgumentError("tau0 must lie in (0, tau_max], got " +
                                   std::to_string(tau0));
    }
    tau_.assign(static_cast<std::size_t>(n) * n, tau0);
    for (int i = 0; i < n; ++i) {
        tau_[static_cast<std::size_t>(i) * n + i] = 0.0;
    }
}

void PheromoneMatrix::set(int i, int j, double value) {
    if (i == j) return;
    const double clamped = std::clamp(value, tau_min_, tau_max_);
    tau_[static_cast<std::size_t>(i) * n_ + j] = clamped;
    tau_[static_cast<std::size_t>(j) * n_ + i] = clamped;
}

void PheromoneMatrix::evaporate(double rho) {
    if (!(rho > 0.0) || !(rho < 1.0)) {
        throw InvalidArgumentError("rho must lie in (0, 1)");
    }
    const double keep = 1.0 - rho;
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (i == j) continue;
            double& v = tau_[static_cast<std::size_t>(i) * n_ + j];
            v = std::max(tau_min_, v * keep);
        }
    }
}

void PheromoneMatrix::deposit(const std::vector<Tour>& tours, const Instance& inst,
                              double q) {
    if (inst.size() != n_) {
        throw InvalidArgumentError("pheromone matrix size " + std::to_string(n_) +
                                   " does not match instance size " +
                                   std::to_string(inst.size()));
    }
    for (const Tour& tour : tours) {
        const std::vector<int> positions = to_positions(inst, tour.order);
        if (!(tour.length > 0.0)) {
            throw InvalidTourError("tour length must be positive");
        }
        const double delta = q / tour.length;
        for (std::size_t k = 0; k < positions.size(); ++k) {
            const int a = positions[k];
            const int b = positions[(k + 1) % positions.size()];
            add(a, b, delta);
        }
    }
}

void PheromoneMatrix::reset(double tau0) {
    if (!(tau0 > 0.0) || tau0 < tau_min_ || tau0 > tau_max_) {
        throw InvalidArgumentError("tau0 must lie in (0, tau_max]");
    }
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            tau_[static_cast<std::size_t>(i) * n_ + j] = (i == j) ? 0.0 : tau0;
        }
    }
}

PheromoneMatrix init_pheromone(int n, double tau0, double tau_max) {
    return PheromoneMatrix(n, tau0, tau_max);
}

namespace {

// Weights for the current city against every position; returns their sum.
double transition_weights(const Instance& inst, const PheromoneMatrix& ph,
                          int current_pos, const std::vector<bool>& visited,
                          const AcoParams& params, std::vector<double>& weights) {
    const int n = inst.size();
    weights.assign(n, 0.0);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        if (visited[j] || j == current_pos) continue;
        const double w = std::pow(ph.at(current_pos, j), params.alpha) *
                         std::pow(visibility(inst.dist(current_pos, j)), params.beta);
        weights[j] = w;
        total += w;
    }
    return total;
}

// Normalizes in place; uniform over the allowed set when all weights are 0.
void normalize_weights(std::vector<double>& weights, double total,
                       const std::vector<bool>& visited, int current_pos) {
    const int n = static_cast<int>(weights.size());
    if (total > 0.0) {
        for (double& w : weights) w /= total;
        return;
    }
    int allowed = 0;
    for (int j = 0; j < n; ++j) {
        if (!visited[j] && j != current_pos) ++allowed;
    }
    const double uniform = 1.0 / allowed;
    for (int j = 0; j < n; ++j) {
        weights[j] = (!visited[j] && j != current_pos) ? uniform : 0.0;
    }
}

} // namespace

std::vector<double> transition_probabilities(const Instance& inst,
                                             const PheromoneMatrix& ph,
                                             const AntState& ant,
                                             const AcoParams& params) {
    const int n = inst.size();
    if (static_cast<int>(ant.visited.size()) != n) {
        throw InvalidArgumentError("ant visited set does not match instance size");
    }
    const int current_pos = inst.position_of(ant.current);
    bool any_allowed = false;
    for (int j = 0; j < n; ++j) {
        if (!ant.visited[j] && j != current_pos) {
            any_allowed = true;
            break;
        }
    }
    if (!any_allowed) {
        return {}; // tour complete; not an error
    }
    std::vector<double> weights;
    const double total = transition_weights(inst, ph, current_pos, ant.visited, params, weights);
    normalize_weights(weights, total, ant.visited, current_pos);
    return weights;
}

Tour construct_tour(const Instance& inst, const PheromoneMatrix& ph, int start_id,
                    const AcoParams& params, std::mt19937_64& rng) {
    const int n = inst.size();
    const int start = inst.position_of(start_id);
    std::vector<bool> visited(n, false);
    std::vector<int> positions;
    positions.reserve(n);
    std::vector<double> weights;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    int current = start;
    visited[current] = true;
    positions.push_back(current);
    double length = 0.0;
    for (int step = 1; step < n; ++step) {
        const double total = transition_weights(inst, ph, current, visited, params, weights);
        int next = -1;
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double cum = 0.0;
            for (int j = 0; j < n; ++j) {
                if (weights[j] <= 0.0) continue;
                cum += weights[j];
                next = j;
                if (cum >= target) break;
            }
        } else {
            // All weights underflowed: roulette over the allowed set.
            int allowed = 0;
            for (int j = 0; j < n; ++j) {
                if (!visited[j]) ++allowed;
            }
            int pick = static_cast<int>(unit(rng) * allowed);
            if (pick >= allowed) pick = allowed - 1;
            for (int j = 0; j < n; ++j) {
                if (visited[j]) continue;
                if (pick-- == 0) {
                    next = j;
                    break;
                }
            }
        }
        visited[next] = true;
        positions.push_back(next);
        length += inst.dist(current, next);
        current = next;
    }
    length += inst.dist(current, start);

    Tour tour;
    tour.order.reserve(n);
    for (int pos : positions) {
        tour.order.push_back(inst.city(pos).id);
    }
    tour.length = length;
    return tour;
}

} // namespace dtsp
