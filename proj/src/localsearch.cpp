#include "dtsp/localsearch.hpp"

#include <algorithm>
#include <string>

#include "dtsp/error.hpp"

namespace dtsp {

namespace {

constexpr double kImprovementThreshold = -1e-9;

// Length change from reversing positions[i+1 .. j]: only the two cut edges
// change, the reversed segment's internal edges are symmetric.
double move_delta(const Instance& inst, const std::vector<int>& positions, int i, int j) {
    const int n = static_cast<int>(positions.size());
    const int a = positions[i];
    const int b = positions[i + 1];
    const int c = positions[j];
    const int d = positions[(j + 1) % n];
    return inst.dist(a, c) + inst.dist(b, d) - inst.dist(a, b) - inst.dist(c, d);
}

std::optional<ReconnectMove> best_move(const Instance& inst,
                                       const std::vector<int>& positions) {
    const int n = static_cast<int>(positions.size());
    if (n < 4) return std::nullopt;
    ReconnectMove best;
    bool found = false;
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue; // full reversal, same cycle
            const double delta = move_delta(inst, positions, i, j);
            // Strict < keeps the lexicographically smallest (i, j) on ties.
            if (delta < kImprovementThreshold && (!found || delta < best.delta)) {
                best = ReconnectMove{i, j, delta};
                found = true;
            }
        }
    }
    if (!found) return std::nullopt;
    return best;
}

} // namespace

Tour apply_2opt_move(const Tour& tour, const ReconnectMove& move, const Instance& inst) {
    const int n = static_cast<int>(tour.order.size());
    if (move.i < 0 || move.j <= move.i || move.j >= n) {
        throw InvalidArgumentError("2-opt move (" + std::to_string(move.i) + ", " +
                                   std::to_string(move.j) + ") invalid for tour of size " +
                                   std::to_string(n));
    }
    const std::vector<int> positions = to_positions(inst, tour.order);
    // Single-element and full-segment reversals keep the same cycle.
    const bool identity = move.j == move.i + 1 || (move.i == 0 && move.j == n - 1);
    const double delta = identity ? 0.0 : move_delta(inst, positions, move.i, move.j);
    Tour result;
    result.order = tour.order;
    std::reverse(result.order.begin() + move.i + 1, result.order.begin() + move.j + 1);
    result.length = tour.length + delta;
    return result;
}

std::optional<ReconnectMove> best_reconnection(const Instance& inst, const Tour& tour) {
    return best_move(inst, to_positions(inst, tour.order));
}

Tour steepest_descent_improve(const Instance& inst, const Tour& tour, int max_rounds) {
    std::vector<int> positions = to_positions(inst, tour.order);
    double length = tour.length;
    for (int round = 0; round < max_rounds; ++round) {
        const auto move = best_move(inst, positions);
        if (!move) break;
        std::reverse(positions.begin() + move->i + 1, positions.begin() + move->j + 1);
        length += move->delta;
    }
    Tour result;
    result.order.reserve(positions.size());
    for (int pos : positions) {
        result.order.push_back(inst.city(pos).id);
    }
    result.length = length;
    return result;
}

Tour steepest_descent_improve(const Instance& inst, const Tour& tour) {
    return steepest_descent_improve(inst, tour, 10 * inst.size());
}

} // namespace dtsp
