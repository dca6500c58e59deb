#pragma once

#include <optional>

#include "dtsp/instance.hpp"

namespace dtsp {

// A 2-opt reconnection: remove edges (order[i], order[i+1]) and
// (order[j], order[j+1 mod n]), reconnect by reversing order[i+1 .. j].
// delta is the resulting length change; negative means improvement.
struct ReconnectMove {
    int i = 0;
    int j = 0;
    double delta = 0.0;
};

// Applies the reversal; the returned tour's length is the input length plus
// the move's delta.
Tour apply_2opt_move(const Tour& tour, const ReconnectMove& move, const Instance& inst);

// Scans all O(n^2) reconnections and returns the steepest strictly improving
// move (delta < -1e-9), ties broken by smallest (i, j). nullopt when the
// tour is 2-opt locally minimal or has fewer than 4 cities.
std::optional<ReconnectMove> best_reconnection(const Instance& inst, const Tour& tour);

// Repeats best_reconnection + apply until no improving move remains or
// max_rounds is hit. Length never increases. The two-argument overload caps
// at 10 * n rounds.
Tour steepest_descent_improve(const Instance& inst, const Tour& tour, int max_rounds);
Tour steepest_descent_improve(const Instance& inst, const Tour& tour);

} // namespace dtsp
