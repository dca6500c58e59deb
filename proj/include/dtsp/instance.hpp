#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace dtsp {

struct City {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
};

// How pairwise distances are derived from coordinates. Rounded is the
// TSPLIB EUC_2D convention (nearest integer); Euclidean keeps exact doubles.
enum class Metric {
    Euclidean,
    RoundedEuclidean,
};

// A static snapshot of the city set with its full symmetric distance matrix.
// Immutable after construction; dynamic changes produce new instances via
// apply_event.
class Instance {
public:
    explicit Instance(std::vector<City> cities, Metric metric = Metric::Euclidean);

    int size() const { return static_cast<int>(cities_.size()); }
    const City& city(int pos) const { return cities_[pos]; }
    const std::vector<City>& cities() const { return cities_; }
    Metric metric() const { return metric_; }

    // Distance between city *positions* (row/column indices), not ids.
    double dist(int pos_a, int pos_b) const { return dist_[pos_a * size() + pos_b]; }

    bool has_city(int id) const { return pos_.count(id) != 0; }
    int position_of(int id) const; // throws InvalidArgumentError on unknown id

private:
    std::vector<City> cities_;
    std::vector<double> dist_; // flat size() x size(), symmetric, zero diagonal
    std::unordered_map<int, int> pos_;
    Metric metric_;
};

// A closed route over the instance's current cities, as stable ids.
struct Tour {
    std::vector<int> order;
    double length = 0.0;
};

enum class EventKind {
    Insert,
    Remove,
    Move,
};

// One mutation of the city set, applied at the start of `at_iteration`.
// Insert uses the whole city; Remove only city.id; Move city.id plus the new
// coordinates in city.x / city.y.
struct DynamicEvent {
    int at_iteration = 1;
    EventKind kind = EventKind::Insert;
    City city;
};

DynamicEvent insert_event(int at_iteration, City c);
DynamicEvent remove_event(int at_iteration, int city_id);
DynamicEvent move_event(int at_iteration, int city_id, double new_x, double new_y);

// Events sorted by at_iteration; ties keep file/list order.
struct EventSchedule {
    std::vector<DynamicEvent> events;
};

// n cities uniform over [0,width) x [0,height), deterministic in the seed.
Instance generate_random_instance(int n, double width, double height, std::uint64_t seed);

// Native plain-text format or the TSPLIB EUC_2D subset (detected from the
// file contents). Errors name the offending line.
Instance load_instance(const std::string& path);

// Lines `iter insert id x y` | `iter remove id` | `iter move id x y`.
EventSchedule load_event_schedule(const std::string& path);

// Replays the schedule against a copy of `base`; throws EventError if any
// event would be invalid at its point of application.
void validate_schedule(const Instance& base, const EventSchedule& schedule);

// Maps a permutation of the current city ids to positions, throwing
// InvalidTourError unless every current city appears exactly once.
std::vector<int> to_positions(const Instance& inst, const std::vector<int>& order);

// Closed-cycle length of a permutation of the current city ids.
double tour_length(const Instance& inst, const std::vector<int>& order);

// Convenience: bundles an order with its computed length.
Tour make_tour(const Instance& inst, std::vector<int> order);

// New instance with the event applied and distances recomputed. Distances
// between untouched city pairs are bit-identical to the input's.
Instance apply_event(const Instance& inst, const DynamicEvent& ev);

// Greedy nearest-unvisited construction from `start_id`; distance ties are
// broken toward the lowest city id, so the result is deterministic.
Tour nearest_neighbor_tour(const Instance& inst, int start_id);

} // namespace dtsp
