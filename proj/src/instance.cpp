#include "dtsp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "dtsp/error.hpp"
#include "dtsp/rng.hpp"

namespace dtsp {

namespace {

double metric_distance(const City& a, const City& b, Metric metric) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (metric == Metric::RoundedEuclidean) {
        return std::floor(d + 0.5); // TSPLIB nint
    }
    return d;
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void format_fail(const std::string& path, int line, const std::string& what) {
    throw FormatError(path + ":" + std::to_string(line) + ": " + what);
}

} // namespace

Instance::Instance(std::vector<City> cities, Metric metric)
    : cities_(std::move(cities)), metric_(metric) {
    const int n = static_cast<int>(cities_.size());
    if (n < 3) {
        throw InvalidInstanceError("instance needs at least 3 cities, got " +
                                   std::to_string(n));
    }
    pos_.reserve(cities_.size());
    for (int i = 0; i < n; ++i) {
        const City& c = cities_[i];
        if (!std::isfinite(c.x) || !std::isfinite(c.y)) {
            throw InvalidInstanceError("non-finite coordinates for city id " +
                                       std::to_string(c.id));
        }
        if (!pos_.emplace(c.id, i).second) {
            throw InvalidInstanceError("duplicate city id " + std::to_string(c.id));
        }
    }
    dist_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = metric_distance(cities_[i], cities_[j], metric_);
            dist_[static_cast<std::size_t>(i) * n + j] = d;
            dist_[static_cast<std::size_t>(j) * n + i] = d;
        }
        // Coincident cities would break the positive-distance invariant and
        // the 1/d visibility term downstream.
        for (int j = 0; j < i; ++j) {
            if (cities_[i].x == cities_[j].x && cities_[i].y == cities_[j].y) {
                throw InvalidInstanceError(
                    "cities " + std::to_string(cities_[j].id) + " and " +
                    std::to_string(cities_[i].id) + " share coordinates");
            }
        }
    }
}

int Instance::position_of(int id) const {
    const auto it = pos_.find(id);
    if (it == pos_.end()) {
        throw InvalidArgumentError("unknown city id " + std::to_string(id));
    }
    return it->second;
}

DynamicEvent insert_event(int at_iteration, City c) {
    return DynamicEvent{at_iteration, EventKind::Insert, c};
}

DynamicEvent remove_event(int at_iteration, int city_id) {
    return DynamicEvent{at_iteration, EventKind::Remove, City{city_id, 0.0, 0.0}};
}

DynamicEvent move_event(int at_iteration, int city_id, double new_x, double new_y) {
    return DynamicEvent{at_iteration, EventKind::Move, City{city_id, new_x, new_y}};
}

Instance generate_random_instance(int n, double width, double height, std::uint64_t seed) {
    if (n < 3) {
        throw InvalidInstanceError("instance needs at least 3 cities, got " +
                                   std::to_string(n));
    }
    if (!(width > 0.0) || !(height > 0.0)) {
        throw InvalidInstanceError("bounding box dimensions must be positive");
    }
    auto rng = make_stream(seed, StreamTag::InstanceCoords);
    std::uniform_real_distribution<double> ux(0.0, width);
    std::uniform_real_distribution<double> uy(0.0, height);
    std::vector<City> cities;
    cities.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        cities.push_back(City{i, x, y});
    }
    return Instance(std::move(cities));
}

namespace {

Instance load_native(const std::string& path, std::ifstream& in) {
    std::string line;
    int line_no = 0;
    long n = -1;
    std::vector<City> cities;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        if (n < 0) {
            if (!(ls >> n) || n < 3) {
                format_fail(path, line_no, "expected city count >= 3");
            }
            continue;
        }
        City c;
        if (!(ls >> c.id >> c.x >> c.y)) {
            format_fail(path, line_no, "expected `id x y`");
        }
        cities.push_back(c);
    }
    if (n < 0) throw FormatError(path + ": empty instance file");
    if (static_cast<long>(cities.size()) != n) {
        throw FormatError(path + ": declared " + std::to_string(n) + " cities, found " +
                          std::to_string(cities.size()));
    }
    return Instance(std::move(cities), Metric::Euclidean);
}

Instance load_tsplib(const std::string& path, std::ifstream& in) {
    std::string line;
    int line_no = 0;
    long dimension = -1;
    bool euc2d = false;
    bool in_coords = false;
    std::vector<City> cities;
    while (std::getline(in, line)) {
        ++line_no;
        line = trimmed(line);
        if (line.empty()) continue;
        if (!in_coords) {
            std::string key = line;
            std::string value;
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                key = trimmed(line.substr(0, colon));
                value = trimmed(line.substr(colon + 1));
            }
            if (key == "NODE_COORD_SECTION") {
                in_coords = true;
            } else if (key == "DIMENSION") {
                dimension = std::strtol(value.c_str(), nullptr, 10);
            } else if (key == "TYPE") {
                if (value != "TSP") format_fail(path, line_no, "unsupported TYPE " + value);
            } else if (key == "EDGE_WEIGHT_TYPE") {
                if (value != "EUC_2D") {
                    format_fail(path, line_no, "unsupported EDGE_WEIGHT_TYPE " + value);
                }
                euc2d = true;
            }
            // NAME, COMMENT and other headers are ignored.
            continue;
        }
        if (line == "EOF") break;
        City c;
        std::istringstream ls(line);
        if (!(ls >> c.id >> c.x >> c.y)) {
            format_fail(path, line_no, "expected `id x y` in NODE_COORD_SECTION");
        }
        cities.push_back(c);
    }
    if (!euc2d) throw FormatError(path + ": missing EDGE_WEIGHT_TYPE: EUC_2D");
    if (!in_coords) throw FormatError(path + ": missing NODE_COORD_SECTION");
    if (dimension >= 0 && static_cast<long>(cities.size()) != dimension) {
        throw FormatError(path + ": DIMENSION " + std::to_string(dimension) +
                          " does not match " + std::to_string(cities.size()) + " nodes");
    }
    return Instance(std::move(cities), Metric::RoundedEuclidean);
}

} // namespace

Instance load_instance(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw FileError("cannot open instance file " + path);
    // Native files start with a bare count; anything with TSPLIB headers is
    // parsed as the EUC_2D subset.
    bool tsplib = false;
    std::string line;
    while (std::getline(probe, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        char* end = nullptr;
        std::strtol(line.c_str(), &end, 10);
        tsplib = (end == nullptr || *end != '\0');
        break;
    }
    std::ifstream in(path);
    return tsplib ? load_tsplib(path, in) : load_native(path, in);
}

EventSchedule load_event_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open event schedule " + path);
    EventSchedule schedule;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        int iter = 0;
        std::string kind;
        if (!(ls >> iter >> kind) || iter < 1) {
            format_fail(path, line_no, "expected `iter insert|remove|move ...` with iter >= 1");
        }
        if (kind == "insert") {
            City c;
            if (!(ls >> c.id >> c.x >> c.y)) format_fail(path, line_no, "expected `iter insert id x y`");
            schedule.events.push_back(insert_event(iter, c));
        } else if (kind == "remove") {
            int id = 0;
            if (!(ls >> id)) format_fail(path, line_no, "expected `iter remove id`");
            schedule.events.push_back(remove_event(iter, id));
        } else if (kind == "move") {
            int id = 0;
            double x = 0.0, y = 0.0;
            if (!(ls >> id >> x >> y)) format_fail(path, line_no, "expected `iter move id x y`");
            schedule.events.push_back(move_event(iter, id, x, y));
        } else {
            format_fail(path, line_no, "unknown event kind `" + kind + "`");
        }
    }
    std::stable_sort(schedule.events.begin(), schedule.events.end(),
                     [](const DynamicEvent& a, const DynamicEvent& b) {
                         return a.at_iteration < b.at_iteration;
                     });
    return schedule;
}

void validate_schedule(const Instance& base, const EventSchedule& schedule) {
    Instance current = base;
    int prev_iter = 1;
    for (std::size_t i = 0; i < schedule.events.size(); ++i) {
        const DynamicEvent& ev = schedule.events[i];
        if (ev.at_iteration < 1) {
            throw EventError("event " + std::to_string(i + 1) +
                             " has at_iteration < 1");
        }
        if (ev.at_iteration < prev_iter) {
            throw EventError("events are not sorted by at_iteration");
        }
        prev_iter = ev.at_iteration;
        try {
            current = apply_event(current, ev);
        } catch (const Error& e) {
            throw EventError("event " + std::to_string(i + 1) + " (iteration " +
                             std::to_string(ev.at_iteration) + ") is invalid: " + e.what());
        }
    }
}

std::vector<int> to_positions(const Instance& inst, const std::vector<int>& order) {
    const int n = inst.size();
    if (static_cast<int>(order.size()) != n) {
        throw InvalidTourError("tour visits " + std::to_string(order.size()) +
                               " cities, instance has " + std::to_string(n));
    }
    std::vector<int> positions(n);
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
        int pos;
        try {
            pos = inst.position_of(order[i]);
        } catch (const InvalidArgumentError& e) {
            throw InvalidTourError(e.what());
        }
        if (seen[pos]) {
            throw InvalidTourError("city id " + std::to_string(order[i]) +
                                   " visited twice");
        }
        seen[pos] = 1;
        positions[i] = pos;
    }
    return positions;
}

double tour_length(const Instance& inst, const std::vector<int>& order) {
    const std::vector<int> positions = to_positions(inst, order);
    const int n = inst.size();
    double total = 0.0;
    for (int i = 1; i < n; ++i) {
        total += inst.dist(positions[i - 1], positions[i]);
    }
    total += inst.dist(positions[n - 1], positions[0]);
    return total;
}

Tour make_tour(const Instance& inst, std::vector<int> order) {
    Tour t;
    t.length = tour_length(inst, order);
    t.order = std::move(order);
    return t;
}

Instance apply_event(const Instance& inst, const DynamicEvent& ev) {
    std::vector<City> cities = inst.cities();
    switch (ev.kind) {
    case EventKind::Insert:
        if (inst.has_city(ev.city.id)) {
            throw EventError("insert: city id " + std::to_string(ev.city.id) +
                             " already present");
        }
        cities.push_back(ev.city);
        break;
    case EventKind::Remove: {
        if (!inst.has_city(ev.city.id)) {
            throw EventError("remove: unknown city id " + std::to_string(ev.city.id));
        }
        if (inst.size() <= 3) {
            throw EventError("remove: instance would shrink below 3 cities");
        }
        cities.erase(cities.begin() + inst.position_of(ev.city.id));
        break;
    }
    case EventKind::Move: {
        if (!inst.has_city(ev.city.id)) {
            throw EventError("move: unknown city id " + std::to_string(ev.city.id));
        }
        City& c = cities[inst.position_of(ev.city.id)];
        c.x = ev.city.x;
        c.y = ev.city.y;
        break;
    }
    }
    try {
        return Instance(std::move(cities), inst.metric());
    } catch (const InvalidInstanceError& e) {
        throw EventError(std::string("event produces invalid instance: ") + e.what());
    }
}

Tour nearest_neighbor_tour(const Instance& inst, int start_id) {
    const int n = inst.size();
    const int start = inst.position_of(start_id);
    std::vector<char> visited(n, 0);
    std::vector<int> order;
    order.reserve(n);
    int current = start;
    visited[current] = 1;
    order.push_back(inst.city(current).id);
    double total = 0.0;
    for (int step = 1; step < n; ++step) {
        int next = -1;
        double best = 0.0;
        for (int j = 0; j < n; ++j) {
            if (visited[j]) continue;
            const double d = inst.dist(current, j);
            if (next < 0 || d < best ||
                (d == best && inst.city(j).id < inst.city(next).id)) {
                next = j;
                best = d;
            }
        }
        visited[next] = 1;
        order.push_back(inst.city(next).id);
        total += best;
        current = next;
    }
    total += inst.dist(current, start);
    Tour t;
    t.order = std::move(order);
    t.length = total;
    return t;
}

} // namespace dtsp
