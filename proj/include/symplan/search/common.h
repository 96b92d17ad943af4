#ifndef SYMPLAN_SEARCH_COMMON_H
#define SYMPLAN_SEARCH_COMMON_H

#include "symplan/symbolic/space.h"

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace symplan::search {

class SearchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Direction { Forward, Backward, Bidirectional };
Direction parse_direction(const std::string &s);
std::string to_string(Direction d);

// A closed bucket. Several layers may share a g value when zero-cost
// transitions are saturated.
struct Layer {
    dd::Weight g;
    dd::Bdd states;
};
using GLayeredList = std::vector<Layer>;

struct SearchStats {
    size_t expansions = 0;
    size_t expansion_size = 0;  // summed node counts of expanded sets
    double image_time_ms = 0;
    size_t peak_live_nodes = 0;
};

struct SearchResult {
    bool solved = false;
    int64_t cost = 0;
    std::vector<int> plan;
    std::optional<int64_t> utility;
    SearchStats stats;
};

class Stopwatch {
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }
};

void note_peak(const symbolic::SearchSpace &sp, SearchStats &stats);

// Operators leading from the origin of forward layers to state s, which
// lies in layers[idx]. idx < 0 means s is the origin itself.
std::vector<int> trace_back(const symbolic::SearchSpace &sp, const GLayeredList &layers, int idx,
                            const dd::Assignment &s);
// Operators leading from s in layers[idx] of a backward search to its origin.
std::vector<int> trace_forward(const symbolic::SearchSpace &sp, const GLayeredList &layers, int idx,
                               const dd::Assignment &s);

// One direction of a uniform-cost search with g-bucketed open list and
// zero-cost saturation inside a bucket.
class UcsFrontier {
public:
    UcsFrontier(const symbolic::SearchSpace &sp, bool forward, const dd::Bdd &origin,
                std::optional<dd::Weight> bound);

    bool forward() const { return forward_; }
    bool exhausted() const { return open_.empty(); }
    dd::Weight top() const { return open_.begin()->first; }
    size_t frontier_size() const;
    // Closes the states of the cheapest bucket not closed before. Returns
    // the new layer index, or nothing if the bucket held only closed states.
    std::optional<size_t> pop(SearchStats &stats);
    // Successor (or predecessor) sets of layer idx, added to the open list.
    // Returned with their g value and the cost of the generating relation.
    struct Generated {
        dd::Weight g;
        dd::Weight cost;
        dd::Bdd states;
    };
    std::vector<Generated> expand(size_t idx, SearchStats &stats);

    const GLayeredList &closed() const { return closed_; }
    dd::Bdd closed_all() const { return closed_all_; }
    dd::Bdd origin() const { return origin_; }

private:
    const symbolic::SearchSpace &sp_;
    bool forward_;
    dd::Bdd origin_;
    std::optional<dd::Weight> bound_;
    std::map<dd::Weight, dd::Bdd> open_;
    GLayeredList closed_;
    dd::Bdd closed_all_;
};

}  // namespace symplan::search

#endif
