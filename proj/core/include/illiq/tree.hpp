#pragma once

#include <vector>

#include "illiq/polyhedra.hpp"

namespace illiq {

// Finite filtered probability space as an explicit event tree: one root at
// time 0, all leaves at the horizon, node probabilities are unconditional and
// children sum exactly to their parent. No recombination; adaptedness is
// indexing by node.
class EventTree {
  public:
    struct Node {
        int id = 0;
        int parent = -1;  // -1 for the root
        int time = 0;
        Rat prob;
        std::vector<int> children;
    };

    EventTree(std::vector<Node> nodes);

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    int horizon() const { return horizon_; }
    int root() const { return 0; }
    const Node& node(int id) const { return nodes_[static_cast<size_t>(id)]; }
    const std::vector<Node>& nodes() const { return nodes_; }

    bool is_leaf(int id) const { return node(id).children.empty(); }
    int parent(int id) const { return node(id).parent; }
    const std::vector<int>& children(int id) const { return node(id).children; }
    const Rat& prob(int id) const { return node(id).prob; }
    int time(int id) const { return node(id).time; }

    std::vector<int> nodes_at_time(int t) const;
    std::vector<int> leaves() const { return nodes_at_time(horizon_); }
    // node ids from the root to id, inclusive
    std::vector<int> path_from_root(int id) const;

  private:
    std::vector<Node> nodes_;
    int horizon_ = 0;

    void validate() const;
};

// Adapted processes are node-indexed values.
using ScalarProcess = std::vector<Rat>;            // one Rat per node
using VectorProcess = std::vector<Vec>;            // one R^J vector per node

// E[proc_{t+1} | F_t] at a non-terminal node: children weighted by p_m / p_n.
Rat cond_expectation(const EventTree& tree, const ScalarProcess& proc, int node);
Vec cond_expectation(const EventTree& tree, const VectorProcess& proc, int node);

}  // namespace illiq
