#include "illiq/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace illiq {

EventTree::EventTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id != static_cast<int>(i))
            throw std::invalid_argument("tree: node ids must be 0..n-1 in order");
        nodes_[i].children.clear();
    }
    for (const Node& n : nodes_) {
        if (n.parent >= 0) {
            if (n.parent >= n.id) throw std::invalid_argument("tree: parent must precede child");
            nodes_[static_cast<size_t>(n.parent)].children.push_back(n.id);
        }
        horizon_ = std::max(horizon_, n.time);
    }
    validate();
}

void EventTree::validate() const {
    if (nodes_.empty()) throw std::invalid_argument("tree: empty");
    if (nodes_[0].parent != -1 || nodes_[0].time != 0)
        throw std::invalid_argument("tree: node 0 must be the root at time 0");
    if (nodes_[0].prob != 1) throw std::invalid_argument("tree: root probability must be 1");
    for (const Node& n : nodes_) {
        if (n.prob <= 0) throw std::invalid_argument("tree: node probabilities must be positive");
        if (n.id != 0) {
            if (n.parent < 0) throw std::invalid_argument("tree: multiple roots");
            if (n.time != nodes_[static_cast<size_t>(n.parent)].time + 1)
                throw std::invalid_argument("tree: child time must be parent time + 1");
        }
        if (n.children.empty()) {
            if (n.time != horizon_) throw std::invalid_argument("tree: all leaves must sit at the horizon");
        } else {
            Rat total(0);
            for (int c : n.children) total += nodes_[static_cast<size_t>(c)].prob;
            if (total != n.prob)
                throw std::invalid_argument("tree: children probabilities must sum to the parent's");
        }
    }
}

std::vector<int> EventTree::nodes_at_time(int t) const {
    std::vector<int> out;
    for (const Node& n : nodes_)
        if (n.time == t) out.push_back(n.id);
    return out;
}

std::vector<int> EventTree::path_from_root(int id) const {
    std::vector<int> path;
    for (int cur = id; cur >= 0; cur = node(cur).parent) path.push_back(cur);
    std::reverse(path.begin(), path.end());
    return path;
}

Rat cond_expectation(const EventTree& tree, const ScalarProcess& proc, int node) {
    if (tree.is_leaf(node)) throw std::invalid_argument("cond_expectation: leaf node");
    Rat acc(0);
    for (int c : tree.children(node)) acc += tree.prob(c) * proc[static_cast<size_t>(c)];
    return acc / tree.prob(node);
}

Vec cond_expectation(const EventTree& tree, const VectorProcess& proc, int node) {
    if (tree.is_leaf(node)) throw std::invalid_argument("cond_expectation: leaf node");
    const size_t dim = proc[static_cast<size_t>(tree.children(node).front())].size();
    Vec acc(dim, Rat(0));
    for (int c : tree.children(node)) {
        const Vec& v = proc[static_cast<size_t>(c)];
        if (v.size() != dim) throw std::invalid_argument("cond_expectation: dimension mismatch");
        for (size_t j = 0; j < dim; ++j) acc[j] += tree.prob(c) * v[j];
    }
    const Rat& pn = tree.prob(node);
    for (Rat& x : acc) x /= pn;
    return acc;
}

}  // namespace illiq
