#pragma once

// Seeded random data for property suites: convex PWL functions, event trees,
// polyhedral market instances, claims and weights.

#include <random>
#include <vector>

#include "illiq/builders.hpp"
#include "illiq/market.hpp"

namespace illiq::test {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// p/q with small numerators; lo..hi inclusive at resolution 1/denom
inline Rat random_rat(Rng& rng, int lo, int hi, int denom = 4) {
    return rat(pick(rng, lo * denom, hi * denom), denom);
}

inline Pwl random_pwl(Rng& rng) {
    // breakpoints: distinct half-integers around 0
    const int k = pick(rng, 0, 4);
    std::vector<Rat> breaks;
    std::vector<int> offsets;
    while (static_cast<int>(breaks.size()) < k) {
        const Rat b = random_rat(rng, -4, 4, 2);
        bool dup = false;
        for (const Rat& x : breaks) dup |= x == b;
        if (!dup) breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<Rat> slopes;
    Rat s = random_rat(rng, -4, 2, 4);
    slopes.push_back(s);
    for (int i = 0; i < k; ++i) {
        s += rat(pick(rng, 1, 8), 4);
        slopes.push_back(s);
    }
    ExtReal lo = ExtReal::neg_inf();
    ExtReal hi = ExtReal::pos_inf();
    switch (pick(rng, 0, 5)) {
        case 0:
            lo = ExtReal(std::min(Rat(0), breaks.empty() ? Rat(0) : breaks.front()) - Rat(pick(rng, 0, 3)));
            break;
        case 1:
            hi = ExtReal(std::max(Rat(0), breaks.empty() ? Rat(0) : breaks.back()) + Rat(pick(rng, 0, 3)));
            break;
        case 2:
            lo = ExtReal(std::min(Rat(0), breaks.empty() ? Rat(0) : breaks.front()) - Rat(pick(rng, 1, 3)));
            hi = ExtReal(std::max(Rat(0), breaks.empty() ? Rat(0) : breaks.back()) + Rat(pick(rng, 1, 3)));
            break;
        default:
            break;  // full line
    }
    return Pwl(lo, hi, std::move(breaks), std::move(slopes), Rat(0), Rat(0));
}

// weights 1..4 per child, probabilities normalized against the parent
inline EventTree random_tree(Rng& rng, int max_periods, int max_children, int node_cap = 12) {
    std::vector<EventTree::Node> nodes;
    nodes.push_back({0, -1, 0, Rat(1), {}});
    std::vector<int> frontier{0};
    const int periods = pick(rng, 1, max_periods);
    for (int t = 1; t <= periods; ++t) {
        std::vector<int> next;
        for (int p : frontier) {
            int kids = pick(rng, 1, max_children);
            while (static_cast<int>(nodes.size()) + kids > node_cap && kids > 1) --kids;
            std::vector<int> w(static_cast<size_t>(kids));
            int total = 0;
            for (int& x : w) {
                x = pick(rng, 1, 4);
                total += x;
            }
            for (int i = 0; i < kids; ++i) {
                const int id = static_cast<int>(nodes.size());
                nodes.push_back({id, p, t, nodes[static_cast<size_t>(p)].prob * rat(w[static_cast<size_t>(i)], total), {}});
                next.push_back(id);
            }
        }
        frontier = std::move(next);
    }
    return EventTree(std::move(nodes));
}

struct InstanceConfig {
    int max_periods = 3;
    int max_assets = 2;
    int node_cap = 12;
    bool allow_books = true;        // bounded order books (not finite-valued)
    bool allow_constraints = true;  // boxes, cones, halfspaces
    bool ensure_sprime_finite = true;
    bool ensure_finite_valued = false;  // full-domain costs only
    bool sublinear_only = false;        // bid-ask / set-valued / linear, conical constraints
};

inline Pwl random_asset_cost(Rng& rng, const InstanceConfig& cfg) {
    const int kind = pick(rng, 0, cfg.sublinear_only ? 1 : (cfg.allow_books && !cfg.ensure_finite_valued ? 3 : 2));
    const Rat price = random_rat(rng, 1, 4, 2);  // >= 1/2
    switch (kind) {
        case 0:
            return Pwl::linear(price);
        case 1: {
            const Rat spread = rat(pick(rng, 0, 2), 4);
            return Pwl::two_slope(price, price + spread);
        }
        case 2: {
            // convex full-domain pwl: bid-ask with outer impact slopes
            const Rat spread = rat(pick(rng, 1, 2), 4);
            const Rat depth = Rat(pick(rng, 1, 3));
            return Pwl(ExtReal::neg_inf(), ExtReal::pos_inf(), {-depth, Rat(0), depth},
                       {price - spread, price, price + spread, price + 2 * spread}, Rat(0), Rat(0));
        }
        default: {
            // bounded two-level order book straddling the price
            OrderBookSide bid, ask;
            const Rat tick = rat(1, 4);
            bid.levels.push_back({price, ExtReal(Rat(pick(rng, 1, 4)))});
            bid.levels.push_back({price - tick, ExtReal(Rat(pick(rng, 1, 4)))});
            ask.levels.push_back({price + tick, ExtReal(Rat(pick(rng, 1, 4)))});
            ask.levels.push_back({price + 2 * tick, ExtReal(Rat(pick(rng, 1, 4)))});
            return order_book_cost(bid, ask);
        }
    }
}

inline PolyhedralSet random_constraint(Rng& rng, int J, const InstanceConfig& cfg) {
    if (!cfg.allow_constraints) return PolyhedralSet::whole_space(J);
    const int kind = pick(rng, 0, cfg.sublinear_only ? 1 : 3);
    std::vector<PolyhedralSet::Row> rows;
    switch (kind) {
        case 0:
            return PolyhedralSet::whole_space(J);
        case 1:  // orthant-style cone: a few nonnegativity rows
            for (int j = 0; j < J; ++j) {
                if (pick(rng, 0, 1) == 0) continue;
                Vec a(static_cast<size_t>(J), Rat(0));
                a[static_cast<size_t>(j)] = -1;
                rows.push_back({std::move(a), Rat(0)});
            }
            return PolyhedralSet(J, std::move(rows));
        case 2: {  // box
            const Rat bound = Rat(pick(rng, 1, 4));
            for (int j = 0; j < J; ++j) {
                Vec a(static_cast<size_t>(J), Rat(0));
                a[static_cast<size_t>(j)] = 1;
                rows.push_back({a, bound});
                a[static_cast<size_t>(j)] = -1;
                rows.push_back({std::move(a), bound});
            }
            return PolyhedralSet(J, std::move(rows));
        }
        default: {  // one random halfspace through (or above) the origin
            Vec a(static_cast<size_t>(J), Rat(0));
            for (int j = 0; j < J; ++j) a[static_cast<size_t>(j)] = random_rat(rng, -2, 2, 1);
            rows.push_back({std::move(a), Rat(pick(rng, 0, 2))});
            return PolyhedralSet(J, std::move(rows));
        }
    }
}

inline MarketInstance random_polyhedral_instance(Rng& rng, const InstanceConfig& cfg = InstanceConfig()) {
    const EventTree tree = random_tree(rng, cfg.max_periods, 2, cfg.node_cap);
    const int J = pick(rng, 1, cfg.max_assets);
    std::vector<CostFunction> costs;
    std::vector<PolyhedralSet> sets;
    for (int id = 0; id < tree.num_nodes(); ++id) {
        if (!cfg.sublinear_only && J >= 2 && pick(rng, 0, 5) == 0) {
            // occasional non-separable node: two price scenarios
            std::vector<Vec> vertices;
            for (int k = 0; k < 2; ++k) {
                Vec z;
                for (int j = 0; j < J; ++j) z.push_back(random_rat(rng, 1, 3, 2));
                vertices.push_back(std::move(z));
            }
            costs.emplace_back(set_valued_cost(vertices));
        } else {
            SeparableCost cost;
            for (int j = 0; j < J; ++j) cost.per_asset.push_back(random_asset_cost(rng, cfg));
            costs.emplace_back(std::move(cost));
        }
        sets.push_back(random_constraint(rng, J, cfg));
    }
    return MarketInstance(tree, J, std::move(costs), std::move(sets));
}

inline ScalarProcess random_claim(Rng& rng, const EventTree& tree, int lo = -2, int hi = 2) {
    ScalarProcess c(static_cast<size_t>(tree.num_nodes()));
    for (Rat& x : c) x = random_rat(rng, lo, hi, 4);
    return c;
}

inline ScalarProcess random_weights(Rng& rng, const EventTree& tree) {
    ScalarProcess y(static_cast<size_t>(tree.num_nodes()));
    for (Rat& x : y) x = pick(rng, 0, 4) == 0 ? Rat(0) : rat(pick(rng, 1, 8), 4);
    return y;
}

}  // namespace illiq::test
