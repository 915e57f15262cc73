#pragma once

// Named instances used across the suites.

#include "illiq/builders.hpp"
#include "illiq/market.hpp"

namespace illiq::test {

inline EventTree path_tree(int periods) {
    std::vector<EventTree::Node> nodes;
    for (int t = 0; t <= periods; ++t) nodes.push_back({t, t - 1, t, Rat(1), {}});
    return EventTree(std::move(nodes));
}

// I1: deterministic two dates, one risky asset only, linear prices 1 then 2,
// unconstrained. No arbitrage (cash cannot be parked), market deflator
// y = (1, 1/2).
inline MarketInstance instance_I1() {
    EventTree tree = path_tree(1);
    std::vector<CostFunction> costs{linear_cost({Rat(1)}), linear_cost({Rat(2)})};
    std::vector<PolyhedralSet> sets{PolyhedralSet::whole_space(1), PolyhedralSet::whole_space(1)};
    return MarketInstance(std::move(tree), 1, std::move(costs), std::move(sets));
}

// I2 = I1 plus a constant cash account; buying the risky asset with borrowed
// cash is an arbitrage.
inline MarketInstance instance_I2() {
    EventTree tree = path_tree(1);
    std::vector<CostFunction> costs{linear_cost({Rat(1), Rat(1)}), linear_cost({Rat(1), Rat(2)})};
    std::vector<PolyhedralSet> sets{PolyhedralSet::whole_space(2), PolyhedralSet::whole_space(2)};
    return MarketInstance(std::move(tree), 2, std::move(costs), std::move(sets));
}

// Two dates, one asset, S_0(x) = x, S_1(x) = e^x - 1, unconstrained: the
// claim set is { e^{c0} - 1 + c1 <= 0 }, whose positive hull is not closed.
inline MarketInstance instance_tangent() {
    EventTree tree = path_tree(1);
    std::vector<CostFunction> costs{linear_cost({Rat(1)}),
                                    ExponentialCost{Rat(1), Rat(1), /*with_cash=*/false}};
    std::vector<PolyhedralSet> sets{PolyhedralSet::whole_space(1), PolyhedralSet::whole_space(1)};
    return MarketInstance(std::move(tree), 1, std::move(costs), std::move(sets));
}

// Binomial tree of the given depth with multiplicative risky price moves.
inline EventTree binomial_tree(int periods) {
    std::vector<EventTree::Node> nodes;
    nodes.push_back({0, -1, 0, Rat(1), {}});
    std::vector<int> frontier{0};
    for (int t = 1; t <= periods; ++t) {
        std::vector<int> next;
        for (int p : frontier) {
            for (int k = 0; k < 2; ++k) {
                const int id = static_cast<int>(nodes.size());
                nodes.push_back({id, p, t, nodes[static_cast<size_t>(p)].prob / 2, {}});
                next.push_back(id);
            }
        }
        frontier = std::move(next);
    }
    return EventTree(std::move(nodes));
}

// Price process on a binomial tree: root value 1, children scale by up/down.
inline ScalarProcess binomial_prices(const EventTree& tree, const Rat& up, const Rat& down) {
    ScalarProcess s(static_cast<size_t>(tree.num_nodes()));
    s[0] = Rat(1);
    for (int id = 1; id < tree.num_nodes(); ++id) {
        const int p = tree.parent(id);
        const bool first = tree.children(p).front() == id;
        s[static_cast<size_t>(id)] = s[static_cast<size_t>(p)] * (first ? up : down);
    }
    return s;
}

// Cash + exponential risky cost on a binomial tree (the smooth illiquidity
// example). up/down control whether a positive martingale density exists.
inline MarketInstance instance_exp_binomial(int periods, const Rat& up, const Rat& down,
                                            const Rat& alpha = Rat(1)) {
    EventTree tree = binomial_tree(periods);
    const ScalarProcess sbar = binomial_prices(tree, up, down);
    std::vector<CostFunction> costs;
    std::vector<PolyhedralSet> sets;
    for (int id = 0; id < tree.num_nodes(); ++id) {
        costs.emplace_back(ExponentialCost{sbar[static_cast<size_t>(id)], alpha, /*with_cash=*/true});
        sets.push_back(PolyhedralSet::whole_space(2));
    }
    return MarketInstance(std::move(tree), 2, std::move(costs), std::move(sets));
}

// One-sided limit order book (ask only): selling is impossible, 0 sits on the
// boundary of the cost domain, so the marginal model is not finite-valued.
inline MarketInstance instance_one_sided_book() {
    EventTree tree = path_tree(1);
    OrderBookSide empty;
    OrderBookSide ask0, ask1;
    ask0.levels.push_back({Rat(10), ExtReal(Rat(5))});
    ask0.levels.push_back({Rat(12), ExtReal(Rat(5))});
    ask1.levels.push_back({Rat(11), ExtReal(Rat(5))});
    std::vector<CostFunction> costs{SeparableCost{{order_book_cost(empty, ask0)}},
                                    SeparableCost{{order_book_cost(empty, ask1)}}};
    std::vector<PolyhedralSet> sets{PolyhedralSet::whole_space(1), PolyhedralSet::whole_space(1)};
    return MarketInstance(std::move(tree), 1, std::move(costs), std::move(sets));
}

// Unit-box constraints everywhere: D_inf = {0} kills scalable arbitrage.
inline MarketInstance instance_boxed_linear() {
    EventTree tree = path_tree(1);
    std::vector<PolyhedralSet::Row> rows{{{Rat(1)}, Rat(1)}, {{Rat(-1)}, Rat(1)}};
    std::vector<CostFunction> costs{linear_cost({Rat(1)}), linear_cost({Rat(2)})};
    std::vector<PolyhedralSet> sets{PolyhedralSet(1, rows), PolyhedralSet(1, rows)};
    return MarketInstance(std::move(tree), 1, std::move(costs), std::move(sets));
}

}  // namespace illiq::test
