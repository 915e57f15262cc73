#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "illiq/market.hpp"

namespace illiq {

// One side of a limit order book: (price level, depth) pairs, ask prices
// nondecreasing, bid prices nonincreasing, depths positive. The final depth
// may be infinite (unbounded liquidity at the last level).
struct OrderBookSide {
    struct Level {
        Rat price;
        ExtReal depth;  // > 0; +inf allowed on the last level only
    };
    std::vector<Level> levels;

    bool empty() const { return levels.empty(); }
};

// Frictionless market: f(x) = s x per asset (possibly negative prices).
SeparableCost linear_cost(const Vec& prices);

// Bid-ask spreads: two-slope sublinear per asset; subdifferential at 0 is
// [bid, ask]. bid == ask recovers linear_cost.
SeparableCost bid_ask_cost(const Vec& bid, const Vec& ask);

// Total cost of a single-asset book: integral of the piecewise-constant
// marginal price. Buying stops at the total supply (domain bound); selling
// past the total demand earns nothing (zero slope).
Pwl order_book_cost(const OrderBookSide& bid, const OrderBookSide& ask);

// f_j(x) = s_j * phi_j(x), nonnegative prices scaling a convex profile.
SeparableCost scaled_convex_cost(const Vec& prices, const std::vector<Pwl>& phi);

// f_j(x) = phi_j(s_j x): illiquidity charged on the pretrade market value.
SeparableCost market_value_cost(const Vec& prices, const std::vector<Pwl>& phi);

// S(x) = max over price scenarios z of z . x.
MaxOfLinearCost set_valued_cost(const std::vector<Vec>& vertices);

// Fixed closed convex constraint set K (0 feasible).
PolyhedralSet fixed_constraint(int dim, std::vector<PolyhedralSet::Row> rows);
// D = {x : M x in K}: rows of K composed with M.
PolyhedralSet matrix_constraint(const std::vector<Vec>& M, const PolyhedralSet& K);

// CSV rows `side,price,depth` (side in {bid, ask}), exact decimal parsing;
// depth `inf` allowed on the last row of a side. Throws on crossed books or
// malformed rows, with 1-based line numbers in the message.
std::pair<OrderBookSide, OrderBookSide> parse_order_book_csv(std::istream& in);
std::pair<OrderBookSide, OrderBookSide> load_order_book_csv(const std::string& path);

}  // namespace illiq
