#include "illiq/builders.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace illiq {

SeparableCost linear_cost(const Vec& prices) {
    SeparableCost out;
    for (const Rat& s : prices) out.per_asset.push_back(Pwl::linear(s));
    return out;
}

SeparableCost bid_ask_cost(const Vec& bid, const Vec& ask) {
    if (bid.size() != ask.size()) throw std::invalid_argument("bid_ask: dimension mismatch");
    SeparableCost out;
    for (size_t j = 0; j < bid.size(); ++j) {
        if (bid[j] > ask[j]) throw std::invalid_argument("bid_ask: crossed quotes");
        out.per_asset.push_back(Pwl::two_slope(bid[j], ask[j]));
    }
    return out;
}

namespace {

void validate_side(const OrderBookSide& side, bool ask) {
    for (size_t i = 0; i < side.levels.size(); ++i) {
        const auto& lvl = side.levels[i];
        if (lvl.price < 0) throw std::invalid_argument("order book: negative price level");
        if (!(lvl.depth > ExtReal(Rat(0)))) throw std::invalid_argument("order book: nonpositive depth");
        if (lvl.depth.is_pos_inf() && i + 1 != side.levels.size())
            throw std::invalid_argument("order book: infinite depth only on the last level");
        if (i > 0) {
            const Rat& prev = side.levels[i - 1].price;
            if (ask ? lvl.price < prev : lvl.price > prev)
                throw std::invalid_argument(ask ? "order book: ask prices must be nondecreasing"
                                                : "order book: bid prices must be nonincreasing");
        }
    }
}

}  // namespace

Pwl order_book_cost(const OrderBookSide& bid, const OrderBookSide& ask) {
    validate_side(bid, false);
    validate_side(ask, true);
    if (!bid.empty() && !ask.empty() && bid.levels.front().price > ask.levels.front().price)
        throw std::invalid_argument("order book: crossed (best bid above best ask)");
    if (bid.empty() && ask.empty()) return Pwl::point(Rat(0), Rat(0));

    std::vector<Rat> breaks;
    std::vector<Rat> slopes;
    ExtReal lo = ExtReal(Rat(0));
    ExtReal hi = ExtReal(Rat(0));

    if (!bid.empty()) {
        // walk from the deepest level toward 0; selling past the total demand
        // yields nothing (zero marginal revenue)
        lo = ExtReal::neg_inf();
        Rat cum(0);
        std::vector<Rat> rev_breaks;
        std::vector<Rat> rev_slopes;
        bool bottomless = false;
        for (const auto& lvl : bid.levels) {
            rev_slopes.push_back(lvl.price);
            if (lvl.depth.is_pos_inf()) {
                bottomless = true;
                break;
            }
            cum += lvl.depth.finite();
            rev_breaks.push_back(-cum);
        }
        if (!bottomless) rev_slopes.push_back(Rat(0));
        // rev_* run from 0 leftward; flip into ascending order
        for (size_t i = rev_slopes.size(); i-- > 0;) slopes.push_back(rev_slopes[i]);
        for (size_t i = rev_breaks.size(); i-- > 0;) breaks.push_back(rev_breaks[i]);
    }

    if (!ask.empty()) {
        hi = ExtReal::pos_inf();
        if (!bid.empty()) breaks.push_back(Rat(0));
        Rat cum(0);
        bool capped = true;
        for (size_t i = 0; i < ask.levels.size(); ++i) {
            slopes.push_back(ask.levels[i].price);
            if (ask.levels[i].depth.is_pos_inf()) {
                capped = false;
                break;
            }
            cum += ask.levels[i].depth.finite();
            if (i + 1 < ask.levels.size()) breaks.push_back(cum);
        }
        if (capped) hi = ExtReal(cum);  // cannot buy more than the total supply
    }

    return Pwl(lo, hi, std::move(breaks), std::move(slopes), Rat(0), Rat(0));
}

SeparableCost scaled_convex_cost(const Vec& prices, const std::vector<Pwl>& phi) {
    if (prices.size() != phi.size()) throw std::invalid_argument("scaled_convex: dimension mismatch");
    SeparableCost out;
    for (size_t j = 0; j < prices.size(); ++j) {
        if (prices[j] < 0) throw std::invalid_argument("scaled_convex: negative price");
        if (!phi[j].is_valid_cost()) throw std::invalid_argument("scaled_convex: phi must vanish at 0");
        out.per_asset.push_back(prices[j] == 0 ? Pwl::linear(Rat(0)) : phi[j].value_scale(prices[j]));
    }
    return out;
}

SeparableCost market_value_cost(const Vec& prices, const std::vector<Pwl>& phi) {
    if (prices.size() != phi.size()) throw std::invalid_argument("market_value: dimension mismatch");
    SeparableCost out;
    for (size_t j = 0; j < prices.size(); ++j) {
        const Rat& s = prices[j];
        if (s <= 0) throw std::invalid_argument("market_value: prices must be positive");
        if (!phi[j].is_valid_cost()) throw std::invalid_argument("market_value: phi must vanish at 0");
        // f(x) = phi(s x): domain and breakpoints shrink by s, slopes grow
        std::vector<Rat> breaks;
        for (const Rat& b : phi[j].breakpoints()) breaks.push_back(b / s);
        std::vector<Rat> slopes;
        for (const Rat& v : phi[j].slopes()) slopes.push_back(v * s);
        out.per_asset.emplace_back(phi[j].domain_lo() * (1 / s), phi[j].domain_hi() * (1 / s),
                                   std::move(breaks), std::move(slopes), phi[j].anchor_x() / s,
                                   phi[j].anchor_value());
    }
    return out;
}

MaxOfLinearCost set_valued_cost(const std::vector<Vec>& vertices) {
    if (vertices.empty()) throw std::invalid_argument("set_valued: empty vertex list");
    return MaxOfLinearCost{vertices};
}

PolyhedralSet fixed_constraint(int dim, std::vector<PolyhedralSet::Row> rows) {
    return PolyhedralSet(dim, std::move(rows));
}

PolyhedralSet matrix_constraint(const std::vector<Vec>& M, const PolyhedralSet& K) {
    if (static_cast<int>(M.size()) != K.dimension())
        throw std::invalid_argument("matrix_constraint: M row count must match dim K");
    const size_t J = M.empty() ? 0 : M.front().size();
    std::vector<PolyhedralSet::Row> rows;
    for (const auto& krow : K.rows()) {
        Vec normal(J, Rat(0));
        for (size_t l = 0; l < M.size(); ++l) {
            if (krow.normal[l] == 0) continue;
            for (size_t j = 0; j < J; ++j) normal[j] += krow.normal[l] * M[l][j];
        }
        rows.push_back({std::move(normal), krow.offset});
    }
    return PolyhedralSet(static_cast<int>(J), std::move(rows));
}

std::pair<OrderBookSide, OrderBookSide> parse_order_book_csv(std::istream& in) {
    OrderBookSide bid, ask;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("order book csv, line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "side,price,depth") continue;
        std::stringstream ss(line);
        std::string side, price, depth;
        if (!std::getline(ss, side, ',') || !std::getline(ss, price, ',') || !std::getline(ss, depth))
            fail("expected side,price,depth");
        const auto p = parse_rat(price);
        if (!p) fail("bad price '" + price + "'");
        const auto d = parse_extreal(depth);
        if (!d || d->is_neg_inf()) fail("bad depth '" + depth + "'");
        if (side == "bid")
            bid.levels.push_back({*p, *d});
        else if (side == "ask")
            ask.levels.push_back({*p, *d});
        else
            fail("side must be bid or ask");
    }
    lineno = 0;
    validate_side(bid, false);
    validate_side(ask, true);
    if (!bid.empty() && !ask.empty() && bid.levels.front().price > ask.levels.front().price)
        throw std::invalid_argument("order book csv: crossed book");
    return {bid, ask};
}

std::pair<OrderBookSide, OrderBookSide> load_order_book_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("order book csv: cannot open " + path);
    return parse_order_book_csv(in);
}

}  // namespace illiq
