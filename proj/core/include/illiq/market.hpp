#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "illiq/pwl.hpp"
#include "illiq/tree.hpp"

namespace illiq {

// One convex piecewise-linear cost per asset; the node cost is the sum.
struct SeparableCost {
    std::vector<Pwl> per_asset;
};

// S(x) = max_k z_k . x, the sublinear cost of a set of price scenarios. The
// only supported non-separable polyhedral form.
struct MaxOfLinearCost {
    std::vector<Vec> vertices;
};

// Exponential illiquidity cost. With cash: S(x) = x^0 + sbar (e^{a x^1}-1)/a
// on two assets; without: S(x) = sbar (e^{a x}-1)/a on one asset. Closed
// forms for the derived objects live in exponential.hpp.
struct ExponentialCost {
    Rat sbar;
    Rat alpha;
    bool with_cash = true;

    int num_assets() const { return with_cash ? 2 : 1; }
};

using CostFunction = std::variant<SeparableCost, MaxOfLinearCost, ExponentialCost>;

int cost_num_assets(const CostFunction& cost);
bool cost_is_polyhedral(const CostFunction& cost);
// Convex, lsc, vanishes at 0 (cost-process requirement), checked exactly for
// polyhedral costs and structurally for the exponential family.
bool cost_is_valid(const CostFunction& cost);
// Positively homogeneous check used by the derived-model validator.
bool cost_is_sublinear(const CostFunction& cost);
// Every per-asset domain is the whole line (no finite order-book depth).
bool cost_is_finite_valued(const CostFunction& cost);

// Exact for polyhedral costs. Exponential nodes evaluate in long double and
// round; `exact` is false for them (1e-12 comparison tolerance downstream).
struct CostValue {
    ExtReal value;
    bool exact = true;
};
CostValue eval_cost(const CostFunction& cost, const Vec& x);

// A market: tree + per-node cost function + per-node constraint set.
class MarketInstance {
  public:
    MarketInstance(EventTree tree, int num_assets, std::vector<CostFunction> cost_at,
                   std::vector<PolyhedralSet> constraint_at);

    const EventTree& tree() const { return tree_; }
    int num_assets() const { return num_assets_; }
    const CostFunction& cost(int node) const { return cost_at_[static_cast<size_t>(node)]; }
    const PolyhedralSet& constraint(int node) const { return constraint_at_[static_cast<size_t>(node)]; }

    bool is_polyhedral() const;
    bool is_unconstrained() const;

  private:
    EventTree tree_;
    int num_assets_;
    std::vector<CostFunction> cost_at_;
    std::vector<PolyhedralSet> constraint_at_;
};

// Portfolio processes carry values on non-terminal nodes only; the terminal
// portfolio is identically zero by construction (everything liquidates).
// Entries at leaves must be empty.
using PortfolioProcess = std::vector<Vec>;

// Portfolio increment x_n - x_{parent(n)} with x_{-1} = 0 and x = 0 at leaves.
Vec portfolio_increment(const MarketInstance& m, const PortfolioProcess& x, int node);

struct BudgetReport {
    struct NodeEntry {
        ExtReal residual;          // S_n(dx_n) + c_n
        bool residual_exact = true;
        bool constraint_ok = true;  // x_n in D_n (vacuous at leaves)
    };
    std::vector<NodeEntry> per_node;
    bool feasible = false;
};

// Checks S_n(dx_n) + c_n <= 0 at every node and x_n in D_n at non-terminal
// nodes. Inexact (exponential) residuals compare against 1e-12.
BudgetReport budget_check(const MarketInstance& m, const PortfolioProcess& x, const ScalarProcess& c);

// Numeraire reduction (single-date rewrite). Requires a cash asset whose
// per-node cost is linear with positive slope and which no constraint row
// touches. Membership of c in C(S,D) is then equivalent to the reduced
// per-leaf condition  sum_path (Shat_n(dx~_n) + c_n / s0_n) <= 0.
struct ReducedMarket {
    int cash_index;
    ScalarProcess discount;                  // s0_n per node
    std::vector<SeparableCost> reduced_cost; // per node, assets J \ {cash}
    std::vector<PolyhedralSet> reduced_constraint;
    EventTree tree;

    ScalarProcess reduce_claim(const ScalarProcess& c) const;       // c_n / s0_n
    Rat cumulated_claim(const ScalarProcess& c, int leaf) const;    // sum of c_n / s0_n on the path
};

std::optional<ReducedMarket> numeraire_reduce(const MarketInstance& m, int cash_index);

// Reduced-form feasibility of a claim (LP over the non-cash portfolio).
bool reduced_feasible(const ReducedMarket& rm, const ScalarProcess& claim);

}  // namespace illiq
