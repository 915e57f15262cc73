#include "illiq/market.hpp"

#include <algorithm>
#include <stdexcept>

#include "illiq/exponential.hpp"
#include "illiq/lp.hpp"

namespace illiq {

namespace {

const Rat& inexact_tolerance() {
    static const Rat tol = *parse_rat("1/1000000000000");
    return tol;
}

}  // namespace

int cost_num_assets(const CostFunction& cost) {
    return std::visit(
        [](const auto& c) -> int {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SeparableCost>)
                return static_cast<int>(c.per_asset.size());
            else if constexpr (std::is_same_v<T, MaxOfLinearCost>)
                return c.vertices.empty() ? 0 : static_cast<int>(c.vertices.front().size());
            else
                return c.num_assets();
        },
        cost);
}

bool cost_is_polyhedral(const CostFunction& cost) {
    return !std::holds_alternative<ExponentialCost>(cost);
}

bool cost_is_valid(const CostFunction& cost) {
    return std::visit(
        [](const auto& c) -> bool {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SeparableCost>) {
                return !c.per_asset.empty() &&
                       std::all_of(c.per_asset.begin(), c.per_asset.end(),
                                   [](const Pwl& f) { return f.is_valid_cost(); });
            } else if constexpr (std::is_same_v<T, MaxOfLinearCost>) {
                if (c.vertices.empty()) return false;
                const size_t dim = c.vertices.front().size();
                return dim > 0 && std::all_of(c.vertices.begin(), c.vertices.end(),
                                              [dim](const Vec& z) { return z.size() == dim; });
            } else {
                return c.sbar > 0 && c.alpha > 0;
            }
        },
        cost);
}

bool cost_is_sublinear(const CostFunction& cost) {
    return std::visit(
        [](const auto& c) -> bool {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SeparableCost>)
                return std::all_of(c.per_asset.begin(), c.per_asset.end(),
                                   [](const Pwl& f) { return f.is_sublinear(); });
            else if constexpr (std::is_same_v<T, MaxOfLinearCost>)
                return true;
            else
                return false;
        },
        cost);
}

bool cost_is_finite_valued(const CostFunction& cost) {
    return std::visit(
        [](const auto& c) -> bool {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SeparableCost>)
                return std::all_of(c.per_asset.begin(), c.per_asset.end(),
                                   [](const Pwl& f) { return f.has_full_domain(); });
            else
                return true;
        },
        cost);
}

CostValue eval_cost(const CostFunction& cost, const Vec& x) {
    if (static_cast<int>(x.size()) != cost_num_assets(cost))
        throw std::invalid_argument("eval_cost: dimension mismatch");
    if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
        ExtReal total(Rat(0));
        for (size_t j = 0; j < sep->per_asset.size(); ++j) {
            const ExtReal v = sep->per_asset[j].eval(x[j]);
            if (v.is_pos_inf()) return CostValue{ExtReal::pos_inf(), true};
            total = total + v;
        }
        return CostValue{total, true};
    }
    if (const auto* mol = std::get_if<MaxOfLinearCost>(&cost)) {
        ExtReal best = ExtReal::neg_inf();
        for (const Vec& z : mol->vertices) best = max(best, ExtReal(dot(z, x)));
        return CostValue{best, true};
    }
    const auto& ec = std::get<ExponentialCost>(cost);
    return CostValue{ExtReal(Rat(static_cast<double>(exp_cost_value(ec, x)))), false};
}

MarketInstance::MarketInstance(EventTree tree, int num_assets, std::vector<CostFunction> cost_at,
                               std::vector<PolyhedralSet> constraint_at)
    : tree_(std::move(tree)),
      num_assets_(num_assets),
      cost_at_(std::move(cost_at)),
      constraint_at_(std::move(constraint_at)) {
    const size_t n = static_cast<size_t>(tree_.num_nodes());
    if (cost_at_.size() != n || constraint_at_.size() != n)
        throw std::invalid_argument("market: need one cost and one constraint set per node");
    for (size_t i = 0; i < n; ++i) {
        if (cost_num_assets(cost_at_[i]) != num_assets_)
            throw std::invalid_argument("market: cost dimension mismatch");
        if (!cost_is_valid(cost_at_[i]))
            throw std::invalid_argument("market: node cost violates the cost-process requirements");
        if (constraint_at_[i].dimension() != num_assets_)
            throw std::invalid_argument("market: constraint dimension mismatch");
    }
}

bool MarketInstance::is_polyhedral() const {
    return std::all_of(cost_at_.begin(), cost_at_.end(),
                       [](const CostFunction& c) { return cost_is_polyhedral(c); });
}

bool MarketInstance::is_unconstrained() const {
    return std::all_of(constraint_at_.begin(), constraint_at_.end(),
                       [](const PolyhedralSet& d) { return d.is_whole_space(); });
}

Vec portfolio_increment(const MarketInstance& m, const PortfolioProcess& x, int node) {
    const int J = m.num_assets();
    Vec dx(static_cast<size_t>(J), Rat(0));
    if (!m.tree().is_leaf(node)) {
        const Vec& own = x[static_cast<size_t>(node)];
        if (static_cast<int>(own.size()) != J)
            throw std::invalid_argument("portfolio: wrong dimension at a non-terminal node");
        dx = own;
    } else if (!x[static_cast<size_t>(node)].empty()) {
        throw std::invalid_argument("portfolio: terminal nodes hold no portfolio variables");
    }
    const int p = m.tree().parent(node);
    if (p >= 0) {
        const Vec& pv = x[static_cast<size_t>(p)];
        for (size_t j = 0; j < dx.size(); ++j) dx[j] -= pv[j];
    }
    return dx;
}

BudgetReport budget_check(const MarketInstance& m, const PortfolioProcess& x, const ScalarProcess& c) {
    const size_t n = static_cast<size_t>(m.tree().num_nodes());
    if (x.size() != n || c.size() != n)
        throw std::invalid_argument("budget_check: process length mismatch");

    BudgetReport report;
    report.per_node.resize(n);
    report.feasible = true;
    for (int id = 0; id < static_cast<int>(n); ++id) {
        const Vec dx = portfolio_increment(m, x, id);
        const CostValue cv = eval_cost(m.cost(id), dx);
        auto& entry = report.per_node[static_cast<size_t>(id)];
        entry.residual = cv.value + ExtReal(c[static_cast<size_t>(id)]);
        entry.residual_exact = cv.exact;
        const ExtReal allowed = cv.exact ? ExtReal(Rat(0)) : ExtReal(inexact_tolerance());
        if (entry.residual > allowed) report.feasible = false;
        if (!m.tree().is_leaf(id)) {
            entry.constraint_ok = m.constraint(id).contains(x[static_cast<size_t>(id)]);
            if (!entry.constraint_ok) report.feasible = false;
        }
    }
    return report;
}

std::optional<ReducedMarket> numeraire_reduce(const MarketInstance& m, int cash_index) {
    const int J = m.num_assets();
    if (cash_index < 0 || cash_index >= J) return std::nullopt;

    ReducedMarket rm{cash_index, {}, {}, {}, m.tree()};
    rm.discount.resize(static_cast<size_t>(m.tree().num_nodes()));
    for (int id = 0; id < m.tree().num_nodes(); ++id) {
        const auto* sep = std::get_if<SeparableCost>(&m.cost(id));
        if (!sep) return std::nullopt;
        const Pwl& cash = sep->per_asset[static_cast<size_t>(cash_index)];
        if (!cash.has_full_domain() || !cash.breakpoints().empty()) return std::nullopt;
        const Rat s0 = cash.slopes().front();
        if (s0 <= 0) return std::nullopt;
        rm.discount[static_cast<size_t>(id)] = s0;

        SeparableCost reduced;
        for (int j = 0; j < J; ++j)
            if (j != cash_index)
                reduced.per_asset.push_back(sep->per_asset[static_cast<size_t>(j)].value_scale(1 / s0));
        rm.reduced_cost.push_back(std::move(reduced));

        // constraints may not touch the numeraire
        std::vector<PolyhedralSet::Row> rows;
        for (const auto& row : m.constraint(id).rows()) {
            if (row.normal[static_cast<size_t>(cash_index)] != 0) return std::nullopt;
            Vec normal;
            for (int j = 0; j < J; ++j)
                if (j != cash_index) normal.push_back(row.normal[static_cast<size_t>(j)]);
            rows.push_back({std::move(normal), row.offset});
        }
        rm.reduced_constraint.emplace_back(J - 1, std::move(rows));
    }
    return rm;
}

ScalarProcess ReducedMarket::reduce_claim(const ScalarProcess& c) const {
    ScalarProcess out(c.size());
    for (size_t i = 0; i < c.size(); ++i) out[i] = c[i] / discount[i];
    return out;
}

Rat ReducedMarket::cumulated_claim(const ScalarProcess& c, int leaf) const {
    Rat acc(0);
    for (int n : tree.path_from_root(leaf)) acc += c[static_cast<size_t>(n)] / discount[static_cast<size_t>(n)];
    return acc;
}

bool reduced_feasible(const ReducedMarket& rm, const ScalarProcess& claim) {
    const EventTree& tree = rm.tree;
    const int J = static_cast<int>(rm.reduced_cost.front().per_asset.size());
    const ScalarProcess chat = rm.reduce_claim(claim);

    LinearProgram lp;
    // non-terminal portfolio variables
    std::vector<std::vector<int>> xvar(static_cast<size_t>(tree.num_nodes()));
    for (int id = 0; id < tree.num_nodes(); ++id) {
        if (tree.is_leaf(id)) continue;
        for (int j = 0; j < J; ++j) xvar[static_cast<size_t>(id)].push_back(lp.add_free_variable());
    }
    // one epigraph variable per node and asset
    std::vector<std::vector<int>> uvar(static_cast<size_t>(tree.num_nodes()));
    for (int id = 0; id < tree.num_nodes(); ++id)
        for (int j = 0; j < J; ++j) uvar[static_cast<size_t>(id)].push_back(lp.add_free_variable());

    auto increment_terms = [&](int id, int j) {
        std::vector<std::pair<int, Rat>> terms;
        if (!tree.is_leaf(id)) terms.emplace_back(xvar[static_cast<size_t>(id)][static_cast<size_t>(j)], Rat(1));
        if (tree.parent(id) >= 0)
            terms.emplace_back(xvar[static_cast<size_t>(tree.parent(id))][static_cast<size_t>(j)], Rat(-1));
        return terms;
    };

    for (int id = 0; id < tree.num_nodes(); ++id) {
        const SeparableCost& cost = rm.reduced_cost[static_cast<size_t>(id)];
        for (int j = 0; j < J; ++j) {
            const Pwl& f = cost.per_asset[static_cast<size_t>(j)];
            const int u = uvar[static_cast<size_t>(id)][static_cast<size_t>(j)];
            for (const auto& [slope, intercept] : f.affine_pieces()) {
                auto terms = increment_terms(id, j);
                for (auto& t : terms) t.second *= slope;
                terms.emplace_back(u, Rat(-1));
                lp.add_row(std::move(terms), Relation::LessEq, -intercept);
            }
            if (f.domain_lo().is_finite())
                lp.add_row(increment_terms(id, j), Relation::GreaterEq, f.domain_lo().finite());
            if (f.domain_hi().is_finite())
                lp.add_row(increment_terms(id, j), Relation::LessEq, f.domain_hi().finite());
        }
        if (!tree.is_leaf(id)) {
            const PolyhedralSet& d = rm.reduced_constraint[static_cast<size_t>(id)];
            for (const auto& row : d.rows()) {
                std::vector<std::pair<int, Rat>> terms;
                for (int j = 0; j < J; ++j)
                    if (row.normal[static_cast<size_t>(j)] != 0)
                        terms.emplace_back(xvar[static_cast<size_t>(id)][static_cast<size_t>(j)],
                                           row.normal[static_cast<size_t>(j)]);
                lp.add_row(std::move(terms), Relation::LessEq, row.offset);
            }
        }
    }
    // per-leaf cumulated budget
    for (int leaf : tree.leaves()) {
        std::vector<std::pair<int, Rat>> terms;
        Rat rhs(0);
        for (int id : tree.path_from_root(leaf)) {
            for (int j = 0; j < J; ++j)
                terms.emplace_back(uvar[static_cast<size_t>(id)][static_cast<size_t>(j)], Rat(1));
            rhs -= chat[static_cast<size_t>(id)];
        }
        lp.add_row(std::move(terms), Relation::LessEq, rhs);
    }

    return lp_solve(lp).status == LpStatus::Optimal;
}

}  // namespace illiq
