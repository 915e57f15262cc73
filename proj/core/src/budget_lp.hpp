#pragma once

// Internal: shared LP encoding of the budget-feasible set
//   { (x, c) : S_n(dx_n) + c_n <= 0, x_n in D_n, x_T = 0 }
// for polyhedral instances. Separable costs get one epigraph variable per
// asset backed by their affine pieces plus explicit domain rows; max-of-linear
// costs expand into one budget row per vertex.

#include <stdexcept>
#include <vector>

#include "illiq/analysis.hpp"
#include "illiq/lp.hpp"

namespace illiq::detail {

enum class ClaimMode {
    Fixed,     // claims are given constants (membership feasibility)
    Boxed,     // claim variables in [0, cap], objective max sum c (arbitrage)
    Weighted,  // claim variables (-inf, cap], objective max sum w_n c_n (profit function)
};

struct BudgetLp {
    LinearProgram lp;
    std::vector<std::vector<int>> xvar;  // per node (empty at leaves)
    std::vector<int> cvar;               // per node; -1 in Fixed mode
};

inline BudgetLp build_budget_lp(const MarketInstance& m, ClaimMode mode,
                                const ScalarProcess* fixed_claim, const ScalarProcess* weights,
                                const ExtReal& cap) {
    if (!m.is_polyhedral()) throw std::logic_error("budget lp: polyhedral instance required");
    const EventTree& tree = m.tree();
    const int J = m.num_assets();

    BudgetLp enc;
    enc.xvar.resize(static_cast<size_t>(tree.num_nodes()));
    enc.cvar.assign(static_cast<size_t>(tree.num_nodes()), -1);

    for (int id = 0; id < tree.num_nodes(); ++id) {
        if (tree.is_leaf(id)) continue;
        for (int j = 0; j < J; ++j) enc.xvar[static_cast<size_t>(id)].push_back(enc.lp.add_free_variable());
    }
    if (mode != ClaimMode::Fixed) {
        for (int id = 0; id < tree.num_nodes(); ++id) {
            const ExtReal lo = mode == ClaimMode::Boxed ? ExtReal(Rat(0)) : ExtReal::neg_inf();
            Rat obj(1);
            if (mode == ClaimMode::Weighted) {
                const Rat& pn = tree.prob(id);
                obj = pn * (*weights)[static_cast<size_t>(id)];
            }
            enc.cvar[static_cast<size_t>(id)] = enc.lp.add_variable(lo, cap, obj);
        }
        enc.lp.sense = Sense::Maximize;
    }

    auto increment_terms = [&](int id, int j) {
        std::vector<std::pair<int, Rat>> terms;
        if (!tree.is_leaf(id))
            terms.emplace_back(enc.xvar[static_cast<size_t>(id)][static_cast<size_t>(j)], Rat(1));
        const int p = tree.parent(id);
        if (p >= 0) terms.emplace_back(enc.xvar[static_cast<size_t>(p)][static_cast<size_t>(j)], Rat(-1));
        return terms;
    };
    auto claim_at = [&](int id) -> Rat {
        return fixed_claim ? (*fixed_claim)[static_cast<size_t>(id)] : Rat(0);
    };

    for (int id = 0; id < tree.num_nodes(); ++id) {
        const CostFunction& cost = m.cost(id);
        if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
            // budget row: sum_j u_{id,j} + c_id <= 0
            std::vector<std::pair<int, Rat>> budget;
            for (int j = 0; j < J; ++j) {
                const Pwl& f = sep->per_asset[static_cast<size_t>(j)];
                const int u = enc.lp.add_free_variable();
                budget.emplace_back(u, Rat(1));
                for (const auto& [slope, intercept] : f.affine_pieces()) {
                    auto terms = increment_terms(id, j);
                    for (auto& t : terms) t.second *= slope;
                    terms.emplace_back(u, Rat(-1));
                    enc.lp.add_row(std::move(terms), Relation::LessEq, -intercept);
                }
                if (f.domain_lo().is_finite())
                    enc.lp.add_row(increment_terms(id, j), Relation::GreaterEq, f.domain_lo().finite());
                if (f.domain_hi().is_finite())
                    enc.lp.add_row(increment_terms(id, j), Relation::LessEq, f.domain_hi().finite());
            }
            if (enc.cvar[static_cast<size_t>(id)] >= 0)
                budget.emplace_back(enc.cvar[static_cast<size_t>(id)], Rat(1));
            enc.lp.add_row(std::move(budget), Relation::LessEq, -claim_at(id));
        } else if (const auto* mol = std::get_if<MaxOfLinearCost>(&cost)) {
            // one budget row per vertex: z_k . dx + c <= 0
            for (const Vec& z : mol->vertices) {
                std::vector<std::pair<int, Rat>> terms;
                for (int j = 0; j < J; ++j) {
                    if (z[static_cast<size_t>(j)] == 0) continue;
                    for (auto& t : increment_terms(id, j)) {
                        terms.emplace_back(t.first, t.second * z[static_cast<size_t>(j)]);
                    }
                }
                if (enc.cvar[static_cast<size_t>(id)] >= 0)
                    terms.emplace_back(enc.cvar[static_cast<size_t>(id)], Rat(1));
                enc.lp.add_row(std::move(terms), Relation::LessEq, -claim_at(id));
            }
        } else {
            throw std::logic_error("budget lp: analytic node");
        }
        if (!tree.is_leaf(id)) {
            for (const auto& row : m.constraint(id).rows()) {
                std::vector<std::pair<int, Rat>> terms;
                for (int j = 0; j < J; ++j)
                    if (row.normal[static_cast<size_t>(j)] != 0)
                        terms.emplace_back(enc.xvar[static_cast<size_t>(id)][static_cast<size_t>(j)],
                                           row.normal[static_cast<size_t>(j)]);
                enc.lp.add_row(std::move(terms), Relation::LessEq, row.offset);
            }
        }
    }
    return enc;
}

// Shared extraction of (x, c) from an optimal solve.
inline void extract_processes(const BudgetLp& enc, const EventTree& tree, const LpSolution& sol,
                              PortfolioProcess& x, ScalarProcess& c) {
    x.assign(static_cast<size_t>(tree.num_nodes()), {});
    c.assign(static_cast<size_t>(tree.num_nodes()), Rat(0));
    for (int id = 0; id < tree.num_nodes(); ++id) {
        for (int var : enc.xvar[static_cast<size_t>(id)])
            x[static_cast<size_t>(id)].push_back(sol.primal[static_cast<size_t>(var)]);
        if (enc.cvar[static_cast<size_t>(id)] >= 0)
            c[static_cast<size_t>(id)] = sol.primal[static_cast<size_t>(enc.cvar[static_cast<size_t>(id)])];
    }
}

}  // namespace illiq::detail
