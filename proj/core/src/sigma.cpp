#include <stdexcept>

#include "budget_lp.hpp"
#include "illiq/analysis.hpp"

namespace illiq {

SigmaValue sigma_primal(const MarketInstance& m, const ScalarProcess& y, const AnalysisOptions& opt) {
    if (y.size() != static_cast<size_t>(m.tree().num_nodes()))
        throw std::invalid_argument("sigma_primal: weight process length mismatch");
    for (const Rat& w : y)
        if (w < 0) throw std::invalid_argument("sigma_primal: y must be nonnegative");

    SigmaValue out;
    Rat cap = opt.sigma_cap;
    for (int round = 0; round <= opt.sigma_cap_doublings; ++round) {
        auto enc = detail::build_budget_lp(m, detail::ClaimMode::Weighted, nullptr, &y, ExtReal(cap));
        const LpSolution sol = lp_solve(enc.lp, opt.max_pivots);
        out.stats.absorb(sol.pivots);
        if (sol.status != LpStatus::Optimal) throw std::logic_error("sigma lp: unexpected status");
        bool cap_binds = false;
        for (int id = 0; id < m.tree().num_nodes(); ++id) {
            const int cv = enc.cvar[static_cast<size_t>(id)];
            if (sol.primal[static_cast<size_t>(cv)] == cap) cap_binds = true;
        }
        if (!cap_binds) {
            out.value = ExtReal(sol.objective);
            return out;
        }
        cap *= 2;
    }
    // cap still binding: let the uncapped LP certify the answer
    auto enc = detail::build_budget_lp(m, detail::ClaimMode::Weighted, nullptr, &y, ExtReal::pos_inf());
    const LpSolution sol = lp_solve(enc.lp, opt.max_pivots);
    out.stats.absorb(sol.pivots);
    if (sol.status == LpStatus::Unbounded) {
        out.value = ExtReal::pos_inf();
        return out;
    }
    if (sol.status != LpStatus::Optimal) throw std::logic_error("sigma lp: unexpected status");
    out.value = ExtReal(sol.objective);
    return out;
}

SigmaValue sigma_dual(const MarketInstance& m, const ScalarProcess& y, const AnalysisOptions& opt) {
    if (!m.is_polyhedral()) throw std::logic_error("sigma_dual: polyhedral instance required");
    if (y.size() != static_cast<size_t>(m.tree().num_nodes()))
        throw std::invalid_argument("sigma_dual: weight process length mismatch");
    for (const Rat& w : y)
        if (w < 0) throw std::invalid_argument("sigma_dual: y must be nonnegative");

    const EventTree& tree = m.tree();
    const int J = m.num_assets();

    LinearProgram lp;
    lp.sense = Sense::Minimize;
    std::vector<std::vector<int>> vvar(static_cast<size_t>(tree.num_nodes()));
    for (int id = 0; id < tree.num_nodes(); ++id)
        for (int j = 0; j < J; ++j) vvar[static_cast<size_t>(id)].push_back(lp.add_free_variable());

    for (int id = 0; id < tree.num_nodes(); ++id) {
        const Rat& pn = tree.prob(id);
        const Rat& yn = y[static_cast<size_t>(id)];
        const CostFunction& cost = m.cost(id);
        if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
            for (int j = 0; j < J; ++j) {
                const Pwl& f = sep->per_asset[static_cast<size_t>(j)];
                // (y f)^* = y f^*(. / y); at y = 0 the domain survives as its
                // support function, which keeps the dual exact for bounded
                // books
                const Pwl conj = yn > 0 ? f.value_scale(yn).conjugate() : f.domain_support();
                const int tau = lp.add_free_variable(pn);
                const int v = vvar[static_cast<size_t>(id)][static_cast<size_t>(j)];
                for (const auto& [slope, intercept] : conj.affine_pieces())
                    lp.add_row({{v, slope}, {tau, Rat(-1)}}, Relation::LessEq, -intercept);
                if (conj.domain_lo().is_finite())
                    lp.add_row({{v, Rat(1)}}, Relation::GreaterEq, conj.domain_lo().finite());
                if (conj.domain_hi().is_finite())
                    lp.add_row({{v, Rat(1)}}, Relation::LessEq, conj.domain_hi().finite());
            }
        } else if (const auto* mol = std::get_if<MaxOfLinearCost>(&cost)) {
            // (y S)^* is the indicator of y conv(vertices); contributes 0
            std::vector<int> mu;
            for (size_t k = 0; k < mol->vertices.size(); ++k)
                mu.push_back(lp.add_variable(ExtReal(Rat(0)), ExtReal::pos_inf()));
            for (int j = 0; j < J; ++j) {
                std::vector<std::pair<int, Rat>> terms{
                    {vvar[static_cast<size_t>(id)][static_cast<size_t>(j)], Rat(-1)}};
                for (size_t k = 0; k < mol->vertices.size(); ++k)
                    if (mol->vertices[k][static_cast<size_t>(j)] != 0)
                        terms.emplace_back(mu[k], mol->vertices[k][static_cast<size_t>(j)]);
                lp.add_row(std::move(terms), Relation::Equal, Rat(0));
            }
            std::vector<std::pair<int, Rat>> sum;
            for (int v : mu) sum.emplace_back(v, Rat(1));
            lp.add_row(std::move(sum), Relation::Equal, yn);
        }
    }

    // support terms sigma_{D_n}(E[dv|F_n]) in their dual form
    //   min { b . eta : A^T eta = w, eta >= 0 }
    for (int id = 0; id < tree.num_nodes(); ++id) {
        if (tree.is_leaf(id)) continue;
        const Rat& pn = tree.prob(id);
        const auto& rows = m.constraint(id).rows();
        std::vector<int> eta;
        for (const auto& row : rows)
            eta.push_back(lp.add_variable(ExtReal(Rat(0)), ExtReal::pos_inf(), pn * row.offset));
        for (int j = 0; j < J; ++j) {
            std::vector<std::pair<int, Rat>> terms;
            for (size_t g = 0; g < rows.size(); ++g)
                if (rows[g].normal[static_cast<size_t>(j)] != 0)
                    terms.emplace_back(eta[g], rows[g].normal[static_cast<size_t>(j)]);
            for (int child : tree.children(id))
                terms.emplace_back(vvar[static_cast<size_t>(child)][static_cast<size_t>(j)],
                                   -tree.prob(child) / pn);
            terms.emplace_back(vvar[static_cast<size_t>(id)][static_cast<size_t>(j)], Rat(1));
            lp.add_row(std::move(terms), Relation::Equal, Rat(0));
        }
    }

    SigmaValue out;
    const LpSolution sol = lp_solve(lp, opt.max_pivots);
    out.stats.absorb(sol.pivots);
    if (sol.status == LpStatus::Infeasible) {
        out.value = ExtReal::pos_inf();
        return out;
    }
    if (sol.status != LpStatus::Optimal) throw std::logic_error("sigma dual lp: unexpected status");
    out.value = ExtReal(sol.objective);
    VectorProcess v(static_cast<size_t>(tree.num_nodes()));
    for (int id = 0; id < tree.num_nodes(); ++id)
        for (int j = 0; j < J; ++j)
            v[static_cast<size_t>(id)].push_back(
                sol.primal[static_cast<size_t>(vvar[static_cast<size_t>(id)][static_cast<size_t>(j)])]);
    out.attaining_v = std::move(v);
    return out;
}

}  // namespace illiq
