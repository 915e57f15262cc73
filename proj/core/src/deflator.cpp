#include <stdexcept>

#include "illiq/analysis.hpp"
#include "illiq/lp.hpp"

namespace illiq {

namespace {

// Price-set rows for v_n in y_n * P_n, where P_n is the market-price set
// dS_n(0) (MarketPrice) or the closed marginal-price range (MarginalPrice).
// Sets enter as interval boxes (separable), convex hulls of vertices with
// multiplier variables (max-of-linear), or exact closed forms (exponential).
void add_price_rows(LinearProgram& lp, const CostFunction& cost, DeflatorKind kind, int yvar,
                    const std::vector<int>& vvar, const Rat& delta) {
    if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
        for (size_t j = 0; j < sep->per_asset.size(); ++j) {
            const Pwl& f = sep->per_asset[j];
            const Interval range = kind == DeflatorKind::MarketPrice ? f.subdifferential(Rat(0))
                                                                     : f.marginal_price_hull();
            if (range.lo.is_finite())
                lp.add_row({{yvar, range.lo.finite()}, {vvar[j], Rat(-1)}}, Relation::LessEq, Rat(0));
            if (range.hi.is_finite())
                lp.add_row({{vvar[j], Rat(1)}, {yvar, -range.hi.finite()}}, Relation::LessEq, Rat(0));
        }
        return;
    }
    if (const auto* mol = std::get_if<MaxOfLinearCost>(&cost)) {
        // dS(0) = rge dS = conv(vertices) for sublinear S
        std::vector<int> mu;
        for (size_t k = 0; k < mol->vertices.size(); ++k)
            mu.push_back(lp.add_variable(ExtReal(Rat(0)), ExtReal::pos_inf()));
        for (size_t j = 0; j < vvar.size(); ++j) {
            std::vector<std::pair<int, Rat>> terms{{vvar[j], Rat(-1)}};
            for (size_t k = 0; k < mol->vertices.size(); ++k)
                if (mol->vertices[k][j] != 0) terms.emplace_back(mu[k], mol->vertices[k][j]);
            lp.add_row(std::move(terms), Relation::Equal, Rat(0));
        }
        std::vector<std::pair<int, Rat>> sum{{yvar, Rat(-1)}};
        for (int v : mu) sum.emplace_back(v, Rat(1));
        lp.add_row(std::move(sum), Relation::Equal, Rat(0));
        return;
    }
    const auto& ec = std::get<ExponentialCost>(cost);
    const size_t risky = ec.with_cash ? 1 : 0;
    if (ec.with_cash)
        lp.add_row({{vvar[0], Rat(1)}, {yvar, Rat(-1)}}, Relation::Equal, Rat(0));
    if (kind == DeflatorKind::MarketPrice) {
        lp.add_row({{vvar[risky], Rat(1)}, {yvar, -ec.sbar}}, Relation::Equal, Rat(0));
    } else {
        // cl rge dS is {1} x (0, inf); strict positivity rendered as s >= delta
        lp.add_row({{yvar, delta}, {vvar[risky], Rat(-1)}}, Relation::LessEq, Rat(0));
    }
}

}  // namespace

DeflatorSearch find_deflator_at(const MarketInstance& m, DeflatorKind kind, const Rat& epsilon,
                                const AnalysisOptions& opt) {
    if (epsilon <= 0) throw std::invalid_argument("find_deflator: epsilon must be positive");
    const EventTree& tree = m.tree();
    const int J = m.num_assets();

    LinearProgram lp;
    std::vector<int> yvar(static_cast<size_t>(tree.num_nodes()));
    std::vector<std::vector<int>> vvar(static_cast<size_t>(tree.num_nodes()));
    for (int id = 0; id < tree.num_nodes(); ++id) {
        yvar[static_cast<size_t>(id)] = lp.add_variable(ExtReal(epsilon), ExtReal::pos_inf());
        for (int j = 0; j < J; ++j) vvar[static_cast<size_t>(id)].push_back(lp.add_free_variable());
    }
    lp.add_row({{yvar[0], Rat(1)}}, Relation::Equal, Rat(1));  // root normalization

    for (int id = 0; id < tree.num_nodes(); ++id)
        add_price_rows(lp, m.cost(id), kind, yvar[static_cast<size_t>(id)],
                       vvar[static_cast<size_t>(id)], opt.marginal_delta);

    // E[v_{t+1}|F_t] - v_t lands in the normal cone (market) or the closed
    // union of normal cones (marginal), entered through generator multipliers
    for (int id = 0; id < tree.num_nodes(); ++id) {
        if (tree.is_leaf(id)) continue;
        const PolyhedralCone cone = kind == DeflatorKind::MarketPrice
                                        ? m.constraint(id).normal_cone_origin()
                                        : m.constraint(id).barrier_cone_closure();
        std::vector<int> lambda;
        for (size_t g = 0; g < cone.rays().size(); ++g)
            lambda.push_back(lp.add_variable(ExtReal(Rat(0)), ExtReal::pos_inf()));
        const Rat& pn = tree.prob(id);
        for (int j = 0; j < J; ++j) {
            std::vector<std::pair<int, Rat>> terms;
            for (int child : tree.children(id))
                terms.emplace_back(vvar[static_cast<size_t>(child)][static_cast<size_t>(j)],
                                   tree.prob(child) / pn);
            terms.emplace_back(vvar[static_cast<size_t>(id)][static_cast<size_t>(j)], Rat(-1));
            for (size_t g = 0; g < lambda.size(); ++g)
                if (cone.rays()[g][static_cast<size_t>(j)] != 0)
                    terms.emplace_back(lambda[g], -cone.rays()[g][static_cast<size_t>(j)]);
            lp.add_row(std::move(terms), Relation::Equal, Rat(0));
        }
    }

    DeflatorSearch out;
    const LpSolution sol = lp_solve(lp, opt.max_pivots);
    out.stats.absorb(sol.pivots);
    if (sol.status == LpStatus::Infeasible) return out;
    if (sol.status != LpStatus::Optimal) throw std::logic_error("deflator lp: unexpected status");

    DeflatorCertificate cert;
    cert.kind = kind;
    cert.epsilon = epsilon;
    cert.y.resize(static_cast<size_t>(tree.num_nodes()));
    cert.s.resize(static_cast<size_t>(tree.num_nodes()));
    for (int id = 0; id < tree.num_nodes(); ++id) {
        const Rat& y = sol.primal[static_cast<size_t>(yvar[static_cast<size_t>(id)])];
        cert.y[static_cast<size_t>(id)] = y;
        for (int j = 0; j < J; ++j)
            cert.s[static_cast<size_t>(id)].push_back(
                sol.primal[static_cast<size_t>(vvar[static_cast<size_t>(id)][static_cast<size_t>(j)])] / y);
    }
    out.certificate = std::move(cert);
    return out;
}

DeflatorSearch find_deflator(const MarketInstance& m, DeflatorKind kind, const AnalysisOptions& opt) {
    DeflatorSearch total;
    for (const Rat& eps : opt.epsilon_schedule) {
        DeflatorSearch attempt = find_deflator_at(m, kind, eps, opt);
        total.stats.pivots += attempt.stats.pivots;
        total.stats.solves += attempt.stats.solves;
        if (attempt.found()) {
            total.certificate = std::move(attempt.certificate);
            return total;
        }
    }
    return total;
}

namespace {

Rat interval_violation(const Interval& range, const Rat& s) {
    Rat v(0);
    if (range.lo.is_finite() && s < range.lo.finite()) v = range.lo.finite() - s;
    if (range.hi.is_finite() && s > range.hi.finite()) {
        const Rat over = s - range.hi.finite();
        v = std::max(v, over);
    }
    return v;
}

// L1 distance of s to conv(vertices) by LP.
Rat hull_violation(const std::vector<Vec>& vertices, const Vec& s) {
    LinearProgram lp;
    lp.sense = Sense::Minimize;
    const size_t J = s.size();
    std::vector<int> mu;
    for (size_t k = 0; k < vertices.size(); ++k)
        mu.push_back(lp.add_variable(ExtReal(Rat(0)), ExtReal::pos_inf()));
    std::vector<int> ep, en;
    for (size_t j = 0; j < J; ++j) {
        ep.push_back(lp.add_variable(ExtReal(Rat(0)), ExtReal::pos_inf(), Rat(1)));
        en.push_back(lp.add_variable(ExtReal(Rat(0)), ExtReal::pos_inf(), Rat(1)));
    }
    for (size_t j = 0; j < J; ++j) {
        std::vector<std::pair<int, Rat>> terms{{ep[j], Rat(1)}, {en[j], Rat(-1)}};
        for (size_t k = 0; k < vertices.size(); ++k)
            if (vertices[k][j] != 0) terms.emplace_back(mu[k], vertices[k][j]);
        lp.add_row(std::move(terms), Relation::Equal, s[j]);
    }
    std::vector<std::pair<int, Rat>> sum;
    for (int v : mu) sum.emplace_back(v, Rat(1));
    lp.add_row(std::move(sum), Relation::Equal, Rat(1));
    const LpSolution sol = lp_solve(lp);
    if (!sol.optimal()) throw std::logic_error("hull_violation: unexpected LP status");
    return sol.objective;
}

}  // namespace

DeflatorResiduals verify_deflator(const MarketInstance& m, const DeflatorCertificate& cert) {
    const EventTree& tree = m.tree();
    const int J = m.num_assets();
    if (cert.y.size() != static_cast<size_t>(tree.num_nodes()) ||
        cert.s.size() != static_cast<size_t>(tree.num_nodes()))
        throw std::invalid_argument("verify_deflator: certificate shape mismatch");

    DeflatorResiduals out;
    out.per_node.resize(static_cast<size_t>(tree.num_nodes()));
    out.valid = true;

    VectorProcess v(static_cast<size_t>(tree.num_nodes()));
    for (int id = 0; id < tree.num_nodes(); ++id) {
        const Vec& s = cert.s[static_cast<size_t>(id)];
        if (static_cast<int>(s.size()) != J)
            throw std::invalid_argument("verify_deflator: price dimension mismatch");
        const Rat& y = cert.y[static_cast<size_t>(id)];
        for (int j = 0; j < J; ++j)
            v[static_cast<size_t>(id)].push_back(y * s[static_cast<size_t>(j)]);

        // price membership, recomputed from the cost function itself
        Rat violation(0);
        const CostFunction& cost = m.cost(id);
        if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
            for (int j = 0; j < J; ++j) {
                const Pwl& f = sep->per_asset[static_cast<size_t>(j)];
                const Interval range = cert.kind == DeflatorKind::MarketPrice
                                           ? f.subdifferential(Rat(0))
                                           : f.marginal_price_hull();
                violation += interval_violation(range, s[static_cast<size_t>(j)]);
            }
        } else if (const auto* mol = std::get_if<MaxOfLinearCost>(&cost)) {
            violation = hull_violation(mol->vertices, s);
        } else {
            const auto& ec = std::get<ExponentialCost>(cost);
            const size_t risky = ec.with_cash ? 1 : 0;
            if (ec.with_cash) violation += abs(s[0] - 1);
            if (cert.kind == DeflatorKind::MarketPrice)
                violation += abs(s[risky] - ec.sbar);
            else if (s[risky] <= 0)
                violation += -s[risky];  // hull is (0, inf); nonpositive prices violate
        }
        out.per_node[static_cast<size_t>(id)].price_membership = violation;
        if (violation != 0) out.valid = false;
    }

    // cone membership of w_n = E[dv | F_n] through the support function of
    // the polar cone's unit-box slice: w lies in the cone iff w . u <= 0 for
    // every u in the polar, so the capped support is 0 exactly on members and
    // a finite violation magnitude outside (|w| for unconstrained nodes)
    for (int id = 0; id < tree.num_nodes(); ++id) {
        auto& entry = out.per_node[static_cast<size_t>(id)];
        entry.cone_membership = Rat(0);
        if (tree.is_leaf(id)) continue;
        Vec w = cond_expectation(tree, v, id);
        for (int j = 0; j < J; ++j) w[static_cast<size_t>(j)] -= v[static_cast<size_t>(id)][static_cast<size_t>(j)];

        // polar of N_D(0) is the tangent cone; polar of cl rge N_D is the
        // horizon cone (both directly available in inequality form)
        const PolyhedralCone polar = cert.kind == DeflatorKind::MarketPrice
                                         ? m.constraint(id).tangent_cone_origin()
                                         : m.constraint(id).horizon_cone();
        std::vector<PolyhedralSet::Row> rows;
        for (const Vec& a : polar.inequalities()) rows.push_back({a, Rat(0)});
        for (int j = 0; j < J; ++j) {
            Vec e(static_cast<size_t>(J), Rat(0));
            e[static_cast<size_t>(j)] = 1;
            rows.push_back({e, Rat(1)});
            e[static_cast<size_t>(j)] = -1;
            rows.push_back({std::move(e), Rat(1)});
        }
        const ExtReal support = PolyhedralSet(J, std::move(rows)).support(w);
        const Rat violation = std::max(Rat(0), support.finite());
        entry.cone_membership = violation;
        if (violation != 0) out.valid = false;
    }
    return out;
}

}  // namespace illiq
