#include "illiq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "budget_lp.hpp"

namespace illiq {

AnalysisOptions::AnalysisOptions() {
    marginal_delta = *parse_rat("1/1000000");
    epsilon_schedule = {*parse_rat("1/100"), *parse_rat("1/10000"), *parse_rat("1/1000000")};
    sigma_cap = Rat(1024);
    for (int k = -16; k <= 16; ++k) sandwich_grid.push_back(rat(k, 2));
    sandwich_gap_bound = Rat(1);
}

HypothesisFlags instance_flags(const MarketInstance& m) {
    HypothesisFlags flags;
    for (int id = 0; id < m.tree().num_nodes(); ++id) {
        const CostFunction& cost = m.cost(id);
        if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
            for (const Pwl& f : sep->per_asset) {
                if (!(f.domain_lo() < ExtReal(Rat(0)) && ExtReal(Rat(0)) < f.domain_hi()))
                    flags.s_prime_finite = false;
                if (!f.has_full_domain()) flags.cones_hypotheses = false;
            }
        } else if (std::holds_alternative<ExponentialCost>(cost)) {
            // finite-valued, but S >= S_inf - a fails on the buy side
            flags.cones_hypotheses = false;
        }
    }
    return flags;
}

MarketInstance scale_instance(const MarketInstance& m, const Rat& alpha) {
    if (alpha <= 0) throw std::invalid_argument("scale_instance: alpha must be positive");
    std::vector<CostFunction> costs;
    std::vector<PolyhedralSet> sets;
    for (int id = 0; id < m.tree().num_nodes(); ++id) {
        const CostFunction& cost = m.cost(id);
        if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
            SeparableCost scaled;
            for (const Pwl& f : sep->per_asset) scaled.per_asset.push_back(f.scale(alpha));
            costs.emplace_back(std::move(scaled));
        } else if (const auto* mol = std::get_if<MaxOfLinearCost>(&cost)) {
            costs.emplace_back(*mol);  // sublinear: alpha * S = S
        } else {
            costs.emplace_back(exp_scale(std::get<ExponentialCost>(cost), alpha));
        }
        sets.push_back(m.constraint(id).scaled(alpha));
    }
    return MarketInstance(m.tree(), m.num_assets(), std::move(costs), std::move(sets));
}

namespace {

PolyhedralSet cone_as_set(const PolyhedralCone& cone) {
    std::vector<PolyhedralSet::Row> rows;
    for (const Vec& a : cone.inequalities()) rows.push_back({a, Rat(0)});
    return PolyhedralSet(cone.dimension(), std::move(rows));
}

}  // namespace

DerivedModel derive_model(const MarketInstance& m, ModelKind kind) {
    std::vector<CostFunction> costs;
    std::vector<PolyhedralSet> sets;
    for (int id = 0; id < m.tree().num_nodes(); ++id) {
        const CostFunction& cost = m.cost(id);
        if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
            SeparableCost derived;
            for (const Pwl& f : sep->per_asset)
                derived.per_asset.push_back(kind == ModelKind::Marginal ? f.subderivative_origin()
                                                                        : f.horizon());
            costs.emplace_back(std::move(derived));
        } else if (const auto* mol = std::get_if<MaxOfLinearCost>(&cost)) {
            costs.emplace_back(*mol);  // sublinear: S' = S_inf = S
        } else {
            const auto& ec = std::get<ExponentialCost>(cost);
            costs.emplace_back(kind == ModelKind::Marginal ? exp_marginal_cost(ec)
                                                           : exp_scalable_cost(ec));
        }
        sets.push_back(cone_as_set(kind == ModelKind::Marginal
                                       ? m.constraint(id).tangent_cone_origin()
                                       : m.constraint(id).horizon_cone()));
    }
    return DerivedModel{kind, MarketInstance(m.tree(), m.num_assets(), std::move(costs), std::move(sets))};
}

namespace {

// Replaces exponential nodes by one side of the sandwich.
MarketInstance sandwich_instance(const MarketInstance& m, const AnalysisOptions& opt, bool upper) {
    std::vector<CostFunction> costs;
    std::vector<PolyhedralSet> sets;
    for (int id = 0; id < m.tree().num_nodes(); ++id) {
        const CostFunction& cost = m.cost(id);
        if (const auto* ec = std::get_if<ExponentialCost>(&cost)) {
            SandwichResult sw = pwl_sandwich(*ec, opt.sandwich_grid, opt.sandwich_gap_bound);
            costs.emplace_back(upper ? std::move(sw.upper) : std::move(sw.lower));
        } else {
            costs.push_back(cost);
        }
        sets.push_back(m.constraint(id));
    }
    return MarketInstance(m.tree(), m.num_assets(), std::move(costs), std::move(sets));
}

ArbitrageVerdict check_arbitrage_polyhedral(const MarketInstance& m, const AnalysisOptions& opt) {
    ArbitrageVerdict out;
    out.flags = instance_flags(m);
    auto enc = detail::build_budget_lp(m, detail::ClaimMode::Boxed, nullptr, nullptr, ExtReal(Rat(1)));

    if (opt.float_mode) {
        const LpSolutionF sol = lp_solve_float(enc.lp, opt.max_pivots);
        out.stats.absorb(sol.pivots);
        if (sol.status != LpStatus::Optimal) throw std::logic_error("arbitrage lp: unexpected status");
        out.verdict = sol.objective > 1e-9 ? Verdict::Arbitrage : Verdict::NoArbitrage;
        out.lp_value = Rat(sol.objective);
        return out;
    }
    const LpSolution sol = lp_solve(enc.lp, opt.max_pivots);
    out.stats.absorb(sol.pivots);
    if (sol.status != LpStatus::Optimal) throw std::logic_error("arbitrage lp: unexpected status");
    out.lp_value = sol.objective;
    if (sol.objective > 0) {
        out.verdict = Verdict::Arbitrage;
        detail::extract_processes(enc, m.tree(), sol, out.x, out.c);
    } else {
        out.verdict = Verdict::NoArbitrage;
    }
    return out;
}

}  // namespace

ArbitrageVerdict check_arbitrage(const MarketInstance& m, const AnalysisOptions& opt) {
    if (m.is_polyhedral()) return check_arbitrage_polyhedral(m, opt);

    // one-sided verdicts through the sandwich: paying more keeps arbitrage
    // real, paying less keeps its absence real
    ArbitrageVerdict upper = check_arbitrage_polyhedral(sandwich_instance(m, opt, true), opt);
    if (upper.exists()) {
        upper.flags = instance_flags(m);
        upper.flags.closure_sensitive = true;
        return upper;
    }
    ArbitrageVerdict lower = check_arbitrage_polyhedral(sandwich_instance(m, opt, false), opt);
    ArbitrageVerdict out;
    out.flags = instance_flags(m);
    out.flags.closure_sensitive = true;
    out.stats.pivots = upper.stats.pivots + lower.stats.pivots;
    out.stats.solves = upper.stats.solves + lower.stats.solves;
    out.lp_value = lower.lp_value;
    out.verdict = lower.exists() ? Verdict::Undecided : Verdict::NoArbitrage;
    return out;
}

ArbitrageVerdict check_marginal_arbitrage(const MarketInstance& m, const AnalysisOptions& opt) {
    ArbitrageVerdict out = check_arbitrage(derive_model(m, ModelKind::Marginal).instance, opt);
    out.flags = instance_flags(m);  // derived model is exact, flags describe the source instance
    return out;
}

ArbitrageVerdict check_scalable_arbitrage(const MarketInstance& m, const AnalysisOptions& opt) {
    ArbitrageVerdict out = check_arbitrage(derive_model(m, ModelKind::Scalable).instance, opt);
    out.flags = instance_flags(m);
    return out;
}

namespace {

// Exact membership for deterministic single-asset chains whose node costs are
// nondecreasing (positive-slope linear or pure-exponential): trade as much as
// each budget allows and check the terminal residual.
bool is_monotone_chain(const MarketInstance& m) {
    if (m.num_assets() != 1 || !m.is_unconstrained()) return false;
    for (int id = 0; id < m.tree().num_nodes(); ++id) {
        if (!m.tree().is_leaf(id) && m.tree().children(id).size() != 1) return false;
        const CostFunction& cost = m.cost(id);
        if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
            const Pwl& f = sep->per_asset.front();
            if (!f.has_full_domain() || !f.breakpoints().empty()) return false;
            if (f.slopes().front() <= 0) return false;
        } else if (const auto* ec = std::get_if<ExponentialCost>(&cost)) {
            if (ec->with_cash) return false;
        } else {
            return false;
        }
    }
    return true;
}

Membership chain_membership(const MarketInstance& m, const ScalarProcess& c) {
    long double x_prev = 0.0L;
    bool have_exact = true;
    Rat x_prev_exact(0);
    for (int id = 0; id < m.tree().num_nodes(); ++id) {
        const bool leaf = m.tree().is_leaf(id);
        const CostFunction& cost = m.cost(id);
        const Rat& cn = c[static_cast<size_t>(id)];
        if (leaf) {
            // residual S(-x_prev) + c <= 0 decides
            if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
                const Rat slope = sep->per_asset.front().slopes().front();
                if (have_exact) {
                    if (slope * (-x_prev_exact) + cn <= 0) return Membership::Yes;
                    return Membership::No;
                }
                const long double r = to_double(slope) * (-x_prev) + to_double(cn);
                return r <= 0.0L ? Membership::Yes : Membership::No;
            }
            const auto& ec = std::get<ExponentialCost>(cost);
            const long double xp = have_exact ? static_cast<long double>(to_double(x_prev_exact)) : x_prev;
            const long double r =
                static_cast<long double>(to_double(ec.sbar)) *
                    (std::exp(static_cast<long double>(to_double(ec.alpha)) * (-xp)) - 1.0L) /
                    static_cast<long double>(to_double(ec.alpha)) +
                static_cast<long double>(to_double(cn));
            return r <= 0.0L ? Membership::Yes : Membership::No;
        }
        // largest trade the node budget allows: d* = sup { d : S(d) <= -c_n }
        if (const auto* sep = std::get_if<SeparableCost>(&cost)) {
            const Rat slope = sep->per_asset.front().slopes().front();
            const Rat d = -cn / slope;
            if (have_exact)
                x_prev_exact += d;
            else
                x_prev += static_cast<long double>(to_double(d));
        } else {
            const auto& ec = std::get<ExponentialCost>(cost);
            // sbar (e^{a d} - 1) / a <= -c  =>  e^{a d} <= 1 - a c / sbar
            const Rat bound = 1 - ec.alpha * cn / ec.sbar;
            if (bound <= 0) return Membership::No;
            const long double d =
                std::log(static_cast<long double>(to_double(bound))) /
                static_cast<long double>(to_double(ec.alpha));
            if (have_exact) {
                x_prev = static_cast<long double>(to_double(x_prev_exact));
                have_exact = false;
            }
            x_prev += d;
        }
    }
    throw std::logic_error("chain_membership: tree had no leaf");
}

}  // namespace

MembershipResult membership(const MarketInstance& m, const ScalarProcess& c, const AnalysisOptions& opt) {
    MembershipResult out;
    out.flags = instance_flags(m);
    if (m.is_polyhedral()) {
        auto enc = detail::build_budget_lp(m, detail::ClaimMode::Fixed, &c, nullptr, ExtReal(Rat(0)));
        if (opt.float_mode) {
            const LpSolutionF sol = lp_solve_float(enc.lp, opt.max_pivots);
            out.stats.absorb(sol.pivots);
            out.verdict = sol.status == LpStatus::Optimal ? Membership::Yes : Membership::No;
            return out;
        }
        const LpSolution sol = lp_solve(enc.lp, opt.max_pivots);
        out.stats.absorb(sol.pivots);
        if (sol.status == LpStatus::Optimal) {
            out.verdict = Membership::Yes;
            PortfolioProcess x;
            ScalarProcess unused;
            detail::extract_processes(enc, m.tree(), sol, x, unused);
            out.certificate = std::move(x);
        } else if (sol.status == LpStatus::Infeasible) {
            out.verdict = Membership::No;
        } else {
            throw std::logic_error("membership lp: unexpected status");
        }
        return out;
    }

    if (is_monotone_chain(m)) {
        out.verdict = chain_membership(m, c);
        return out;
    }

    // sandwich: feasible while paying more => genuinely feasible; infeasible
    // while paying less => genuinely infeasible
    out.flags.closure_sensitive = true;
    MembershipResult upper = membership(sandwich_instance(m, opt, true), c, opt);
    out.stats = upper.stats;
    if (upper.verdict == Membership::Yes) {
        out.verdict = Membership::Yes;
        out.certificate = std::move(upper.certificate);
        return out;
    }
    MembershipResult lower = membership(sandwich_instance(m, opt, false), c, opt);
    out.stats.pivots += lower.stats.pivots;
    out.stats.solves += lower.stats.solves;
    out.verdict = lower.verdict == Membership::No ? Membership::No : Membership::Undecided;
    return out;
}

MembershipResult membership_scaled(const MarketInstance& m, const ScalarProcess& c, const Rat& alpha,
                                   const AnalysisOptions& opt) {
    return membership(scale_instance(m, alpha), c, opt);
}

}  // namespace illiq
