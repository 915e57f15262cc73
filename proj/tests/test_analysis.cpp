#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "generators.hpp"
#include "illiq/analysis.hpp"
#include "oracles.hpp"

using namespace illiq;
using namespace illiq::test;

namespace {

// independent check of an arbitrage certificate
void check_certificate(const MarketInstance& m, const ArbitrageVerdict& verdict) {
    REQUIRE(verdict.exists());
    const BudgetReport report = budget_check(m, verdict.x, verdict.c);
    CHECK(report.feasible);
    bool nonzero = false;
    for (const Rat& v : verdict.c) {
        CHECK(v >= 0);
        nonzero |= v > 0;
    }
    CHECK(nonzero);
}

}  // namespace

TEST_CASE("derived models") {
    // the exponential chain: marginal model is linear with unit slopes
    const DerivedModel marginal = derive_model(instance_tangent(), ModelKind::Marginal);
    for (int id = 0; id < 2; ++id) {
        const auto& sep = std::get<SeparableCost>(marginal.instance.cost(id));
        CHECK(sep.per_asset[0] == Pwl::linear(Rat(1)));
    }

    // scalable: S_inf of e^x - 1 blocks buying, selling is free of revenue
    const DerivedModel scalable = derive_model(instance_tangent(), ModelKind::Scalable);
    const auto& hz = std::get<SeparableCost>(scalable.instance.cost(1));
    CHECK(hz.per_asset[0].eval(Rat(-3)) == ExtReal(Rat(0)));
    CHECK(hz.per_asset[0].eval(Rat(1)).is_pos_inf());

    // sublinear instances are their own derived models
    EventTree tree = path_tree(1);
    std::vector<CostFunction> costs{bid_ask_cost({Rat(1)}, {Rat(2)}), bid_ask_cost({Rat(1)}, {Rat(3)})};
    std::vector<PolyhedralSet::Row> coneRows{{{Rat(-1)}, Rat(0)}};
    std::vector<PolyhedralSet> sets{PolyhedralSet(1, coneRows), PolyhedralSet(1, coneRows)};
    const MarketInstance sub(tree, 1, costs, sets);
    for (ModelKind kind : {ModelKind::Marginal, ModelKind::Scalable}) {
        const DerivedModel d = derive_model(sub, kind);
        for (int id = 0; id < 2; ++id) {
            CHECK(std::get<SeparableCost>(d.instance.cost(id)).per_asset[0] ==
                  std::get<SeparableCost>(sub.cost(id)).per_asset[0]);
            CHECK(d.instance.constraint(id).contains({Rat(2)}));
            CHECK(!d.instance.constraint(id).contains({Rat(-2)}));
        }
        // conical costs and constraints, validated
        for (int id = 0; id < 2; ++id) {
            CHECK(cost_is_sublinear(d.instance.cost(id)));
            CHECK(d.instance.constraint(id).is_cone());
        }
    }
}

TEST_CASE("plain arbitrage") {
    const ArbitrageVerdict i1 = check_arbitrage(instance_I1());
    CHECK(i1.verdict == Verdict::NoArbitrage);
    CHECK(i1.lp_value == 0);

    const ArbitrageVerdict i2 = check_arbitrage(instance_I2());
    CHECK(i2.verdict == Verdict::Arbitrage);
    CHECK(i2.lp_value > 0);
    check_certificate(instance_I2(), i2);

    // the hand certificate from the linear structure also verifies
    const BudgetReport hand =
        budget_check(instance_I2(), {{Rat(-1), Rat(1)}, {}}, {Rat(0), Rat(1)});
    CHECK(hand.feasible);

    // exponential chain: no arbitrage, certified through the lower sandwich
    const ArbitrageVerdict tang = check_arbitrage(instance_tangent());
    CHECK(tang.verdict == Verdict::NoArbitrage);
    CHECK(tang.flags.closure_sensitive);
}

TEST_CASE("marginal arbitrage") {
    // S' of the exponential chain gives C = {c0 + c1 <= 0}
    const ArbitrageVerdict tang = check_marginal_arbitrage(instance_tangent());
    CHECK(tang.verdict == Verdict::NoArbitrage);

    const ArbitrageVerdict i2 = check_marginal_arbitrage(instance_I2());
    CHECK(i2.verdict == Verdict::Arbitrage);
    check_certificate(derive_model(instance_I2(), ModelKind::Marginal).instance, i2);

    // binomial bid-ask straddling a martingale price: no marginal arbitrage,
    // and a market price deflator certifies it
    EventTree tree = binomial_tree(1);
    std::vector<CostFunction> costs{bid_ask_cost({Rat(1), Rat(1)}, {Rat(1), Rat(1)}),
                                    bid_ask_cost({Rat(1), rat(3, 2)}, {Rat(1), Rat(2)}),
                                    bid_ask_cost({Rat(1), rat(1, 2)}, {Rat(1), rat(3, 4)})};
    std::vector<PolyhedralSet> sets(3, PolyhedralSet::whole_space(2));
    const MarketInstance straddle(tree, 2, std::move(costs), std::move(sets));
    CHECK(check_marginal_arbitrage(straddle).verdict == Verdict::NoArbitrage);
    const DeflatorSearch def = find_deflator(straddle, DeflatorKind::MarketPrice);
    CHECK(def.found());
    CHECK(verify_deflator(straddle, *def.certificate).valid);
}

TEST_CASE("scalable arbitrage") {
    // finite-depth one-sided book: no scalable arbitrage, ever
    const ArbitrageVerdict book = check_scalable_arbitrage(instance_one_sided_book());
    CHECK(book.verdict == Verdict::NoArbitrage);
    CHECK(!book.flags.s_prime_finite);
    CHECK(!book.flags.cones_hypotheses);

    // linear conical instance: scalable coincides with plain
    const ArbitrageVerdict i2 = check_scalable_arbitrage(instance_I2());
    CHECK(i2.verdict == Verdict::Arbitrage);
    check_certificate(derive_model(instance_I2(), ModelKind::Scalable).instance, i2);

    // bounded constraint sets kill scalable arbitrage
    const ArbitrageVerdict boxed = check_scalable_arbitrage(instance_boxed_linear());
    CHECK(boxed.verdict == Verdict::NoArbitrage);
}

TEST_CASE("market price deflators") {
    // I1: the deflated price process must be a martingale: y = (1, 1/2)
    const DeflatorSearch found = find_deflator(instance_I1(), DeflatorKind::MarketPrice);
    REQUIRE(found.found());
    CHECK(found.certificate->y == ScalarProcess{Rat(1), rat(1, 2)});
    CHECK(found.certificate->s[0] == Vec{Rat(1)});
    CHECK(found.certificate->s[1] == Vec{Rat(2)});
    CHECK(verify_deflator(instance_I1(), *found.certificate).valid);

    // I2: cash forces y to be a martingale while the risky leg needs y to halve
    const DeflatorSearch none = find_deflator(instance_I2(), DeflatorKind::MarketPrice);
    CHECK(!none.found());
}

TEST_CASE("marginal price deflators on the smooth example") {
    // martingale price moves: market deflator exists
    const MarketInstance good = instance_exp_binomial(2, Rat(2), rat(1, 2));
    const DeflatorSearch market = find_deflator(good, DeflatorKind::MarketPrice);
    REQUIRE(market.found());
    CHECK(verify_deflator(good, *market.certificate).valid);
    // with a cash account the deflator is a martingale
    const auto& y = market.certificate->y;
    for (int id = 0; id < good.tree().num_nodes(); ++id)
        if (!good.tree().is_leaf(id)) CHECK(cond_expectation(good.tree(), y, id) == y[static_cast<size_t>(id)]);

    // strictly rising prices: no market price deflator at any epsilon, but
    // any positive martingale still deflates some strictly positive marginal
    // price process
    const MarketInstance drift = instance_exp_binomial(2, Rat(2), rat(3, 2));
    CHECK(!find_deflator(drift, DeflatorKind::MarketPrice).found());
    const DeflatorSearch marginal = find_deflator(drift, DeflatorKind::MarginalPrice);
    REQUIRE(marginal.found());
    for (int id = 0; id < drift.tree().num_nodes(); ++id) {
        CHECK(marginal.certificate->s[static_cast<size_t>(id)][0] == 1);  // cash price stays 1
        CHECK(marginal.certificate->s[static_cast<size_t>(id)][1] > 0);   // risky price strictly positive
    }
}

TEST_CASE("deflator verification residuals") {
    // perturbing y_1 to 3/5 in I1 breaks the martingale property by 1/5
    DeflatorCertificate cert{DeflatorKind::MarketPrice,
                             {Rat(1), rat(3, 5)},
                             {{Rat(1)}, {Rat(2)}},
                             rat(1, 100)};
    const DeflatorResiduals res = verify_deflator(instance_I1(), cert);
    CHECK(!res.valid);
    CHECK(res.per_node[0].cone_membership == rat(1, 5));
    CHECK(res.per_node[0].price_membership == 0);

    // a price outside the bid-ask interval is flagged
    DeflatorCertificate bad{DeflatorKind::MarketPrice,
                            {Rat(1), rat(1, 2)},
                            {{Rat(3)}, {Rat(2)}},
                            rat(1, 100)};
    const DeflatorResiduals res2 = verify_deflator(instance_I1(), bad);
    CHECK(!res2.valid);
    CHECK(res2.per_node[0].price_membership == Rat(2));  // distance from 3 to {1}
}

TEST_CASE("profit function: primal and dual") {
    const MarketInstance m = instance_I1();
    const ScalarProcess good{Rat(1), rat(1, 2)};
    const SigmaValue p = sigma_primal(m, good);
    const SigmaValue d = sigma_dual(m, good);
    CHECK(p.value == ExtReal(Rat(0)));
    CHECK(d.value == ExtReal(Rat(0)));
    REQUIRE(d.attaining_v.has_value());
    CHECK((*d.attaining_v)[0] == Vec{Rat(1)});
    CHECK((*d.attaining_v)[1] == Vec{Rat(1)});

    const ScalarProcess ones{Rat(1), Rat(1)};
    CHECK(sigma_primal(m, ones).value.is_pos_inf());
    CHECK(sigma_dual(m, ones).value.is_pos_inf());

    const ScalarProcess zero{Rat(0), Rat(0)};
    CHECK(sigma_primal(m, zero).value == ExtReal(Rat(0)));
    CHECK(sigma_dual(m, zero).value == ExtReal(Rat(0)));

    CHECK_THROWS_AS(sigma_primal(m, ScalarProcess{Rat(-1), Rat(0)}), std::invalid_argument);
}

TEST_CASE("profit function duality on random instances") {
    Rng rng(31);
    int finite_matches = 0;
    for (int round = 0; round < 40; ++round) {
        const MarketInstance m = random_polyhedral_instance(rng);
        for (int k = 0; k < 2; ++k) {
            const ScalarProcess y = random_weights(rng, m.tree());
            const SigmaValue p = sigma_primal(m, y);
            const SigmaValue d = sigma_dual(m, y);
            CHECK(p.value == d.value);
            if (p.value.is_finite()) ++finite_matches;
        }
    }
    CHECK(finite_matches > 10);
}

TEST_CASE("membership in the scaled claim sets") {
    const MarketInstance m = instance_tangent();
    // boundary of { e^{c0} - 1 + c1 <= 0 } at c0 = -1
    CHECK(membership_scaled(m, {Rat(-1), *parse_rat("0.632")}, Rat(1)).verdict == Membership::Yes);
    CHECK(membership_scaled(m, {Rat(-1), *parse_rat("0.633")}, Rat(1)).verdict == Membership::No);

    // nonpositive claims always belong
    Rng rng(32);
    for (int round = 0; round < 10; ++round) {
        const MarketInstance poly = random_polyhedral_instance(rng);
        ScalarProcess c = random_claim(rng, poly.tree());
        for (Rat& v : c) v = v > 0 ? -v : v;
        for (const Rat alpha : {rat(1, 2), Rat(1), Rat(3)})
            CHECK(membership_scaled(poly, c, alpha).verdict == Membership::Yes);
    }

    // closed-form grid agreement for the exponential chain
    for (int i = -8; i <= 8; i += 2) {
        for (int j = -8; j <= 8; j += 2) {
            const Rat c0 = rat(i, 4);
            const Rat c1 = rat(j, 4);
            const bool closed_form = tangent_example_contains(c0, c1);
            CHECK((membership_scaled(m, {c0, c1}, Rat(1)).verdict == Membership::Yes) == closed_form);
        }
    }

    // alpha C grows toward { c1 <= -c0 } but touches the line only at 0: the
    // exact chain answers No at every alpha
    const ScalarProcess edge{Rat(-1), Rat(1)};
    CHECK(membership_scaled(m, edge, Rat(1)).verdict == Membership::No);
    CHECK(membership_scaled(m, edge, Rat(64)).verdict == Membership::No);

    // under the lower PWL sandwich the limiting tangent is present, so the
    // scaled sets reach the line at a finite alpha
    AnalysisOptions opt;
    const auto& ec = std::get<ExponentialCost>(m.cost(1));
    const SandwichResult sw = pwl_sandwich(ec, opt.sandwich_grid, opt.sandwich_gap_bound);
    std::vector<CostFunction> costs{m.cost(0), sw.lower};
    std::vector<PolyhedralSet> sets{PolyhedralSet::whole_space(1), PolyhedralSet::whole_space(1)};
    const MarketInstance lower_model(m.tree(), 1, std::move(costs), std::move(sets));
    CHECK(membership_scaled(lower_model, edge, Rat(1)).verdict == Membership::No);
    CHECK(membership_scaled(lower_model, edge, Rat(64)).verdict == Membership::Yes);
}

TEST_CASE("scaling identity for polyhedral instances") {
    Rng rng(33);
    for (int round = 0; round < 25; ++round) {
        const MarketInstance m = random_polyhedral_instance(rng);
        const ScalarProcess c = random_claim(rng, m.tree());
        for (const Rat alpha : {rat(1, 2), Rat(2), Rat(4)}) {
            // c in alpha C(S, D) iff c / alpha in C(S, D)
            ScalarProcess unscaled = c;
            for (Rat& v : unscaled) v /= alpha;
            const bool direct = membership(m, unscaled).verdict == Membership::Yes;
            CHECK((membership_scaled(m, c, alpha).verdict == Membership::Yes) == direct);
        }
    }
}

TEST_CASE("arbitrage hierarchy and sublinear collapse") {
    Rng rng(34);
    for (int round = 0; round < 40; ++round) {
        const MarketInstance m = random_polyhedral_instance(rng);
        const ArbitrageVerdict plain = check_arbitrage(m);
        const ArbitrageVerdict scalable = check_scalable_arbitrage(m);
        if (plain.verdict == Verdict::NoArbitrage) CHECK(scalable.verdict == Verdict::NoArbitrage);
        if (plain.exists()) check_certificate(m, plain);
    }
    InstanceConfig cfg;
    cfg.sublinear_only = true;
    for (int round = 0; round < 25; ++round) {
        const MarketInstance m = random_polyhedral_instance(rng, cfg);
        const Verdict a = check_arbitrage(m).verdict;
        CHECK(check_marginal_arbitrage(m).verdict == a);
        CHECK(check_scalable_arbitrage(m).verdict == a);
    }
}

TEST_CASE("deflator existence matches arbitrage at polyhedral scale") {
    Rng rng(35);
    InstanceConfig cfg;  // s' finite by default
    int found_count = 0;
    for (int round = 0; round < 30; ++round) {
        const MarketInstance m = random_polyhedral_instance(rng, cfg);
        const bool no_marginal_arb = check_marginal_arbitrage(m).verdict == Verdict::NoArbitrage;
        const DeflatorSearch def = find_deflator(m, DeflatorKind::MarketPrice);
        CHECK(no_marginal_arb == def.found());
        if (def.found()) {
            ++found_count;
            CHECK(verify_deflator(m, *def.certificate).valid);
        }
    }
    CHECK(found_count > 3);

    InstanceConfig scalable_cfg;
    scalable_cfg.ensure_finite_valued = true;
    scalable_cfg.allow_books = false;
    int marginal_found = 0;
    for (int round = 0; round < 30; ++round) {
        const MarketInstance m = random_polyhedral_instance(rng, scalable_cfg);
        REQUIRE(instance_flags(m).cones_hypotheses);
        const bool no_scalable_arb = check_scalable_arbitrage(m).verdict == Verdict::NoArbitrage;
        const DeflatorSearch def = find_deflator(m, DeflatorKind::MarginalPrice);
        CHECK(no_scalable_arb == def.found());
        if (def.found()) {
            ++marginal_found;
            CHECK(verify_deflator(m, *def.certificate).valid);
        }
    }
    CHECK(marginal_found > 3);
}

TEST_CASE("easy directions hold on analytic instances too") {
    // deflator found implies the corresponding arbitrage check is negative,
    // with no polyhedrality hypothesis
    for (const auto& [up, down] : std::vector<std::pair<Rat, Rat>>{
             {Rat(2), rat(1, 2)}, {Rat(2), rat(3, 2)}, {rat(3, 4), rat(1, 4)}}) {
        const MarketInstance m = instance_exp_binomial(2, up, down);
        if (find_deflator(m, DeflatorKind::MarketPrice).found())
            CHECK(check_marginal_arbitrage(m).verdict == Verdict::NoArbitrage);
        if (find_deflator(m, DeflatorKind::MarginalPrice).found())
            CHECK(check_scalable_arbitrage(m).verdict == Verdict::NoArbitrage);
    }
}

TEST_CASE("cone inclusions between scaled and derived claim sets") {
    Rng rng(36);
    InstanceConfig cfg;
    cfg.ensure_finite_valued = true;
    cfg.allow_books = false;
    for (int round = 0; round < 10; ++round) {
        const MarketInstance m = random_polyhedral_instance(rng, cfg);
        const MarketInstance marginal = derive_model(m, ModelKind::Marginal).instance;
        const MarketInstance scalable = derive_model(m, ModelKind::Scalable).instance;
        for (int k = 0; k < 10; ++k) {
            const ScalarProcess c = random_claim(rng, m.tree());
            // union side: membership in some alpha C implies membership in C(S', D')
            for (const Rat alpha : {rat(1, 4), Rat(1), Rat(8)}) {
                if (membership_scaled(m, c, alpha).verdict == Membership::Yes)
                    CHECK(membership(marginal, c).verdict == Membership::Yes);
            }
            // intersection side: membership in C(S_inf, D_inf) implies membership
            // in every alpha C under the verified hypotheses
            if (membership(scalable, c).verdict == Membership::Yes) {
                for (int e = -6; e <= 6; e += 3)
                    CHECK(membership_scaled(m, c, e >= 0 ? Rat(1 << e) : rat(1, 1 << (-e))).verdict ==
                          Membership::Yes);
            }
        }
    }
}
