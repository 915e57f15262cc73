#pragma once

#include <optional>

#include "illiq/exponential.hpp"
#include "illiq/market.hpp"

namespace illiq {

enum class ModelKind { Marginal, Scalable };
enum class DeflatorKind { MarketPrice, MarginalPrice };

struct AnalysisOptions {
    bool float_mode = false;            // solve LPs in doubles (verdict-only fast path)
    Rat marginal_delta;                 // strictly-positive rendering of the exponential price hull
    std::vector<Rat> epsilon_schedule;  // y_n >= eps levels tried in order
    Rat sigma_cap;                      // initial claim cap for the profit-function LP
    int sigma_cap_doublings = 1;
    std::vector<Rat> sandwich_grid;     // risky-coordinate grid for one-sided analytic verdicts
    Rat sandwich_gap_bound;
    long max_pivots = 500000;

    AnalysisOptions();
};

// Static hypothesis flags of an instance; closure_sensitive is set by the
// operations that had to fall back to a sandwich.
struct HypothesisFlags {
    bool s_prime_finite = true;    // 0 interior to every cost domain
    bool cones_hypotheses = true;  // scalable-model sandwich assumptions hold
    bool closure_sensitive = false;
};

HypothesisFlags instance_flags(const MarketInstance& m);

// (alpha * S, alpha D): the instance whose claim set is alpha C(S,D).
MarketInstance scale_instance(const MarketInstance& m, const Rat& alpha);

// The two auxiliary conical models: node-wise subderivative / horizon costs
// with tangent / horizon cone constraints. Always polyhedral, also for the
// exponential family (closed forms).
struct DerivedModel {
    ModelKind kind;
    MarketInstance instance;
};
DerivedModel derive_model(const MarketInstance& m, ModelKind kind);

struct LpStats {
    long pivots = 0;
    int solves = 0;
    void absorb(long p) {
        pivots += p;
        ++solves;
    }
};

enum class Verdict { Arbitrage, NoArbitrage, Undecided };

struct ArbitrageVerdict {
    Verdict verdict = Verdict::Undecided;
    Rat lp_value;        // optimal value of the capped-claim LP (rational mode)
    PortfolioProcess x;  // certificate when verdict == Arbitrage (rational mode)
    ScalarProcess c;
    HypothesisFlags flags;
    LpStats stats;

    bool exists() const { return verdict == Verdict::Arbitrage; }
};

// max sum c_n over budget-feasible (x, c) with 0 <= c_n <= 1; arbitrage iff
// the value is positive (capping is sound: feasibility is monotone in c).
// Analytic instances get one-sided sandwich verdicts, possibly Undecided.
ArbitrageVerdict check_arbitrage(const MarketInstance& m, const AnalysisOptions& opt = AnalysisOptions());
ArbitrageVerdict check_marginal_arbitrage(const MarketInstance& m, const AnalysisOptions& opt = AnalysisOptions());
ArbitrageVerdict check_scalable_arbitrage(const MarketInstance& m, const AnalysisOptions& opt = AnalysisOptions());

struct DeflatorCertificate {
    DeflatorKind kind;
    ScalarProcess y;  // strictly positive, y_root = 1, y_n >= epsilon
    VectorProcess s;  // price process with s_n = v_n / y_n
    Rat epsilon;
};

struct DeflatorSearch {
    std::optional<DeflatorCertificate> certificate;
    LpStats stats;
    bool found() const { return certificate.has_value(); }
};

// LP feasibility in (y, v = y s, cone multipliers); Infeasible at every
// epsilon of the schedule is a definitive negative in rational mode.
DeflatorSearch find_deflator(const MarketInstance& m, DeflatorKind kind,
                             const AnalysisOptions& opt = AnalysisOptions());
DeflatorSearch find_deflator_at(const MarketInstance& m, DeflatorKind kind, const Rat& epsilon,
                                const AnalysisOptions& opt = AnalysisOptions());

// Independent re-check of a deflator certificate: price-set membership per
// node and cone membership of E[d(ys)|F_n] through support-function LPs.
struct DeflatorResiduals {
    struct NodeEntry {
        Rat price_membership;  // 0 when s_n lies in the price set
        Rat cone_membership;   // sup of w . u over the polar cone's unit-box slice
    };
    std::vector<NodeEntry> per_node;
    bool valid = false;
};
DeflatorResiduals verify_deflator(const MarketInstance& m, const DeflatorCertificate& cert);

struct SigmaValue {
    ExtReal value;
    LpStats stats;
    std::optional<VectorProcess> attaining_v;  // dual attaining point when finite
};

// Profit function sigma_C(y) = sup { E sum c_t y_t : c in C(S,D) } by LP with
// cap doubling; +inf is certified by an unbounded uncapped solve.
SigmaValue sigma_primal(const MarketInstance& m, const ScalarProcess& y,
                        const AnalysisOptions& opt = AnalysisOptions());
// Dual form: inf over adapted v of E sum (y_n S_n)^*(v_n) plus the constraint
// support terms at E[dv|F_n]; equals sigma_primal at polyhedral scale.
SigmaValue sigma_dual(const MarketInstance& m, const ScalarProcess& y,
                      const AnalysisOptions& opt = AnalysisOptions());

enum class Membership { Yes, No, Undecided };

struct MembershipResult {
    Membership verdict = Membership::Undecided;
    std::optional<PortfolioProcess> certificate;  // superhedging portfolio on Yes
    HypothesisFlags flags;
    LpStats stats;
};

// Is c in C(S,D)? Exact LP for polyhedral instances; exact closed-form
// elimination for deterministic single-asset analytic chains; sandwich
// one-sided verdicts otherwise.
MembershipResult membership(const MarketInstance& m, const ScalarProcess& c,
                            const AnalysisOptions& opt = AnalysisOptions());
// Is c in alpha C(S,D) = C(alpha * S, alpha D)?
MembershipResult membership_scaled(const MarketInstance& m, const ScalarProcess& c, const Rat& alpha,
                                   const AnalysisOptions& opt = AnalysisOptions());

}  // namespace illiq
