#pragma once

#include <utility>
#include <vector>

#include "illiq/extreal.hpp"

namespace illiq {

enum class Sense { Maximize, Minimize };
enum class Relation { LessEq, Equal, GreaterEq };

// Verdicts are exact in rational mode: Infeasible/Unbounded are definitive
// answers, IterationLimit is an explicit failure and never a wrong verdict.
enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LinearProgram {
    struct Row {
        std::vector<std::pair<int, Rat>> terms;  // (variable, coefficient)
        Relation rel = Relation::LessEq;
        Rat rhs;
    };

    Sense sense = Sense::Maximize;
    std::vector<Rat> objective;
    std::vector<ExtReal> lower;
    std::vector<ExtReal> upper;
    std::vector<Row> rows;

    int add_variable(ExtReal lo, ExtReal hi, Rat obj = Rat(0)) {
        lower.push_back(std::move(lo));
        upper.push_back(std::move(hi));
        objective.push_back(std::move(obj));
        return static_cast<int>(objective.size()) - 1;
    }
    int add_free_variable(Rat obj = Rat(0)) {
        return add_variable(ExtReal::neg_inf(), ExtReal::pos_inf(), std::move(obj));
    }
    void add_row(std::vector<std::pair<int, Rat>> terms, Relation rel, Rat rhs) {
        rows.push_back(Row{std::move(terms), rel, std::move(rhs)});
    }
    int num_variables() const { return static_cast<int>(objective.size()); }
};

template <typename T>
struct LpResult {
    LpStatus status = LpStatus::IterationLimit;
    T objective{};
    std::vector<T> primal;         // per variable; empty unless Optimal
    std::vector<T> row_duals;      // per row; empty unless Optimal
    std::vector<T> reduced_costs;  // per variable; empty unless Optimal
    long pivots = 0;

    bool optimal() const { return status == LpStatus::Optimal; }
};

using LpSolution = LpResult<Rat>;
using LpSolutionF = LpResult<double>;

// Primal simplex, Bland's rule, exact rational pivoting. Free variables are
// split and finite bounds shifted at presolve; equality rows stay native.
LpSolution lp_solve(const LinearProgram& lp, long max_pivots = 500000);

// Same algorithm on doubles with a 1e-9 feasibility tolerance.
LpSolutionF lp_solve_float(const LinearProgram& lp, long max_pivots = 500000);

// Dual objective implied by (row_duals, reduced_costs); equals the primal
// objective exactly on every Optimal rational solve.
Rat lp_dual_objective(const LinearProgram& lp, const LpSolution& sol);

}  // namespace illiq
