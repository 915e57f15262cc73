#include "illiq/lp.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace illiq {

namespace {

template <typename T>
struct Scalar;

template <>
struct Scalar<Rat> {
    static Rat from(const Rat& q) { return q; }
    static Rat tol() { return Rat(0); }
};

template <>
struct Scalar<double> {
    static double from(const Rat& q) { return to_double(q); }
    static double tol() { return 1e-9; }
};

enum class VarKind { Shift, Mirror, Split };

struct VarMap {
    VarKind kind;
    Rat base;  // lower bound for Shift, upper bound for Mirror
    int col0 = -1;
    int col1 = -1;  // negative part for Split
};

// Internal row bookkeeping: every internal row ends up as an equality with
// rhs >= 0 and one identity-born column (its slack when the sign works out,
// an artificial otherwise).
struct RowInfo {
    int user_row = -1;  // -1 for variable-bound rows
    int sign = 1;       // internal row = sign * (user row)
    int id_col = -1;
};

template <typename T>
class Simplex {
  public:
    Simplex(const LinearProgram& lp, long max_pivots) : lp_(lp), max_pivots_(max_pivots) { build(); }

    LpResult<T> run() {
        LpResult<T> result;
        if (!phase1()) {
            result.status = infeasible_ ? LpStatus::Infeasible : LpStatus::IterationLimit;
            result.pivots = pivots_;
            return result;
        }
        const LpStatus st = phase2();
        result.status = st;
        result.pivots = pivots_;
        if (st != LpStatus::Optimal) return result;
        extract(result);
        return result;
    }

  private:
    const LinearProgram& lp_;
    long max_pivots_;
    long pivots_ = 0;
    bool infeasible_ = false;

    int n_struct_ = 0;
    int n_total_ = 0;
    int first_artificial_ = 0;
    std::vector<VarMap> vmap_;
    std::vector<RowInfo> rinfo_;
    std::vector<std::vector<T>> tab_;
    std::vector<T> b_;
    std::vector<int> basis_;
    std::vector<T> zc_;  // z_j - c_j for the active cost vector
    T zval_{};

    static bool pos(const T& v) { return v > Scalar<T>::tol(); }
    static bool neg(const T& v) { return v < -Scalar<T>::tol(); }

    void build() {
        const int n = lp_.num_variables();
        if (static_cast<int>(lp_.lower.size()) != n || static_cast<int>(lp_.upper.size()) != n)
            throw std::invalid_argument("lp: bound arrays do not match variable count");

        // variable presolve: shift, mirror or split so that internals are >= 0
        vmap_.resize(n);
        for (int j = 0; j < n; ++j) {
            const ExtReal& lo = lp_.lower[j];
            const ExtReal& hi = lp_.upper[j];
            if (hi < lo) throw std::invalid_argument("lp: empty variable bound interval");
            if (lo.is_finite()) {
                vmap_[j] = VarMap{VarKind::Shift, lo.finite(), n_struct_++, -1};
            } else if (hi.is_finite()) {
                vmap_[j] = VarMap{VarKind::Mirror, hi.finite(), n_struct_++, -1};
            } else {
                vmap_[j] = VarMap{VarKind::Split, Rat(0), n_struct_, n_struct_ + 1};
                n_struct_ += 2;
            }
        }

        struct DenseRow {
            std::vector<Rat> a;
            Rat rhs;
            Relation rel;
            int user_row;
        };
        std::vector<DenseRow> dense;

        auto substitute = [&](const std::vector<std::pair<int, Rat>>& terms, const Rat& rhs,
                              Relation rel, int user_row) {
            DenseRow row{std::vector<Rat>(static_cast<size_t>(n_struct_), Rat(0)), rhs, rel, user_row};
            for (const auto& [var, coef] : terms) {
                if (var < 0 || var >= n) throw std::invalid_argument("lp: row references unknown variable");
                const VarMap& vm = vmap_[var];
                switch (vm.kind) {
                    case VarKind::Shift:
                        row.a[vm.col0] += coef;
                        row.rhs -= coef * vm.base;
                        break;
                    case VarKind::Mirror:
                        row.a[vm.col0] -= coef;
                        row.rhs -= coef * vm.base;
                        break;
                    case VarKind::Split:
                        row.a[vm.col0] += coef;
                        row.a[vm.col1] -= coef;
                        break;
                }
            }
            dense.push_back(std::move(row));
        };

        for (size_t r = 0; r < lp_.rows.size(); ++r)
            substitute(lp_.rows[r].terms, lp_.rows[r].rhs, lp_.rows[r].rel, static_cast<int>(r));
        // finite two-sided bounds become explicit rows on the shifted variable
        for (int j = 0; j < n; ++j) {
            if (vmap_[j].kind == VarKind::Shift && lp_.upper[j].is_finite()) {
                DenseRow row{std::vector<Rat>(static_cast<size_t>(n_struct_), Rat(0)),
                             lp_.upper[j].finite() - vmap_[j].base, Relation::LessEq, -1};
                row.a[vmap_[j].col0] = 1;
                dense.push_back(std::move(row));
            }
        }

        const int m = static_cast<int>(dense.size());
        rinfo_.resize(m);

        // count slacks, then artificials
        int n_slack = 0;
        for (const auto& row : dense)
            if (row.rel != Relation::Equal) ++n_slack;
        first_artificial_ = n_struct_ + n_slack;

        // slack sign after making rhs nonnegative decides whether an
        // artificial is needed
        int n_art = 0;
        for (int i = 0; i < m; ++i) {
            int s = dense[i].rel == Relation::LessEq ? 1 : (dense[i].rel == Relation::GreaterEq ? -1 : 0);
            if (dense[i].rhs < 0) s = -s;
            if (s != 1) ++n_art;
        }
        n_total_ = n_struct_ + n_slack + n_art;

        tab_.assign(m, std::vector<T>(n_total_, T{}));
        b_.assign(m, T{});
        basis_.assign(m, -1);

        int slack_col = n_struct_;
        int art_col = first_artificial_;
        for (int i = 0; i < m; ++i) {
            int sign = dense[i].rhs < 0 ? -1 : 1;
            rinfo_[i].user_row = dense[i].user_row;
            rinfo_[i].sign = sign;
            for (int jc = 0; jc < n_struct_; ++jc) {
                Rat v = dense[i].a[jc];
                if (sign < 0) v = -v;
                tab_[i][jc] = Scalar<T>::from(v);
            }
            b_[i] = Scalar<T>::from(sign < 0 ? Rat(-dense[i].rhs) : dense[i].rhs);

            int slack_coeff = 0;
            if (dense[i].rel != Relation::Equal) {
                slack_coeff = (dense[i].rel == Relation::LessEq ? 1 : -1) * sign;
                tab_[i][slack_col] = Scalar<T>::from(Rat(slack_coeff));
            }
            if (slack_coeff == 1) {
                rinfo_[i].id_col = slack_col;
                basis_[i] = slack_col;
            } else {
                tab_[i][art_col] = Scalar<T>::from(Rat(1));
                rinfo_[i].id_col = art_col;
                basis_[i] = art_col;
                ++art_col;
            }
            if (dense[i].rel != Relation::Equal) ++slack_col;
        }
    }

    // internal phase-2 cost: minimize factor * user objective
    std::vector<T> internal_cost() const {
        std::vector<T> c(n_total_, T{});
        const Rat factor = lp_.sense == Sense::Maximize ? Rat(-1) : Rat(1);
        for (int j = 0; j < lp_.num_variables(); ++j) {
            const Rat cf = factor * lp_.objective[j];
            const VarMap& vm = vmap_[j];
            switch (vm.kind) {
                case VarKind::Shift:
                    c[vm.col0] = c[vm.col0] + Scalar<T>::from(cf);
                    break;
                case VarKind::Mirror:
                    c[vm.col0] = c[vm.col0] - Scalar<T>::from(cf);
                    break;
                case VarKind::Split:
                    c[vm.col0] = c[vm.col0] + Scalar<T>::from(cf);
                    c[vm.col1] = c[vm.col1] - Scalar<T>::from(cf);
                    break;
            }
        }
        return c;
    }

    void compute_zc(const std::vector<T>& cost) {
        const int m = static_cast<int>(tab_.size());
        zc_.assign(n_total_, T{});
        zval_ = T{};
        for (int i = 0; i < m; ++i) {
            const T& cb = cost[basis_[i]];
            if (cb == T{}) continue;
            for (int j = 0; j < n_total_; ++j) zc_[j] = zc_[j] + cb * tab_[i][j];
            zval_ = zval_ + cb * b_[i];
        }
        for (int j = 0; j < n_total_; ++j) zc_[j] = zc_[j] - cost[j];
    }

    void pivot(int r, int jcol) {
        const int m = static_cast<int>(tab_.size());
        const T piv = tab_[r][jcol];
        for (int j = 0; j < n_total_; ++j) tab_[r][j] = tab_[r][j] / piv;
        b_[r] = b_[r] / piv;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            const T f = tab_[i][jcol];
            if (f == T{}) continue;
            for (int j = 0; j < n_total_; ++j) tab_[i][j] = tab_[i][j] - f * tab_[r][j];
            b_[i] = b_[i] - f * b_[r];
        }
        const T fz = zc_[jcol];
        if (fz != T{}) {
            for (int j = 0; j < n_total_; ++j) zc_[j] = zc_[j] - fz * tab_[r][j];
            zval_ = zval_ - fz * b_[r];
        }
        basis_[r] = jcol;
        ++pivots_;
    }

    // Bland: smallest improving column, smallest basic label on ratio ties.
    // Returns Optimal when no improving column, Unbounded when a column has no
    // blocking row.
    LpStatus iterate(bool allow_artificials) {
        const int m = static_cast<int>(tab_.size());
        const int limit = allow_artificials ? n_total_ : first_artificial_;
        while (true) {
            if (pivots_ >= max_pivots_) return LpStatus::IterationLimit;
            int enter = -1;
            for (int j = 0; j < limit; ++j) {
                if (pos(zc_[j])) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            int leave = -1;
            T best_ratio{};
            for (int i = 0; i < m; ++i) {
                if (!pos(tab_[i][enter])) continue;
                const T ratio = b_[i] / tab_[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return LpStatus::Unbounded;
            pivot(leave, enter);
        }
    }

    bool phase1() {
        const int m = static_cast<int>(tab_.size());
        bool any_artificial = false;
        for (int i = 0; i < m; ++i) any_artificial |= basis_[i] >= first_artificial_;
        if (!any_artificial) return true;

        std::vector<T> c1(n_total_, T{});
        for (int j = first_artificial_; j < n_total_; ++j) c1[j] = Scalar<T>::from(Rat(1));
        compute_zc(c1);
        const LpStatus st = iterate(/*allow_artificials=*/true);
        if (st == LpStatus::IterationLimit) return false;
        if (pos(zval_)) {
            infeasible_ = true;
            return false;
        }
        // drive leftover artificials out of the (degenerate) basis
        for (int i = 0; i < m; ++i) {
            if (basis_[i] < first_artificial_) continue;
            int col = -1;
            for (int j = 0; j < first_artificial_; ++j) {
                if (pos(tab_[i][j]) || neg(tab_[i][j])) {
                    col = j;
                    break;
                }
            }
            if (col >= 0) pivot(i, col);
        }
        return true;
    }

    LpStatus phase2() {
        compute_zc(internal_cost());
        return iterate(/*allow_artificials=*/false);
    }

    void extract(LpResult<T>& result) const {
        const int m = static_cast<int>(tab_.size());
        std::vector<T> z(n_total_, T{});
        for (int i = 0; i < m; ++i) z[basis_[i]] = b_[i];

        const int n = lp_.num_variables();
        result.primal.assign(n, T{});
        for (int j = 0; j < n; ++j) {
            const VarMap& vm = vmap_[j];
            switch (vm.kind) {
                case VarKind::Shift:
                    result.primal[j] = Scalar<T>::from(vm.base) + z[vm.col0];
                    break;
                case VarKind::Mirror:
                    result.primal[j] = Scalar<T>::from(vm.base) - z[vm.col0];
                    break;
                case VarKind::Split:
                    result.primal[j] = z[vm.col0] - z[vm.col1];
                    break;
            }
        }
        result.objective = T{};
        for (int j = 0; j < n; ++j)
            result.objective = result.objective + Scalar<T>::from(lp_.objective[j]) * result.primal[j];

        // duals from the identity-born column of each row
        const Rat factor = lp_.sense == Sense::Maximize ? Rat(-1) : Rat(1);
        result.row_duals.assign(lp_.rows.size(), T{});
        for (size_t i = 0; i < rinfo_.size(); ++i) {
            if (rinfo_[i].user_row < 0) continue;
            T y = zc_[rinfo_[i].id_col];
            if (rinfo_[i].sign < 0) y = T{} - y;
            if (factor < 0) y = T{} - y;
            result.row_duals[rinfo_[i].user_row] = y;
        }
        result.reduced_costs.assign(n, T{});
        for (int j = 0; j < n; ++j) result.reduced_costs[j] = Scalar<T>::from(lp_.objective[j]);
        for (size_t r = 0; r < lp_.rows.size(); ++r) {
            const T& y = result.row_duals[r];
            if (y == T{}) continue;
            for (const auto& [var, coef] : lp_.rows[r].terms)
                result.reduced_costs[var] = result.reduced_costs[var] - y * Scalar<T>::from(coef);
        }
    }
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp, long max_pivots) {
    Simplex<Rat> solver(lp, max_pivots);
    return solver.run();
}

LpSolutionF lp_solve_float(const LinearProgram& lp, long max_pivots) {
    Simplex<double> solver(lp, max_pivots);
    return solver.run();
}

Rat lp_dual_objective(const LinearProgram& lp, const LpSolution& sol) {
    assert(sol.optimal());
    Rat value(0);
    for (size_t r = 0; r < lp.rows.size(); ++r) value += sol.row_duals[r] * lp.rows[r].rhs;
    for (int j = 0; j < lp.num_variables(); ++j) {
        const Rat& rc = sol.reduced_costs[j];
        if (rc == 0) continue;
        const bool at_lower = lp.sense == Sense::Maximize ? rc < 0 : rc > 0;
        const ExtReal& bound = at_lower ? lp.lower[j] : lp.upper[j];
        assert(bound.is_finite());
        value += rc * bound.finite();
    }
    return value;
}

}  // namespace illiq
