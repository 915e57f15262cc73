#include "illiq/polyhedra.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "illiq/lp.hpp"

namespace illiq {

Rat dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    Rat acc(0);
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

namespace {

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

// Scale to the coprime integer vector with the same direction.
void canonicalize_ray(Vec& r) {
    mpz_class den_lcm(1);
    for (const Rat& x : r) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den().get_mpz_t());
    mpz_class num_gcd(0);
    for (Rat& x : r) {
        x *= Rat(den_lcm);
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), x.get_num().get_mpz_t());
    }
    if (num_gcd == 0) return;
    for (Rat& x : r) x /= Rat(num_gcd);
}

void check_dimension(int dim, const std::vector<Vec>& vs, const char* what) {
    for (const Vec& v : vs)
        if (static_cast<int>(v.size()) != dim) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

// Motzkin double description: rays of {x : a . x <= 0 for all a in normals},
// starting from the +-basis generators of the whole space. Produces a
// generating set (possibly with redundant members), canonicalized and deduped.
std::vector<Vec> rays_of_halfspace_intersection(int dim, const std::vector<Vec>& normals) {
    if (dim > kMaxConvertDimension)
        throw std::invalid_argument("cone_convert: dimension exceeds configured cap");
    std::vector<Vec> rays;
    for (int i = 0; i < dim; ++i) {
        Vec e(static_cast<size_t>(dim), Rat(0));
        e[static_cast<size_t>(i)] = 1;
        rays.push_back(e);
        e[static_cast<size_t>(i)] = -1;
        rays.push_back(e);
    }

    for (const Vec& a : normals) {
        std::vector<Vec> keep;
        std::vector<std::pair<Vec, Rat>> plus, minus;
        for (Vec& r : rays) {
            Rat p = dot(a, r);
            if (p > 0)
                plus.emplace_back(std::move(r), std::move(p));
            else if (p < 0)
                minus.emplace_back(std::move(r), std::move(p));
            else
                keep.push_back(std::move(r));
        }
        for (const auto& [rp, pp] : plus) {
            for (const auto& [rm, pm] : minus) {
                // positive combination landing on the hyperplane a . x = 0
                Vec mix(static_cast<size_t>(dim));
                for (int k = 0; k < dim; ++k)
                    mix[static_cast<size_t>(k)] = pp * rm[static_cast<size_t>(k)] - pm * rp[static_cast<size_t>(k)];
                if (is_zero(mix)) continue;
                canonicalize_ray(mix);
                keep.push_back(std::move(mix));
            }
        }
        for (auto& [r, p] : minus) keep.push_back(std::move(r));
        std::sort(keep.begin(), keep.end());
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
        rays = std::move(keep);
    }

    for (Vec& r : rays) canonicalize_ray(r);
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    return rays;
}

}  // namespace

PolyhedralCone PolyhedralCone::from_inequalities(int dim, std::vector<Vec> normals) {
    check_dimension(dim, normals, "cone");
    PolyhedralCone cone;
    cone.dim_ = dim;
    cone.has_ineq_ = true;
    cone.ineq_ = std::move(normals);
    return cone;
}

PolyhedralCone PolyhedralCone::from_rays(int dim, std::vector<Vec> rays) {
    check_dimension(dim, rays, "cone");
    PolyhedralCone cone;
    cone.dim_ = dim;
    cone.has_rays_ = true;
    cone.rays_ = std::move(rays);
    for (Vec& r : cone.rays_) canonicalize_ray(r);
    std::sort(cone.rays_.begin(), cone.rays_.end());
    cone.rays_.erase(std::unique(cone.rays_.begin(), cone.rays_.end()), cone.rays_.end());
    std::erase_if(cone.rays_, [](const Vec& r) { return is_zero(r); });
    return cone;
}

const std::vector<Vec>& PolyhedralCone::inequalities() const {
    if (!has_ineq_) throw std::logic_error("cone: inequality representation absent (run cone_convert)");
    return ineq_;
}

const std::vector<Vec>& PolyhedralCone::rays() const {
    if (!has_rays_) throw std::logic_error("cone: ray representation absent (run cone_convert)");
    return rays_;
}

bool PolyhedralCone::contains(const Vec& x) const {
    for (const Vec& a : inequalities())
        if (dot(a, x) > 0) return false;
    return true;
}

PolyhedralCone PolyhedralCone::polar() const {
    PolyhedralCone p;
    p.dim_ = dim_;
    if (has_rays_) {
        p.has_ineq_ = true;
        p.ineq_ = rays_;
    }
    if (has_ineq_) {
        p.has_rays_ = true;
        p.rays_ = ineq_;
    }
    return p;
}

PolyhedralCone cone_convert(const PolyhedralCone& cone) {
    if (cone.has_inequalities() && cone.has_rays()) return cone;
    PolyhedralCone out;
    if (cone.has_inequalities()) {
        auto rays = rays_of_halfspace_intersection(cone.dimension(), cone.inequalities());
        out = PolyhedralCone::from_rays(cone.dimension(), std::move(rays));
        out.attach_inequalities(cone.inequalities());
    } else {
        // V to H: the inequality normals of the cone are the rays of its polar
        auto normals = rays_of_halfspace_intersection(cone.dimension(), cone.rays());
        out = PolyhedralCone::from_rays(cone.dimension(), cone.rays());
        out.attach_inequalities(std::move(normals));
    }
    return out;
}

PolyhedralSet::PolyhedralSet(int dim, std::vector<Row> rows) : dim_(dim), rows_(std::move(rows)) {
    for (const Row& r : rows_) {
        if (static_cast<int>(r.normal.size()) != dim_)
            throw std::invalid_argument("polyhedral set: row dimension mismatch");
        if (r.offset < 0) throw std::invalid_argument("polyhedral set: origin infeasible (offset < 0)");
    }
}

bool PolyhedralSet::is_cone() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.offset == 0; });
}

bool PolyhedralSet::contains(const Vec& x) const {
    for (const Row& r : rows_)
        if (dot(r.normal, x) > r.offset) return false;
    return true;
}

ExtReal PolyhedralSet::support(const Vec& v) const {
    if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("support: dimension mismatch");
    LinearProgram lp;
    lp.sense = Sense::Maximize;
    for (int j = 0; j < dim_; ++j) lp.add_free_variable(v[static_cast<size_t>(j)]);
    for (const Row& r : rows_) {
        std::vector<std::pair<int, Rat>> terms;
        for (int j = 0; j < dim_; ++j)
            if (r.normal[static_cast<size_t>(j)] != 0) terms.emplace_back(j, r.normal[static_cast<size_t>(j)]);
        lp.add_row(std::move(terms), Relation::LessEq, r.offset);
    }
    const LpSolution sol = lp_solve(lp);
    if (sol.status == LpStatus::Unbounded) return ExtReal::pos_inf();
    if (sol.status != LpStatus::Optimal) throw std::logic_error("support: unexpected LP status");
    return ExtReal(sol.objective);
}

PolyhedralCone PolyhedralSet::normal_cone_origin() const {
    std::vector<Vec> gens;
    for (const Row& r : rows_)
        if (r.offset == 0) gens.push_back(r.normal);
    return PolyhedralCone::from_rays(dim_, std::move(gens));
}

PolyhedralCone PolyhedralSet::tangent_cone_origin() const {
    std::vector<Vec> normals;
    for (const Row& r : rows_)
        if (r.offset == 0) normals.push_back(r.normal);
    return PolyhedralCone::from_inequalities(dim_, std::move(normals));
}

PolyhedralCone PolyhedralSet::horizon_cone() const {
    std::vector<Vec> normals;
    for (const Row& r : rows_) normals.push_back(r.normal);
    return PolyhedralCone::from_inequalities(dim_, std::move(normals));
}

PolyhedralCone PolyhedralSet::barrier_cone_closure() const {
    std::vector<Vec> gens;
    for (const Row& r : rows_) gens.push_back(r.normal);
    return PolyhedralCone::from_rays(dim_, std::move(gens));
}

PolyhedralSet PolyhedralSet::scaled(const Rat& alpha) const {
    if (alpha <= 0) throw std::invalid_argument("scaled: alpha must be positive");
    std::vector<Row> rows = rows_;
    for (Row& r : rows) r.offset *= alpha;
    return PolyhedralSet(dim_, std::move(rows));
}

}  // namespace illiq
