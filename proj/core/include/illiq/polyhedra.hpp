#pragma once

#include <vector>

#include "illiq/extreal.hpp"

namespace illiq {

using Vec = std::vector<Rat>;

Rat dot(const Vec& a, const Vec& b);

// Polyhedral cone, either {x : a_i . x <= 0} (inequalities) or
// {sum lambda_k r_k : lambda >= 0} (rays). Conversion goes through the double
// description method; both representations may be present.
class PolyhedralCone {
  public:
    static PolyhedralCone from_inequalities(int dim, std::vector<Vec> normals);
    static PolyhedralCone from_rays(int dim, std::vector<Vec> rays);

    int dimension() const { return dim_; }
    bool has_inequalities() const { return has_ineq_; }
    bool has_rays() const { return has_rays_; }
    const std::vector<Vec>& inequalities() const;
    const std::vector<Vec>& rays() const;

    // Membership test; needs the inequality representation.
    bool contains(const Vec& x) const;

    // Polar cone {v : v . x <= 0 for all x in the cone}. Cheap: swaps the role
    // of the two representations.
    PolyhedralCone polar() const;

    void attach_inequalities(std::vector<Vec> normals) {
        ineq_ = std::move(normals);
        has_ineq_ = true;
    }

  private:
    int dim_ = 0;
    bool has_ineq_ = false;
    bool has_rays_ = false;
    std::vector<Vec> ineq_;
    std::vector<Vec> rays_;
};

// Fills in the missing representation (Motzkin double description). Dimension
// is capped; conversion beyond the cap is refused rather than attempted.
inline constexpr int kMaxConvertDimension = 16;
PolyhedralCone cone_convert(const PolyhedralCone& cone);

// Closed convex polyhedron {x : a_i . x <= b_i} required to contain the
// origin (all b_i >= 0). Used for the per-node portfolio constraint sets.
class PolyhedralSet {
  public:
    struct Row {
        Vec normal;
        Rat offset;
    };

    PolyhedralSet(int dim, std::vector<Row> rows);
    static PolyhedralSet whole_space(int dim) { return PolyhedralSet(dim, {}); }

    int dimension() const { return dim_; }
    const std::vector<Row>& rows() const { return rows_; }
    bool is_whole_space() const { return rows_.empty(); }
    bool is_cone() const;

    bool contains(const Vec& x) const;

    // sup { v . x : x in the set }; +inf outside the barrier cone. Solved as
    // an exact LP.
    ExtReal support(const Vec& v) const;

    // The four derived cones.
    PolyhedralCone normal_cone_origin() const;   // rays = normals of rows active at 0
    PolyhedralCone tangent_cone_origin() const;  // {x : a_i . x <= 0, i active at 0}
    PolyhedralCone horizon_cone() const;         // {x : a_i . x <= 0 for all i}
    PolyhedralCone barrier_cone_closure() const; // rays = all row normals

    // alpha * D: offsets scale, normals stay.
    PolyhedralSet scaled(const Rat& alpha) const;

  private:
    int dim_ = 0;
    std::vector<Row> rows_;
};

}  // namespace illiq
