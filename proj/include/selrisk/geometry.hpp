#pragma once

#include <optional>
#include <vector>

#include "selrisk/errors.hpp"
#include "selrisk/prob.hpp"

namespace selrisk {

using Vec = std::vector<double>;

bool leq(const Vec& a, const Vec& b);          // componentwise a <= b
bool dominates(const Vec& a, const Vec& b);    // a <= b and a != b
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(const Vec& a, double c);
Vec hadamard(const Vec& a, const Vec& b);
double dot(const Vec& a, const Vec& b);

/// Axis-aligned box window, one (lo, hi) pair per coordinate.
struct Window {
    std::vector<std::pair<double, double>> ranges;

    std::size_t dim() const { return ranges.size(); }
    double xlo() const { return ranges.at(0).first; }
    double xhi() const { return ranges.at(0).second; }
    double ylo() const { return ranges.at(1).first; }
    double yhi() const { return ranges.at(1).second; }
    double l1_diameter() const;
};

std::vector<double> make_grid(double lo, double hi, double step);

/// Building block of a lower set: a translated negative orthant
/// {x : x <= apex}, a half-space {x : normal.x <= offset} with nonnegative
/// normal (canonically scaled to sum 1), or all of R^d.
class Primitive {
public:
    enum class Kind { Orthant, HalfSpace, Full };

    static Primitive orthant(Vec apex);
    static Primitive half_space(Vec normal, double offset);
    // {x : sum x_i <= t}; canonical normal (1/d,...,1/d), offset t/d.
    static Primitive half_space_sum(std::size_t dim, double t);
    static Primitive full(std::size_t dim);

    Kind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    const Vec& apex() const { return data_; }
    const Vec& normal() const { return data_; }
    double offset() const { return offset_; }
    // For a sum-normal half-space, the bound on sum x_i.
    double sum_bound() const { return offset_ * static_cast<double>(dim_); }

    bool contains(const Vec& x, double tol = kBoundaryTol) const;
    bool subset_of(const Primitive& other) const;
    bool same(const Primitive& other) const;

private:
    Primitive(Kind kind, std::size_t dim, Vec data, double offset)
        : kind_(kind), dim_(dim), data_(std::move(data)), offset_(offset) {}
    Kind kind_;
    std::size_t dim_;
    Vec data_;      // apex or normal
    double offset_; // half-space only
};

/// Finite union of primitives in canonical pruned form (no primitive
/// contained in another, deterministic ordering). Always a lower set.
class LowerSet {
public:
    static LowerSet from_primitives(std::vector<Primitive> prims);

    const std::vector<Primitive>& primitives() const { return prims_; }
    std::size_t dim() const { return prims_.front().dim(); }

    bool contains(const Vec& x, double tol = kBoundaryTol) const;
    // Orthant apexes in canonical order.
    std::vector<Vec> generators() const;
    bool has_half_space() const;
    bool orthants_only() const;

    // max { y : (x, y) in set } at abscissa x (d = 2); +inf when the set is
    // a vertical half-plane there, -inf when empty.
    double height_at(double x) const;

private:
    explicit LowerSet(std::vector<Primitive> prims) : prims_(std::move(prims)) {}
    std::vector<Primitive> prims_;
};

struct RandomLowerSet {
    std::vector<LowerSet> atoms;

    std::size_t atom_count() const { return atoms.size(); }
    std::size_t dim() const { return atoms.front().dim(); }
};

/// Sampled lower-left boundary of an upper set in the plane: ys[i] is the
/// least ordinate of the set at xs[i], +inf where the set is empty.
struct BoundaryCurve {
    double xmin = 0.0;
    double xmax = 0.0;
    double step = 0.0;
    std::vector<double> xs;
    std::vector<double> ys;
};

double curve_sup_distance(const BoundaryCurve& a, const BoundaryCurve& b);

/// Upper half-space {x : normal.x >= offset} with nonnegative sum-1 normal.
struct UpperHalfSpace {
    Vec normal;
    double offset;
};

/// An upper set: union of minimal-point orthants p + R_+^d and upper
/// half-spaces, optionally with a sampled boundary curve. `exact` is false
/// when the curve is the only faithful description (curved envelopes,
/// sampled fallbacks).
class RiskSetResult {
public:
    RiskSetResult() = default;
    static RiskSetResult from_points(std::vector<Vec> points,
                                     std::vector<UpperHalfSpace> half_spaces = {});

    const std::vector<Vec>& minimal_points() const { return points_; }
    const std::vector<UpperHalfSpace>& half_spaces() const { return spaces_; }
    const std::optional<BoundaryCurve>& curve() const { return curve_; }
    bool exact() const { return exact_; }
    std::size_t dim() const;

    void attach_curve(BoundaryCurve c) { curve_ = std::move(c); }
    void mark_sampled() { exact_ = false; }

    bool contains(const Vec& x, double tol = kBoundaryTol) const;

private:
    std::vector<Vec> points_;
    std::vector<UpperHalfSpace> spaces_;
    std::optional<BoundaryCurve> curve_;
    bool exact_ = true;
};

RiskSetResult union_of(const RiskSetResult& a, const RiskSetResult& b);
RiskSetResult translate(const RiskSetResult& r, const Vec& v);

LowerSet lower_from_generators(const std::vector<Vec>& points);
LowerSet union_of(const LowerSet& a, const LowerSet& b);
LowerSet minkowski(const LowerSet& a, const LowerSet& b);
LowerSet translate(const LowerSet& a, const Vec& v);
LowerSet scale_coordinatewise(const LowerSet& a, const Vec& z);
LowerSet scale(const LowerSet& a, double c); // c > 0, the set {c x}

RiskSetResult negate(const LowerSet& a);
LowerSet negate(const RiskSetResult& r); // requires an exact result

// Exact intersection of all atoms (the fixed points of the random set);
// throws NotRepresentable when it leaves the primitive class.
LowerSet fixed_points(const RandomLowerSet& X);
LowerSet intersect(const LowerSet& a, const LowerSet& b);

/// Closed convex hull of a planar lower set. Either it stays in the
/// primitive class (half-space present, single orthant) or it is the region
/// under a concave vertex chain.
struct ConcaveChain {
    std::vector<Vec> vertices; // x strictly increasing, y strictly decreasing
    double height_at(double x) const;
};

struct ConvexHull2 {
    std::optional<LowerSet> exact;   // set when representable
    std::optional<ConcaveChain> chain;
};

ConvexHull2 convex_hull(const LowerSet& a);

ConcaveChain chain_of_points(std::vector<Vec> pts); // upper-concave hull
ConcaveChain minkowski(const ConcaveChain& a, const ConcaveChain& b);
ConcaveChain scale_coordinatewise(const ConcaveChain& a, const Vec& z);
ConcaveChain scale(const ConcaveChain& a, double c);

std::vector<Vec> pareto_sample(const LowerSet& a, const Window& window, double step);

std::vector<Vec> pareto_prune(std::vector<Vec> pts);

BoundaryCurve boundary_curve(const RiskSetResult& r, double xmin, double xmax, double step);

} // namespace selrisk
