#include "selrisk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace selrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool nearly_equal(double a, double b) { return std::fabs(a - b) <= kExactTol; }

bool same_direction(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!nearly_equal(a[i], b[i]))
            return false;
    return true;
}

bool lex_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

bool leq(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i])
            return false;
    return true;
}

bool dominates(const Vec& a, const Vec& b) { return leq(a, b) && a != b; }

Vec add(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] + b[i];
    return out;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] - b[i];
    return out;
}

Vec scaled(const Vec& a, double c) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = c * a[i];
    return out;
}

Vec hadamard(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] * b[i];
    return out;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double Window::l1_diameter() const {
    double s = 0.0;
    for (const auto& [lo, hi] : ranges)
        s += hi - lo;
    return s;
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0))
        throw Error("grid step must be positive");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> xs(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        xs[k] = lo + static_cast<double>(k) * step;
    return xs;
}

// ---------------------------------------------------------------------------
// Primitive

Primitive Primitive::orthant(Vec apex) {
    if (apex.empty())
        throw DimensionMismatch("orthant apex must have positive dimension");
    const std::size_t d = apex.size();
    return Primitive(Kind::Orthant, d, std::move(apex), 0.0);
}

Primitive Primitive::half_space(Vec normal, double offset) {
    if (normal.empty())
        throw DimensionMismatch("half-space normal must have positive dimension");
    double sum = 0.0;
    for (double n : normal) {
        if (n < -kExactTol)
            throw Error("half-space normal must be nonnegative");
        sum += std::max(n, 0.0);
    }
    if (!(sum > 0.0))
        throw Error("half-space normal must be nonzero");
    for (double& n : normal)
        n = std::max(n, 0.0) / sum;
    offset /= sum;
    if (normal.size() == 1)
        return orthant({offset}); // in d = 1 half-spaces and orthants coincide
    return Primitive(Kind::HalfSpace, normal.size(), std::move(normal), offset);
}

Primitive Primitive::half_space_sum(std::size_t dim, double t) {
    return half_space(Vec(dim, 1.0), t);
}

Primitive Primitive::full(std::size_t dim) {
    if (dim == 0)
        throw DimensionMismatch("full primitive must have positive dimension");
    return Primitive(Kind::Full, dim, {}, 0.0);
}

bool Primitive::contains(const Vec& x, double tol) const {
    if (x.size() != dim_)
        throw DimensionMismatch("point dimension does not match primitive");
    switch (kind_) {
    case Kind::Full:
        return true;
    case Kind::Orthant:
        for (std::size_t i = 0; i < dim_; ++i)
            if (x[i] > data_[i] + tol)
                return false;
        return true;
    case Kind::HalfSpace:
        return dot(data_, x) <= offset_ + tol;
    }
    return false;
}

bool Primitive::subset_of(const Primitive& other) const {
    if (dim_ != other.dim_)
        throw DimensionMismatch("primitive dimensions differ");
    if (other.kind_ == Kind::Full)
        return true;
    if (kind_ == Kind::Full)
        return false;
    if (kind_ == Kind::Orthant && other.kind_ == Kind::Orthant)
        return leq(data_, other.data_);
    if (kind_ == Kind::Orthant && other.kind_ == Kind::HalfSpace)
        return dot(other.data_, data_) <= other.offset_;
    if (kind_ == Kind::HalfSpace && other.kind_ == Kind::HalfSpace)
        return same_direction(data_, other.data_) && offset_ <= other.offset_;
    return false; // half-space never fits inside an orthant for d >= 2
}

bool Primitive::same(const Primitive& other) const {
    if (kind_ != other.kind_ || dim_ != other.dim_)
        return false;
    if (kind_ == Kind::Full)
        return true;
    if (kind_ == Kind::HalfSpace)
        return same_direction(data_, other.data_) && nearly_equal(offset_, other.offset_);
    return data_ == other.data_;
}

// ---------------------------------------------------------------------------
// LowerSet

LowerSet LowerSet::from_primitives(std::vector<Primitive> prims) {
    if (prims.empty())
        throw Error("lower set needs at least one primitive");
    const std::size_t d = prims.front().dim();
    for (const auto& p : prims)
        if (p.dim() != d)
            throw DimensionMismatch("primitives of one lower set must share a dimension");

    for (const auto& p : prims)
        if (p.kind() == Primitive::Kind::Full)
            return LowerSet({Primitive::full(d)});

    // Pairwise pruning: drop any primitive contained in another. Ties (equal
    // primitives) keep the first occurrence.
    std::vector<Primitive> kept;
    for (std::size_t i = 0; i < prims.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < prims.size() && !drop; ++j) {
            if (i == j)
                continue;
            if (prims[i].same(prims[j])) {
                drop = j < i;
            } else if (prims[i].subset_of(prims[j])) {
                drop = true;
            }
        }
        if (!drop)
            kept.push_back(prims[i]);
    }

    std::sort(kept.begin(), kept.end(), [](const Primitive& a, const Primitive& b) {
        if (a.kind() != b.kind())
            return static_cast<int>(a.kind()) < static_cast<int>(b.kind());
        if (a.kind() == Primitive::Kind::Orthant)
            return lex_less(a.apex(), b.apex());
        if (a.kind() == Primitive::Kind::HalfSpace) {
            if (a.normal() != b.normal())
                return lex_less(a.normal(), b.normal());
            return a.offset() < b.offset();
        }
        return false;
    });
    return LowerSet(std::move(kept));
}

bool LowerSet::contains(const Vec& x, double tol) const {
    return std::any_of(prims_.begin(), prims_.end(),
                       [&](const Primitive& p) { return p.contains(x, tol); });
}

std::vector<Vec> LowerSet::generators() const {
    std::vector<Vec> out;
    for (const auto& p : prims_)
        if (p.kind() == Primitive::Kind::Orthant)
            out.push_back(p.apex());
    return out;
}

bool LowerSet::has_half_space() const {
    return std::any_of(prims_.begin(), prims_.end(), [](const Primitive& p) {
        return p.kind() != Primitive::Kind::Orthant;
    });
}

bool LowerSet::orthants_only() const { return !has_half_space(); }

double LowerSet::height_at(double x) const {
    if (dim() != 2)
        throw UnsupportedDimension("height_at is defined for d = 2 only");
    double best = -kInf;
    for (const auto& p : prims_) {
        switch (p.kind()) {
        case Primitive::Kind::Full:
            return kInf;
        case Primitive::Kind::Orthant:
            if (x <= p.apex()[0] + kBoundaryTol)
                best = std::max(best, p.apex()[1]);
            break;
        case Primitive::Kind::HalfSpace: {
            const double n1 = p.normal()[0];
            const double n2 = p.normal()[1];
            if (n2 <= kExactTol) {
                if (x <= p.offset() / n1 + kBoundaryTol)
                    return kInf; // vertical half-plane: unbounded above
            } else {
                best = std::max(best, (p.offset() - n1 * x) / n2);
            }
            break;
        }
        }
    }
    return best;
}

LowerSet lower_from_generators(const std::vector<Vec>& points) {
    if (points.empty())
        throw EmptyGeneratorSet("generator set must be nonempty");
    std::vector<Primitive> prims;
    prims.reserve(points.size());
    for (const auto& p : points)
        prims.push_back(Primitive::orthant(p));
    return LowerSet::from_primitives(std::move(prims));
}

LowerSet union_of(const LowerSet& a, const LowerSet& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("union of lower sets of different dimension");
    std::vector<Primitive> prims = a.primitives();
    prims.insert(prims.end(), b.primitives().begin(), b.primitives().end());
    return LowerSet::from_primitives(std::move(prims));
}

LowerSet minkowski(const LowerSet& a, const LowerSet& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("minkowski sum of lower sets of different dimension");
    std::vector<Primitive> prims;
    for (const auto& p : a.primitives()) {
        for (const auto& q : b.primitives()) {
            const bool p_orth = p.kind() == Primitive::Kind::Orthant;
            const bool q_orth = q.kind() == Primitive::Kind::Orthant;
            if (p.kind() == Primitive::Kind::Full || q.kind() == Primitive::Kind::Full) {
                prims.push_back(Primitive::full(a.dim()));
            } else if (p_orth && q_orth) {
                prims.push_back(Primitive::orthant(add(p.apex(), q.apex())));
            } else if (p_orth || q_orth) {
                const Primitive& orth = p_orth ? p : q;
                const Primitive& half = p_orth ? q : p;
                prims.push_back(Primitive::half_space(
                    half.normal(), half.offset() + dot(half.normal(), orth.apex())));
            } else if (same_direction(p.normal(), q.normal())) {
                prims.push_back(Primitive::half_space(p.normal(), p.offset() + q.offset()));
            } else {
                // distinct half-space directions span everything
                prims.push_back(Primitive::full(a.dim()));
            }
        }
    }
    return LowerSet::from_primitives(std::move(prims));
}

LowerSet translate(const LowerSet& a, const Vec& v) {
    if (v.size() != a.dim())
        throw DimensionMismatch("translation vector dimension mismatch");
    std::vector<Primitive> prims;
    for (const auto& p : a.primitives()) {
        switch (p.kind()) {
        case Primitive::Kind::Full:
            prims.push_back(p);
            break;
        case Primitive::Kind::Orthant:
            prims.push_back(Primitive::orthant(add(p.apex(), v)));
            break;
        case Primitive::Kind::HalfSpace:
            prims.push_back(Primitive::half_space(p.normal(), p.offset() + dot(p.normal(), v)));
            break;
        }
    }
    return LowerSet::from_primitives(std::move(prims));
}

LowerSet scale_coordinatewise(const LowerSet& a, const Vec& z) {
    if (z.size() != a.dim())
        throw DimensionMismatch("scale vector dimension mismatch");
    for (double c : z)
        if (!(c > 0.0))
            throw NonPositiveScale("coordinatewise scale must be strictly positive");
    std::vector<Primitive> prims;
    for (const auto& p : a.primitives()) {
        switch (p.kind()) {
        case Primitive::Kind::Full:
            prims.push_back(p);
            break;
        case Primitive::Kind::Orthant:
            prims.push_back(Primitive::orthant(hadamard(p.apex(), z)));
            break;
        case Primitive::Kind::HalfSpace: {
            Vec n = p.normal();
            for (std::size_t i = 0; i < n.size(); ++i)
                n[i] /= z[i];
            prims.push_back(Primitive::half_space(std::move(n), p.offset()));
            break;
        }
        }
    }
    return LowerSet::from_primitives(std::move(prims));
}

LowerSet scale(const LowerSet& a, double c) {
    if (!(c > 0.0))
        throw NonPositiveScale("set scale must be strictly positive");
    std::vector<Primitive> prims;
    for (const auto& p : a.primitives()) {
        switch (p.kind()) {
        case Primitive::Kind::Full:
            prims.push_back(p);
            break;
        case Primitive::Kind::Orthant:
            prims.push_back(Primitive::orthant(scaled(p.apex(), c)));
            break;
        case Primitive::Kind::HalfSpace:
            prims.push_back(Primitive::half_space(p.normal(), c * p.offset()));
            break;
        }
    }
    return LowerSet::from_primitives(std::move(prims));
}

// ---------------------------------------------------------------------------
// Pareto pruning

std::vector<Vec> pareto_prune(std::vector<Vec> pts) {
    if (pts.empty())
        return pts;
    const std::size_t d = pts.front().size();
    if (d == 2) {
        std::sort(pts.begin(), pts.end());
        std::vector<Vec> kept;
        double min_y = kInf;
        for (const auto& p : pts) {
            if (p[1] < min_y) {
                kept.push_back(p);
                min_y = p[1];
            }
        }
        return kept;
    }
    std::vector<Vec> kept;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < pts.size() && !drop; ++j) {
            if (i == j)
                continue;
            if (pts[j] == pts[i]) {
                drop = j < i;
            } else if (leq(pts[j], pts[i])) {
                drop = true;
            }
        }
        if (!drop)
            kept.push_back(pts[i]);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

// ---------------------------------------------------------------------------
// RiskSetResult

RiskSetResult RiskSetResult::from_points(std::vector<Vec> points,
                                         std::vector<UpperHalfSpace> half_spaces) {
    RiskSetResult r;
    // Keep the largest half-space per direction.
    for (auto& h : half_spaces) {
        bool merged = false;
        for (auto& kept : r.spaces_) {
            if (same_direction(kept.normal, h.normal)) {
                kept.offset = std::min(kept.offset, h.offset);
                merged = true;
                break;
            }
        }
        if (!merged)
            r.spaces_.push_back(std::move(h));
    }
    std::sort(r.spaces_.begin(), r.spaces_.end(), [](const UpperHalfSpace& a, const UpperHalfSpace& b) {
        if (a.normal != b.normal)
            return lex_less(a.normal, b.normal);
        return a.offset < b.offset;
    });

    points = pareto_prune(std::move(points));
    for (auto& p : points) {
        const bool inside = std::any_of(r.spaces_.begin(), r.spaces_.end(),
                                        [&](const UpperHalfSpace& h) {
                                            return dot(h.normal, p) >= h.offset;
                                        });
        if (!inside)
            r.points_.push_back(std::move(p));
    }
    return r;
}

std::size_t RiskSetResult::dim() const {
    if (!points_.empty())
        return points_.front().size();
    if (!spaces_.empty())
        return spaces_.front().normal.size();
    return 0;
}

bool RiskSetResult::contains(const Vec& x, double tol) const {
    for (const auto& p : points_) {
        bool ok = true;
        for (std::size_t i = 0; i < x.size() && ok; ++i)
            ok = p[i] <= x[i] + tol;
        if (ok)
            return true;
    }
    for (const auto& h : spaces_)
        if (dot(h.normal, x) >= h.offset - tol)
            return true;
    if (curve_ && x.size() == 2) {
        // conservative: compare against the boundary value just left of x
        const auto& c = *curve_;
        if (x[0] >= c.xmin - tol && x[0] <= c.xmax + c.step) {
            const auto idx = static_cast<std::size_t>(
                std::floor((x[0] - c.xmin) / c.step + 1e-9));
            if (idx < c.ys.size())
                return x[1] >= c.ys[idx] - tol;
        }
    }
    return false;
}

RiskSetResult union_of(const RiskSetResult& a, const RiskSetResult& b) {
    std::vector<Vec> pts = a.minimal_points();
    pts.insert(pts.end(), b.minimal_points().begin(), b.minimal_points().end());
    std::vector<UpperHalfSpace> spaces = a.half_spaces();
    spaces.insert(spaces.end(), b.half_spaces().begin(), b.half_spaces().end());
    RiskSetResult r = RiskSetResult::from_points(std::move(pts), std::move(spaces));
    if (!a.exact() || !b.exact())
        r.mark_sampled();
    return r;
}

RiskSetResult translate(const RiskSetResult& r, const Vec& v) {
    std::vector<Vec> pts;
    for (const auto& p : r.minimal_points())
        pts.push_back(add(p, v));
    std::vector<UpperHalfSpace> spaces;
    for (const auto& h : r.half_spaces())
        spaces.push_back({h.normal, h.offset + dot(h.normal, v)});
    RiskSetResult out = RiskSetResult::from_points(std::move(pts), std::move(spaces));
    if (!r.exact())
        out.mark_sampled();
    return out;
}

RiskSetResult negate(const LowerSet& a) {
    std::vector<Vec> pts;
    std::vector<UpperHalfSpace> spaces;
    for (const auto& p : a.primitives()) {
        switch (p.kind()) {
        case Primitive::Kind::Orthant:
            pts.push_back(scaled(p.apex(), -1.0));
            break;
        case Primitive::Kind::HalfSpace:
            spaces.push_back({p.normal(), -p.offset()});
            break;
        case Primitive::Kind::Full:
            spaces.push_back({Vec(a.dim(), 1.0 / static_cast<double>(a.dim())), -kInf});
            break;
        }
    }
    return RiskSetResult::from_points(std::move(pts), std::move(spaces));
}

LowerSet negate(const RiskSetResult& r) {
    if (!r.exact())
        throw NotRepresentable("cannot reflect a sampled risk set exactly");
    std::vector<Primitive> prims;
    for (const auto& p : r.minimal_points())
        prims.push_back(Primitive::orthant(scaled(p, -1.0)));
    for (const auto& h : r.half_spaces()) {
        if (std::isinf(h.offset))
            prims.push_back(Primitive::full(h.normal.size()));
        else
            prims.push_back(Primitive::half_space(h.normal, -h.offset));
    }
    if (prims.empty())
        throw NotRepresentable("empty risk set has no lower-set reflection");
    return LowerSet::from_primitives(std::move(prims));
}

// ---------------------------------------------------------------------------
// Intersections

namespace {

// Exact intersection of two primitives when it stays in the class.
std::optional<Primitive> prim_intersection(const Primitive& p, const Primitive& q) {
    if (p.subset_of(q))
        return p;
    if (q.subset_of(p))
        return q;
    if (p.kind() == Primitive::Kind::Orthant && q.kind() == Primitive::Kind::Orthant) {
        Vec m(p.dim());
        for (std::size_t i = 0; i < p.dim(); ++i)
            m[i] = std::min(p.apex()[i], q.apex()[i]);
        return Primitive::orthant(std::move(m));
    }
    if (p.kind() == Primitive::Kind::HalfSpace && q.kind() == Primitive::Kind::HalfSpace &&
        same_direction(p.normal(), q.normal()))
        return Primitive::half_space(p.normal(), std::min(p.offset(), q.offset()));
    return std::nullopt; // corner cut by a hyperplane, or crossing half-spaces
}

} // namespace

LowerSet intersect(const LowerSet& a, const LowerSet& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("intersection of lower sets of different dimension");
    std::vector<Primitive> cells;
    std::vector<std::pair<const Primitive*, const Primitive*>> pending;
    for (const auto& p : a.primitives()) {
        for (const auto& q : b.primitives()) {
            if (auto cell = prim_intersection(p, q))
                cells.push_back(std::move(*cell));
            else
                pending.emplace_back(&p, &q);
        }
    }
    // A cell that left the class is harmless when one of its factors already
    // lies inside a representable cell of the union.
    for (const auto& [p, q] : pending) {
        const bool covered = std::any_of(cells.begin(), cells.end(), [&](const Primitive& c) {
            return p->subset_of(c) || q->subset_of(c);
        });
        if (!covered)
            throw NotRepresentable("intersection leaves the orthant/half-space class");
    }
    if (cells.empty())
        throw NotRepresentable("intersection has no representable cells");
    return LowerSet::from_primitives(std::move(cells));
}

LowerSet fixed_points(const RandomLowerSet& X) {
    if (X.atoms.empty())
        throw Error("random lower set needs at least one atom");
    LowerSet acc = X.atoms.front();
    for (std::size_t i = 1; i < X.atoms.size(); ++i)
        acc = intersect(acc, X.atoms[i]);
    return acc;
}

// ---------------------------------------------------------------------------
// Convex hulls (d = 2)

ConcaveChain chain_of_points(std::vector<Vec> pts) {
    if (pts.empty())
        throw EmptyGeneratorSet("chain needs at least one point");
    std::sort(pts.begin(), pts.end());
    // One point per abscissa, keeping the highest.
    std::vector<Vec> uniq;
    for (const auto& p : pts) {
        if (!uniq.empty() && uniq.back()[0] == p[0])
            uniq.back() = p; // lexicographic sort puts the largest y last
        else
            uniq.push_back(p);
    }
    // Upper hull, Andrew's monotone chain.
    std::vector<Vec> hull;
    for (const auto& p : uniq) {
        while (hull.size() >= 2) {
            const Vec& a = hull[hull.size() - 2];
            const Vec& b = hull[hull.size() - 1];
            const double cross =
                (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            if (cross >= -kExactTol)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    // Drop the ascending prefix: those vertices are dominated once the lower
    // region below the chain is taken.
    std::vector<Vec> chain;
    for (const auto& p : hull) {
        while (!chain.empty() && chain.back()[1] <= p[1])
            chain.pop_back();
        chain.push_back(p);
    }
    ConcaveChain c;
    c.vertices = std::move(chain);
    return c;
}

double ConcaveChain::height_at(double x) const {
    if (x <= vertices.front()[0])
        return vertices.front()[1];
    if (x > vertices.back()[0] + kExactTol)
        return -kInf;
    for (std::size_t k = 1; k < vertices.size(); ++k) {
        if (x <= vertices[k][0] + kExactTol) {
            const Vec& a = vertices[k - 1];
            const Vec& b = vertices[k];
            const double w = (x - a[0]) / (b[0] - a[0]);
            return a[1] + w * (b[1] - a[1]);
        }
    }
    return vertices.back()[1];
}

ConcaveChain minkowski(const ConcaveChain& a, const ConcaveChain& b) {
    std::vector<Vec> sums;
    sums.reserve(a.vertices.size() * b.vertices.size());
    for (const auto& p : a.vertices)
        for (const auto& q : b.vertices)
            sums.push_back(add(p, q));
    return chain_of_points(std::move(sums));
}

ConcaveChain scale_coordinatewise(const ConcaveChain& a, const Vec& z) {
    for (double c : z)
        if (!(c > 0.0))
            throw NonPositiveScale("coordinatewise scale must be strictly positive");
    std::vector<Vec> pts;
    for (const auto& p : a.vertices)
        pts.push_back(hadamard(p, z));
    return chain_of_points(std::move(pts));
}

ConcaveChain scale(const ConcaveChain& a, double c) {
    if (!(c > 0.0))
        throw NonPositiveScale("chain scale must be strictly positive");
    std::vector<Vec> pts;
    for (const auto& p : a.vertices)
        pts.push_back(scaled(p, c));
    return chain_of_points(std::move(pts));
}

ConvexHull2 convex_hull(const LowerSet& a) {
    if (a.dim() != 2)
        throw UnsupportedDimension("convex_hull is implemented for d = 2 only");
    ConvexHull2 out;
    for (const auto& p : a.primitives()) {
        if (p.kind() == Primitive::Kind::Full) {
            out.exact = LowerSet::from_primitives({Primitive::full(2)});
            return out;
        }
    }
    std::vector<const Primitive*> halves;
    for (const auto& p : a.primitives())
        if (p.kind() == Primitive::Kind::HalfSpace)
            halves.push_back(&p);
    if (!halves.empty()) {
        for (std::size_t i = 1; i < halves.size(); ++i) {
            if (!same_direction(halves[i]->normal(), halves[0]->normal())) {
                out.exact = LowerSet::from_primitives({Primitive::full(2)});
                return out;
            }
        }
        // hull of orthants with a half-space: the half-space pushed out to the
        // farthest apex
        double t = halves[0]->offset();
        for (const auto& g : a.generators())
            t = std::max(t, dot(halves[0]->normal(), g));
        out.exact = LowerSet::from_primitives({Primitive::half_space(halves[0]->normal(), t)});
        return out;
    }
    const auto gens = a.generators();
    if (gens.size() == 1) {
        out.exact = a;
        return out;
    }
    ConcaveChain chain = chain_of_points(gens);
    if (chain.vertices.size() == 1) {
        out.exact = lower_from_generators({chain.vertices.front()});
        return out;
    }
    out.chain = std::move(chain);
    return out;
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<Vec> pareto_sample(const LowerSet& a, const Window& window, double step) {
    if (a.dim() != 2)
        throw UnsupportedDimension("pareto_sample is implemented for d = 2 only");
    if (window.dim() != 2)
        throw DimensionMismatch("window must be two-dimensional");
    std::vector<Vec> pts;
    for (double x : make_grid(window.xlo(), window.xhi(), step)) {
        const double h = a.height_at(x);
        if (h == -kInf)
            continue;
        pts.push_back({x, std::isinf(h) ? window.yhi() : h});
    }
    for (const auto& g : a.generators())
        pts.push_back(g);
    // Pareto-maximal points of a lower set = minimal points of the mirror.
    std::vector<Vec> mirrored;
    mirrored.reserve(pts.size());
    for (const auto& p : pts)
        mirrored.push_back(scaled(p, -1.0));
    mirrored = pareto_prune(std::move(mirrored));
    std::vector<Vec> out;
    out.reserve(mirrored.size());
    for (const auto& p : mirrored)
        out.push_back(scaled(p, -1.0));
    std::sort(out.begin(), out.end());
    return out;
}

BoundaryCurve boundary_curve(const RiskSetResult& r, double xmin, double xmax, double step) {
    BoundaryCurve c;
    c.xmin = xmin;
    c.xmax = xmax;
    c.step = step;
    c.xs = make_grid(xmin, xmax, step);
    c.ys.reserve(c.xs.size());

    const BoundaryCurve* stored = nullptr;
    if (!r.exact() && r.curve()) {
        const auto& s = *r.curve();
        if (std::fabs(s.step - step) > kExactTol ||
            std::fabs(std::remainder(s.xmin - xmin, step)) > kBoundaryTol)
            throw GridMismatch("stored curve grid does not match the requested grid");
        stored = &s;
    }

    for (double x : c.xs) {
        double b = kInf;
        for (const auto& p : r.minimal_points())
            if (p[0] <= x + kBoundaryTol)
                b = std::min(b, p[1]);
        for (const auto& h : r.half_spaces()) {
            const double n1 = h.normal[0];
            const double n2 = h.normal[1];
            if (std::isinf(h.offset)) {
                b = -kInf;
            } else if (n2 <= kExactTol) {
                if (x >= h.offset / n1 - kBoundaryTol)
                    b = -kInf;
            } else {
                b = std::min(b, (h.offset - n1 * x) / n2);
            }
        }
        if (stored) {
            const double pos = (x - stored->xmin) / stored->step;
            const auto idx = static_cast<std::int64_t>(std::llround(pos));
            if (idx >= 0 && idx < static_cast<std::int64_t>(stored->ys.size()) &&
                std::fabs(pos - static_cast<double>(idx)) <= 1e-6)
                b = std::min(b, stored->ys[static_cast<std::size_t>(idx)]);
        }
        c.ys.push_back(b);
    }
    return c;
}

double curve_sup_distance(const BoundaryCurve& a, const BoundaryCurve& b) {
    if (a.xs.size() != b.xs.size())
        throw GridMismatch("curves sampled on different grids");
    for (std::size_t i = 0; i < a.xs.size(); ++i)
        if (std::fabs(a.xs[i] - b.xs[i]) > kExactTol)
            throw GridMismatch("curves sampled on different grids");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.ys.size(); ++i) {
        const double ya = a.ys[i];
        const double yb = b.ys[i];
        if (std::isinf(ya) || std::isinf(yb)) {
            if (ya == yb)
                continue;
            return kInf;
        }
        worst = std::max(worst, std::fabs(ya - yb));
    }
    return worst;
}

} // namespace selrisk
