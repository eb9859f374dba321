#include "selrisk/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace selrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0)
        return 0;
    if (a > std::numeric_limits<std::uint64_t>::max() / b)
        return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b)
        return std::numeric_limits<std::uint64_t>::max();
    return a + b;
}

LowerSet ikappa_set(std::size_t dim, double kappa) {
    if (!(kappa > 0.0))
        throw Error("fixed transaction cost must be positive");
    return LowerSet::from_primitives(
        {Primitive::orthant(Vec(dim, 0.0)), Primitive::half_space_sum(dim, -kappa)});
}

void require_c_shape(const RandomVector& C, const ProbSpace& sp, std::size_t dim) {
    if (C.atom_count() != sp.atom_count())
        throw DimensionMismatch("capital position rows do not match atom count");
    for (const auto& row : C.rows)
        if (row.size() != dim)
            throw DimensionMismatch("capital position row dimension mismatch");
}

bool atoms_identical(const RandomLowerSet& X) {
    const auto& first = X.atoms.front().primitives();
    for (const auto& atom : X.atoms) {
        const auto& prims = atom.primitives();
        if (prims.size() != first.size())
            return false;
        for (std::size_t k = 0; k < prims.size(); ++k)
            if (!prims[k].same(first[k]))
                return false;
    }
    return true;
}

// Risks of a selection given per-atom rows in a reusable scratch buffer.
struct RiskEvaluator {
    const ProbSpace& sp;
    const VectorRiskSpec& spec;
    std::vector<double> values; // scratch, one per atom

    explicit RiskEvaluator(const ProbSpace& s, const VectorRiskSpec& sp_)
        : sp(s), spec(sp_), values(s.atom_count()) {}

    // rows: callable atom index -> const Vec&
    template <typename Rows>
    Vec risk_of(Rows&& rows) {
        Vec out(spec.dim());
        for (std::size_t j = 0; j < spec.dim(); ++j) {
            for (std::size_t i = 0; i < sp.atom_count(); ++i)
                values[i] = rows(i)[j];
            if (const auto* s = std::get_if<ScenarioMaxSpec>(&spec.components[j].variant())) {
                double best = -kInf;
                for (const auto& sc : s->scenarios) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < sp.atom_count(); ++i)
                        acc += sp.prob(i) * sc.density[i] * (-values[i]);
                    best = std::max(best, acc - sc.penalty);
                }
                out[j] = best;
            } else {
                out[j] = risk_of_distribution(spec.components[j],
                                              distribution_of(values, sp.probs()));
            }
        }
        return out;
    }
};

// Streaming Pareto archive with periodic compaction.
struct Archive {
    std::vector<Vec> pts;

    void push(Vec p) {
        pts.push_back(std::move(p));
        if (pts.size() > 8192)
            pts = pareto_prune(std::move(pts));
    }
    std::vector<Vec> finish() { return pareto_prune(std::move(pts)); }
};

// Enumerates weight compositions (n_1,...,n_k) of n and hands each to f.
template <typename F>
void for_each_composition(std::size_t k, std::size_t n, std::vector<std::size_t>& counts,
                          std::size_t slot, F&& f) {
    if (slot + 1 == k) {
        counts[slot] = n;
        f(counts);
        return;
    }
    for (std::size_t c = 0; c <= n; ++c) {
        counts[slot] = c;
        for_each_composition(k, n - c, counts, slot + 1, f);
    }
}

std::uint64_t composition_count(std::size_t k, std::size_t n) {
    // C(n+k-1, k-1) with saturation
    std::uint64_t num = 1;
    for (std::size_t i = 1; i < k; ++i) {
        num = sat_mul(num, n + i);
        num /= i;
    }
    return num;
}

} // namespace

unsigned engine_thread_count() {
    if (const char* env = std::getenv("SELRISK_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(std::min(v, 64L));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 8u);
}

RandomLowerSet realize(const PortfolioSpec& portfolio, const ProbSpace& sp, std::size_t dim) {
    RandomLowerSet X;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FixedCostPortfolio>) {
                require_c_shape(p.C, sp, dim);
                const LowerSet base = ikappa_set(dim, p.kappa);
                for (const auto& row : p.C.rows)
                    X.atoms.push_back(translate(base, row));
            } else if constexpr (std::is_same_v<T, HalfSpacePortfolio>) {
                require_c_shape(p.C, sp, dim);
                const LowerSet base =
                    LowerSet::from_primitives({Primitive::half_space_sum(dim, p.t)});
                for (const auto& row : p.C.rows)
                    X.atoms.push_back(translate(base, row));
            } else if constexpr (std::is_same_v<T, FiniteTransfersPortfolio>) {
                require_c_shape(p.C, sp, dim);
                if (p.M.empty())
                    throw EmptyGeneratorSet("finite transfer set must be nonempty");
                for (const auto& row : p.C.rows) {
                    std::vector<Vec> gens;
                    for (const auto& m : p.M) {
                        if (m.size() != dim)
                            throw DimensionMismatch("transfer point dimension mismatch");
                        gens.push_back(add(row, m));
                    }
                    X.atoms.push_back(lower_from_generators(gens));
                }
            } else {
                if (p.X.atom_count() != sp.atom_count())
                    throw DimensionMismatch("custom portfolio atom count mismatch");
                for (const auto& atom : p.X.atoms)
                    if (atom.dim() != dim)
                        throw DimensionMismatch("custom portfolio dimension mismatch");
                X = p.X;
            }
        },
        portfolio);
    return X;
}

std::vector<Vec> candidate_points(const LowerSet& atom, const EngineParams& params) {
    if (atom.dim() == 2)
        return pareto_sample(atom, params.window, params.grid_step);
    if (atom.orthants_only()) {
        // exact apex frontiers work in any dimension
        std::vector<Vec> mirrored;
        for (const auto& g : atom.generators())
            mirrored.push_back(scaled(g, -1.0));
        mirrored = pareto_prune(std::move(mirrored));
        std::vector<Vec> out;
        for (const auto& p : mirrored)
            out.push_back(scaled(p, -1.0));
        std::sort(out.begin(), out.end());
        return out;
    }
    throw UnsupportedDimension("sampled frontiers require d = 2");
}

std::vector<std::vector<Vec>> scenario_candidates(const Scenario& scenario) {
    std::vector<std::vector<Vec>> cands;
    if (const auto* ft = std::get_if<FiniteTransfersPortfolio>(&scenario.portfolio)) {
        require_c_shape(ft->C, scenario.space, scenario.dimension);
        if (ft->M.empty())
            throw EmptyGeneratorSet("finite transfer set must be nonempty");
        // Exact candidates: C(w) + Pareto-maximal transfer points, no grid.
        std::vector<Vec> mirrored;
        for (const auto& m : ft->M)
            mirrored.push_back(scaled(m, -1.0));
        mirrored = pareto_prune(std::move(mirrored));
        std::vector<Vec> m_star;
        for (const auto& p : mirrored)
            m_star.push_back(scaled(p, -1.0));
        std::sort(m_star.begin(), m_star.end());
        for (const auto& row : ft->C.rows) {
            std::vector<Vec> atom_cands;
            for (const auto& m : m_star)
                atom_cands.push_back(add(row, m));
            cands.push_back(std::move(atom_cands));
        }
        return cands;
    }
    const RandomLowerSet X = realize(scenario.portfolio, scenario.space, scenario.dimension);
    for (const auto& atom : X.atoms)
        cands.push_back(candidate_points(atom, scenario.engine));
    return cands;
}

namespace {

RiskSetResult finish_result(std::vector<Vec> pts) {
    return RiskSetResult::from_points(std::move(pts));
}

// Selections with a common candidate list on a uniform space are determined
// by how many atoms pick each candidate; distribution-determined measures
// cannot tell such selections apart, so the enumeration runs over weight
// compositions instead of candidate tuples. This is an exact quotient, not
// an approximation.
bool exchangeable_quotient_applies(const Scenario& scenario,
                                   const std::vector<std::vector<Vec>>& cands) {
    if (!scenario.space.is_uniform() || !scenario.risk.all_distribution_determined())
        return false;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i] != cands.front())
            return false;
    return true;
}

RiskSetResult general_quotient(const Scenario& scenario,
                               const std::vector<std::vector<Vec>>& cands) {
    const std::size_t n = scenario.space.atom_count();
    const std::size_t k = cands.front().size();
    const std::uint64_t classes = composition_count(k, n);
    if (classes > scenario.engine.selection_cap)
        throw SelectionBudgetExceeded(
            "selection enumeration needs " + std::to_string(classes) + " classes",
            classes);

    const double p0 = scenario.space.prob(0);
    Archive archive;
    std::vector<double> values;
    std::vector<double> probs;
    std::vector<std::size_t> counts(k, 0);
    for_each_composition(k, n, counts, 0, [&](const std::vector<std::size_t>& cnt) {
        Vec risk(scenario.risk.dim());
        for (std::size_t j = 0; j < scenario.risk.dim(); ++j) {
            values.clear();
            probs.clear();
            for (std::size_t c = 0; c < k; ++c) {
                if (cnt[c] == 0)
                    continue;
                values.push_back(cands.front()[c][j]);
                probs.push_back(static_cast<double>(cnt[c]) * p0);
            }
            risk[j] = risk_of_distribution(scenario.risk.components[j],
                                           distribution_of(values, probs));
        }
        archive.push(std::move(risk));
    });
    return finish_result(archive.finish());
}

RiskSetResult general_full(const Scenario& scenario,
                           const std::vector<std::vector<Vec>>& cands) {
    const std::size_t n = scenario.space.atom_count();
    std::uint64_t total = 1;
    for (const auto& c : cands) {
        if (c.empty())
            throw Error("an atom has no candidate points inside the window");
        total = sat_mul(total, c.size());
    }
    if (total > scenario.engine.selection_cap)
        throw SelectionBudgetExceeded(
            "selection enumeration needs " + std::to_string(total) + " selections", total);

    const unsigned threads =
        total >= 50'000 ? std::min<std::uint64_t>(engine_thread_count(), total) : 1;

    auto worker = [&](std::uint64_t begin, std::uint64_t end, std::vector<Vec>& out) {
        RiskEvaluator eval(scenario.space, scenario.risk);
        Archive archive;
        std::vector<std::size_t> idx(n, 0);
        // decode the mixed-radix start index
        std::uint64_t rem = begin;
        for (std::size_t i = n; i-- > 0;) {
            idx[i] = static_cast<std::size_t>(rem % cands[i].size());
            rem /= cands[i].size();
        }
        for (std::uint64_t s = begin; s < end; ++s) {
            archive.push(eval.risk_of([&](std::size_t i) -> const Vec& {
                return cands[i][idx[i]];
            }));
            for (std::size_t i = n; i-- > 0;) {
                if (++idx[i] < cands[i].size())
                    break;
                idx[i] = 0;
            }
        }
        out = archive.finish();
    };

    std::vector<std::vector<Vec>> partials(threads);
    if (threads == 1) {
        worker(0, total, partials[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (total + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t b = t * chunk;
            const std::uint64_t e = std::min<std::uint64_t>(total, b + chunk);
            pool.emplace_back(worker, b, e, std::ref(partials[t]));
        }
        for (auto& th : pool)
            th.join();
    }
    std::vector<Vec> merged;
    for (auto& part : partials)
        merged.insert(merged.end(), part.begin(), part.end());
    return finish_result(pareto_prune(std::move(merged)));
}

RiskSetResult selection_risk_general(const Scenario& scenario) {
    const auto cands = scenario_candidates(scenario);
    if (exchangeable_quotient_applies(scenario, cands))
        return general_quotient(scenario, cands);
    return general_full(scenario, cands);
}

std::vector<std::vector<Vec>> branch_candidates(const LowerSet& common,
                                                const EngineParams& params) {
    std::vector<std::vector<Vec>> cands;
    for (const auto& prim : common.primitives()) {
        switch (prim.kind()) {
        case Primitive::Kind::Orthant:
            cands.push_back({prim.apex()});
            break;
        case Primitive::Kind::HalfSpace: {
            if (prim.dim() != 2)
                throw UnsupportedDimension("half-space branches are sampled for d = 2 only");
            std::vector<Vec> pts;
            const double n1 = prim.normal()[0];
            const double n2 = prim.normal()[1];
            if (n2 <= kExactTol) {
                const double c = prim.offset() / n1;
                for (double y : make_grid(params.window.ylo(), params.window.yhi(),
                                          params.grid_step))
                    pts.push_back({c, y});
            } else {
                for (double x : make_grid(params.window.xlo(), params.window.xhi(),
                                          params.grid_step))
                    pts.push_back({x, (prim.offset() - n1 * x) / n2});
            }
            cands.push_back(std::move(pts));
            break;
        }
        case Primitive::Kind::Full:
            throw Error("a full-space branch has no Pareto frontier to sample");
        }
    }
    return cands;
}

} // namespace

RiskSetResult selection_risk_partition(const Scenario& scenario) {
    const RandomLowerSet X = realize(scenario.portfolio, scenario.space, scenario.dimension);
    if (!atoms_identical(X))
        throw Error("partition mode requires a deterministic portfolio");
    const LowerSet& common = X.atoms.front();
    const auto cands = branch_candidates(common, scenario.engine);
    const std::size_t m = cands.size();
    const std::size_t n = scenario.space.atom_count();

    if (scenario.space.is_uniform() && scenario.risk.all_distribution_determined()) {
        // Quotient over branch load counts.
        std::uint64_t work = 0;
        std::vector<std::size_t> counts(m, 0);
        for_each_composition(m, n, counts, 0, [&](const std::vector<std::size_t>& cnt) {
            std::uint64_t combos = 1;
            for (std::size_t b = 0; b < m; ++b)
                if (cnt[b] > 0)
                    combos = sat_mul(combos, cands[b].size());
            work = sat_add(work, combos);
        });
        if (work > scenario.engine.selection_cap)
            throw SelectionBudgetExceeded(
                "partition enumeration needs " + std::to_string(work) + " selections", work);

        const double p0 = scenario.space.prob(0);
        Archive archive;
        std::vector<double> values;
        std::vector<double> probs;
        for_each_composition(m, n, counts, 0, [&](const std::vector<std::size_t>& cnt) {
            std::vector<std::size_t> loaded;
            for (std::size_t b = 0; b < m; ++b)
                if (cnt[b] > 0)
                    loaded.push_back(b);
            std::vector<std::size_t> idx(loaded.size(), 0);
            while (true) {
                Vec risk(scenario.risk.dim());
                for (std::size_t j = 0; j < scenario.risk.dim(); ++j) {
                    values.clear();
                    probs.clear();
                    for (std::size_t l = 0; l < loaded.size(); ++l) {
                        values.push_back(cands[loaded[l]][idx[l]][j]);
                        probs.push_back(static_cast<double>(cnt[loaded[l]]) * p0);
                    }
                    risk[j] = risk_of_distribution(scenario.risk.components[j],
                                                   distribution_of(values, probs));
                }
                archive.push(std::move(risk));
                std::size_t l = loaded.size();
                while (l-- > 0) {
                    if (++idx[l] < cands[loaded[l]].size())
                        break;
                    idx[l] = 0;
                    if (l == 0)
                        return;
                }
                if (l == static_cast<std::size_t>(-1))
                    return;
            }
        });
        return finish_result(archive.finish());
    }

    // Full path: every branch assignment, shared point per loaded branch.
    std::uint64_t assignments = 1;
    for (std::size_t i = 0; i < n; ++i)
        assignments = sat_mul(assignments, m);
    std::uint64_t combos = 1;
    for (const auto& c : cands)
        combos = sat_mul(combos, c.size());
    const std::uint64_t bound = sat_mul(assignments, combos);
    if (bound > scenario.engine.selection_cap)
        throw SelectionBudgetExceeded(
            "partition enumeration needs up to " + std::to_string(bound) + " selections",
            bound);

    RiskEvaluator eval(scenario.space, scenario.risk);
    Archive archive;
    std::vector<std::size_t> branch_of(n, 0);
    while (true) {
        std::vector<std::size_t> loaded_mask(m, 0);
        for (std::size_t i = 0; i < n; ++i)
            loaded_mask[branch_of[i]] = 1;
        std::vector<std::size_t> idx(m, 0);
        while (true) {
            archive.push(eval.risk_of([&](std::size_t i) -> const Vec& {
                return cands[branch_of[i]][idx[branch_of[i]]];
            }));
            std::size_t b = m;
            bool advanced = false;
            while (b-- > 0) {
                if (!loaded_mask[b])
                    continue;
                if (++idx[b] < cands[b].size()) {
                    advanced = true;
                    break;
                }
                idx[b] = 0;
            }
            if (!advanced)
                break;
        }
        std::size_t i = n;
        bool more = false;
        while (i-- > 0) {
            if (++branch_of[i] < m) {
                more = true;
                break;
            }
            branch_of[i] = 0;
        }
        if (!more)
            break;
    }
    return finish_result(archive.finish());
}

RiskSetResult selection_risk(const Scenario& scenario) {
    if (scenario.risk.dim() != scenario.dimension)
        throw DimensionMismatch("risk spec dimension does not match scenario dimension");
    if (scenario.engine.mode == EngineMode::Partition)
        return selection_risk_partition(scenario);
    return selection_risk_general(scenario);
}

bool is_acceptable(const Scenario& scenario) {
    const RiskSetResult r = selection_risk(scenario);
    return r.contains(Vec(scenario.dimension, 0.0), kBoundaryTol);
}

LowerSet selection_expectation(const RandomLowerSet& X, const ProbSpace& sp) {
    if (X.atom_count() != sp.atom_count())
        throw DimensionMismatch("random set atom count does not match the space");
    LowerSet acc = scale(X.atoms.front(), sp.prob(0));
    for (std::size_t i = 1; i < X.atoms.size(); ++i)
        acc = minkowski(acc, scale(X.atoms[i], sp.prob(i)));
    return acc;
}

namespace {

void validate_density(const RandomVector& zeta, const ProbSpace& sp, std::size_t dim) {
    if (zeta.atom_count() != sp.atom_count())
        throw InvalidDensity("density rows do not match atom count");
    for (std::size_t j = 0; j < dim; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < sp.atom_count(); ++i) {
            if (zeta.rows[i].size() != dim)
                throw InvalidDensity("density row dimension mismatch");
            if (zeta.rows[i][j] < 0.0)
                throw InvalidDensity("density must be nonnegative");
            mean += sp.prob(i) * zeta.rows[i][j];
        }
        if (std::fabs(mean - 1.0) > 1e-9)
            throw InvalidDensity("density must have coordinatewise mean 1");
    }
}

bool strictly_positive(const RandomVector& zeta) {
    for (const auto& row : zeta.rows)
        for (double v : row)
            if (!(v > 0.0))
                return false;
    return true;
}

} // namespace

RiskSetResult rho_Z(const RandomLowerSet& X, const ProbSpace& sp,
                    const std::vector<RandomVector>& Z, const Window& window, double step) {
    if (Z.empty())
        throw InvalidDensity("rho_Z needs at least one density");
    if (X.atom_count() != sp.atom_count())
        throw DimensionMismatch("random set atom count does not match the space");
    const std::size_t d = X.dim();
    std::vector<LowerSet> mirrors;
    for (const auto& zeta : Z) {
        validate_density(zeta, sp, d);
        if (!strictly_positive(zeta))
            throw InvalidDensity(
                "exact scaling needs strictly positive densities; zero entries collapse "
                "coordinates outside the primitive algebra");
        LowerSet acc = scale(scale_coordinatewise(X.atoms.front(), zeta.rows.front()),
                             sp.prob(0));
        for (std::size_t i = 1; i < X.atom_count(); ++i)
            acc = minkowski(
                acc, scale(scale_coordinatewise(X.atoms[i], zeta.rows[i]), sp.prob(i)));
        mirrors.push_back(std::move(acc));
    }
    try {
        LowerSet acc = mirrors.front();
        for (std::size_t z = 1; z < mirrors.size(); ++z)
            acc = intersect(acc, mirrors[z]);
        return negate(acc);
    } catch (const NotRepresentable&) {
        // intersection of the curves instead: pointwise max of the boundaries
        if (d != 2)
            throw;
        BoundaryCurve out;
        bool first = true;
        for (const auto& m : mirrors) {
            const BoundaryCurve c = boundary_curve(negate(m), window.xlo(), window.xhi(), step);
            if (first) {
                out = c;
                first = false;
            } else {
                for (std::size_t i = 0; i < out.ys.size(); ++i)
                    out.ys[i] = std::max(out.ys[i], c.ys[i]);
            }
        }
        RiskSetResult r;
        r.attach_curve(std::move(out));
        r.mark_sampled();
        return r;
    }
}

RiskSetResult rho_Z_convex(const std::vector<ConcaveChain>& atoms, const ProbSpace& sp,
                           const std::vector<RandomVector>& Z, const Window& window,
                           double step) {
    if (Z.empty())
        throw InvalidDensity("rho_Z needs at least one density");
    if (atoms.size() != sp.atom_count())
        throw DimensionMismatch("atom count does not match the space");
    BoundaryCurve out;
    bool first = true;
    for (const auto& zeta : Z) {
        validate_density(zeta, sp, 2);
        if (!strictly_positive(zeta))
            throw InvalidDensity("strictly positive densities required");
        ConcaveChain acc = scale(scale_coordinatewise(atoms.front(), zeta.rows.front()),
                                 sp.prob(0));
        for (std::size_t i = 1; i < atoms.size(); ++i)
            acc = minkowski(acc,
                            scale(scale_coordinatewise(atoms[i], zeta.rows[i]), sp.prob(i)));
        BoundaryCurve c;
        c.xmin = window.xlo();
        c.xmax = window.xhi();
        c.step = step;
        c.xs = make_grid(c.xmin, c.xmax, step);
        for (double x : c.xs) {
            const double h = acc.height_at(-x);
            c.ys.push_back(h == -kInf ? kInf : -h);
        }
        if (first) {
            out = std::move(c);
            first = false;
        } else {
            for (std::size_t i = 0; i < out.ys.size(); ++i)
                out.ys[i] = std::max(out.ys[i], c.ys[i]);
        }
    }
    RiskSetResult r;
    r.attach_curve(std::move(out));
    r.mark_sampled();
    return r;
}

std::optional<RiskConvexityWitness> risk_convexity_violation(const LowerSet& F,
                                                             const VectorRiskSpec& spec,
                                                             const ProbSpace& sp,
                                                             const EngineParams& params) {
    if (F.dim() != 2)
        throw UnsupportedDimension("risk convexity check samples d = 2 frontiers");
    const auto cands = candidate_points(F, params);
    const std::size_t n = sp.atom_count();
    if (n >= 63)
        throw Error("risk convexity check enumerates events of small spaces only");
    const std::uint64_t events = std::uint64_t{1} << n;
    const std::uint64_t work = sat_mul(sat_mul(cands.size(), cands.size()), events);
    if (work > params.selection_cap)
        throw SelectionBudgetExceeded(
            "risk convexity check needs " + std::to_string(work) + " evaluations", work);

    RiskEvaluator eval(sp, spec);
    for (const auto& x1 : cands) {
        for (const auto& x2 : cands) {
            for (std::uint64_t mask = 0; mask < events; ++mask) {
                const Vec risk = eval.risk_of([&](std::size_t i) -> const Vec& {
                    return (mask >> i) & 1 ? x1 : x2;
                });
                const Vec point = scaled(risk, -1.0);
                if (!F.contains(point, kBoundaryTol)) {
                    RiskConvexityWitness w;
                    w.x1 = x1;
                    w.x2 = x2;
                    for (std::size_t i = 0; i < n; ++i)
                        if ((mask >> i) & 1)
                            w.event.push_back(i);
                    w.risk_point = point;
                    return w;
                }
            }
        }
    }
    return std::nullopt;
}

bool is_risk_convex(const LowerSet& F, const VectorRiskSpec& spec, const ProbSpace& sp,
                    const EngineParams& params) {
    return !risk_convexity_violation(F, spec, sp, params).has_value();
}

double convexity_defect(const RiskSetResult& r, double xmin, double xmax, double step) {
    const BoundaryCurve c = boundary_curve(r, xmin, xmax, step);
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < c.xs.size(); ++i)
        if (std::isfinite(c.ys[i]))
            pts.push_back({c.xs[i], c.ys[i]});
    if (pts.size() < 3)
        return 0.0;
    // lower convex hull of the sampled boundary
    std::vector<Vec> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const Vec& a = hull[hull.size() - 2];
            const Vec& b = hull[hull.size() - 1];
            const double cross =
                (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            if (cross <= kExactTol)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    double worst = 0.0;
    std::size_t seg = 0;
    for (const auto& p : pts) {
        while (seg + 1 < hull.size() && hull[seg + 1][0] < p[0])
            ++seg;
        double env = p[1];
        if (seg + 1 < hull.size()) {
            const Vec& a = hull[seg];
            const Vec& b = hull[seg + 1];
            const double w = (p[0] - a[0]) / (b[0] - a[0]);
            env = a[1] + w * (b[1] - a[1]);
        } else {
            env = hull.back()[1];
        }
        worst = std::max(worst, p[1] - env);
    }
    return worst;
}

} // namespace selrisk
