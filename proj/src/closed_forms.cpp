#include "selrisk/closed_forms.hpp"

#include <algorithm>
#include <cmath>

namespace selrisk {

namespace {

RiskSetResult upper_half_space_sum(std::size_t dim, double sum_bound) {
    // {x : sum x_i >= sum_bound}
    return RiskSetResult::from_points(
        {}, {UpperHalfSpace{Vec(dim, 1.0 / static_cast<double>(dim)),
                            sum_bound / static_cast<double>(dim)}});
}

RandomVariable scaled_var(const RandomVariable& xi, double c) {
    RandomVariable out = xi;
    for (double& v : out.values)
        v *= c;
    return out;
}

} // namespace

RandomVariable total_payoff(const RandomVector& C) {
    RandomVariable D;
    D.values.reserve(C.atom_count());
    for (const auto& row : C.rows) {
        double s = 0.0;
        for (double v : row)
            s += v;
        D.values.push_back(s);
    }
    return D;
}

bool qualifies_convex_component(const RiskSpec& r) {
    if (std::holds_alternative<AVaRSpec>(r.variant()) ||
        std::holds_alternative<NegExpectationSpec>(r.variant()))
        return true;
    if (const auto* d = std::get_if<DistortionSpec>(&r.variant()))
        return d->g.dual_concave();
    return false;
}

bool same_spec(const RiskSpec& a, const RiskSpec& b) {
    if (a.variant().index() != b.variant().index())
        return false;
    if (const auto* av = std::get_if<AVaRSpec>(&a.variant()))
        return av->alpha == std::get<AVaRSpec>(b.variant()).alpha;
    if (const auto* dv = std::get_if<DistortionSpec>(&a.variant()))
        return dv->g.knots() == std::get<DistortionSpec>(b.variant()).g.knots();
    if (const auto* sv = std::get_if<ScenarioMaxSpec>(&a.variant())) {
        const auto& other = std::get<ScenarioMaxSpec>(b.variant());
        if (sv->scenarios.size() != other.scenarios.size())
            return false;
        for (std::size_t i = 0; i < sv->scenarios.size(); ++i)
            if (sv->scenarios[i].penalty != other.scenarios[i].penalty ||
                sv->scenarios[i].density.values != other.scenarios[i].density.values)
                return false;
        return true;
    }
    return true;
}

RiskSetResult ht_identical(const RandomVector& C, double t, const RiskSpec& r,
                           const ProbSpace& sp) {
    if (!qualifies_convex_component(r))
        throw NonConvexRisk("the identical component must be a convex risk measure");
    const auto d = static_cast<double>(C.dim());
    const RandomVariable D = total_payoff(C);
    require_same_length(D, sp);
    const double rd = risk_value(r, scaled_var(D, 1.0 / d), sp);
    return upper_half_space_sum(C.dim(), -(t - d * rd));
}

RiskSetResult ht_essinf_mixed(const RandomVector& C, double t, const RiskSpec& r,
                              const ProbSpace& sp) {
    if (!qualifies_convex_component(r))
        throw NonConvexRisk("the shared component must be a convex risk measure");
    if (C.dim() < 2)
        throw DimensionMismatch("mixed half-space result needs d >= 2");
    const auto d = static_cast<double>(C.dim());
    const RandomVariable D = total_payoff(C);
    require_same_length(D, sp);
    const double rd = risk_value(r, scaled_var(D, 1.0 / (d - 1.0)), sp);
    return upper_half_space_sum(C.dim(), -(t - (d - 1.0) * rd));
}

RiskSetResult ht_expectation_mixed(const RandomVector& C, double t, const RiskSpec& r,
                                   const ProbSpace& sp) {
    if (!qualifies_convex_component(r))
        throw NonConvexRisk("the shared component must be a convex risk measure");
    if (!r.dominates_mean())
        throw PreconditionRiskDominatesMean(
            "the shared component must dominate the negative expectation");
    const RandomVariable D = total_payoff(C);
    require_same_length(D, sp);
    const double ed = expectation(D, sp);
    return upper_half_space_sum(C.dim(), -(t + ed));
}

namespace {

// rho_s(C + H_t): closed form when the components qualify, oracle otherwise.
RiskSetResult half_space_risk(const RandomVector& C, double t, const VectorRiskSpec& spec,
                              const ProbSpace& sp, const EngineParams& params) {
    const auto& comps = spec.components;
    const bool all_same = std::all_of(comps.begin(), comps.end(), [&](const RiskSpec& r) {
        return same_spec(r, comps.front());
    });
    if (all_same && qualifies_convex_component(comps.front()))
        return ht_identical(C, t, comps.front(), sp);

    std::vector<std::size_t> essinf_idx;
    std::vector<std::size_t> negexp_idx;
    std::vector<std::size_t> other_idx;
    for (std::size_t j = 0; j < comps.size(); ++j) {
        if (std::holds_alternative<EssInfSpec>(comps[j].variant()))
            essinf_idx.push_back(j);
        else if (std::holds_alternative<NegExpectationSpec>(comps[j].variant()))
            negexp_idx.push_back(j);
        else
            other_idx.push_back(j);
    }
    auto others_identical = [&](const std::vector<std::size_t>& rest) {
        for (std::size_t k = 1; k < rest.size(); ++k)
            if (!same_spec(comps[rest[k]], comps[rest.front()]))
                return false;
        return true;
    };
    if (essinf_idx.size() == 1 && other_idx.size() + negexp_idx.size() == comps.size() - 1) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < comps.size(); ++j)
            if (j != essinf_idx.front())
                rest.push_back(j);
        if (!rest.empty() && others_identical(rest) &&
            qualifies_convex_component(comps[rest.front()]))
            return ht_essinf_mixed(C, t, comps[rest.front()], sp);
    }
    if (negexp_idx.size() == 1 && other_idx.size() == comps.size() - 1 &&
        others_identical(other_idx) && !other_idx.empty() &&
        qualifies_convex_component(comps[other_idx.front()]) &&
        comps[other_idx.front()].dominates_mean())
        return ht_expectation_mixed(C, t, comps[other_idx.front()], sp);

    Scenario scenario{sp, C.dim(), spec, HalfSpacePortfolio{C, t}, params};
    scenario.engine.mode = EngineMode::General;
    return selection_risk(scenario);
}

} // namespace

SandwichBounds ikappa_bounds(const RandomVector& C, double kappa, const VectorRiskSpec& spec,
                             const ProbSpace& sp, const EngineParams& params) {
    if (!(kappa > 0.0))
        throw Error("fixed transaction cost must be positive");
    RandomVector cvec = C;
    Vec rho_c(spec.dim());
    {
        auto risks = vector_risk(cvec, sp, spec);
        rho_c.assign(risks.begin(), risks.end());
    }
    // reflected fixed-cost set translated to rho(C)
    RiskSetResult part1 = RiskSetResult::from_points(
        {Vec(C.dim(), 0.0)},
        {UpperHalfSpace{Vec(C.dim(), 1.0 / static_cast<double>(C.dim())),
                        kappa / static_cast<double>(C.dim())}});
    part1 = translate(part1, rho_c);
    const RiskSetResult part2 = half_space_risk(C, -kappa, spec, sp, params);

    SandwichBounds out;
    out.inner = union_of(part1, part2);
    out.outer = half_space_risk(C, 0.0, spec, sp, params);
    return out;
}

std::pair<double, double> b_rho_avar_at(double alpha, double beta) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InvalidAlpha("AVaR level must lie in (0,1]");
    if (beta < 0.0 || beta > 1.0)
        throw Error("beta must lie in [0,1]");
    const double b1 = beta <= 1.0 - alpha ? 0.0 : -1.0 + (1.0 - beta) / alpha;
    const double b2 = beta <= alpha ? beta / alpha : 1.0;
    return {b1, b2};
}

BRhoSet b_rho_avar(double alpha, const std::vector<double>& beta_grid) {
    BRhoSet out;
    out.alpha = alpha;
    for (double beta : beta_grid) {
        out.betas.push_back(beta);
        out.points.push_back(b_rho_avar_at(alpha, beta));
    }
    return out;
}

double ikappa_avar_flank(double kappa, double alpha, double s) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InvalidAlpha("AVaR level must lie in (0,1]");
    if (!(kappa > 0.0))
        throw Error("fixed transaction cost must be positive");
    if (s < 0.0)
        throw Error("flank depth must be nonnegative");
    const double c = 1.0 / alpha - 1.0;
    const double env = std::pow(std::sqrt(s) + std::sqrt(kappa * c), 2);
    return std::min(kappa + s, env);
}

double ikappa_avar_boundary(double kappa, double alpha, double x) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InvalidAlpha("AVaR level must lie in (0,1]");
    if (!(kappa > 0.0))
        throw Error("fixed transaction cost must be positive");
    const double c = 1.0 / alpha - 1.0;
    if (x < 0.0)
        return ikappa_avar_flank(kappa, alpha, -x);
    double drop = 0.0;
    if (x >= kappa)
        drop = std::max(drop, x - kappa);
    if (x >= kappa * c)
        drop = std::max(drop, std::pow(std::sqrt(x) - std::sqrt(kappa * c), 2));
    return -drop;
}

double ikappa_avar_crossover(double kappa, double alpha) {
    if (!(alpha > 0.5) || alpha > 1.0)
        throw InvalidAlpha("the flank crossover exists for alpha in (1/2, 1]");
    const double c = 1.0 / alpha - 1.0;
    // kappa + s = s + 2 sqrt(s kappa c) + kappa c  =>  s = (1-c)^2 kappa / (4c)
    return kappa * std::pow(1.0 - c, 2) / (4.0 * c);
}

RiskSetResult ikappa_avar_riskset(double kappa, double alpha, const Window& window,
                                  double step) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InvalidAlpha("AVaR level must lie in (0,1]");
    if (alpha <= 0.5) {
        RiskSetResult r = RiskSetResult::from_points(
            {Vec(2, 0.0)}, {UpperHalfSpace{Vec(2, 0.5), kappa / 2.0}});
        r.attach_curve(boundary_curve(r, window.xlo(), window.xhi(), step));
        return r;
    }
    RiskSetResult r = RiskSetResult::from_points({Vec(2, 0.0)});
    BoundaryCurve c;
    c.xmin = window.xlo();
    c.xmax = window.xhi();
    c.step = step;
    c.xs = make_grid(c.xmin, c.xmax, step);
    for (double x : c.xs)
        c.ys.push_back(ikappa_avar_boundary(kappa, alpha, x));
    r.attach_curve(std::move(c));
    r.mark_sampled();
    return r;
}

RiskSetResult eq88_riskset(const BRhoSet& B, double kappa, const std::vector<double>& t_grid,
                           const Window& window, double step) {
    if (t_grid.empty())
        throw GridMismatch("the t grid must be nonempty");
    std::vector<Vec> pts;
    pts.push_back(Vec(2, 0.0)); // beta = 0, t = 0
    for (double t : t_grid) {
        if (t < 0.0)
            throw GridMismatch("the t grid must be nonnegative");
        for (const auto& [b1, b2] : B.points) {
            pts.push_back({t * b1, (kappa + t) * b2});
            pts.push_back({t * b2, (t - kappa) * b1});
        }
    }
    RiskSetResult r = RiskSetResult::from_points(std::move(pts));
    r.attach_curve(boundary_curve(r, window.xlo(), window.xhi(), step));
    return r;
}

std::pair<double, double> two_point_risk_at(double x, double y, const DistortionFunction& g,
                                            double beta) {
    auto coord = [&](double m) { return m > 0.0 ? -m * g.g(beta) : -m * g.g_dual(beta); };
    return {coord(x), coord(y)};
}

RiskSetResult two_point_riskset(double x, double y, const DistortionFunction& g,
                                const std::vector<double>& beta_grid) {
    if (!(x * y < 0.0))
        throw SameSignTransfer("the transfer point must have coordinates of opposite sign");
    std::vector<Vec> pts;
    for (double beta : beta_grid) {
        const auto [r1, r2] = two_point_risk_at(x, y, g, beta);
        pts.push_back({r1, r2});
    }
    return RiskSetResult::from_points(std::move(pts));
}

std::pair<double, double> three_point_risk_at(const Vec& p1, const Vec& p3,
                                              const DistortionFunction& g, double a1,
                                              double a3) {
    return {-p1[0] * g.g_dual(a1) - p3[0] * g.g(a3),
            -p1[1] * g.g(a1) - p3[1] * g.g_dual(a3)};
}

RiskSetResult three_point_riskset(const Vec& p1, const Vec& p3, const DistortionFunction& g,
                                  double simplex_step) {
    if (p1.size() != 2 || p3.size() != 2)
        throw DimensionMismatch("transfer points must be planar");
    if (!(p1[0] < 0.0 && p3[0] > 0.0 && p1[1] > 0.0 && p3[1] < 0.0))
        throw OrientationViolated(
            "expected x1 < 0 < x3 and y1 > 0 > y3 around the origin transfer");
    if (!(simplex_step > 0.0))
        throw Error("simplex step must be positive");
    std::vector<Vec> pts;
    const auto n = static_cast<std::size_t>(std::floor(1.0 / simplex_step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
        const double a1 = std::min(1.0, static_cast<double>(i) * simplex_step);
        for (std::size_t k = 0; i + k <= n; ++k) {
            const double a3 = std::min(1.0 - a1, static_cast<double>(k) * simplex_step);
            const auto [r1, r2] = three_point_risk_at(p1, p3, g, a1, a3);
            pts.push_back({r1, r2});
        }
    }
    return RiskSetResult::from_points(std::move(pts));
}

RiskSetResult fixed_point_riskset(const RandomLowerSet& X) {
    return negate(fixed_points(X));
}

} // namespace selrisk
