#include "selrisk/risk.hpp"

#include <algorithm>
#include <cmath>

namespace selrisk {

DistortionFunction DistortionFunction::make(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2)
        throw InvalidDistortion("distortion needs at least the knots (0,0) and (1,1)");
    std::sort(knots.begin(), knots.end());
    if (std::fabs(knots.front().first) > kExactTol || std::fabs(knots.front().second) > kExactTol)
        throw InvalidDistortion("distortion must satisfy g(0)=0");
    if (std::fabs(knots.back().first - 1.0) > kExactTol ||
        std::fabs(knots.back().second - 1.0) > kExactTol)
        throw InvalidDistortion("distortion must satisfy g(1)=1");
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (knots[k].first <= knots[k - 1].first)
            throw InvalidDistortion("distortion knots must have strictly increasing abscissae");
        if (knots[k].second < knots[k - 1].second - kExactTol)
            throw InvalidDistortion("distortion must be nondecreasing");
    }
    knots.front() = {0.0, 0.0};
    knots.back() = {1.0, 1.0};
    return DistortionFunction(std::move(knots));
}

double DistortionFunction::g(double t) const {
    if (t <= 0.0)
        return 0.0;
    if (t >= 1.0)
        return 1.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), std::make_pair(t, 2.0));
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

bool DistortionFunction::dual_concave() const {
    // g~ concave <=> g convex <=> knot slopes of g nondecreasing.
    double prev = -1.0;
    for (std::size_t k = 1; k < knots_.size(); ++k) {
        const double slope = (knots_[k].second - knots_[k - 1].second) /
                             (knots_[k].first - knots_[k - 1].first);
        if (slope < prev - kExactTol)
            return false;
        prev = slope;
    }
    return true;
}

DistortionFunction avar_distortion(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InvalidAlpha("AVaR level must lie in (0,1]");
    if (alpha == 1.0)
        return DistortionFunction::make({{0.0, 0.0}, {1.0, 1.0}});
    return DistortionFunction::make({{0.0, 0.0}, {1.0 - alpha, 0.0}, {1.0, 1.0}});
}

RiskSpec RiskSpec::avar(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InvalidAlpha("AVaR level must lie in (0,1]");
    return RiskSpec(AVaRSpec{alpha});
}

RiskSpec RiskSpec::distortion(DistortionFunction g) {
    return RiskSpec(DistortionSpec{std::move(g)});
}

RiskSpec RiskSpec::scenario_max(std::vector<MaxScenario> scenarios, const ProbSpace& sp) {
    if (scenarios.empty())
        throw EmptyScenarioSet("scenario_max needs at least one scenario");
    for (const auto& sc : scenarios) {
        require_same_length(sc.density, sp);
        for (double z : sc.density.values)
            if (z < 0.0)
                throw NegativeDensity("scenario density must be nonnegative");
        if (std::fabs(expectation(sc.density, sp) - 1.0) > 1e-9)
            throw InvalidDensity("scenario density must have mean 1");
    }
    return RiskSpec(ScenarioMaxSpec{std::move(scenarios)});
}

bool RiskSpec::distribution_determined() const {
    return !std::holds_alternative<ScenarioMaxSpec>(v_);
}

bool RiskSpec::is_convex() const {
    if (const auto* d = std::get_if<DistortionSpec>(&v_))
        return d->g.dual_concave();
    return true; // ess inf, neg expectation, AVaR, scenario max
}

bool RiskSpec::is_coherent() const {
    if (const auto* d = std::get_if<DistortionSpec>(&v_))
        return d->g.dual_concave();
    if (const auto* s = std::get_if<ScenarioMaxSpec>(&v_)) {
        for (const auto& sc : s->scenarios)
            if (sc.penalty != 0.0)
                return false;
        return true;
    }
    return true;
}

bool RiskSpec::dominates_mean() const {
    if (std::holds_alternative<EssInfSpec>(v_) || std::holds_alternative<NegExpectationSpec>(v_) ||
        std::holds_alternative<AVaRSpec>(v_))
        return true;
    if (const auto* d = std::get_if<DistortionSpec>(&v_)) {
        // -int F^{-1} dg~ >= -int F^{-1} dt for all xi iff g~ >= id; with
        // piecewise-linear g~ the knots decide.
        for (const auto& [t, gt] : d->g.knots())
            if (d->g.g_dual(1.0 - t) < (1.0 - t) - kExactTol)
                return false;
        return true;
    }
    return false; // scenario max: not guaranteed without inspecting the family
}

bool VectorRiskSpec::all_convex() const {
    return std::all_of(components.begin(), components.end(),
                       [](const RiskSpec& r) { return r.is_convex(); });
}

bool VectorRiskSpec::all_coherent() const {
    return std::all_of(components.begin(), components.end(),
                       [](const RiskSpec& r) { return r.is_coherent(); });
}

bool VectorRiskSpec::all_distribution_determined() const {
    return std::all_of(components.begin(), components.end(),
                       [](const RiskSpec& r) { return r.distribution_determined(); });
}

double ess_inf_of(const QuantileFunction& q) { return -q.values.front(); }

double neg_expectation_of(const QuantileFunction& q) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        acc += q.values[k] * (q.cum[k] - prev);
        prev = q.cum[k];
    }
    return -acc;
}

double avar_of(const QuantileFunction& q, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw InvalidAlpha("AVaR level must lie in (0,1]");
    // -(1/alpha) int_0^alpha F^{-1}(t) dt, exactly from the breakpoints.
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < q.size() && prev < alpha; ++k) {
        const double hi = std::min(q.cum[k], alpha);
        acc += q.values[k] * (hi - prev);
        prev = hi;
    }
    return -acc / alpha;
}

double distortion_of(const QuantileFunction& q, const DistortionFunction& g) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        acc += q.values[k] * (g.g_dual(q.cum[k]) - g.g_dual(prev));
        prev = q.cum[k];
    }
    return -acc;
}

double ess_inf_risk(const RandomVariable& xi, const ProbSpace& sp) {
    require_same_length(xi, sp);
    return -*std::min_element(xi.values.begin(), xi.values.end());
}

double avar_risk(const RandomVariable& xi, const ProbSpace& sp, double alpha) {
    return avar_of(quantile_function(xi, sp), alpha);
}

double distortion_risk(const RandomVariable& xi, const ProbSpace& sp,
                       const DistortionFunction& g) {
    return distortion_of(quantile_function(xi, sp), g);
}

double scenario_max_risk(const RandomVariable& xi, const ProbSpace& sp,
                         const std::vector<MaxScenario>& scenarios) {
    if (scenarios.empty())
        throw EmptyScenarioSet("scenario_max needs at least one scenario");
    require_same_length(xi, sp);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& sc : scenarios) {
        require_same_length(sc.density, sp);
        double acc = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            if (sc.density[i] < 0.0)
                throw NegativeDensity("scenario density must be nonnegative");
            acc += sp.prob(i) * sc.density[i] * (-xi[i]);
        }
        best = std::max(best, acc - sc.penalty);
    }
    return best;
}

double risk_of_distribution(const RiskSpec& spec, const QuantileFunction& q) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, EssInfSpec>)
                return ess_inf_of(q);
            else if constexpr (std::is_same_v<T, NegExpectationSpec>)
                return neg_expectation_of(q);
            else if constexpr (std::is_same_v<T, AVaRSpec>)
                return avar_of(q, s.alpha);
            else if constexpr (std::is_same_v<T, DistortionSpec>)
                return distortion_of(q, s.g);
            else
                throw Error("scenario_max has no distribution-only form");
        },
        spec.variant());
}

double risk_value(const RiskSpec& spec, const RandomVariable& xi, const ProbSpace& sp) {
    if (const auto* s = std::get_if<ScenarioMaxSpec>(&spec.variant()))
        return scenario_max_risk(xi, sp, s->scenarios);
    return risk_of_distribution(spec, quantile_function(xi, sp));
}

std::vector<double> vector_risk(const RandomVector& xi, const ProbSpace& sp,
                                const VectorRiskSpec& spec) {
    if (xi.atom_count() != sp.atom_count())
        throw DimensionMismatch("random vector rows do not match atom count");
    if (xi.dim() != spec.dim())
        throw DimensionMismatch("risk spec dimension does not match vector dimension");
    std::vector<double> out(spec.dim());
    for (std::size_t j = 0; j < spec.dim(); ++j)
        out[j] = risk_value(spec.components[j], xi.component(j), sp);
    return out;
}

} // namespace selrisk
