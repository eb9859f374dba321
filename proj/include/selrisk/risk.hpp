#pragma once

#include <variant>
#include <vector>

#include "selrisk/prob.hpp"

namespace selrisk {

/// Piecewise-linear distortion function g on [0,1] with g(0)=0, g(1)=1,
/// nondecreasing. Integration against step quantile functions is exact.
class DistortionFunction {
public:
    static DistortionFunction make(std::vector<std::pair<double, double>> knots);

    double g(double t) const;
    // Dual distortion g~(t) = 1 - g(1 - t).
    double g_dual(double t) const { return 1.0 - g(1.0 - t); }

    // True when the dual distortion is concave (slopes of g~ nonincreasing),
    // i.e. the induced risk measure is convex (indeed coherent).
    bool dual_concave() const;

    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    explicit DistortionFunction(std::vector<std::pair<double, double>> knots)
        : knots_(std::move(knots)) {}
    std::vector<std::pair<double, double>> knots_;
};

// g with knots {(0,0), (1-alpha,0), (1,1)}; its dual is min(t/alpha, 1), so
// the induced distortion risk coincides with Average Value-at-Risk.
DistortionFunction avar_distortion(double alpha);

struct EssInfSpec {};
struct NegExpectationSpec {};
struct AVaRSpec {
    double alpha; // in (0, 1]
};
struct DistortionSpec {
    DistortionFunction g;
};
struct MaxScenario {
    RandomVariable density; // nonnegative, mean 1
    double penalty;
};
struct ScenarioMaxSpec {
    std::vector<MaxScenario> scenarios;
};

/// One scalar monetary risk measure.
class RiskSpec {
public:
    using Variant =
        std::variant<EssInfSpec, NegExpectationSpec, AVaRSpec, DistortionSpec, ScenarioMaxSpec>;

    static RiskSpec ess_inf() { return RiskSpec(EssInfSpec{}); }
    static RiskSpec neg_expectation() { return RiskSpec(NegExpectationSpec{}); }
    static RiskSpec avar(double alpha);
    static RiskSpec distortion(DistortionFunction g);
    static RiskSpec scenario_max(std::vector<MaxScenario> scenarios, const ProbSpace& sp);

    const Variant& variant() const { return v_; }

    // Value depends on the distribution of the argument only. ScenarioMax
    // reads per-atom densities and is not distribution-determined.
    bool distribution_determined() const;
    bool is_convex() const;
    bool is_coherent() const;
    // risk(xi) >= -E(xi) for every xi; needed by the half-space transfer
    // closed form with an expectation component.
    bool dominates_mean() const;

private:
    explicit RiskSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

struct VectorRiskSpec {
    std::vector<RiskSpec> components;

    std::size_t dim() const { return components.size(); }
    bool all_convex() const;
    bool all_coherent() const;
    bool all_distribution_determined() const;
};

double ess_inf_risk(const RandomVariable& xi, const ProbSpace& sp);
double avar_risk(const RandomVariable& xi, const ProbSpace& sp, double alpha);
double distortion_risk(const RandomVariable& xi, const ProbSpace& sp,
                       const DistortionFunction& g);
double scenario_max_risk(const RandomVariable& xi, const ProbSpace& sp,
                         const std::vector<MaxScenario>& scenarios);

// Distribution-level evaluators; the per-variable entry points above reduce
// to these. ScenarioMax has no distribution form.
double ess_inf_of(const QuantileFunction& q);
double neg_expectation_of(const QuantileFunction& q);
double avar_of(const QuantileFunction& q, double alpha);
double distortion_of(const QuantileFunction& q, const DistortionFunction& g);

double risk_value(const RiskSpec& spec, const RandomVariable& xi, const ProbSpace& sp);
double risk_of_distribution(const RiskSpec& spec, const QuantileFunction& q);

std::vector<double> vector_risk(const RandomVector& xi, const ProbSpace& sp,
                                const VectorRiskSpec& spec);

} // namespace selrisk
