#pragma once

#include "selrisk/engine.hpp"

namespace selrisk {

// D = sum of the coordinates of C, one value per atom.
RandomVariable total_payoff(const RandomVector& C);

// The risk measures accepted as the identical convex component of the
// half-space transfer results: AVaR, distortions with concave dual, and the
// negative expectation.
bool qualifies_convex_component(const RiskSpec& r);

bool same_spec(const RiskSpec& a, const RiskSpec& b);

// All components equal to one convex risk measure r:
//   rho_s(C + H_t) = -H_{t - d r(D/d)}  (an upper half-space).
RiskSetResult ht_identical(const RandomVector& C, double t, const RiskSpec& r,
                           const ProbSpace& sp);

// One coordinate carries the negative essential infimum, the rest the
// identical convex r:  -H_{t - (d-1) r(D/(d-1))}.
RiskSetResult ht_essinf_mixed(const RandomVector& C, double t, const RiskSpec& r,
                              const ProbSpace& sp);

// One coordinate carries the negative expectation, the rest the identical
// convex r with r >= -E:  the upper half-space with sum bound -(t + E D).
RiskSetResult ht_expectation_mixed(const RandomVector& C, double t, const RiskSpec& r,
                                   const ProbSpace& sp);

struct SandwichBounds {
    RiskSetResult inner;
    RiskSetResult outer;
};

// inner = (rho(C) + reflected fixed-cost set)  u  rho_s(C + H_{-kappa}),
// outer = rho_s(C + H_0); the oracle output is sandwiched between them.
// The half-space terms use the closed forms above when the spec qualifies
// and fall back to the enumeration oracle otherwise.
SandwichBounds ikappa_bounds(const RandomVector& C, double kappa,
                             const VectorRiskSpec& spec, const ProbSpace& sp,
                             const EngineParams& params);

/// (r(1_A), r(-1_A)) as a function of beta = P(A) for AVaR at level alpha.
struct BRhoSet {
    double alpha = 1.0;
    std::vector<double> betas;
    std::vector<std::pair<double, double>> points;
};

std::pair<double, double> b_rho_avar_at(double alpha, double beta);
BRhoSet b_rho_avar(double alpha, const std::vector<double>& beta_grid);

// Exact flank branch descriptor at depth s = -x >= 0 into the left flank:
// min(kappa + s, (sqrt(s) + sqrt(kappa (1/alpha - 1)))^2). Its value at
// s = 0 is min(kappa, kappa (1/alpha - 1)).
double ikappa_avar_flank(double kappa, double alpha, double s);

// Exact lower-left boundary of the fixed-cost risk set with identical AVaR
// components, at any abscissa. For alpha <= 1/2 this is the reflected
// fixed-cost set itself; for alpha > 1/2 the left flank follows the branch
// descriptor above while the origin's first orthant floors the boundary at
// zero for x >= 0 (the zero selection has zero risk).
double ikappa_avar_boundary(double kappa, double alpha, double x);

// Abscissa where the flank switches from the envelope branch to the line
// branch (alpha > 1/2).
double ikappa_avar_crossover(double kappa, double alpha);

RiskSetResult ikappa_avar_riskset(double kappa, double alpha, const Window& window,
                                  double step);

// The two point families over t >= 0 and the B set, plus the first orthant.
RiskSetResult eq88_riskset(const BRhoSet& B, double kappa,
                           const std::vector<double>& t_grid, const Window& window,
                           double step);

// Two-point transfer set {0, (x, y)} with xy < 0, identical distortion
// components with distortion g.
RiskSetResult two_point_riskset(double x, double y, const DistortionFunction& g,
                                const std::vector<double>& beta_grid);

std::pair<double, double> two_point_risk_at(double x, double y, const DistortionFunction& g,
                                            double beta);

// Three-point transfer set {p1, 0, p3} with x1 < 0 < x3 and y1 > 0 > y3,
// sampled over the probability simplex with the given step.
RiskSetResult three_point_riskset(const Vec& p1, const Vec& p3, const DistortionFunction& g,
                                  double simplex_step);

std::pair<double, double> three_point_risk_at(const Vec& p1, const Vec& p3,
                                              const DistortionFunction& g, double a1,
                                              double a3);

RiskSetResult fixed_point_riskset(const RandomLowerSet& X);

} // namespace selrisk
