#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "selrisk/geometry.hpp"
#include "selrisk/risk.hpp"

namespace selrisk {

// X = C + I_kappa with I_kappa = R_-^d  u  {sum x <= -kappa}.
struct FixedCostPortfolio {
    RandomVector C;
    double kappa;
};

// X = C + H_t.
struct HalfSpacePortfolio {
    RandomVector C;
    double t;
};

// X = C + M + R_-^d for a finite transfer set M.
struct FiniteTransfersPortfolio {
    RandomVector C;
    std::vector<Vec> M;
};

struct CustomPortfolio {
    RandomLowerSet X;
};

using PortfolioSpec =
    std::variant<FixedCostPortfolio, HalfSpacePortfolio, FiniteTransfersPortfolio,
                 CustomPortfolio>;

enum class EngineMode { General, Partition };

struct EngineParams {
    double grid_step = 0.1;
    Window window;
    std::uint64_t selection_cap = 2'000'000;
    EngineMode mode = EngineMode::General;
};

struct Scenario {
    ProbSpace space;
    std::size_t dimension = 2;
    VectorRiskSpec risk;
    PortfolioSpec portfolio;
    EngineParams engine;
};

// Per-atom realizations of the portfolio as lower sets.
RandomLowerSet realize(const PortfolioSpec& portfolio, const ProbSpace& sp, std::size_t dim);

// Sampled Pareto frontier of one realization plus all orthant apexes.
std::vector<Vec> candidate_points(const LowerSet& atom, const EngineParams& params);

// Candidate selections per atom; finite-transfer portfolios get their exact
// generator candidates with no grid involved.
std::vector<std::vector<Vec>> scenario_candidates(const Scenario& scenario);

/// The brute-force oracle: enumerate one candidate point per atom, take the
/// vector risk of every such selection and keep the Pareto-minimal risk
/// vectors. Honors `engine.mode`.
RiskSetResult selection_risk(const Scenario& scenario);

// Deterministic portfolios only: selections constant on the cells of a
// partition of the atoms, one shared point per primitive branch.
RiskSetResult selection_risk_partition(const Scenario& scenario);

bool is_acceptable(const Scenario& scenario);

// Probability-weighted Minkowski sum of the realizations.
LowerSet selection_expectation(const RandomLowerSet& X, const ProbSpace& sp);

/// Intersection over densities of the expected reflected scaled set.
/// Exact while the primitive algebra permits; otherwise degrades to a
/// sampled boundary curve on the given grid (result marked non-exact).
RiskSetResult rho_Z(const RandomLowerSet& X, const ProbSpace& sp,
                    const std::vector<RandomVector>& Z, const Window& window, double step);

// Same functional with every atom replaced by a concave-chain convex body.
RiskSetResult rho_Z_convex(const std::vector<ConcaveChain>& atoms, const ProbSpace& sp,
                           const std::vector<RandomVector>& Z, const Window& window,
                           double step);

struct RiskConvexityWitness {
    Vec x1;
    Vec x2;
    std::vector<std::size_t> event;
    Vec risk_point; // -rho of the mixed selection, outside F
};

// Checks -rho(x1 1_A + x2 1_{A^c}) in F over all events A and candidate
// pairs; empty result means F is risk convex at the sampled resolution.
std::optional<RiskConvexityWitness> risk_convexity_violation(const LowerSet& F,
                                                             const VectorRiskSpec& spec,
                                                             const ProbSpace& sp,
                                                             const EngineParams& params);

bool is_risk_convex(const LowerSet& F, const VectorRiskSpec& spec, const ProbSpace& sp,
                    const EngineParams& params);

// Sup distance between the boundary curve of R and its lower convex
// envelope over the window.
double convexity_defect(const RiskSetResult& r, double xmin, double xmax, double step);

// Worker cap honoring the SELRISK_THREADS environment variable.
unsigned engine_thread_count();

} // namespace selrisk
