#include "selrisk/props.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "selrisk/closed_forms.hpp"
#include "selrisk/scenario_io.hpp"

namespace selrisk {

namespace {

using Rng = std::mt19937_64;

double snap(double v, double grid = 0.25) { return std::round(v / grid) * grid; }

double rand_coord(Rng& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return snap(u(rng));
}

ProbSpace rand_space(Rng& rng, bool uniform_only) {
    std::uniform_int_distribution<int> nd(2, 3);
    const int n = nd(rng);
    if (uniform_only || (rng() & 1)) {
        return make_space(std::vector<double>(n, 1.0 / n));
    }
    std::uniform_int_distribution<int> wd(1, 4);
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& v : w) {
        v = wd(rng);
        sum += v;
    }
    for (double& v : w)
        v /= sum;
    return make_space(std::move(w));
}

std::vector<Vec> rand_transfers(Rng& rng, std::size_t k) {
    std::vector<Vec> M;
    M.push_back({0.0, 0.0});
    for (std::size_t i = 1; i < k; ++i)
        M.push_back({rand_coord(rng), rand_coord(rng)});
    return M;
}

RandomVector rand_capital(Rng& rng, std::size_t n) {
    RandomVector C;
    for (std::size_t i = 0; i < n; ++i)
        C.rows.push_back({rand_coord(rng), rand_coord(rng)});
    return C;
}

DistortionFunction rand_concave_dual_distortion(Rng& rng) {
    // convex g (concave dual): knot below the diagonal
    std::uniform_real_distribution<double> u(0.2, 0.8);
    const double t = u(rng);
    std::uniform_real_distribution<double> v(0.0, t);
    return DistortionFunction::make({{0.0, 0.0}, {t, v(rng) * t}, {1.0, 1.0}});
}

RiskSpec rand_coherent_spec(Rng& rng) {
    switch (rng() % 5) {
    case 0:
        return RiskSpec::ess_inf();
    case 1:
        return RiskSpec::neg_expectation();
    case 2:
        return RiskSpec::avar(std::vector<double>{0.25, 0.5, 0.75, 1.0}[rng() % 4]);
    default:
        return RiskSpec::distortion(rand_concave_dual_distortion(rng));
    }
}

RiskSpec rand_monotone_spec(Rng& rng) {
    if (rng() % 4 == 0) {
        // monotone but possibly non-convex distortion
        std::uniform_real_distribution<double> u(0.2, 0.8);
        const double t = u(rng);
        std::uniform_real_distribution<double> v(0.0, 1.0);
        return RiskSpec::distortion(
            DistortionFunction::make({{0.0, 0.0}, {t, v(rng)}, {1.0, 1.0}}));
    }
    return rand_coherent_spec(rng);
}

VectorRiskSpec rand_vector_spec(Rng& rng, RiskSpec (*gen)(Rng&)) {
    VectorRiskSpec spec;
    spec.components.push_back(gen(rng));
    spec.components.push_back(gen(rng));
    return spec;
}

EngineParams exact_params() {
    EngineParams params;
    params.grid_step = 0.25;
    params.window.ranges = {{-6.0, 6.0}, {-6.0, 6.0}};
    params.selection_cap = 2'000'000;
    return params;
}

Scenario finite_scenario(const ProbSpace& sp, VectorRiskSpec spec, RandomVector C,
                         std::vector<Vec> M) {
    return Scenario{sp, 2, std::move(spec),
                    FiniteTransfersPortfolio{std::move(C), std::move(M)}, exact_params()};
}

std::string repro(const Scenario& scenario) {
    return scenario_to_json(scenario).dump();
}

bool points_close(const std::vector<Vec>& a, const std::vector<Vec>& b, double tol) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            if (std::fabs(a[i][j] - b[i][j]) > tol)
                return false;
    return true;
}

struct Check {
    SuiteReport& report;
    void fail(const std::string& message, const Scenario& scenario) {
        ++report.failures;
        report.messages.push_back(message + "\n  repro: " + repro(scenario));
    }
};

// ---------------------------------------------------------------------------

void suite_monotonicity(Rng& rng, SuiteReport& report) {
    Check check{report};
    const ProbSpace sp = rand_space(rng, false);
    const RandomVector C = rand_capital(rng, sp.atom_count());
    auto M_small = rand_transfers(rng, 2);
    auto M_big = M_small;
    M_big.push_back({rand_coord(rng), rand_coord(rng)});

    const Scenario sx = finite_scenario(sp, rand_vector_spec(rng, rand_monotone_spec), C, M_small);
    Scenario sy = sx;
    sy.portfolio = FiniteTransfersPortfolio{C, M_big};

    const RiskSetResult rx = selection_risk(sx);
    const RiskSetResult ry = selection_risk(sy);
    for (const auto& p : rx.minimal_points()) {
        if (!ry.contains(p, kBoundaryTol)) {
            check.fail("monotonicity violated: a risk point of the smaller set left the larger set",
                       sy);
            return;
        }
    }
}

void suite_cash_invariance(Rng& rng, SuiteReport& report) {
    Check check{report};
    const ProbSpace sp = rand_space(rng, false);
    const RandomVector C = rand_capital(rng, sp.atom_count());
    const auto M = rand_transfers(rng, 1 + rng() % 3);
    const Vec a = {rand_coord(rng), rand_coord(rng)};

    const Scenario base = finite_scenario(sp, rand_vector_spec(rng, rand_monotone_spec), C, M);
    Scenario shifted = base;
    {
        RandomVector Cs = C;
        for (auto& row : Cs.rows)
            row = add(row, a);
        shifted.portfolio = FiniteTransfersPortfolio{Cs, M};
    }
    const RiskSetResult r0 = selection_risk(base);
    const RiskSetResult r1 = selection_risk(shifted);
    const RiskSetResult expected = translate(r0, scaled(a, -1.0));
    if (!points_close(r1.minimal_points(), expected.minimal_points(), 1e-12))
        check.fail("cash invariance violated: translated risk set does not match", shifted);
}

void suite_homogeneity(Rng& rng, SuiteReport& report) {
    Check check{report};
    const ProbSpace sp = rand_space(rng, false);
    const RandomVector C = rand_capital(rng, sp.atom_count());
    const auto M = rand_transfers(rng, 1 + rng() % 3);
    const double c = std::vector<double>{0.5, 2.0, 3.0}[rng() % 3];

    const Scenario base = finite_scenario(sp, rand_vector_spec(rng, rand_coherent_spec), C, M);
    Scenario scaled_scenario = base;
    {
        RandomVector Cs = C;
        for (auto& row : Cs.rows)
            row = scaled(row, c);
        std::vector<Vec> Ms;
        for (const auto& m : M)
            Ms.push_back(scaled(m, c));
        scaled_scenario.portfolio = FiniteTransfersPortfolio{Cs, Ms};
    }
    const RiskSetResult r0 = selection_risk(base);
    const RiskSetResult r1 = selection_risk(scaled_scenario);
    std::vector<Vec> expected;
    for (const auto& p : r0.minimal_points())
        expected.push_back(scaled(p, c));
    if (!points_close(r1.minimal_points(), expected, 1e-12 * std::max(1.0, c)))
        check.fail("homogeneity violated for c = " + format_double(c), scaled_scenario);
}

void suite_convexity(Rng& rng, SuiteReport& report) {
    Check check{report};
    const ProbSpace sp = rand_space(rng, false);
    const VectorRiskSpec spec = rand_vector_spec(rng, rand_coherent_spec);
    const RandomVector Cx = rand_capital(rng, sp.atom_count());
    const RandomVector Cy = rand_capital(rng, sp.atom_count());
    const auto Mx = rand_transfers(rng, 1 + rng() % 2);
    const auto My = rand_transfers(rng, 1 + rng() % 2);
    const double lambda = std::vector<double>{0.25, 0.5, 0.75}[rng() % 3];

    const RiskSetResult rx = selection_risk(finite_scenario(sp, spec, Cx, Mx));
    const RiskSetResult ry = selection_risk(finite_scenario(sp, spec, Cy, My));

    RandomVector Cz;
    for (std::size_t i = 0; i < sp.atom_count(); ++i)
        Cz.rows.push_back(add(scaled(Cx.rows[i], lambda), scaled(Cy.rows[i], 1.0 - lambda)));
    std::vector<Vec> Mz;
    for (const auto& mx : Mx)
        for (const auto& my : My)
            Mz.push_back(add(scaled(mx, lambda), scaled(my, 1.0 - lambda)));
    const Scenario mixed = finite_scenario(sp, spec, Cz, Mz);
    const RiskSetResult rz = selection_risk(mixed);

    for (const auto& p : rx.minimal_points()) {
        for (const auto& q : ry.minimal_points()) {
            const Vec z = add(scaled(p, lambda), scaled(q, 1.0 - lambda));
            if (!rz.contains(z, kBoundaryTol)) {
                check.fail("convex combination of risk sets left the mixed risk set", mixed);
                return;
            }
        }
    }
}

void suite_eq10(Rng& rng, SuiteReport& report) {
    Check check{report};
    const ProbSpace sp = rand_space(rng, false);
    const VectorRiskSpec spec = rand_vector_spec(rng, rand_coherent_spec);
    const RandomVector C = rand_capital(rng, sp.atom_count());
    const auto M = rand_transfers(rng, 1 + rng() % 3);

    RandomVector zero;
    zero.rows.assign(sp.atom_count(), Vec(2, 0.0));
    const RiskSetResult rx = selection_risk(finite_scenario(sp, spec, zero, M));
    const auto rho_c = vector_risk(C, sp, spec);

    const Scenario combined = finite_scenario(sp, spec, C, M);
    const RiskSetResult rcx = selection_risk(combined);
    for (const auto& p : rx.minimal_points()) {
        if (!rcx.contains(add(p, rho_c), kBoundaryTol)) {
            check.fail("rho(C) + rho_s(X) left rho_s(C + X)", combined);
            return;
        }
    }
}

void suite_law_invariance(Rng& rng, SuiteReport& report) {
    Check check{report};
    std::uniform_int_distribution<int> nd(3, 4);
    const int n = nd(rng);
    const ProbSpace sp = make_space(std::vector<double>(n, 1.0 / n));
    const RandomVector C = rand_capital(rng, sp.atom_count());
    const auto M = rand_transfers(rng, 1 + rng() % 3);
    const Scenario base =
        finite_scenario(sp, rand_vector_spec(rng, rand_coherent_spec), C, M);

    std::vector<std::size_t> perm(n);
    for (int i = 0; i < n; ++i)
        perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Scenario permuted = base;
    {
        RandomVector Cp;
        for (int i = 0; i < n; ++i)
            Cp.rows.push_back(C.rows[perm[i]]);
        permuted.portfolio = FiniteTransfersPortfolio{Cp, M};
    }
    const RiskSetResult r0 = selection_risk(base);
    const RiskSetResult r1 = selection_risk(permuted);
    if (r0.minimal_points() != r1.minimal_points())
        check.fail("law invariance violated: atom permutation changed the output bits",
                   permuted);
}

void suite_grid_monotonicity(Rng& rng, SuiteReport& report) {
    Check check{report};
    const ProbSpace sp = make_space({0.5, 0.5});
    RandomVector C = rand_capital(rng, 2);
    std::uniform_int_distribution<int> kd(1, 4);
    const double kappa = 0.25 * kd(rng);

    Scenario coarse;
    coarse.space = sp;
    coarse.dimension = 2;
    coarse.risk = rand_vector_spec(rng, rand_coherent_spec);
    coarse.portfolio = FixedCostPortfolio{C, kappa};
    coarse.engine.grid_step = 0.5;
    coarse.engine.window.ranges = {{-3.0, 2.0}, {-3.0, 3.0}};
    Scenario fine = coarse;
    fine.engine.grid_step = 0.25;

    const RiskSetResult rc = selection_risk(coarse);
    const RiskSetResult rf = selection_risk(fine);
    const BoundaryCurve bc = boundary_curve(rc, -3.0, 2.0, 0.5);
    const BoundaryCurve bf = boundary_curve(rf, -3.0, 2.0, 0.5);
    for (std::size_t i = 0; i < bc.ys.size(); ++i) {
        if (bf.ys[i] > bc.ys[i] + 1e-12) {
            check.fail("grid refinement shrank the risk set", fine);
            return;
        }
    }
}

void suite_rho_z_hull(Rng& rng, SuiteReport& report) {
    Check check{report};
    std::uniform_int_distribution<int> nd(2, 3);
    const int n = nd(rng);
    const ProbSpace sp = make_space(std::vector<double>(n, 1.0 / n));

    // strictly positive densities with coordinatewise mean 1
    std::uniform_int_distribution<int> zcount(1, 2);
    std::vector<RandomVector> Z(zcount(rng));
    std::uniform_real_distribution<double> zu(0.2, 2.0);
    for (auto& zeta : Z) {
        zeta.rows.assign(n, Vec(2, 0.0));
        for (std::size_t j = 0; j < 2; ++j) {
            double mean = 0.0;
            for (int i = 0; i < n; ++i) {
                zeta.rows[i][j] = zu(rng);
                mean += sp.prob(i) * zeta.rows[i][j];
            }
            for (int i = 0; i < n; ++i)
                zeta.rows[i][j] /= mean;
        }
    }

    const Window window{{{-5.0, 5.0}, {-5.0, 5.0}}};
    const double step = 0.25;
    const bool convex_case = (rng() & 1) != 0;

    RandomLowerSet X;
    std::vector<ConcaveChain> hulls;
    for (int i = 0; i < n; ++i) {
        std::vector<Vec> gens;
        const std::size_t k = convex_case ? 1 : 2 + rng() % 2;
        for (std::size_t g = 0; g < k; ++g)
            gens.push_back({rand_coord(rng), rand_coord(rng)});
        X.atoms.push_back(lower_from_generators(gens));
        const ConvexHull2 hull = convex_hull(X.atoms.back());
        if (hull.chain)
            hulls.push_back(*hull.chain);
        else
            hulls.push_back(chain_of_points(hull.exact->generators()));
    }

    Scenario describe;
    describe.space = sp;
    describe.dimension = 2;
    describe.risk = rand_vector_spec(rng, rand_coherent_spec);
    describe.portfolio = CustomPortfolio{X};
    describe.engine = exact_params();

    const RiskSetResult a = rho_Z(X, sp, Z, window, step);
    const RiskSetResult b = rho_Z_convex(hulls, sp, Z, window, step);
    const BoundaryCurve ca = boundary_curve(a, window.xlo(), window.xhi(), step);
    const BoundaryCurve cb = b.curve().value();
    for (std::size_t i = 0; i < ca.ys.size(); ++i) {
        const double ya = ca.ys[i];
        const double yb = cb.ys[i];
        if (std::isinf(ya) && std::isinf(yb))
            continue;
        if (convex_case) {
            if (std::fabs(ya - yb) > 1e-9) {
                check.fail("rho_Z differs between a convex set and its hull", describe);
                return;
            }
        } else if (ya < yb - 1e-9) {
            check.fail("rho_Z(X) escaped rho_Z(conv X)", describe);
            return;
        }
    }
}

void suite_convexification(Rng& rng, SuiteReport& report) {
    Check check{report};
    const double span = std::vector<double>{0.16, 0.12, 0.08, 0.04}[rng() % 4];
    std::vector<double> defects;
    Scenario last;
    for (int n : {2, 4, 8}) {
        const ProbSpace sp = make_space(std::vector<double>(n, 1.0 / n));
        std::vector<MaxScenario> scenarios(2);
        scenarios[0].density.values.assign(n, 0.0);
        scenarios[1].density.values.assign(n, 0.0);
        for (int i = 0; i < n; ++i)
            (i < n / 2 ? scenarios[0] : scenarios[1]).density.values[i] = 2.0;
        scenarios[0].penalty = 0.0;
        scenarios[1].penalty = 0.0;

        Scenario scenario;
        scenario.space = sp;
        scenario.dimension = 2;
        scenario.risk.components = {RiskSpec::scenario_max(scenarios, sp),
                                    RiskSpec::scenario_max(scenarios, sp)};
        RandomVector zero;
        zero.rows.assign(n, Vec(2, 0.0));
        scenario.portfolio = FiniteTransfersPortfolio{zero, {{0.0, 0.0}, {span, -span}}};
        scenario.engine = exact_params();
        scenario.engine.grid_step = span / 16.0;

        const RiskSetResult r = selection_risk(scenario);
        defects.push_back(convexity_defect(r, -span - 0.05, 0.05, span / 16.0));
        last = scenario;
    }
    for (std::size_t i = 1; i < defects.size(); ++i) {
        if (defects[i] > defects[i - 1] + 1e-12) {
            check.fail("convexity defect increased under atom refinement", last);
            return;
        }
    }
    if (defects.back() > 0.05)
        check.fail("convexity defect at n = 8 exceeds 0.05", last);
}

using SuiteFn = void (*)(Rng&, SuiteReport&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"monotonicity", suite_monotonicity},
        {"cash_invariance", suite_cash_invariance},
        {"homogeneity", suite_homogeneity},
        {"convexity", suite_convexity},
        {"eq10", suite_eq10},
        {"law_invariance", suite_law_invariance},
        {"grid_monotonicity", suite_grid_monotonicity},
        {"rho_z_hull", suite_rho_z_hull},
        {"convexification", suite_convexification},
    };
    return table;
}

} // namespace

const std::vector<std::string>& props_suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, fn] : suite_table())
            out.push_back(name);
        return out;
    }();
    return names;
}

SuiteReport run_props_suite(const std::string& name, std::uint64_t seed, std::size_t cases) {
    for (const auto& [suite_name, fn] : suite_table()) {
        if (suite_name != name)
            continue;
        SuiteReport report;
        report.name = name;
        std::uint64_t salt = 0;
        for (char c : name)
            salt = salt * 131 + static_cast<unsigned char>(c);
        for (std::size_t i = 0; i < cases; ++i) {
            Rng rng(seed ^ salt ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
            ++report.cases;
            fn(rng, report);
        }
        return report;
    }
    throw Error("unknown property suite '" + name + "'");
}

std::vector<SuiteReport> run_props(std::uint64_t seed, std::size_t cases,
                                   const std::string& suite) {
    std::vector<SuiteReport> reports;
    if (!suite.empty()) {
        reports.push_back(run_props_suite(suite, seed, cases));
        return reports;
    }
    for (const auto& name : props_suite_names())
        reports.push_back(run_props_suite(name, seed, cases));
    return reports;
}

} // namespace selrisk
