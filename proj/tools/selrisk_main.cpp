#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "selrisk/closed_forms.hpp"
#include "selrisk/props.hpp"
#include "selrisk/scenario_io.hpp"

namespace {

using namespace selrisk;

constexpr int kExitSchema = 1;
constexpr int kExitBudget = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitTolerance = 4;
constexpr int kExitProperty = 5;

class Precondition : public Error {
public:
    using Error::Error;
};

const RandomVector& portfolio_capital(const PortfolioSpec& p) {
    if (const auto* fc = std::get_if<FixedCostPortfolio>(&p))
        return fc->C;
    if (const auto* hs = std::get_if<HalfSpacePortfolio>(&p))
        return hs->C;
    if (const auto* ft = std::get_if<FiniteTransfersPortfolio>(&p))
        return ft->C;
    throw Precondition("this closed form needs a parametric portfolio");
}

void require_zero_capital(const PortfolioSpec& p, const std::string& name) {
    for (const auto& row : portfolio_capital(p).rows)
        for (double v : row)
            if (v != 0.0)
                throw Precondition("closed form '" + name + "' requires C = 0");
}

double identical_avar_level(const VectorRiskSpec& spec) {
    const auto* first = std::get_if<AVaRSpec>(&spec.components.front().variant());
    if (!first)
        throw Precondition("this closed form needs identical AVaR components");
    for (const auto& comp : spec.components)
        if (!same_spec(comp, spec.components.front()))
            throw Precondition("this closed form needs identical AVaR components");
    return first->alpha;
}

DistortionFunction identical_distortion(const VectorRiskSpec& spec) {
    for (const auto& comp : spec.components)
        if (!same_spec(comp, spec.components.front()))
            throw Precondition("this closed form needs identical distortion components");
    const auto& v = spec.components.front().variant();
    if (const auto* d = std::get_if<DistortionSpec>(&v))
        return d->g;
    if (const auto* a = std::get_if<AVaRSpec>(&v))
        return avar_distortion(a->alpha);
    throw Precondition("this closed form needs distortion or AVaR components");
}

std::vector<double> beta_grid() { return make_grid(0.0, 1.0, 0.01); }

RiskSetResult closed_form_result(const std::string& name, const Scenario& s) {
    const Window& window = s.engine.window;
    if (name == "ikappa_avar") {
        const auto* fc = std::get_if<FixedCostPortfolio>(&s.portfolio);
        if (!fc)
            throw Precondition("'ikappa_avar' needs a fixed-cost portfolio");
        require_zero_capital(s.portfolio, name);
        return ikappa_avar_riskset(fc->kappa, identical_avar_level(s.risk), window,
                                   s.engine.grid_step);
    }
    if (name == "eq88") {
        const auto* fc = std::get_if<FixedCostPortfolio>(&s.portfolio);
        if (!fc)
            throw Precondition("'eq88' needs a fixed-cost portfolio");
        require_zero_capital(s.portfolio, name);
        const double alpha = identical_avar_level(s.risk);
        const BRhoSet B = b_rho_avar(alpha, beta_grid());
        const auto t_grid = make_grid(0.0, window.l1_diameter(), s.engine.grid_step);
        return eq88_riskset(B, fc->kappa, t_grid, window, s.engine.grid_step);
    }
    if (name == "ht_identical" || name == "ht_essinf_mixed" ||
        name == "ht_expectation_mixed") {
        const auto* hs = std::get_if<HalfSpacePortfolio>(&s.portfolio);
        if (!hs)
            throw Precondition("'" + name + "' needs a half-space transfer portfolio");
        if (name == "ht_identical") {
            for (const auto& comp : s.risk.components)
                if (!same_spec(comp, s.risk.components.front()))
                    throw Precondition("'ht_identical' needs identical components");
            return ht_identical(hs->C, hs->t, s.risk.components.front(), s.space);
        }
        if (name == "ht_essinf_mixed") {
            std::vector<RiskSpec> rest;
            for (const auto& comp : s.risk.components)
                if (!std::holds_alternative<EssInfSpec>(comp.variant()))
                    rest.push_back(comp);
            if (rest.size() + 1 != s.risk.components.size() || rest.empty())
                throw Precondition(
                    "'ht_essinf_mixed' needs exactly one essential-infimum component");
            for (const auto& comp : rest)
                if (!same_spec(comp, rest.front()))
                    throw Precondition("'ht_essinf_mixed' needs identical other components");
            return ht_essinf_mixed(hs->C, hs->t, rest.front(), s.space);
        }
        std::vector<RiskSpec> rest;
        for (const auto& comp : s.risk.components)
            if (!std::holds_alternative<NegExpectationSpec>(comp.variant()))
                rest.push_back(comp);
        if (rest.size() + 1 != s.risk.components.size() || rest.empty())
            throw Precondition(
                "'ht_expectation_mixed' needs exactly one negative-expectation component");
        for (const auto& comp : rest)
            if (!same_spec(comp, rest.front()))
                throw Precondition("'ht_expectation_mixed' needs identical other components");
        return ht_expectation_mixed(hs->C, hs->t, rest.front(), s.space);
    }
    if (name == "fixed_points") {
        for (const auto& comp : s.risk.components)
            if (!std::holds_alternative<EssInfSpec>(comp.variant()))
                throw Precondition(
                    "'fixed_points' matches the oracle only for essential-infimum components");
        return fixed_point_riskset(realize(s.portfolio, s.space, s.dimension));
    }
    if (name == "two_point" || name == "three_point") {
        const auto* ft = std::get_if<FiniteTransfersPortfolio>(&s.portfolio);
        if (!ft)
            throw Precondition("'" + name + "' needs a finite-transfer portfolio");
        require_zero_capital(s.portfolio, name);
        const DistortionFunction g = identical_distortion(s.risk);
        std::vector<Vec> others;
        bool has_origin = false;
        for (const auto& m : ft->M) {
            if (m[0] == 0.0 && m[1] == 0.0)
                has_origin = true;
            else
                others.push_back(m);
        }
        if (!has_origin)
            throw Precondition("'" + name + "' expects the origin among the transfers");
        if (name == "two_point") {
            if (others.size() != 1)
                throw Precondition("'two_point' needs exactly two transfer points");
            return two_point_riskset(others.front()[0], others.front()[1], g, beta_grid());
        }
        if (others.size() != 2)
            throw Precondition("'three_point' needs exactly three transfer points");
        const Vec& p1 = others[0][0] < others[1][0] ? others[0] : others[1];
        const Vec& p3 = others[0][0] < others[1][0] ? others[1] : others[0];
        return three_point_riskset(p1, p3, g, 0.01);
    }
    throw Precondition("unknown closed form '" + name + "'");
}

int cmd_compute(const std::string& scenario_path, const std::string& out_path,
                const std::string& svg_path, const std::string& closed_form) {
    const Scenario s = load_scenario(scenario_path);
    RiskSetResult result;
    if (!closed_form.empty())
        result = closed_form_result(closed_form, s);
    else
        result = selection_risk(s);
    const BoundaryCurve curve = boundary_curve(result, s.engine.window.xlo(),
                                               s.engine.window.xhi(), s.engine.grid_step);
    write_boundary_csv(out_path, curve);
    if (!svg_path.empty())
        write_text_file(svg_path, curve_svg_text(curve_rows(curve), s.engine.window));
    return 0;
}

int cmd_compare(const std::string& scenario_path, const std::string& closed_form, double tol,
                const std::string& report_path) {
    const Scenario s = load_scenario(scenario_path);
    const RiskSetResult closed = closed_form_result(closed_form, s);
    const RiskSetResult oracle = selection_risk(s);
    const double xlo = s.engine.window.xlo();
    const double xhi = s.engine.window.xhi();
    const BoundaryCurve co = boundary_curve(oracle, xlo, xhi, s.engine.grid_step);
    const BoundaryCurve cc = boundary_curve(closed, xlo, xhi, s.engine.grid_step);

    std::vector<CompareRow> rows;
    bool contained = true;
    double sup_gap = 0.0;
    for (std::size_t i = 0; i < co.xs.size(); ++i) {
        const bool has_o = std::isfinite(co.ys[i]);
        const bool has_c = std::isfinite(cc.ys[i]);
        if (has_o || has_c)
            rows.push_back({co.xs[i], has_o, co.ys[i], has_c, cc.ys[i]});
        if (!has_o)
            continue; // nothing of the oracle to cover at this abscissa
        if (std::isinf(cc.ys[i]) && cc.ys[i] < 0.0)
            continue; // closed-form set is everything here
        if (!has_c || co.ys[i] < cc.ys[i] - kBoundaryTol) {
            contained = false;
            continue;
        }
        sup_gap = std::max(sup_gap, co.ys[i] - cc.ys[i]);
    }
    write_compare_csv(report_path, rows);
    if (!contained) {
        std::cerr << "containment violated: the oracle set is not inside the closed form\n";
        return kExitTolerance;
    }
    if (sup_gap > tol) {
        std::cerr << "sup gap " << format_double(sup_gap) << " exceeds tolerance "
                  << format_double(tol) << "\n";
        return kExitTolerance;
    }
    std::cout << "containment holds, sup gap " << format_double(sup_gap) << "\n";
    return 0;
}

int cmd_props(std::uint64_t seed, std::size_t cases, const std::string& suite) {
    const auto reports = run_props(seed, cases, suite);
    bool failed = false;
    for (const auto& report : reports) {
        std::cout << "suite " << report.name << ": " << report.cases << " cases, "
                  << report.failures << " failures\n";
        for (const auto& message : report.messages)
            std::cerr << message << "\n";
        failed = failed || report.failures > 0;
    }
    return failed ? kExitProperty : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"set-valued selection risk of non-convex portfolios on finite spaces"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string svg_path;
    std::string closed_form;
    std::string report_path;
    double tol = 0.1;
    std::uint64_t seed = 42;
    std::size_t cases = 200;
    std::string suite;

    auto* compute = app.add_subcommand("compute", "compute a risk-set boundary as CSV");
    compute->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    compute->add_option("--out", out_path, "output CSV path")->required();
    compute->add_option("--svg", svg_path, "optional SVG plot path");
    compute->add_option("--closed-form", closed_form,
                        "evaluate the named closed form instead of the oracle");

    auto* compare = app.add_subcommand("compare", "oracle vs closed form report");
    compare->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    compare->add_option("--closed-form", closed_form, "closed form name")->required();
    compare->add_option("--tol", tol, "sup-gap tolerance")->required();
    compare->add_option("--report", report_path, "report CSV path")->required();

    auto* props = app.add_subcommand("props", "randomized property battery");
    props->add_option("--seed", seed, "RNG seed");
    props->add_option("--cases", cases, "cases per suite");
    props->add_option("--suite", suite, "run a single suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed())
            return cmd_compute(scenario_path, out_path, svg_path, closed_form);
        if (compare->parsed())
            return cmd_compare(scenario_path, closed_form, tol, report_path);
        return cmd_props(seed, cases, suite);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const SelectionBudgetExceeded& e) {
        std::cerr << "selection budget exceeded: " << e.what() << " (required "
                  << e.required() << ")\n";
        return kExitBudget;
    } catch (const Precondition& e) {
        std::cerr << "closed-form precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const NonConvexRisk& e) {
        std::cerr << "closed-form precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const PreconditionRiskDominatesMean& e) {
        std::cerr << "closed-form precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const SameSignTransfer& e) {
        std::cerr << "closed-form precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const OrientationViolated& e) {
        std::cerr << "closed-form precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    }
}
