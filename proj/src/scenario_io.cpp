#include "selrisk/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace selrisk {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message, const std::string& key) {
    throw SchemaError(message, key);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known)
            fail("unknown key", path + "." + it.key());
    }
}

const json& need(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end())
        fail("missing key", path + "." + key);
    return *it;
}

double need_number(const json& obj, const char* key, const std::string& path) {
    const json& v = need(obj, key, path);
    if (!v.is_number())
        fail("expected a number", path + "." + key);
    return v.get<double>();
}

std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array())
        fail("expected an array of numbers", path);
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            fail("expected a number", path);
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<Vec> point_rows(const json& v, const std::string& path) {
    if (!v.is_array())
        fail("expected an array of points", path);
    std::vector<Vec> out;
    std::size_t idx = 0;
    for (const auto& e : v)
        out.push_back(number_array(e, path + "[" + std::to_string(idx++) + "]"));
    return out;
}

RandomVector parse_c(const json& v, const std::string& path) {
    RandomVector C;
    C.rows = point_rows(v, path);
    return C;
}

RiskSpec parse_risk_component(const json& v, const ProbSpace& sp, const std::string& path) {
    if (!v.is_object())
        fail("expected an object", path);
    const json& kindv = need(v, "kind", path);
    if (!kindv.is_string())
        fail("expected a string", path + ".kind");
    const std::string kind = kindv.get<std::string>();
    if (kind == "essinf") {
        check_keys(v, {"kind"}, path);
        return RiskSpec::ess_inf();
    }
    if (kind == "neg_expectation") {
        check_keys(v, {"kind"}, path);
        return RiskSpec::neg_expectation();
    }
    if (kind == "avar") {
        check_keys(v, {"kind", "alpha"}, path);
        return RiskSpec::avar(need_number(v, "alpha", path));
    }
    if (kind == "distortion") {
        check_keys(v, {"kind", "knots"}, path);
        const auto rows = point_rows(need(v, "knots", path), path + ".knots");
        std::vector<std::pair<double, double>> knots;
        for (const auto& r : rows) {
            if (r.size() != 2)
                fail("distortion knots are (t, g) pairs", path + ".knots");
            knots.emplace_back(r[0], r[1]);
        }
        return RiskSpec::distortion(DistortionFunction::make(std::move(knots)));
    }
    if (kind == "scenario_max") {
        check_keys(v, {"kind", "scenarios"}, path);
        const json& arr = need(v, "scenarios", path);
        if (!arr.is_array() || arr.empty())
            fail("expected a nonempty array", path + ".scenarios");
        std::vector<MaxScenario> scenarios;
        std::size_t idx = 0;
        for (const auto& e : arr) {
            const std::string spath = path + ".scenarios[" + std::to_string(idx++) + "]";
            if (!e.is_object())
                fail("expected an object", spath);
            check_keys(e, {"density", "penalty"}, spath);
            MaxScenario sc;
            sc.density.values = number_array(need(e, "density", spath), spath + ".density");
            sc.penalty = need_number(e, "penalty", spath);
            scenarios.push_back(std::move(sc));
        }
        return RiskSpec::scenario_max(std::move(scenarios), sp);
    }
    fail("unknown risk kind '" + kind + "'", path + ".kind");
}

Primitive parse_primitive(const json& v, std::size_t dim, const std::string& path) {
    if (!v.is_object())
        fail("expected an object", path);
    const json& kindv = need(v, "kind", path);
    const std::string kind = kindv.is_string() ? kindv.get<std::string>() : "";
    if (kind == "orthant") {
        check_keys(v, {"kind", "apex"}, path);
        Vec apex = number_array(need(v, "apex", path), path + ".apex");
        if (apex.size() != dim)
            fail("apex dimension mismatch", path + ".apex");
        return Primitive::orthant(std::move(apex));
    }
    if (kind == "half_space") {
        check_keys(v, {"kind", "normal", "offset"}, path);
        Vec normal = number_array(need(v, "normal", path), path + ".normal");
        if (normal.size() != dim)
            fail("normal dimension mismatch", path + ".normal");
        return Primitive::half_space(std::move(normal), need_number(v, "offset", path));
    }
    if (kind == "full") {
        check_keys(v, {"kind"}, path);
        return Primitive::full(dim);
    }
    fail("unknown primitive kind '" + kind + "'", path + ".kind");
}

PortfolioSpec parse_portfolio(const json& v, std::size_t dim, const std::string& path) {
    if (!v.is_object())
        fail("expected an object", path);
    const json& kindv = need(v, "kind", path);
    const std::string kind = kindv.is_string() ? kindv.get<std::string>() : "";
    if (kind == "fixed_cost") {
        check_keys(v, {"kind", "C", "kappa"}, path);
        FixedCostPortfolio p{parse_c(need(v, "C", path), path + ".C"),
                             need_number(v, "kappa", path)};
        if (!(p.kappa > 0.0))
            fail("kappa must be positive", path + ".kappa");
        return p;
    }
    if (kind == "halfspace") {
        check_keys(v, {"kind", "C", "t"}, path);
        return HalfSpacePortfolio{parse_c(need(v, "C", path), path + ".C"),
                                  need_number(v, "t", path)};
    }
    if (kind == "finite_transfers") {
        check_keys(v, {"kind", "C", "M"}, path);
        FiniteTransfersPortfolio p{parse_c(need(v, "C", path), path + ".C"),
                                   point_rows(need(v, "M", path), path + ".M")};
        if (p.M.empty())
            fail("transfer set must be nonempty", path + ".M");
        return p;
    }
    if (kind == "custom") {
        check_keys(v, {"kind", "atoms"}, path);
        const json& arr = need(v, "atoms", path);
        if (!arr.is_array() || arr.empty())
            fail("expected a nonempty array", path + ".atoms");
        RandomLowerSet X;
        std::size_t ai = 0;
        for (const auto& atom : arr) {
            const std::string apath = path + ".atoms[" + std::to_string(ai++) + "]";
            if (!atom.is_array() || atom.empty())
                fail("expected a nonempty array of primitives", apath);
            std::vector<Primitive> prims;
            std::size_t pi = 0;
            for (const auto& prim : atom)
                prims.push_back(
                    parse_primitive(prim, dim, apath + "[" + std::to_string(pi++) + "]"));
            X.atoms.push_back(LowerSet::from_primitives(std::move(prims)));
        }
        return CustomPortfolio{std::move(X)};
    }
    fail("unknown portfolio kind '" + kind + "'", path + ".kind");
}

EngineParams parse_engine(const json& v, std::size_t dim, const std::string& path) {
    if (!v.is_object())
        fail("expected an object", path);
    check_keys(v, {"grid_step", "window", "selection_cap", "mode"}, path);
    EngineParams params;
    params.grid_step = need_number(v, "grid_step", path);
    if (!(params.grid_step > 0.0))
        fail("grid_step must be positive", path + ".grid_step");
    const auto ranges = point_rows(need(v, "window", path), path + ".window");
    if (ranges.size() != dim)
        fail("window needs one (lo, hi) pair per coordinate", path + ".window");
    for (const auto& r : ranges) {
        if (r.size() != 2 || !(r[0] < r[1]))
            fail("window ranges are (lo, hi) with lo < hi", path + ".window");
        params.window.ranges.emplace_back(r[0], r[1]);
    }
    if (auto it = v.find("selection_cap"); it != v.end()) {
        if (!it->is_number_unsigned())
            fail("selection_cap must be a nonnegative integer", path + ".selection_cap");
        params.selection_cap = it->get<std::uint64_t>();
        if (params.selection_cap < 1)
            fail("selection_cap must be at least 1", path + ".selection_cap");
    }
    if (auto it = v.find("mode"); it != v.end()) {
        const std::string mode = it->is_string() ? it->get<std::string>() : "";
        if (mode == "general")
            params.mode = EngineMode::General;
        else if (mode == "partition")
            params.mode = EngineMode::Partition;
        else
            fail("mode must be 'general' or 'partition'", path + ".mode");
    }
    return params;
}

} // namespace

Scenario parse_scenario(const json& j) {
    if (!j.is_object())
        fail("scenario file must hold a JSON object", "$");
    check_keys(j, {"space", "dimension", "risk", "portfolio", "engine"}, "$");

    const auto probs = number_array(need(j, "space", "$"), "$.space");
    ProbSpace sp = [&] {
        try {
            return make_space(probs);
        } catch (const Error& e) {
            fail(e.what(), "$.space");
        }
    }();

    const json& dimv = need(j, "dimension", "$");
    if (!dimv.is_number_unsigned() || dimv.get<std::size_t>() < 1)
        fail("dimension must be a positive integer", "$.dimension");
    const auto dim = dimv.get<std::size_t>();

    const json& riskv = need(j, "risk", "$");
    if (!riskv.is_array() || riskv.size() != dim)
        fail("risk must list one component per coordinate", "$.risk");
    VectorRiskSpec spec;
    std::size_t ri = 0;
    for (const auto& comp : riskv) {
        try {
            spec.components.push_back(
                parse_risk_component(comp, sp, "$.risk[" + std::to_string(ri) + "]"));
        } catch (const SchemaError&) {
            throw;
        } catch (const Error& e) {
            fail(e.what(), "$.risk[" + std::to_string(ri) + "]");
        }
        ++ri;
    }

    Scenario scenario{std::move(sp), dim, std::move(spec),
                      parse_portfolio(need(j, "portfolio", "$"), dim, "$.portfolio"),
                      parse_engine(need(j, "engine", "$"), dim, "$.engine")};

    // shape checks that need the whole document
    try {
        realize(scenario.portfolio, scenario.space, dim);
    } catch (const Error& e) {
        fail(e.what(), "$.portfolio");
    }
    return scenario;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot open scenario file '" + path + "'", "$");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what(), "$");
    }
    return parse_scenario(j);
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
    json j;
    j["space"] = scenario.space.probs();
    j["dimension"] = scenario.dimension;
    json risks = json::array();
    for (const auto& comp : scenario.risk.components) {
        json r;
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, EssInfSpec>) {
                    r["kind"] = "essinf";
                } else if constexpr (std::is_same_v<T, NegExpectationSpec>) {
                    r["kind"] = "neg_expectation";
                } else if constexpr (std::is_same_v<T, AVaRSpec>) {
                    r["kind"] = "avar";
                    r["alpha"] = s.alpha;
                } else if constexpr (std::is_same_v<T, DistortionSpec>) {
                    r["kind"] = "distortion";
                    json knots = json::array();
                    for (const auto& [t, g] : s.g.knots())
                        knots.push_back({t, g});
                    r["knots"] = std::move(knots);
                } else {
                    r["kind"] = "scenario_max";
                    json arr = json::array();
                    for (const auto& sc : s.scenarios)
                        arr.push_back({{"density", sc.density.values}, {"penalty", sc.penalty}});
                    r["scenarios"] = std::move(arr);
                }
            },
            comp.variant());
        risks.push_back(std::move(r));
    }
    j["risk"] = std::move(risks);

    json p;
    std::visit(
        [&](const auto& pf) {
            using T = std::decay_t<decltype(pf)>;
            if constexpr (std::is_same_v<T, FixedCostPortfolio>) {
                p["kind"] = "fixed_cost";
                p["C"] = pf.C.rows;
                p["kappa"] = pf.kappa;
            } else if constexpr (std::is_same_v<T, HalfSpacePortfolio>) {
                p["kind"] = "halfspace";
                p["C"] = pf.C.rows;
                p["t"] = pf.t;
            } else if constexpr (std::is_same_v<T, FiniteTransfersPortfolio>) {
                p["kind"] = "finite_transfers";
                p["C"] = pf.C.rows;
                p["M"] = pf.M;
            } else {
                p["kind"] = "custom";
                json atoms = json::array();
                for (const auto& atom : pf.X.atoms) {
                    json prims = json::array();
                    for (const auto& prim : atom.primitives()) {
                        json pj;
                        switch (prim.kind()) {
                        case Primitive::Kind::Orthant:
                            pj["kind"] = "orthant";
                            pj["apex"] = prim.apex();
                            break;
                        case Primitive::Kind::HalfSpace:
                            pj["kind"] = "half_space";
                            pj["normal"] = prim.normal();
                            pj["offset"] = prim.offset();
                            break;
                        case Primitive::Kind::Full:
                            pj["kind"] = "full";
                            break;
                        }
                        prims.push_back(std::move(pj));
                    }
                    atoms.push_back(std::move(prims));
                }
                p["atoms"] = std::move(atoms);
            }
        },
        scenario.portfolio);
    j["portfolio"] = std::move(p);

    json e;
    e["grid_step"] = scenario.engine.grid_step;
    json window = json::array();
    for (const auto& [lo, hi] : scenario.engine.window.ranges)
        window.push_back({lo, hi});
    e["window"] = std::move(window);
    e["selection_cap"] = scenario.engine.selection_cap;
    e["mode"] = scenario.engine.mode == EngineMode::Partition ? "partition" : "general";
    j["engine"] = std::move(e);
    return j;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<CsvRow> curve_rows(const BoundaryCurve& curve) {
    std::vector<CsvRow> rows;
    for (std::size_t i = 0; i < curve.xs.size(); ++i)
        if (std::isfinite(curve.ys[i]))
            rows.push_back({curve.xs[i], curve.ys[i]});
    return rows;
}

std::string boundary_csv_text(const BoundaryCurve& curve) {
    std::ostringstream out;
    out << "x,y\n";
    for (const auto& row : curve_rows(curve))
        out << format_double(row.x) << ',' << format_double(row.y) << '\n';
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write file '" + path + "'");
    out << text;
}

void write_boundary_csv(const std::string& path, const BoundaryCurve& curve) {
    write_text_file(path, boundary_csv_text(curve));
}

std::string compare_csv_text(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    out << "x,oracle_y,closed_y,gap\n";
    for (const auto& row : rows) {
        out << format_double(row.x) << ',';
        if (row.has_oracle)
            out << format_double(row.oracle_y);
        out << ',';
        if (row.has_closed)
            out << format_double(row.closed_y);
        out << ',';
        if (row.has_oracle && row.has_closed)
            out << format_double(row.oracle_y - row.closed_y);
        out << '\n';
    }
    return out.str();
}

void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows) {
    write_text_file(path, compare_csv_text(rows));
}

std::string curve_svg_text(const std::vector<CsvRow>& rows, const Window& window) {
    const double width = 640.0;
    const double height = 480.0;
    const double margin = 40.0;
    const double xlo = window.xlo();
    const double xhi = window.xhi();
    double ylo = window.ylo();
    double yhi = window.yhi();
    for (const auto& row : rows) {
        ylo = std::min(ylo, row.y);
        yhi = std::max(yhi, row.y);
    }
    const double sx = (width - 2 * margin) / (xhi - xlo);
    const double sy = (height - 2 * margin) / (yhi - ylo);
    auto px = [&](double x) { return margin + (x - xlo) * sx; };
    auto py = [&](double y) { return height - margin - (y - ylo) * sy; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    const double x0 = std::clamp(0.0, xlo, xhi);
    const double y0 = std::clamp(0.0, ylo, yhi);
    out << "  <line x1=\"" << px(xlo) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(xhi)
        << "\" y2=\"" << py(y0) << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    out << "  <line x1=\"" << px(x0) << "\" y1=\"" << py(ylo) << "\" x2=\"" << px(x0)
        << "\" y2=\"" << py(yhi) << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    out << "  <polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i)
            out << ' ';
        out << px(rows[i].x) << ',' << py(rows[i].y);
    }
    out << "\"/>\n</svg>\n";
    return out.str();
}

} // namespace selrisk
