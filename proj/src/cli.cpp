#include "hjlab/cli.hpp"

#include <cmath>
#include <fstream>

#include "hjlab/cellsolve.hpp"
#include "hjlab/effective.hpp"
#include "hjlab/epsolve.hpp"
#include "hjlab/expr.hpp"
#include "hjlab/harness.hpp"
#include "hjlab/io.hpp"
#include "hjlab/mather.hpp"

namespace hjlab {

namespace {

using nlohmann::json;

// ---- typed config access with field-path diagnostics ----

const json* find(const json& root, const std::string& path) {
    const json* cur = &root;
    std::size_t start = 0;
    while (start < path.size()) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &(*cur)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return cur;
}

double cfg_number(const json& root, const std::string& path, std::optional<double> fallback = {}) {
    const json* v = find(root, path);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError("config field '" + path + "': missing");
    }
    if (!v->is_number()) throw ConfigError("config field '" + path + "': expected a number");
    return v->get<double>();
}

int cfg_int(const json& root, const std::string& path, std::optional<int> fallback = {}) {
    const json* v = find(root, path);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError("config field '" + path + "': missing");
    }
    if (!v->is_number_integer()) throw ConfigError("config field '" + path + "': expected an integer");
    return v->get<int>();
}

bool cfg_bool(const json& root, const std::string& path, bool fallback) {
    const json* v = find(root, path);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError("config field '" + path + "': expected a boolean");
    return v->get<bool>();
}

std::string cfg_string(const json& root, const std::string& path,
                       std::optional<std::string> fallback = {}) {
    const json* v = find(root, path);
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError("config field '" + path + "': missing");
    }
    if (!v->is_string()) throw ConfigError("config field '" + path + "': expected a string");
    return v->get<std::string>();
}

Order cfg_order(const json& root) {
    const std::string s = cfg_string(root, "order", std::string("first"));
    if (s == "first") return Order::first;
    if (s == "second") return Order::second;
    throw ConfigError("config field 'order': expected \"first\" or \"second\"");
}

CellMethod cfg_method(const json& root, const std::string& path) {
    const std::string s = cfg_string(root, path, std::string("large-time"));
    if (s == "large-time") return CellMethod::large_time;
    if (s == "discounted") return CellMethod::discounted;
    if (s == "eigenvalue-oracle") return CellMethod::eigenvalue_oracle;
    throw ConfigError("config field '" + path +
                      "': expected large-time | discounted | eigenvalue-oracle");
}

std::string order_name(Order o) { return o == Order::first ? "first" : "second"; }

std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

json interval_json(const ThetaInterval& iv) {
    json j;
    j["c"] = iv.c;
    j["theta_minus"] = iv.minus_unbounded ? json("-inf") : json(iv.theta_minus);
    j["theta_plus"] = iv.plus_unbounded ? json("+inf") : json(iv.theta_plus);
    j["minus_unbounded"] = iv.minus_unbounded;
    j["plus_unbounded"] = iv.plus_unbounded;
    j["singleton"] = iv.singleton;
    return j;
}

ThetaInterval interval_from_config(const json& root, const std::string& block, double c) {
    ThetaInterval iv;
    iv.c = c;
    iv.minus_unbounded = cfg_bool(root, block + ".minus_unbounded", false);
    iv.plus_unbounded = cfg_bool(root, block + ".plus_unbounded", false);
    if (!iv.minus_unbounded) iv.theta_minus = cfg_number(root, block + ".theta_minus");
    if (!iv.plus_unbounded) iv.theta_plus = cfg_number(root, block + ".theta_plus");
    if (!iv.minus_unbounded && !iv.plus_unbounded)
        iv.singleton = (iv.theta_plus - iv.theta_minus) <= 0.05;
    return iv;
}

}  // namespace

HamiltonianSpec hamiltonian_from_config(const nlohmann::json& root, std::uint64_t seed) {
    const json* block = find(root, "hamiltonian");
    if (!block || !block->is_object())
        throw ConfigError("config field 'hamiltonian': missing object");
    const int dim = cfg_int(root, "hamiltonian.dim", 1);
    HamiltonianSpec h;
    if (block->contains("builtin")) {
        h = make_builtin(cfg_string(root, "hamiltonian.builtin"), dim);
    } else if (block->contains("expr")) {
        HamiltonianSpec meta;
        meta.dim = dim;
        meta.growth_exponent = cfg_number(root, "hamiltonian.growth_exponent", 2.0);
        meta.lambda0 = cfg_number(root, "hamiltonian.lambda0", 0.25);
        meta.m0 = cfg_number(root, "hamiltonian.m0", 1.0);
        meta.rho_star = cfg_number(root, "hamiltonian.rho_star", 1.0);
        meta.convex_in_p = cfg_bool(root, "hamiltonian.convex_p", true);
        meta.superlinear_in_p = cfg_bool(root, "hamiltonian.superlinear_p", true);
        meta.monotone_in_u = cfg_bool(root, "hamiltonian.monotone_u", true);
        meta.strictly_monotone_in_u = cfg_bool(root, "hamiltonian.strict_monotone_u", false);
        meta.convex_in_u = cfg_bool(root, "hamiltonian.convex_u", false);
        meta.pstar_origin = cfg_bool(root, "hamiltonian.pstar_origin", false);
        meta.quadratic_separable = cfg_bool(root, "hamiltonian.quadratic_separable", false);
        h = make_expression_hamiltonian(cfg_string(root, "hamiltonian.expr"), dim, meta);
    } else {
        throw ConfigError("config field 'hamiltonian': needs either 'builtin' or 'expr'");
    }
    if (h.monotone_in_u) spot_check_monotone(h, 1000, seed);
    return h;
}

json materialize_config(const json& config, const std::string& subcommand, std::uint64_t seed) {
    json m = config;
    m["subcommand"] = subcommand;
    m["seed"] = seed;
    if (!m.contains("order")) m["order"] = "first";
    if (!m.contains("grid_n")) m["grid_n"] = 64;
    if (!m.contains("tol")) m["tol"] = 1e-3;
    if (m.contains("hamiltonian") && m["hamiltonian"].is_object() &&
        !m["hamiltonian"].contains("dim"))
        m["hamiltonian"]["dim"] = 1;
    if (subcommand == "effective" && m.contains("effective")) {
        if (!m["effective"].contains("resolution")) m["effective"]["resolution"] = 0.05;
        if (!m["effective"].contains("method")) m["effective"]["method"] = "large-time";
    }
    if (subcommand == "mather" && m.contains("mather")) {
        const int dim = m["hamiltonian"].value("dim", 1);
        if (!m["mather"].contains("x_n")) m["mather"]["x_n"] = dim == 1 ? 32 : 12;
        if (!m["mather"].contains("mv")) m["mather"]["mv"] = dim == 1 ? 33 : 9;
        if (!m["mather"].contains("vmax")) m["mather"]["vmax"] = 5.0;
        if (!m["mather"].contains("fourier_order"))
            m["mather"]["fourier_order"] = default_fourier_order(dim);
    }
    return m;
}

int run_effective(const json& config, const std::string& out_dir, bool plot, std::uint64_t seed,
                  std::ostream& log) {
    const HamiltonianSpec h = hamiltonian_from_config(config, seed);
    const Order order = cfg_order(config);
    const int grid_n = cfg_int(config, "grid_n", 256);
    const double tol = cfg_number(config, "tol", 1e-3);
    const PeriodicGrid grid(h.dim, grid_n);
    const double a = cfg_number(config, "effective.theta_min");
    const double b = cfg_number(config, "effective.theta_max");
    const int count = cfg_int(config, "effective.count", 21);
    const CellMethod method = cfg_method(config, "effective.method");

    const EffectiveCurve curve = sample_curve(h, order, a, b, count, grid, tol, method);

    std::string csv = csv_line({"theta", "hbar", "residual"});
    for (const auto& s : curve.samples)
        csv += csv_line({format_double(s.theta), format_double(s.hbar),
                         format_double(s.residual)});
    write_text_file(join_path(out_dir, "curve.csv"), csv);
    if (plot) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& s : curve.samples) pts.push_back({s.theta, s.hbar});
        write_text_file(join_path(out_dir, "curve.svg"),
                        svg_line_plot(pts, "theta", "hbar", false));
    }

    if (find(config, "effective.c")) {
        const double c = cfg_number(config, "effective.c");
        const double resolution = cfg_number(config, "effective.resolution", 0.05);
        const ThetaInterval iv = level_set(curve, c, resolution);
        json out = interval_json(iv);
        out["resolution"] = resolution;
        if (cfg_bool(config, "effective.certificate", false)) {
            const Certificate cert = singleton_certificate(h, order, iv, grid, tol);
            out["certificate"] = cert == Certificate::certified_singleton
                                     ? "certified-singleton"
                                     : "inconclusive";
        }
        out["config"] = materialize_config(config, "effective", seed);
        write_text_file(join_path(out_dir, "levelset.json"), out.dump(2) + "\n");
    }
    log << "effective: wrote curve.csv (" << curve.samples.size() << " samples)\n";
    return 0;
}

int run_solve(const json& config, const std::string& out_dir, bool plot, std::uint64_t seed,
              std::ostream& log) {
    const HamiltonianSpec h = hamiltonian_from_config(config, seed);
    const Order order = cfg_order(config);
    const int grid_n = cfg_int(config, "grid_n", 64);
    const double tol = cfg_number(config, "tol", 1e-3);
    const PeriodicGrid grid(h.dim, grid_n);

    EpsProblem prob;
    prob.h = h;
    prob.eps = cfg_number(config, "solve.eps");
    prob.c = cfg_number(config, "solve.c", 0.0);
    prob.order = order;

    const bool want_envelope = cfg_bool(config, "solve.envelope", false);
    std::optional<ThetaInterval> iv;
    if (want_envelope || find(config, "solve.theta_minus") || find(config, "solve.theta_plus")) {
        iv = interval_from_config(config, "solve", prob.c);
        if (!iv->minus_unbounded && !iv->plus_unbounded) {
            prob.initial_guess = 0.5 * (iv->theta_minus + iv->theta_plus);
            prob.u_range = std::make_pair(iv->theta_minus - 2.0 - std::fabs(prob.c),
                                          iv->theta_plus + 2.0 + std::fabs(prob.c));
        }
    }
    if (find(config, "solve.initial_guess"))
        prob.initial_guess = cfg_number(config, "solve.initial_guess");

    const EpsSolution sol = solve_eps(prob, grid, tol);

    std::string csv =
        grid.dim() == 1 ? csv_line({"x", "u"}) : csv_line({"x1", "x2", "u"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Coord y = grid.node(i);
        if (grid.dim() == 1)
            csv += csv_line({format_double(prob.eps * y[0]), format_double(sol.u[i])});
        else
            csv += csv_line({format_double(prob.eps * y[0]), format_double(prob.eps * y[1]),
                             format_double(sol.u[i])});
    }
    write_text_file(join_path(out_dir, "solution.csv"), csv);
    if (plot && grid.dim() == 1) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < grid.size(); ++i)
            pts.push_back({prob.eps * grid.node(i)[0], sol.u[i]});
        write_text_file(join_path(out_dir, "solution.svg"),
                        svg_line_plot(pts, "x", "u", false));
    }

    if (want_envelope) {
        const Envelope env = build_envelope(h, prob.eps, prob.c, *iv, order, grid, tol);
        std::string ecsv = csv_line({"x", "lower", "upper"});
        for (std::size_t i = 0; i < grid.size(); ++i)
            ecsv += csv_line({format_double(prob.eps * grid.node(i)[0]),
                              env.has_lower ? format_double(env.lower[i]) : "",
                              env.has_upper ? format_double(env.upper[i]) : ""});
        write_text_file(join_path(out_dir, "envelope.csv"), ecsv);
    }

    json probe_doc;
    if (cfg_bool(config, "solve.probe", true)) {
        const ProbeResult probe = uniqueness_probe(prob, sol, grid, tol);
        probe_doc["verdict"] = probe.certified_unique ? "certified-unique" : "inconclusive";
        if (order == Order::second) {
            probe_doc["max_du"] = probe.max_du;
            probe_doc["shift_residual"] = probe.shift_residual;
        } else {
            probe_doc["ordinal"] = probe.ordinal == OrdinalVerdict::empty_certified
                                       ? "empty-certified"
                                       : probe.ordinal == OrdinalVerdict::ordinal_found
                                             ? "ordinal-found"
                                             : "inconclusive";
            probe_doc["ordinal_integral"] = probe.ordinal_integral;
        }
    }
    probe_doc["cauchy"] = sol.cauchy;
    probe_doc["final_lambda"] = sol.final_lambda;
    probe_doc["residual_sup"] = sol.residual_sup;
    probe_doc["lipschitz_estimate"] = sol.lipschitz_estimate;
    json trace = json::array();
    for (const auto& row : sol.lambda_trace) {
        json t;
        t["lambda"] = row.lambda;
        t["sup_change"] = std::isnan(row.sup_change) ? json() : json(row.sup_change);
        t["iterations"] = row.iterations;
        trace.push_back(t);
    }
    probe_doc["lambda_trace"] = trace;
    probe_doc["config"] = materialize_config(config, "solve", seed);
    write_text_file(join_path(out_dir, "probe.json"), probe_doc.dump(2) + "\n");

    if (!sol.cauchy)
        log << "solve: discount ladder not Cauchy (selection drift reported in probe.json)\n";
    log << "solve: wrote solution.csv\n";
    return 0;
}

int run_mather(const json& config, const std::string& out_dir, bool /*plot*/,
               std::uint64_t seed, std::ostream& log) {
    const HamiltonianSpec h = hamiltonian_from_config(config, seed);
    const Order order = cfg_order(config);
    const double theta = cfg_number(config, "mather.theta", 0.0);
    const int x_n = cfg_int(config, "mather.x_n", h.dim == 1 ? 32 : 12);
    const int mv = cfg_int(config, "mather.mv", h.dim == 1 ? 33 : 9);
    const double vmax = cfg_number(config, "mather.vmax", 5.0);
    const int K = cfg_int(config, "mather.fourier_order", default_fourier_order(h.dim));
    const MeasureGrid mg(PeriodicGrid(h.dim, x_n), mv, vmax);

    const MatherResult result = mather_lp(h, Frozen{theta}, order, mg, K);

    std::string csv = h.dim == 1 ? csv_line({"x1", "v1", "weight"})
                                 : csv_line({"x1", "x2", "v1", "v2", "weight"});
    for (const auto& atom : result.support) {
        if (h.dim == 1)
            csv += csv_line({format_double(atom.x[0]), format_double(atom.v[0]),
                             format_double(atom.weight)});
        else
            csv += csv_line({format_double(atom.x[0]), format_double(atom.x[1]),
                             format_double(atom.v[0]), format_double(atom.v[1]),
                             format_double(atom.weight)});
    }
    write_text_file(join_path(out_dir, "measure.csv"), csv);

    json diag;
    diag["c_value"] = result.c_value;
    diag["mass"] = result.measure.mass();
    diag["lp_pivots"] = result.lp_pivots;
    double feas = 0.0;
    for (double r : result.row_residuals) feas = std::max(feas, std::fabs(r));
    diag["max_feasibility_residual"] = feas;
    if (order == Order::first) {
        const OrdinalResult od = ordinal_diagnostic(h, Frozen{theta}, mg, K);
        diag["ordinal"] = od.verdict == OrdinalVerdict::empty_certified
                              ? "empty-certified"
                              : od.verdict == OrdinalVerdict::ordinal_found ? "ordinal-found"
                                                                            : "inconclusive";
        diag["ordinal_integral"] = od.max_du_integral;
    } else {
        const MarginalTable table = measure_pushforward_density(result);
        diag["positivity_fraction"] = table.positivity_fraction;
        diag["zero_nodes"] = table.zero_nodes;
        json marg = json::array();
        for (std::size_t i = 0; i < table.weight.size(); ++i) {
            json row;
            row["x1"] = mg.xgrid.node(i)[0];
            if (h.dim == 2) row["x2"] = mg.xgrid.node(i)[1];
            row["weight"] = table.weight[i];
            marg.push_back(row);
        }
        diag["marginal"] = marg;
    }
    diag["config"] = materialize_config(config, "mather", seed);
    write_text_file(join_path(out_dir, "diagnostic.json"), diag.dump(2) + "\n");
    log << "mather: c_value = " << format_double(result.c_value) << "\n";
    return 0;
}

int run_rate(const json& config, const std::string& out_dir, bool plot, std::uint64_t seed,
             std::ostream& log) {
    const HamiltonianSpec h = hamiltonian_from_config(config, seed);
    const Order order = cfg_order(config);
    const int grid_n = cfg_int(config, "grid_n", 64);
    const double tol = cfg_number(config, "tol", 1e-3);
    const PeriodicGrid grid(h.dim, grid_n);
    const std::string mode = cfg_string(config, "rate.mode", std::string("rate"));
    const double c = cfg_number(config, "rate.c", 0.0);

    const json* list = find(config, "rate.eps_list");
    if (!list || !list->is_array())
        throw ConfigError("config field 'rate.eps_list': expected an array");
    std::vector<double> eps_list;
    for (const auto& e : *list) {
        if (!e.is_number()) throw ConfigError("config field 'rate.eps_list': expected numbers");
        eps_list.push_back(e.get<double>());
    }

    json summary;
    if (mode == "rate") {
        const double theta = cfg_number(config, "rate.theta");
        const RateReport report = rate_sweep(h, order, c, theta, eps_list, grid, tol);
        std::string csv = csv_line({"eps", "sup_error", "lipschitz", "iterations"});
        for (const auto& row : report.rows)
            csv += csv_line({format_double(row.eps), format_double(row.sup_error),
                             format_double(row.lipschitz), std::to_string(row.iterations)});
        write_text_file(join_path(out_dir, "rate.csv"), csv);
        summary["slope"] = report.fitted_slope;
        summary["C"] = report.fitted_C;
        summary["pass"] = report.pass;
        summary["theta"] = theta;
        if (plot) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& row : report.rows) pts.push_back({row.eps, row.sup_error});
            write_text_file(join_path(out_dir, "rate.svg"),
                            svg_line_plot(pts, "eps (log)", "sup error (log)", true));
        }
        log << "rate: slope = " << format_double(report.fitted_slope)
            << ", pass = " << (report.pass ? "true" : "false") << "\n";
    } else if (mode == "envelope") {
        const ThetaInterval iv = interval_from_config(config, "rate", c);
        const EnvelopeReport report = envelope_sweep(h, order, c, iv, eps_list, grid, tol);
        std::string csv = csv_line(
            {"eps", "contained", "max_violation", "dev_minus", "dev_plus", "width"});
        for (const auto& row : report.rows)
            csv += csv_line({format_double(row.eps), row.contained ? "1" : "0",
                             format_double(row.max_violation), format_double(row.dev_minus),
                             format_double(row.dev_plus), format_double(row.width)});
        write_text_file(join_path(out_dir, "rate.csv"), csv);
        summary["C_env"] = report.fitted_C_env;
        summary["all_contained"] = report.all_contained;
        summary["theta_minus"] = report.minus_unbounded ? json("-inf") : json(report.theta_minus);
        summary["theta_plus"] = report.plus_unbounded ? json("+inf") : json(report.theta_plus);
        log << "rate(envelope): all_contained = "
            << (report.all_contained ? "true" : "false") << "\n";
    } else {
        throw ConfigError("config field 'rate.mode': expected \"rate\" or \"envelope\"");
    }
    summary["mode"] = mode;
    summary["c"] = c;
    summary["order"] = order_name(order);
    summary["config"] = materialize_config(config, "rate", seed);
    write_text_file(join_path(out_dir, "summary.json"), summary.dump(2) + "\n");
    return 0;
}

int run_examples(std::ostream& out) {
    for (const auto& entry : builtin_catalogue())
        out << entry.id << "\t" << entry.description << "\n";
    return 0;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.empty())
            throw ConfigError(
                "usage: hjlab <effective|solve|mather|rate|examples> [--config PATH] [--out DIR] "
                "[--plot] [--seed N]");
        const std::string sub = args[0];
        std::string config_path, out_dir = ".";
        bool plot = false;
        std::uint64_t seed = 12345;
        for (std::size_t i = 1; i < args.size(); ++i) {
            const std::string& a = args[i];
            auto next = [&]() -> const std::string& {
                if (i + 1 >= args.size()) throw ConfigError("flag " + a + " needs a value");
                return args[++i];
            };
            if (a == "--config")
                config_path = next();
            else if (a == "--out")
                out_dir = next();
            else if (a == "--plot")
                plot = true;
            else if (a == "--seed")
                seed = std::stoull(next());
            else
                throw ConfigError("unknown flag: " + a);
        }
        if (sub == "examples") return run_examples(out);

        if (config_path.empty()) throw ConfigError("subcommand '" + sub + "' needs --config PATH");
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        json config;
        try {
            in >> config;
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }

        if (sub == "effective") return run_effective(config, out_dir, plot, seed, out);
        if (sub == "solve") return run_solve(config, out_dir, plot, seed, out);
        if (sub == "mather") return run_mather(config, out_dir, plot, seed, out);
        if (sub == "rate") return run_rate(config, out_dir, plot, seed, out);
        throw ConfigError("unknown subcommand: " + sub);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const EvalError& e) {
        err << "evaluation failure: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace hjlab
