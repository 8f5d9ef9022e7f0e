#pragma once

/// @file cli.hpp
/// @brief Command-line front end: price, kernel, greeks, bootstrap, compare.
///
/// Exit codes: 0 success, 2 usage or configuration error, 1 numeric-domain
/// error raised by the library.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lvasym/bootstrap.hpp"
#include "lvasym/io.hpp"
#include "lvasym/kernel.hpp"
#include "lvasym/models_json.hpp"
#include "lvasym/oracles.hpp"
#include "lvasym/payoff.hpp"
#include "lvasym/pricing.hpp"

namespace lvasym::cli {

/// Every flag of every command, resolved. Serializes to JSON for --save-config.
struct RunConfig {
    std::string command;
    nlohmann::json model;
    int order = 2;
    double t = 0.0;
    std::string payoff = "call";
    double strike = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    std::optional<double> spot;
    std::string grid;
    double x = 0.0;
    std::string basepoint = "atx";
    std::string method;
    std::optional<double> dx;
    std::optional<double> xmax;
    std::optional<double> step;
    int steps = 10;
    bool closed_first_step = true;
    std::string oracle;
    std::vector<double> times;
    double cn_dx = 0.01;
    double cn_dt = 1e-4;
    std::optional<std::int64_t> seed;
    std::string out;
};

namespace detail {

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> json_opt(const nlohmann::json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

}  // namespace detail

inline nlohmann::json to_json(const RunConfig& c) {
    return nlohmann::json{{"command", c.command},
                          {"model", c.model},
                          {"order", c.order},
                          {"t", c.t},
                          {"payoff", c.payoff},
                          {"strike", c.strike},
                          {"k1", c.k1},
                          {"k2", c.k2},
                          {"spot", detail::opt_json(c.spot)},
                          {"grid", c.grid},
                          {"x", c.x},
                          {"basepoint", c.basepoint},
                          {"method", c.method},
                          {"dx", detail::opt_json(c.dx)},
                          {"xmax", detail::opt_json(c.xmax)},
                          {"step", detail::opt_json(c.step)},
                          {"steps", c.steps},
                          {"closed_first_step", c.closed_first_step},
                          {"oracle", c.oracle},
                          {"times", c.times},
                          {"cn_dx", c.cn_dx},
                          {"cn_dt", c.cn_dt},
                          {"seed", detail::opt_json(c.seed)},
                          {"out", c.out}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    const nlohmann::json defaults = to_json(RunConfig{});
    for (const auto& item : j.items())
        if (!defaults.contains(item.key())) throw ConfigError("config: unknown key \"" + item.key() + "\"");
    if (!j.contains("command")) throw ConfigError("config: missing key \"command\"");
    nlohmann::json m = defaults;
    m.update(j);
    try {
        RunConfig c;
        c.command = m.at("command").get<std::string>();
        c.model = m.at("model");
        c.order = m.at("order").get<int>();
        c.t = m.at("t").get<double>();
        c.payoff = m.at("payoff").get<std::string>();
        c.strike = m.at("strike").get<double>();
        c.k1 = m.at("k1").get<double>();
        c.k2 = m.at("k2").get<double>();
        c.spot = detail::json_opt<double>(m.at("spot"));
        c.grid = m.at("grid").get<std::string>();
        c.x = m.at("x").get<double>();
        c.basepoint = m.at("basepoint").get<std::string>();
        c.method = m.at("method").get<std::string>();
        c.dx = detail::json_opt<double>(m.at("dx"));
        c.xmax = detail::json_opt<double>(m.at("xmax"));
        c.step = detail::json_opt<double>(m.at("step"));
        c.steps = m.at("steps").get<int>();
        c.closed_first_step = m.at("closed_first_step").get<bool>();
        c.oracle = m.at("oracle").get<std::string>();
        c.times = m.at("times").get<std::vector<double>>();
        c.cn_dx = m.at("cn_dx").get<double>();
        c.cn_dt = m.at("cn_dt").get<double>();
        c.seed = detail::json_opt<std::int64_t>(m.at("seed"));
        c.out = m.at("out").get<std::string>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

namespace detail {

inline void usage(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

inline SpatialGrid parse_grid(const std::string& s) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            usage(used == item.size(), "");
        } catch (const std::exception&) {
            throw ConfigError("--grid must be xmin:xmax:dx, got \"" + s + "\"");
        }
    }
    usage(parts.size() == 3, "--grid must be xmin:xmax:dx, got \"" + s + "\"");
    try {
        return SpatialGrid(parts[0], parts[1], parts[2]);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("--grid: ") + e.what());
    }
}

inline BasepointRule parse_basepoint(const std::string& s) {
    if (s == "atx") return BasepointRule::AtX;
    if (s == "aty") return BasepointRule::AtY;
    if (s == "mid") return BasepointRule::Midpoint;
    throw ConfigError("--basepoint must be atx, aty or mid");
}

inline Payoff make_payoff(const RunConfig& c) {
    try {
        if (c.payoff == "call") return Payoff::call(c.strike);
        if (c.payoff == "put") return Payoff::put(c.strike);
        if (c.payoff == "butterfly") return Payoff::butterfly(c.k1, c.strike, c.k2);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("payoff: ") + e.what());
    }
    throw ConfigError("--payoff must be call, put or butterfly");
}

/// Spot points from --spot or --grid (exactly one).
inline std::vector<double> spots(const RunConfig& c) {
    usage(c.spot.has_value() != !c.grid.empty(), "give exactly one of --spot or --grid");
    if (c.spot) {
        usage(*c.spot > 0.0, "--spot must be > 0");
        return {*c.spot};
    }
    return parse_grid(c.grid).nodes();
}

inline SpatialGrid truncated_grid(const RunConfig& c, const Payoff& payoff, double default_dx) {
    const double dx = c.dx.value_or(default_dx);
    usage(dx > 0.0, "--dx must be > 0");
    const double xmax = c.xmax.value_or(dx * std::ceil(10.0 * largest_strike(payoff) / dx - 1e-9));
    try {
        return SpatialGrid::from_cutoff(xmax, dx);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("--xmax/--dx: ") + e.what());
    }
}

/// Exact Black-Scholes value of a call, put or butterfly.
inline double bs_payoff(const Payoff& payoff, double t, double x, double sigma, double r) {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Call>) {
                return bs_exact(t, p.strike, x, sigma, r);
            } else if constexpr (std::is_same_v<T, Put>) {
                return bs_put_exact(t, p.strike, x, sigma, r);
            } else if constexpr (std::is_same_v<T, Butterfly>) {
                const auto w = Payoff::butterfly_weights(p);
                return w[0] * bs_exact(t, p.k1, x, sigma, r) + w[1] * bs_exact(t, p.k, x, sigma, r) +
                       w[2] * bs_exact(t, p.k2, x, sigma, r);
            } else {
                throw DomainError("no exact price for sampled payoffs");
            }
        },
        payoff.variant());
}

inline double curve_at(const PriceCurve& curve, const SpatialGrid& grid, double x) {
    std::vector<double> v(curve.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = curve[i].value;
    const std::size_t i = grid.node_index(x);
    if (i < grid.size()) return v[i];
    return lvasym::detail::interpolate_cubic(grid, v, x);
}

/// CN oracle curve on its own grid, evaluated at arbitrary spots.
inline std::function<double(double)> cn_oracle(const Model& model, const RunConfig& c, const Payoff& payoff, double t) {
    const double xmax = c.cn_dx * std::ceil(10.0 * largest_strike(payoff) / c.cn_dx - 1e-9);
    const SpatialGrid g = SpatialGrid::from_cutoff(std::max(xmax, c.xmax.value_or(0.0)), c.cn_dx);
    const PriceCurve curve = cn_solve(model, CNConfig{g, std::min(c.cn_dt, t), t}, payoff);
    return [curve, g](double x) { return curve_at(curve, g, x); };
}

inline void require_order12(int order) { usage(order == 1 || order == 2, "order must be 1 or 2"); }

inline Table run_price(const RunConfig& c, const Model& model, std::ostream& err) {
    require_order12(c.order);
    const Payoff payoff = make_payoff(c);
    const std::vector<double> xs = spots(c);
    const std::string method = c.method.empty() ? "closed" : c.method;
    Table table{{"x", "price"}, {}};
    if (method == "closed") {
        usage(c.basepoint == "atx", "closed-form prices exist only for --basepoint atx; use --method quadrature");
        for (double x : xs) table.add({x, price_closed(c.order, model, c.t, payoff, x)});
    } else if (method == "quadrature") {
        const KernelSpec spec{model, c.order, parse_basepoint(c.basepoint)};
        const SpatialGrid g = truncated_grid(c, payoff, 0.01);
        for (double x : xs) {
            const QuadratureResult q = price_quadrature(spec, c.t, payoff, x, g);
            if (q.grid_too_coarse)
                err << "warning: grid too coarse at x = " << format_double(x)
                    << " (half-step defect " << format_double(q.richardson_defect) << ")\n";
            table.add({x, q.value});
        }
    } else {
        throw ConfigError("--method must be closed or quadrature");
    }
    return table;
}

inline Table run_kernel(const RunConfig& c, const Model& model) {
    usage(c.order >= 0 && c.order <= 2, "kernel order must be 0, 1 or 2");
    usage(!c.grid.empty(), "kernel needs --grid for the y values");
    const KernelSpec spec{model, c.order, parse_basepoint(c.basepoint)};
    Table table{{"x", "y", "t", "order", "value"}, {}};
    for (double y : parse_grid(c.grid).nodes())
        table.add({c.x, y, c.t, static_cast<double>(c.order), kernel_eval(spec, c.t, c.x, y)});
    return table;
}

inline Table run_greeks(const RunConfig& c, const Model& model) {
    require_order12(c.order);
    const Payoff payoff = make_payoff(c);
    const std::vector<double> xs = spots(c);
    const double h = c.step.value_or(c.grid.empty() ? 0.01 : parse_grid(c.grid).dx());
    usage(h > 0.0, "--step must be > 0");
    const std::string method = c.method.empty() ? "closed" : c.method;
    std::function<double(double, double)> fn;
    if (method == "closed") {
        usage(c.basepoint == "atx", "closed-form prices exist only for --basepoint atx; use --method quadrature");
        fn = [&](double t, double x) { return price_closed(c.order, model, t, payoff, x); };
    } else if (method == "quadrature") {
        const KernelSpec spec{model, c.order, parse_basepoint(c.basepoint)};
        const SpatialGrid g = truncated_grid(c, payoff, 0.01);
        fn = [spec, g, &payoff](double t, double x) {
            return integrate_row(KernelRow(spec, t, x), grid_function(g, payoff.sample(g), payoff));
        };
    } else {
        throw ConfigError("--method must be closed or quadrature");
    }
    Table table{{"x", "delta", "gamma"}, {}};
    for (double x : xs) {
        const Greeks gk = greeks(fn, c.t, x, h);
        table.add({x, gk.delta, gk.gamma});
    }
    return table;
}

inline Table run_bootstrap(const RunConfig& c, const Model& model, std::ostream& err) {
    usage(c.order >= 0 && c.order <= 2, "bootstrap order must be 0, 1 or 2");
    usage(c.steps >= 1, "--steps must be >= 1");
    const Payoff payoff = make_payoff(c);
    const SpatialGrid g = truncated_grid(c, payoff, 0.1);
    std::string oracle = c.oracle;
    if (oracle.empty()) oracle = model.kind() == ModelKind::BSM ? "bs-exact" : "cn";
    usage(oracle == "bs-exact" || oracle == "cn", "--compare-oracle must be bs-exact or cn");
    usage(oracle != "bs-exact" || model.kind() == ModelKind::BSM, "bs-exact oracle needs a bsm model");

    BootstrapConfig cfg{KernelSpec{model, c.order, parse_basepoint(c.basepoint)}, c.t, c.steps, g};
    cfg.closed_form_first_step = c.closed_first_step;
    BootstrapDiagnostics diag;
    const PriceCurve curve = bootstrap_solve(cfg, payoff, &diag);
    for (const auto& w : diag.warnings) err << "warning: " << w << "\n";

    std::function<double(double)> ref;
    if (oracle == "bs-exact")
        ref = [&](double x) { return bs_payoff(payoff, c.t, x, model.sigma(), model.r()); };
    else
        ref = cn_oracle(model, c, payoff, c.t);
    Table table{{"x", "value", "oracle", "abs_error"}, {}};
    for (const auto& p : curve) {
        const double o = ref(p.x);
        table.add({p.x, p.value, o, std::abs(p.value - o)});
    }
    return table;
}

inline Table run_compare(const RunConfig& c, const Model& model) {
    usage(!c.times.empty(), "compare needs --times");
    for (double t : c.times) usage(t > 0.0, "--times entries must be > 0");
    usage(!c.grid.empty(), "compare needs --grid for the spot values");
    const Payoff payoff = make_payoff(c);
    const std::vector<double> xs = parse_grid(c.grid).nodes();
    const std::string method = c.method.empty() ? "order1" : c.method;
    usage(method == "order1" || method == "order2" || method == "bootstrap", "--method must be order1, order2 or bootstrap");
    std::string oracle = c.oracle;
    if (oracle.empty()) oracle = model.kind() == ModelKind::BSM ? "bs-exact" : "cn";
    usage(oracle == "bs-exact" || oracle == "hagan-woodward" || oracle == "cn", "--oracle must be bs-exact, hagan-woodward or cn");
    usage(oracle != "bs-exact" || model.kind() == ModelKind::BSM, "bs-exact oracle needs a bsm model");
    usage(oracle != "hagan-woodward" || model.kind() == ModelKind::CEV || model.kind() == ModelKind::BSM,
          "hagan-woodward oracle needs a cev or bsm model");
    usage(oracle != "hagan-woodward" || c.payoff == "call", "hagan-woodward oracle prices calls only");

    Table table{{"t", "x", "approx", "oracle", "abs_error"}, {}};
    for (double t : c.times) {
        std::function<double(double)> approx;
        if (method == "bootstrap") {
            const SpatialGrid g = truncated_grid(c, payoff, 0.1);
            BootstrapConfig cfg{KernelSpec{model, c.order == 1 ? 1 : 2, BasepointRule::AtX}, t, c.steps, g};
            cfg.closed_form_first_step = c.closed_first_step;
            const PriceCurve curve = bootstrap_solve(cfg, payoff);
            approx = [curve, g](double x) { return curve_at(curve, g, x); };
        } else {
            const int order = method == "order1" ? 1 : 2;
            approx = [&, order, t](double x) { return price_closed(order, model, t, payoff, x); };
        }
        std::function<double(double)> ref;
        if (oracle == "bs-exact") {
            ref = [&, t](double x) { return bs_payoff(payoff, t, x, model.sigma(), model.r()); };
        } else if (oracle == "hagan-woodward") {
            ref = [&, t](double x) { return hagan_woodward_price(t, c.strike, x, model.sigma(), model.alpha(), model.r()); };
        } else {
            ref = cn_oracle(model, c, payoff, t);
        }
        for (double x : xs) {
            const double a = approx(x);
            const double o = ref(x);
            table.add({t, x, a, o, std::abs(a - o)});
        }
    }
    return table;
}

inline std::string render_json(const Table& table) {
    nlohmann::json j{{"columns", table.columns}, {"rows", table.rows}};
    return j.dump(2) + "\n";
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

/// Runs a fully resolved configuration; writes artifacts and returns the exit code.
inline int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Model model = model_from_json(c.model);
    detail::usage(c.command == "kernel" || c.command == "compare" || c.t > 0.0, "--t must be > 0");
    Table table;
    if (c.command == "price") table = detail::run_price(c, model, err);
    else if (c.command == "kernel") table = detail::run_kernel(c, model);
    else if (c.command == "greeks") table = detail::run_greeks(c, model);
    else if (c.command == "bootstrap") table = detail::run_bootstrap(c, model, err);
    else if (c.command == "compare") table = detail::run_compare(c, model);
    else throw ConfigError("unknown command \"" + c.command + "\"");

    if (c.out.empty()) {
        if (c.command == "price" && c.spot) out << format_double(table.rows.front()[1]) << "\n";
        else out << to_csv(table);
        return 0;
    }
    write_file_atomic(c.out, detail::ends_with(c.out, ".json") ? detail::render_json(table) : to_csv(table));
    return 0;
}

/// Parses argv into a RunConfig and executes it.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Short-time asymptotic option pricing for local-volatility models", "lvasym"};
    app.fallthrough();  // global flags may follow the subcommand
    app.require_subcommand(0, 1);

    RunConfig c;
    std::string config_file;
    std::string save_config;
    std::string model_file;
    std::string model_inline;
    std::int64_t seed = 0;
    double spot = 0.0, dx = 0.0, xmax = 0.0, step = 0.0;
    bool no_closed_first = false;

    app.add_option("--config", config_file, "Run a saved configuration (JSON)");
    app.add_option("--save-config", save_config, "Write the resolved configuration to a JSON file");
    auto* seed_opt = app.add_option("--seed", seed, "Accepted for reproducibility scripts; the engine is deterministic");

    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--model-file", model_file, "Model JSON file");
        sub->add_option("--model", model_inline, "Inline model JSON");
    };
    auto add_payoff = [&](CLI::App* sub) {
        sub->add_option("--payoff", c.payoff, "call, put or butterfly");
        sub->add_option("--strike", c.strike, "Strike K (butterfly peak)");
        sub->add_option("--k1", c.k1, "Butterfly lower strike");
        sub->add_option("--k2", c.k2, "Butterfly upper strike");
    };

    auto* price = app.add_subcommand("price", "Option prices");
    auto* kernel = app.add_subcommand("kernel", "Approximate Green's function along a row y");
    auto* greeks_cmd = app.add_subcommand("greeks", "Delta and gamma by central differences");
    auto* boot = app.add_subcommand("bootstrap", "Composed short-time kernel for long maturities");
    auto* compare = app.add_subcommand("compare", "Error tables against an oracle");

    std::vector<CLI::Option*> spot_opts, dx_opts, xmax_opts, step_opts;
    for (auto* sub : {price, kernel, greeks_cmd, boot, compare}) {
        add_model(sub);
        sub->add_option("--order", c.order, "Expansion order");
        sub->add_option("--basepoint", c.basepoint, "atx, aty or mid");
        sub->add_option("--out", c.out, "Output path (.csv or .json); stdout if omitted");
    }
    for (auto* sub : {price, greeks_cmd, boot}) sub->add_option("--t", c.t, "Time to expiry");
    for (auto* sub : {price, greeks_cmd, boot, compare}) add_payoff(sub);
    for (auto* sub : {price, greeks_cmd}) {
        spot_opts.push_back(sub->add_option("--spot", spot, "Single spot x"));
        sub->add_option("--method", c.method, "closed or quadrature");
    }
    for (auto* sub : {price, kernel, greeks_cmd, compare}) sub->add_option("--grid", c.grid, "xmin:xmax:dx");
    for (auto* sub : {price, greeks_cmd, boot, compare}) {
        dx_opts.push_back(sub->add_option("--dx", dx, "Quadrature grid step"));
        xmax_opts.push_back(sub->add_option("--xmax", xmax, "Truncation point"));
    }
    step_opts.push_back(greeks_cmd->add_option("--step", step, "Finite-difference step (default: grid dx)"));
    kernel->add_option("--t", c.t, "Time t")->required();
    kernel->add_option("--x", c.x, "Row point x")->required();
    for (auto* sub : {boot, compare}) {
        sub->add_option("--steps", c.steps, "Bootstrap steps");
        sub->add_flag("--no-closed-first-step", no_closed_first, "Use quadrature for the first hop too");
    }
    boot->add_option("--compare-oracle", c.oracle, "bs-exact or cn");
    compare->add_option("--oracle", c.oracle, "bs-exact, hagan-woodward or cn");
    compare->add_option("--method", c.method, "order1, order2 or bootstrap");
    compare->add_option("--times", c.times, "Comma-separated maturities")->delimiter(',');
    for (auto* sub : {boot, compare}) {
        sub->add_option("--cn-dx", c.cn_dx, "Crank-Nicolson oracle grid step");
        sub->add_option("--cn-dt", c.cn_dt, "Crank-Nicolson oracle time step");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return 2;
    }

    auto any_count = [](const std::vector<CLI::Option*>& opts) {
        for (auto* o : opts)
            if (o->count()) return true;
        return false;
    };

    try {
        if (!config_file.empty()) {
            if (!app.get_subcommands().empty()) throw ConfigError("give either --config or a subcommand, not both");
            try {
                c = run_config_from_json(nlohmann::json::parse(read_file(config_file)));
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("config: ") + e.what());
            }
        } else {
            if (app.get_subcommands().empty()) throw ConfigError("a subcommand is required (price, kernel, greeks, bootstrap, compare)");
            c.command = app.get_subcommands().front()->get_name();
            if (any_count(spot_opts)) c.spot = spot;
            if (any_count(dx_opts)) c.dx = dx;
            if (any_count(xmax_opts)) c.xmax = xmax;
            if (any_count(step_opts)) c.step = step;
            if (no_closed_first) c.closed_first_step = false;
            detail::usage(model_file.empty() || model_inline.empty(), "give either --model-file or --model, not both");
            detail::usage(!model_file.empty() || !model_inline.empty(), "a model is required (--model-file or --model)");
            try {
                c.model = nlohmann::json::parse(model_file.empty() ? model_inline : read_file(model_file));
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("model: ") + e.what());
            }
        }
        if (seed_opt->count()) c.seed = seed;
        if (!save_config.empty()) write_file_atomic(save_config, to_json(c).dump(2) + "\n");
        return execute(c, out, err);
    } catch (const std::invalid_argument& e) {  // ConfigError and file-read failures
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const lvasym::Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lvasym::cli
