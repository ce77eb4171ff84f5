#include "cli.hpp"

#include "report.hpp"
#include "tables.hpp"

#include <resetfpt/errors.hpp>
#include <resetfpt/mc_oracle.hpp>
#include <resetfpt/optimize.hpp>
#include <resetfpt/reset_moments.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace resetfpt::cli {

namespace {

/// Malformed flag values that CLI11 cannot catch on its own (grid strings,
/// unknown command names). Reported with the usage exit code.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command_pos;
    std::string command_opt;
    std::optional<std::string> model;
    std::optional<std::string> kind;
    std::optional<double> eta, mu, sigma, x, x_r, b, r, lam;
    std::optional<std::string> r_grid, x_grid;
    std::string format = "csv";
    std::optional<std::string> out_path;
    std::optional<double> dt, t_max;
    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
    bool no_bridge = false;
    bool natural = false;
    bool exact = false;
    std::optional<std::string> name;
};

const std::vector<std::string> kCommands = {"lt",      "mean",    "second-moment", "optimize",
                                            "scan",    "profile", "simulate",      "table"};

std::string require_present(const std::optional<std::string>& v, const char* key,
                            const std::string& command) {
    if (!v) throw ConfigError(command + ": missing required key '" + key + "'");
    return *v;
}

double require_present(const std::optional<double>& v, const char* key, const std::string& command) {
    if (!v) throw ConfigError(command + ": missing required key '" + key + "'");
    return *v;
}

std::vector<double> parse_grid(const std::string& text, const char* key) {
    const auto bad = [&] {
        return UsageError(std::string("--") + key + ": expected min:max:count[@log|@lin], got '" +
                          text + "'");
    };
    std::string body = text;
    bool logarithmic = false;
    if (const auto at = text.find('@'); at != std::string::npos) {
        const std::string spacing = text.substr(at + 1);
        if (spacing == "log") {
            logarithmic = true;
        } else if (spacing != "lin") {
            throw bad();
        }
        body = text.substr(0, at);
    }
    const auto c1 = body.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : body.find(':', c1 + 1);
    if (c2 == std::string::npos) throw bad();

    const auto parse_double = [&](std::string_view s) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw bad();
        return v;
    };
    const std::string_view sv(body);
    const double lo = parse_double(sv.substr(0, c1));
    const double hi = parse_double(sv.substr(c1 + 1, c2 - c1 - 1));
    const auto count_sv = sv.substr(c2 + 1);
    int n = 0;
    const auto res = std::from_chars(count_sv.data(), count_sv.data() + count_sv.size(), n);
    if (res.ec != std::errc() || res.ptr != count_sv.data() + count_sv.size()) throw bad();

    if (n < 1) throw ValidationError(std::string(key) + ": count must be at least 1");
    if (!(lo <= hi)) throw ValidationError(std::string(key) + ": min must not exceed max");
    if (logarithmic && !(lo > 0.0)) {
        throw ValidationError(std::string(key) + ": logarithmic grid needs min > 0");
    }
    if (n == 1) return {lo};
    return logarithmic ? log_grid(lo, hi, n) : lin_grid(lo, hi, n);
}

ModelSpec build_model(const RunConfig& cfg, const std::string& command) {
    const std::string name = require_present(cfg.model, "model", command);
    const bool ou_like = name == "ou" || name == "cir";
    if (cfg.eta && name != "bm") throw ConfigError("eta applies only to model bm");
    if ((cfg.mu || cfg.sigma) && !ou_like) throw ConfigError("mu and sigma apply only to models ou and cir");
    if (name == "bm") return DriftedBM{cfg.eta.value_or(0.0)};
    if (name == "ou") return OrnsteinUhlenbeck{cfg.mu.value_or(1.0), cfg.sigma.value_or(1.0)};
    if (name == "cir") return Cir{cfg.mu.value_or(1.0), cfg.sigma.value_or(1.0)};
    if (name == "feller") return Conjugated{MonotoneMap::feller()};
    if (name == "wf") return Conjugated{MonotoneMap::wright_fisher()};
    throw UsageError("unknown model '" + name + "' (expected bm, ou, cir, feller or wf)");
}

/// Problem family without x/x_r checks; the caller fills those in.
ProblemSpec build_family(const RunConfig& cfg, const std::string& command) {
    ProblemSpec spec;
    spec.model = build_model(cfg, command);
    const std::string kind = require_present(cfg.kind, "kind", command);
    if (kind == "fpt") {
        spec.kind = ProblemKind::Fpt;
        if (cfg.b) throw ConfigError("b applies only to kind fet");
    } else if (kind == "fet") {
        spec.kind = ProblemKind::Fet;
        spec.b = require_present(cfg.b, "b", command);
    } else {
        throw UsageError("unknown kind '" + kind + "' (expected fpt or fet)");
    }
    return spec;
}

ProblemSpec build_spec(const RunConfig& cfg, const std::string& command) {
    ProblemSpec spec = build_family(cfg, command);
    spec.x = require_present(cfg.x, "x", command);
    spec.x_r = require_present(cfg.x_r, "x_r", command);
    return validate(spec);
}

double require_rate(const RunConfig& cfg, const std::string& command) {
    const double r = require_present(cfg.r, "r", command);
    if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("r must be finite and >= 0");
    return r;
}

void add_model_meta(Report& rep, const ProblemSpec& spec) {
    rep.add_meta("model", model_name(spec.model));
    rep.add_meta("kind", kind_name(spec.kind));
    if (const auto* bm = std::get_if<DriftedBM>(&spec.model)) {
        rep.add_meta("eta", format_number(bm->eta));
    } else if (const auto* ou = std::get_if<OrnsteinUhlenbeck>(&spec.model)) {
        rep.add_meta("mu", format_number(ou->mu));
        rep.add_meta("sigma", format_number(ou->sigma));
    } else if (const auto* cir = std::get_if<Cir>(&spec.model)) {
        rep.add_meta("mu", format_number(cir->mu));
        rep.add_meta("sigma", format_number(cir->sigma));
    }
    if (is_fet(spec)) rep.add_meta("b", format_number(spec.b));
}

const std::vector<std::string> kOptColumns = {"x",          "x_r",        "r_m",
                                              "m",          "T0",         "boundary_optimum",
                                              "bracket_lo", "bracket_hi", "evaluations",
                                              "converged"};

std::vector<Cell> opt_row(const OptResult& o, double x_r) {
    return {o.x,          x_r,          o.r_m,
            o.m,          o.baseline,   o.boundary_optimum,
            o.bracket_lo, o.bracket_hi, static_cast<long long>(o.evaluations),
            o.converged};
}

Report cmd_lt(const RunConfig& cfg) {
    const ProblemSpec spec = build_spec(cfg, "lt");
    const double r = require_rate(cfg, "lt");
    const double lam = require_present(cfg.lam, "lam", "lt");
    if (!(lam > 0.0) || !std::isfinite(lam)) throw ValidationError("lam must be finite and > 0");

    const ResetQuery q{spec, r, lam};
    Report rep;
    rep.add_meta("command", "lt");
    add_model_meta(rep, spec);
    rep.columns = {"x", "x_r", "r", "lam", "value", "survival_lt"};
    rep.rows.push_back({spec.x, spec.x_r, r, lam, lt_with_reset(q), survival_lt_with_reset(q)});
    return rep;
}

Report cmd_mean(const RunConfig& cfg) {
    const ProblemSpec spec = build_spec(cfg, "mean");
    const double r = require_rate(cfg, "mean");
    Report rep;
    rep.add_meta("command", "mean");
    add_model_meta(rep, spec);
    rep.columns = {"x", "x_r", "r", "value"};
    rep.rows.push_back({spec.x, spec.x_r, r, mean_with_reset({spec, r, std::nullopt})});
    return rep;
}

Report cmd_second_moment(const RunConfig& cfg) {
    const ProblemSpec spec = build_spec(cfg, "second-moment");
    const double r = require_rate(cfg, "second-moment");
    if (r < 1e-8) throw ValidationError("second-moment: r must be at least 1e-8");
    const MomentResult mom = moments_with_reset({spec, r, std::nullopt});
    Report rep;
    rep.add_meta("command", "second-moment");
    add_model_meta(rep, spec);
    rep.columns = {"x", "x_r", "r", "value", "mean", "variance"};
    rep.rows.push_back({spec.x, spec.x_r, r, mom.second.value_or(NAN), mom.mean,
                        mom.variance.value_or(NAN)});
    return rep;
}

Report cmd_optimize(const RunConfig& cfg) {
    const ProblemSpec spec = build_spec(cfg, "optimize");
    Report rep;
    rep.add_meta("command", "optimize");
    add_model_meta(rep, spec);
    rep.columns = kOptColumns;
    rep.rows.push_back(opt_row(minimize_over_r(spec), spec.x_r));
    return rep;
}

Report cmd_scan(const RunConfig& cfg) {
    const ProblemSpec spec = build_spec(cfg, "scan");
    const auto grid = parse_grid(require_present(cfg.r_grid, "r-grid", "scan"), "r-grid");
    if (grid.front() < 0.0) throw ValidationError("r-grid: rates must be >= 0");

    const ScanResult scan = scan_over_r(spec, grid);
    Report rep;
    rep.add_meta("command", "scan");
    add_model_meta(rep, spec);
    rep.add_meta("x", format_number(spec.x));
    rep.add_meta("x_r", format_number(spec.x_r));
    rep.columns = {"r", "mean", "error"};
    for (const auto& p : scan.grid) {
        rep.rows.push_back({p.r, p.error.empty() ? Cell(p.mean) : Cell(), p.error});
    }
    return rep;
}

Report cmd_profile(const RunConfig& cfg) {
    ProblemSpec family = build_family(cfg, "profile");
    family.x_r = require_present(cfg.x_r, "x_r", "profile");
    const auto grid = parse_grid(require_present(cfg.x_grid, "x-grid", "profile"), "x-grid");
    for (double x : grid) {
        ProblemSpec s = family;
        s.x = x;
        validate(s);
    }
    family.x = grid.front();

    const Profile prof = profile_over_x(family, grid);
    Report rep;
    rep.add_meta("command", "profile");
    add_model_meta(rep, family);
    rep.add_meta("x_r", format_number(family.x_r));
    rep.add_meta("alpha", format_number(prof.alpha));
    rep.add_meta("beta", format_number(prof.beta));
    rep.columns = kOptColumns;
    for (const auto& o : prof.results) rep.rows.push_back(opt_row(o, family.x_r));
    return rep;
}

Report cmd_simulate(const RunConfig& cfg) {
    const ProblemSpec spec = build_spec(cfg, "simulate");
    const double r = require_rate(cfg, "simulate");
    SimConfig sim;
    if (cfg.dt) sim.dt = *cfg.dt;
    if (cfg.paths) sim.n_paths = *cfg.paths;
    if (cfg.seed) sim.seed = *cfg.seed;
    if (cfg.t_max) sim.t_max = *cfg.t_max;
    sim.bridge_correction = !cfg.no_bridge;
    sim.natural_coordinates = cfg.natural;
    sim.lam = cfg.lam;
    if (!(sim.dt > 0.0) || !std::isfinite(sim.dt)) throw ValidationError("dt must be finite and > 0");
    if (sim.n_paths < 2) throw ValidationError("paths must be at least 2");
    if (sim.t_max < 0.0) throw ValidationError("t-max must be >= 0");
    if (sim.lam && !(*sim.lam > 0.0)) throw ValidationError("lam must be > 0");
    if (cfg.exact && !std::holds_alternative<OrnsteinUhlenbeck>(spec.model) &&
        !std::holds_alternative<Cir>(spec.model)) {
        throw ConfigError("--exact applies only to models ou and cir");
    }

    const McEstimate est = cfg.exact ? simulate_ou_exact(spec, r, sim) : simulate_tau(spec, r, sim);
    const double analytic = mean_with_reset({spec, r, std::nullopt});
    const double z = est.std_err > 0.0 ? (est.mean - analytic) / est.std_err : NAN;

    Report rep;
    rep.add_meta("command", "simulate");
    add_model_meta(rep, spec);
    rep.add_meta("integrator", est.integrator);
    rep.add_meta("seed", std::to_string(sim.seed));
    rep.columns = {"x",           "x_r",      "r",        "mean",        "std_err",
                   "second_moment", "second_std_err", "censored_fraction", "n_paths",
                   "reliable",    "dt",       "t_max",    "bridge_correction",
                   "analytic_mean", "z_score", "lam",     "lt",          "lt_std_err"};
    rep.rows.push_back({spec.x,
                        spec.x_r,
                        r,
                        est.mean,
                        est.std_err,
                        est.second_moment,
                        est.second_std_err,
                        est.censored_fraction,
                        static_cast<long long>(est.n_paths),
                        est.reliable,
                        est.dt,
                        est.t_max,
                        est.bridge_correction,
                        analytic,
                        z,
                        sim.lam ? Cell(*sim.lam) : Cell(),
                        est.lt ? Cell(*est.lt) : Cell(),
                        est.lt_std_err ? Cell(*est.lt_std_err) : Cell()});
    return rep;
}

Report cmd_table(const RunConfig& cfg) {
    const std::string name = require_present(cfg.name, "name", "table");
    const TableDef* table = find_table(name);
    if (!table) {
        std::string known;
        for (const auto& t : table_catalog()) known += (known.empty() ? "" : ", ") + t.name;
        throw ValidationError("unknown table '" + name + "' (known: " + known + ")");
    }
    return build_table(*table);
}

Report dispatch(const std::string& command, const RunConfig& cfg) {
    if (command == "lt") return cmd_lt(cfg);
    if (command == "mean") return cmd_mean(cfg);
    if (command == "second-moment") return cmd_second_moment(cfg);
    if (command == "optimize") return cmd_optimize(cfg);
    if (command == "scan") return cmd_scan(cfg);
    if (command == "profile") return cmd_profile(cfg);
    if (command == "simulate") return cmd_simulate(cfg);
    return cmd_table(cfg);
}

void emit(const Report& rep, const RunConfig& cfg, std::ostream& out) {
    std::ostringstream buf;
    if (cfg.format == "json") {
        write_json(rep, buf);
    } else {
        write_csv(rep, buf);
    }
    if (!cfg.out_path) {
        out << buf.str();
        return;
    }
    std::ofstream file(*cfg.out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + *cfg.out_path + "'");
    file << buf.str();
    if (!file) throw ConfigError("failed writing output file '" + *cfg.out_path + "'");
}

void define_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("cmd", cfg.command_pos, "lt | mean | second-moment | optimize | scan | profile | simulate | table");
    app.add_option("--command", cfg.command_opt, "Alternative to the positional command");
    app.set_config("--config", "", "key = value file; flags given on the command line take precedence");

    app.add_option("--model", cfg.model, "bm | ou | cir | feller | wf");
    app.add_option("--kind", cfg.kind, "fpt (passage through 0) | fet (exit from (0, b))");
    app.add_option("--eta", cfg.eta, "Drift of the Brownian model (default 0)");
    app.add_option("--mu", cfg.mu, "Mean-reversion rate for ou/cir (default 1)");
    app.add_option("--sigma", cfg.sigma, "Noise amplitude for ou/cir (default 1)");
    app.add_option("--x", cfg.x, "Starting point");
    app.add_option("--x-r,--x_r", cfg.x_r, "Reset position");
    app.add_option("--b", cfg.b, "Upper boundary for fet");
    app.add_option("--r", cfg.r, "Resetting rate");
    app.add_option("--lam", cfg.lam, "Laplace variable");
    app.add_option("--r-grid,--r_grid", cfg.r_grid, "min:max:count[@log|@lin]");
    app.add_option("--x-grid,--x_grid", cfg.x_grid, "min:max:count[@log|@lin]");
    app.add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out,--path", cfg.out_path, "Write the artifact here instead of stdout");
    app.add_option("--dt", cfg.dt, "Simulation time step");
    app.add_option("--paths", cfg.paths, "Number of simulated paths");
    app.add_option("--seed", cfg.seed, "Base RNG seed");
    app.add_option("--t-max,--t_max", cfg.t_max, "Per-path time cap (0 = automatic)");
    app.add_flag("--no-bridge,--no_bridge", cfg.no_bridge, "Disable the bridge crossing test");
    app.add_flag("--natural", cfg.natural, "Conjugated models: step the SDE in its own coordinates");
    app.add_flag("--exact", cfg.exact, "ou/cir: exact Gaussian transitions");
    app.add_option("--name", cfg.name, "Table name (tab1 .. tab13)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mean first-passage and exit times under Poissonian resetting", "reset_fpt"};
    RunConfig cfg;
    define_options(app, cfg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "reset_fpt: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (!cfg.command_pos.empty() && !cfg.command_opt.empty() && cfg.command_pos != cfg.command_opt) {
            throw UsageError("conflicting commands '" + cfg.command_pos + "' and '" + cfg.command_opt + "'");
        }
        const std::string command = cfg.command_pos.empty() ? cfg.command_opt : cfg.command_pos;
        if (command.empty()) throw UsageError("no command given; see --help");
        if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
            throw UsageError("unknown command '" + command + "'");
        }
        emit(dispatch(command, cfg), cfg, out);
        return kOk;
    } catch (const UsageError& e) {
        err << "reset_fpt: " << e.what() << '\n';
        return kUsage;
    } catch (const ValidationError& e) {
        err << "reset_fpt: validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const ConfigError& e) {
        err << "reset_fpt: configuration error: " << e.what() << '\n';
        return kValidation;
    } catch (const DomainError& e) {
        err << "reset_fpt: domain error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "reset_fpt: computation error: " << e.what() << '\n';
        return kComputation;
    }
}

}  // namespace resetfpt::cli
