#include "cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "coagfrag/analysis.hpp"
#include "coagfrag/error.hpp"
#include "coagfrag/evolution.hpp"
#include "coagfrag/newton.hpp"
#include "coagfrag/operators.hpp"
#include "coagfrag/recursive.hpp"
#include "csv_io.hpp"

namespace coagfrag::cli {

using nlohmann::json;

namespace {

constexpr double kTimeMatch = 1e-9;

// Named output tables plus metadata, written either as CSV files with a JSON sidecar
// or as one JSON document.
struct Output {
    std::vector<std::pair<std::string, io::CsvTable>> tables;  // suffix, table
    json meta = json::object();
};

json table_json(const io::CsvTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) rows.push_back(r);
    return json{{"columns", table.header}, {"rows", rows}};
}

std::string prefix_of(const RunConfig& cfg) { return cfg.out.empty() ? cfg.command : cfg.out; }

void emit(const RunConfig& cfg, const Output& output, std::ostream& out) {
    const std::string prefix = prefix_of(cfg);
    json doc = output.meta;
    doc["config"] = to_json(cfg);
    if (cfg.format == "csv") {
        for (const auto& [suffix, table] : output.tables) {
            const std::string path = prefix + suffix + ".csv";
            io::write_csv(path, table);
            out << path << '\n';
        }
    } else if (output.tables.size() == 1) {
        const json t = table_json(output.tables.front().second);
        doc["columns"] = t["columns"];
        doc["rows"] = t["rows"];
    } else {
        json tables = json::object();
        for (const auto& [suffix, table] : output.tables) {
            tables[suffix.empty() ? "main" : suffix.substr(1)] = table_json(table);
        }
        doc["tables"] = std::move(tables);
    }
    const std::string path = prefix + ".json";
    io::write_text(path, doc.dump(2) + "\n");
    out << path << '\n';
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

void require_positive(double v, const char* name) {
    require(v > 0.0 && std::isfinite(v), std::string(name) + " must be positive");
}

RecursionOptions recursion_options(const RunConfig& cfg) {
    RecursionOptions opts;
    if (cfg.precision == "double") {
        opts.precision = RecursionPrecision::Double;
    } else if (cfg.precision == "quad") {
        opts.precision = RecursionPrecision::Quad;
    } else {
        throw ValidationError("precision must be 'double' or 'quad'");
    }
    opts.monitor_cancellation = cfg.monitor;
    return opts;
}

Grid make_grid(const RunConfig& cfg) {
    require_positive(cfg.m1, "--m1");
    require_positive(cfg.h, "--h");
    require_positive(cfg.L, "--L");
    return Grid::from_length(cfg.h, cfg.L);
}

// Distribution on `grid` read from a CSV carrying either an `f` or an `f_density` column.
Distribution read_distribution(const std::string& path, const Grid& grid) {
    const io::CsvTable table = io::read_csv(path);
    std::size_t col = 0;
    bool found = false;
    for (const char* name : {"f", "f_density"}) {
        for (std::size_t k = 0; k < table.header.size(); ++k) {
            if (table.header[k] == name) {
                col = k;
                found = true;
                break;
            }
        }
        if (found) break;
    }
    require(found, path + ": needs an 'f' or 'f_density' column");
    require(table.rows.size() >= grid.N(),
            path + ": has " + std::to_string(table.rows.size()) + " rows, grid needs " +
                std::to_string(grid.N()));
    const auto xs = std::find(table.header.begin(), table.header.end(), "x");
    std::vector<double> values(grid.N());
    for (std::size_t i = 0; i < grid.N(); ++i) {
        if (xs != table.header.end()) {
            const double x = table.rows[i][static_cast<std::size_t>(xs - table.header.begin())];
            require(std::abs(x - grid.x(i + 1)) <= 1e-6 * grid.h(),
                    path + ": row " + std::to_string(i + 1) + " is not on the grid");
        }
        values[i] = table.rows[i][col];
    }
    return Distribution(grid, std::move(values));
}

io::CsvTable distribution_table(const Distribution& f) {
    io::CsvTable table{{"i", "x", "f"}, {}};
    const Grid& grid = f.grid();
    for (std::size_t i = 1; i <= grid.N(); ++i) {
        table.rows.push_back({static_cast<double>(i), grid.x(i), f[i - 1]});
    }
    return table;
}

int cmd_recursive(const RunConfig& cfg, std::ostream& out) {
    require_positive(cfg.m1, "--m1");
    require_positive(cfg.h, "--h");
    require(cfg.terms >= 1, "--terms must be at least 1");
    const RecursionOptions opts = recursion_options(cfg);
    const EquilibriumSequence seq =
        equilibrium_for_mass(cfg.m1, cfg.h, static_cast<std::size_t>(cfg.terms), opts);

    Output output;
    io::CsvTable table{{"i", "x", "f_h", "f_density"}, {}};
    for (std::size_t i = 1; i <= seq.size(); ++i) {
        const double fh = seq.values[i - 1];
        table.rows.push_back({static_cast<double>(i), static_cast<double>(i) * cfg.h, fh, fh / cfg.h});
    }
    output.tables.emplace_back("", std::move(table));
    output.meta = {{"m1", cfg.m1},
                   {"h", cfg.h},
                   {"m0", seq.m0},
                   {"M", seq.size()},
                   {"mass_check", moment(seq, 1)},
                   {"number_check", moment(seq, 0)},
                   {"tail_b", seq.tail_b()}};
    output.meta["cancellation_onset"] =
        seq.cancellation_onset ? json(*seq.cancellation_onset) : json(nullptr);
    emit(cfg, output, out);
    return kExitOk;
}

json newton_meta(const NewtonReport& report) {
    return {{"iterations", report.iterations},
            {"residual_norm", report.residual_norm},
            {"increment_norm", report.increment_norm},
            {"converged", report.converged},
            {"residual_history", report.residual_history},
            {"mass_history", report.mass_history}};
}

NewtonOptions newton_options(const RunConfig& cfg) {
    require(cfg.iters >= 0, "--iters must be non-negative");
    require_positive(cfg.tol, "--tol");
    return NewtonOptions{cfg.iters, cfg.tol};
}

int cmd_newton(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Grid grid = make_grid(cfg);
    const NewtonReport report = solve_equilibrium(cfg.m1, grid, newton_options(cfg));

    Output output;
    output.tables.emplace_back("", distribution_table(report.solution));
    output.meta = newton_meta(report);
    output.meta["m1"] = cfg.m1;
    output.meta["h"] = cfg.h;
    output.meta["N"] = grid.N();
    emit(cfg, output, out);
    if (!report.converged) {
        err << "newton: not converged after " << report.iterations
            << " iterations (residual " << report.residual_norm << ")\n";
        return kExitSolver;
    }
    return kExitOk;
}

Distribution initial_state(const RunConfig& cfg, const Grid& grid) {
    if (cfg.init == "uniform") return uniform_init(cfg.m1, grid);
    if (cfg.init == "exponential") return exponential_init(cfg.m1, grid);
    if (cfg.init == "file") {
        require(!cfg.init_file.empty(), "--init file needs --init-file");
        return read_distribution(cfg.init_file, grid);
    }
    throw ValidationError("--init must be uniform, exponential or file");
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
    const Grid grid = make_grid(cfg);
    const Distribution f0 = initial_state(cfg, grid);

    StepPolicy policy = cfg.dt_fixed > 0.0 ? StepPolicy::fixed(cfg.dt_fixed) : StepPolicy::adaptive();
    policy.dt0 = cfg.dt0;
    policy.dt_max = cfg.dt_max;
    policy.grow = cfg.grow;
    policy.shrink = cfg.shrink;
    require(cfg.dt_fixed >= 0.0, "--dt-fixed must be non-negative");

    const std::vector<double> user_times = parse_list(cfg.snapshots, "--snapshots");
    for (std::size_t k = 1; k < user_times.size(); ++k) {
        require(user_times[k] > user_times[k - 1], "--snapshots must be strictly increasing");
    }
    const std::vector<double> sizes = parse_list(cfg.eval_x, "--eval-x");
    const bool self_ref = cfg.self_equilibrium.has_value();
    require(!(self_ref && !cfg.equilibrium_file.empty()),
            "--equilibrium and --self-equilibrium are exclusive");

    std::vector<double> times = user_times;
    if (self_ref) {
        const double T = *cfg.self_equilibrium;
        require(T > 0.0 && T <= cfg.t_end * (1.0 + kTimeMatch),
                "--self-equilibrium must lie in (0, t_end]");
        const bool present = std::any_of(times.begin(), times.end(),
                                         [&](double t) { return std::abs(t - T) <= kTimeMatch; });
        if (!present) {
            times.push_back(T);
            std::sort(times.begin(), times.end());
        }
    }

    const Trajectory traj = evolve(f0, cfg.t_end, policy, times);

    Output output;
    for (const auto& snap : traj.snapshots) {
        output.tables.emplace_back("_t" + io::format_double(snap.t), distribution_table(snap.f));
    }
    output.meta = {{"accepted_steps", traj.accepted_steps},
                   {"rejected_steps", traj.rejected_steps},
                   {"final_dt", traj.final_dt},
                   {"mass_drift", traj.mass_drift()},
                   {"flagged_negative", traj.flagged_negative},
                   {"flagged_nonmonotone", traj.flagged_nonmonotone},
                   {"mode", policy.mode == StepMode::Fixed ? "fixed" : "adaptive"}};
    json snap_times = json::array();
    for (const auto& snap : traj.snapshots) snap_times.push_back(snap.t);
    output.meta["snapshot_times"] = snap_times;

    if (self_ref || !cfg.equilibrium_file.empty()) {
        require(!sizes.empty(), "a mu table needs --eval-x");
        const Distribution f_inf = self_ref ? traj.at(*cfg.self_equilibrium).f
                                            : read_distribution(cfg.equilibrium_file, grid);
        std::vector<double> mu_times;
        for (double t : user_times) {
            if (!(self_ref && std::abs(t - *cfg.self_equilibrium) <= kTimeMatch)) mu_times.push_back(t);
        }
        if (mu_times.empty() && cfg.t_end > 0.0) mu_times.push_back(cfg.t_end);
        const RateTable rt = rate_table(traj, f_inf, sizes, mu_times);
        io::CsvTable mu{{"x", "t", "mu"}, {}};
        for (std::size_t s = 0; s < sizes.size(); ++s) {
            for (std::size_t k = 0; k < mu_times.size(); ++k) {
                mu.rows.push_back({sizes[s], mu_times[k], rt.mu[s][k]});
            }
        }
        output.tables.emplace_back("_mu", std::move(mu));
        output.meta["reference"] = self_ref ? "self:" + io::format_double(*cfg.self_equilibrium)
                                            : cfg.equilibrium_file;
    }
    emit(cfg, output, out);
    return kExitOk;
}

std::vector<double> sample_points(const RunConfig& cfg) {
    require(cfg.points >= 0, "--points must be non-negative");
    std::vector<double> xs;
    if (cfg.points == 0 || cfg.x_min > cfg.x_max) return xs;
    require_positive(cfg.x_min, "--x-min");
    const auto n = static_cast<std::size_t>(cfg.points);
    const bool log_spacing = cfg.spacing == "log";
    require(log_spacing || cfg.spacing == "linear", "--spacing must be linear or log");
    for (std::size_t k = 0; k < n; ++k) {
        const double s = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
        xs.push_back(log_spacing ? cfg.x_min * std::pow(cfg.x_max / cfg.x_min, s)
                                 : cfg.x_min + s * (cfg.x_max - cfg.x_min));
    }
    return xs;
}

int cmd_asymptote(const RunConfig& cfg, std::ostream& out) {
    AsymptoteModel model;
    model.kind = parse_asymptote_kind(cfg.model);
    model.m1 = cfg.m1;
    model.h = cfg.h;
    model.n_p = cfg.n_p;
    model.validate();
    require(cfg.scale == "density" || cfg.scale == "sequence", "--scale must be density or sequence");

    io::CsvTable table{{"x", "log10_f"}, {}};
    for (double x : sample_points(cfg)) {
        double value = 0.0;
        if (model.kind == AsymptoteKind::DLarge && cfg.scale == "sequence") {
            value = log10_asymptote(model, x / model.h);
        } else {
            value = log10_density_asymptote(model, x);
        }
        table.rows.push_back({x, value});
    }
    Output output;
    output.tables.emplace_back("", std::move(table));
    output.meta = {{"model", to_string(model.kind)}, {"points", output.tables.front().second.rows.size()}};
    emit(cfg, output, out);
    return kExitOk;
}

int cmd_rates(const RunConfig& cfg, std::ostream& out) {
    require(!cfg.mu_files.empty(), "rates needs at least one mu CSV");
    require(cfg.t1.has_value() == cfg.t2.has_value(), "--t1 and --t2 go together");

    std::map<double, std::vector<std::pair<double, double>>> by_size;
    for (const auto& path : cfg.mu_files) {
        const io::CsvTable table = io::read_csv(path);
        const std::size_t cx = table.column("x");
        const std::size_t ct = table.column("t");
        const std::size_t cm = table.column("mu");
        for (const auto& row : table.rows) {
            by_size[row[cx]].emplace_back(row[ct], row[cm]);
        }
    }

    io::CsvTable table{{"x", "t1", "t2", "delta", "delta_log10"}, {}};
    long skipped = 0;
    auto add_row = [&](double x, double t1, double mu1, double t2, double mu2) {
        if (!(mu1 > 0.0 && mu2 > 0.0)) {
            ++skipped;
            return;
        }
        const double delta = convergence_rate(mu1, mu2, t1, t2);
        table.rows.push_back({x, t1, t2, delta, delta * std::numbers::log10e});
    };
    for (auto& [x, series] : by_size) {
        std::sort(series.begin(), series.end());
        if (cfg.t1) {
            require(*cfg.t2 > *cfg.t1, "--t2 must exceed --t1");
            auto find = [&](double t) -> const std::pair<double, double>* {
                for (const auto& p : series) {
                    if (std::abs(p.first - t) <= kTimeMatch * std::max(1.0, std::abs(t))) return &p;
                }
                return nullptr;
            };
            const auto* a = find(*cfg.t1);
            const auto* b = find(*cfg.t2);
            if (!a || !b) {
                std::ostringstream msg;
                msg << "no mu at t = " << (a ? *cfg.t2 : *cfg.t1) << " for x = " << x;
                throw ValidationError(msg.str());
            }
            add_row(x, a->first, a->second, b->first, b->second);
        } else {
            for (std::size_t k = 0; k + 1 < series.size(); ++k) {
                add_row(x, series[k].first, series[k].second, series[k + 1].first,
                        series[k + 1].second);
            }
        }
    }
    Output output;
    output.tables.emplace_back("", std::move(table));
    output.meta = {{"skipped_pairs", skipped}};
    emit(cfg, output, out);
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Grid grid = make_grid(cfg);
    const NewtonReport report = solve_equilibrium(cfg.m1, grid, newton_options(cfg));
    const EquilibriumSequence seq =
        equilibrium_for_mass(cfg.m1, cfg.h, grid.N(), recursion_options(cfg));

    io::CsvTable table{{"x", "f_newton", "f_recursive", "abs_diff"}, {}};
    double max_diff = 0.0;
    double arg_max = 0.0;
    for (std::size_t i = 1; i <= grid.N(); ++i) {
        const double fn = cfg.h * report.solution[i - 1];
        const double fr = seq.values[i - 1];
        const double d = std::abs(fn - fr);
        if (d > max_diff) {
            max_diff = d;
            arg_max = grid.x(i);
        }
        table.rows.push_back({grid.x(i), fn, fr, d});
    }
    Output output;
    output.tables.emplace_back("", std::move(table));
    output.meta = {{"max_abs_diff", max_diff}, {"argmax_x", arg_max}, {"m0", seq.m0},
                   {"newton", newton_meta(report)}};
    emit(cfg, output, out);
    if (!report.converged) {
        err << "compare: newton iteration not converged (residual " << report.residual_norm << ")\n";
        return kExitSolver;
    }
    return kExitOk;
}

template <typename T>
void take(const json& j, const char* key, T& field) {
    if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<T>();
}

template <typename T>
void take(const json& j, const char* key, std::optional<T>& field) {
    if (j.contains(key) && !j.at(key).is_null()) field = j.at(key).get<T>();
}

// Fills `cfg` from a JSON object with the same keys as to_json. Flags parsed later win.
void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open config " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    require(j.is_object(), path + ": config must be a JSON object");
    const json known = to_json(RunConfig{});
    for (const auto& [key, value] : j.items()) {
        require(known.contains(key), path + ": unknown config key '" + key + "'");
    }
    try {
        take(j, "m1", cfg.m1);
        take(j, "h", cfg.h);
        take(j, "L", cfg.L);
        take(j, "terms", cfg.terms);
        take(j, "precision", cfg.precision);
        take(j, "monitor", cfg.monitor);
        take(j, "iters", cfg.iters);
        take(j, "tol", cfg.tol);
        take(j, "init", cfg.init);
        take(j, "init_file", cfg.init_file);
        take(j, "dt_fixed", cfg.dt_fixed);
        take(j, "dt0", cfg.dt0);
        take(j, "dt_max", cfg.dt_max);
        take(j, "grow", cfg.grow);
        take(j, "shrink", cfg.shrink);
        take(j, "t_end", cfg.t_end);
        take(j, "snapshots", cfg.snapshots);
        take(j, "eval_x", cfg.eval_x);
        take(j, "equilibrium_file", cfg.equilibrium_file);
        take(j, "self_equilibrium", cfg.self_equilibrium);
        take(j, "model", cfg.model);
        take(j, "x_min", cfg.x_min);
        take(j, "x_max", cfg.x_max);
        take(j, "points", cfg.points);
        take(j, "spacing", cfg.spacing);
        take(j, "n_p", cfg.n_p);
        take(j, "scale", cfg.scale);
        take(j, "mu_files", cfg.mu_files);
        take(j, "t1", cfg.t1);
        take(j, "t2", cfg.t2);
        take(j, "out", cfg.out);
        take(j, "format", cfg.format);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

// Pulls `--config FILE` / `--config=FILE` out of the argument list.
std::optional<std::string> extract_config(std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t k = 0; k < args.size();) {
        if (args[k] == "--config") {
            if (k + 1 >= args.size()) throw ValidationError("--config needs a file");
            path = args[k + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(k),
                       args.begin() + static_cast<std::ptrdiff_t>(k + 2));
        } else if (args[k].rfind("--config=", 0) == 0) {
            path = args[k].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
            ++k;
        }
    }
    return path;
}

int thread_cap(std::ostream& err) {
    const char* env = std::getenv("COAGFRAG_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) {
        err << "ignoring COAGFRAG_THREADS='" << env << "'\n";
        return 0;
    }
    Eigen::setNbThreads(static_cast<int>(n));
    return static_cast<int>(n);
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out, "Output path prefix (default: subcommand name)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void add_mass_grid(CLI::App* sub, RunConfig& cfg, bool with_length) {
    sub->add_option("--m1", cfg.m1, "Total mass")->capture_default_str();
    sub->add_option("--h", cfg.h, "Grid spacing")->capture_default_str();
    if (with_length) sub->add_option("--L", cfg.L, "Truncation length")->capture_default_str();
}

}  // namespace

json to_json(const RunConfig& c) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return {{"command", c.command},
            {"m1", c.m1},
            {"h", c.h},
            {"L", c.L},
            {"terms", c.terms},
            {"precision", c.precision},
            {"monitor", c.monitor},
            {"iters", c.iters},
            {"tol", c.tol},
            {"init", c.init},
            {"init_file", c.init_file},
            {"dt_fixed", c.dt_fixed},
            {"dt0", c.dt0},
            {"dt_max", c.dt_max},
            {"grow", c.grow},
            {"shrink", c.shrink},
            {"t_end", c.t_end},
            {"snapshots", c.snapshots},
            {"eval_x", c.eval_x},
            {"equilibrium_file", c.equilibrium_file},
            {"self_equilibrium", opt(c.self_equilibrium)},
            {"model", c.model},
            {"x_min", c.x_min},
            {"x_max", c.x_max},
            {"points", c.points},
            {"spacing", c.spacing},
            {"n_p", c.n_p},
            {"scale", c.scale},
            {"mu_files", c.mu_files},
            {"t1", opt(c.t1)},
            {"t2", opt(c.t2)},
            {"out", c.out},
            {"format", c.format},
            {"threads", c.threads}};
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) {
            if (text.find_first_not_of(" \t,") == std::string::npos) continue;
            throw ValidationError(what + ": empty entry in '" + text + "'");
        }
        const auto e = item.find_last_not_of(" \t");
        const std::string token = item.substr(b, e - b + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || !std::isfinite(v)) {
            throw ValidationError(what + ": not a number: '" + token + "'");
        }
        values.push_back(v);
    }
    return values;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Equilibria and relaxation of the coagulation-fragmentation group-size model"};
    app.name("coagfrag");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    // "-h" would collide with the grid spacing option.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    auto* rec = app.add_subcommand("recursive", "Exact discrete equilibrium by forward recursion");
    add_mass_grid(rec, cfg, false);
    rec->add_option("--terms", cfg.terms, "Number of terms M")->capture_default_str();
    rec->add_option("--precision", cfg.precision, "double or quad")
        ->check(CLI::IsMember({"double", "quad"}))
        ->capture_default_str();
    rec->add_flag("--monitor", cfg.monitor, "Record where subtraction cancellation sets in");
    add_common(rec, cfg);

    auto* newton = app.add_subcommand("newton", "Equilibrium of the truncated model by Newton iteration");
    add_mass_grid(newton, cfg, true);
    newton->add_option("--iters", cfg.iters, "Maximum Newton steps")->capture_default_str();
    newton->add_option("--tol", cfg.tol, "Residual tolerance")->capture_default_str();
    add_common(newton, cfg);

    auto* evo = app.add_subcommand("evolve", "Explicit Euler time evolution of the truncated model");
    add_mass_grid(evo, cfg, true);
    evo->add_option("--init", cfg.init, "uniform, exponential or file")
        ->check(CLI::IsMember({"uniform", "exponential", "file"}))
        ->capture_default_str();
    evo->add_option("--init-file", cfg.init_file, "CSV with an f or f_density column");
    evo->add_option("--dt-fixed", cfg.dt_fixed, "Fixed step; 0 selects adaptive stepping")
        ->capture_default_str();
    evo->add_option("--dt0", cfg.dt0, "Initial adaptive step")->capture_default_str();
    evo->add_option("--dt-max", cfg.dt_max, "Largest adaptive step")->capture_default_str();
    evo->add_option("--grow", cfg.grow, "Step growth after acceptance")->capture_default_str();
    evo->add_option("--shrink", cfg.shrink, "Step reduction after rejection")->capture_default_str();
    evo->add_option("--t-end", cfg.t_end, "Final time")->capture_default_str();
    evo->add_option("--snapshots", cfg.snapshots, "Comma-separated snapshot times");
    evo->add_option("--eval-x", cfg.eval_x, "Comma-separated sizes for the mu table");
    evo->add_option("--equilibrium", cfg.equilibrium_file, "Reference equilibrium CSV");
    evo->add_option_function<double>(
        "--self-equilibrium", [&cfg](const double& t) { cfg.self_equilibrium = t; },
        "Use the state at time T as the reference equilibrium");
    add_common(evo, cfg);

    auto* asym = app.add_subcommand("asymptote", "Tabulate an asymptotic profile in log10");
    asym->add_option("--model", cfg.model, "c-small, c-large, d-large or niwa")
        ->check(CLI::IsMember({"c-small", "c-large", "d-large", "niwa"}))
        ->capture_default_str();
    add_mass_grid(asym, cfg, false);
    asym->add_option("--x-min", cfg.x_min, "First size")->capture_default_str();
    asym->add_option("--x-max", cfg.x_max, "Last size")->capture_default_str();
    asym->add_option("--points", cfg.points, "Number of sizes")->capture_default_str();
    asym->add_option("--spacing", cfg.spacing, "linear or log")
        ->check(CLI::IsMember({"linear", "log"}))
        ->capture_default_str();
    asym->add_option("--np", cfg.n_p, "Niwa scale N_P")->capture_default_str();
    asym->add_option("--scale", cfg.scale, "d-large only: density or sequence")
        ->check(CLI::IsMember({"density", "sequence"}))
        ->capture_default_str();
    add_common(asym, cfg);

    auto* rates = app.add_subcommand("rates", "Convergence rates from mu tables");
    std::vector<std::string> mu_args;
    rates->add_option("files", mu_args, "mu CSV files (x,t,mu)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    rates->add_option_function<double>("--t1", [&cfg](const double& t) { cfg.t1 = t; }, "First time");
    rates->add_option_function<double>("--t2", [&cfg](const double& t) { cfg.t2 = t; }, "Second time");
    add_common(rates, cfg);

    auto* cmp = app.add_subcommand("compare", "Newton equilibrium against the recursive sequence");
    add_mass_grid(cmp, cfg, true);
    cmp->add_option("--iters", cfg.iters, "Maximum Newton steps")->capture_default_str();
    cmp->add_option("--tol", cfg.tol, "Residual tolerance")->capture_default_str();
    cmp->add_option("--precision", cfg.precision, "double or quad")
        ->check(CLI::IsMember({"double", "quad"}))
        ->capture_default_str();
    add_common(cmp, cfg);

    try {
        std::vector<std::string> args = raw_args;
        if (const auto path = extract_config(args)) apply_config_file(*path, cfg);
        std::reverse(args.begin(), args.end());
        app.parse(args);
        if (!mu_args.empty()) cfg.mu_files = mu_args;
        cfg.threads = thread_cap(err);
        cfg.command = app.get_subcommands().front()->get_name();

        if (cfg.command == "recursive") return cmd_recursive(cfg, out);
        if (cfg.command == "newton") return cmd_newton(cfg, out, err);
        if (cfg.command == "evolve") return cmd_evolve(cfg, out);
        if (cfg.command == "asymptote") return cmd_asymptote(cfg, out);
        if (cfg.command == "rates") return cmd_rates(cfg, out);
        if (cfg.command == "compare") return cmd_compare(cfg, out, err);
        err << "unknown subcommand\n";
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}

}  // namespace coagfrag::cli
