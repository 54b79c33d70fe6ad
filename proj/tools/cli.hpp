#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace coagfrag::cli {

/// Exit codes: scripts depend on these.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSolver = 1;
inline constexpr int kExitUsage = 2;

/// Every parameter a subcommand can take. Written into each JSON sidecar.
struct RunConfig {
    std::string command;

    double m1 = 1.0;
    double h = 0.01;
    double L = 100.0;
    long terms = 0;
    std::string precision = "double";
    bool monitor = false;

    int iters = 5;
    double tol = 1e-10;

    std::string init = "uniform";
    std::string init_file;
    double dt_fixed = 0.0;  ///< > 0 selects the fixed-step mode
    double dt0 = 1e-2;
    double dt_max = 1.1;
    double grow = 1.10;
    double shrink = 0.90;
    double t_end = 30.0;
    std::string snapshots;  ///< comma-separated times
    std::string eval_x;     ///< comma-separated sizes
    std::string equilibrium_file;
    std::optional<double> self_equilibrium;

    std::string model = "c-large";
    double x_min = 1.0;
    double x_max = 100.0;
    long points = 100;
    std::string spacing = "linear";
    double n_p = 1.0;
    std::string scale = "density";

    std::vector<std::string> mu_files;
    std::optional<double> t1;
    std::optional<double> t2;

    std::string out;
    std::string format = "csv";
    int threads = 0;
};

nlohmann::json to_json(const RunConfig& config);

/// Parses "a,b,c" into numbers; throws ValidationError on junk.
std::vector<double> parse_list(const std::string& text, const std::string& what);

/// Full command line (without the program name). Never throws; returns an exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coagfrag::cli
