#include "coagfrag/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "coagfrag/error.hpp"

namespace coagfrag {

namespace {

constexpr double kDecay = 4.0 / 27.0;

double c_small_constant() { return 1.0 / (3.0 * std::tgamma(4.0 / 3.0)); }

// Gamma(3/2) = sqrt(pi)/2
double c_large_constant() { return 9.0 / (16.0 * (std::sqrt(std::numbers::pi) / 2.0)); }

double d_large_z(const AsymptoteModel& m) { return 1.0 + 4.0 * m.h / (27.0 * m.m1); }

double d_large_constant(const AsymptoteModel& m) {
    return 9.0 / 8.0 * std::sqrt(m.m1 * d_large_z(m) / (m.h * std::numbers::pi));
}

void require_positive_argument(double arg) {
    if (!(arg > 0.0) || !std::isfinite(arg)) {
        throw ValidationError("asymptote argument must be positive");
    }
}

}  // namespace

void AsymptoteModel::validate() const {
    if (kind == AsymptoteKind::DLarge && !(h > 0.0 && m1 > 0.0)) {
        throw ValidationError("discrete asymptote needs h > 0 and m1 > 0");
    }
    if (kind == AsymptoteKind::Niwa && !(n_p > 0.0)) {
        throw ValidationError("Niwa profile needs N_P > 0");
    }
}

AsymptoteKind parse_asymptote_kind(const std::string& name) {
    if (name == "c-small") return AsymptoteKind::CSmall;
    if (name == "c-large") return AsymptoteKind::CLarge;
    if (name == "d-large") return AsymptoteKind::DLarge;
    if (name == "niwa") return AsymptoteKind::Niwa;
    throw ValidationError("unknown asymptote model '" + name + "'");
}

std::string to_string(AsymptoteKind kind) {
    switch (kind) {
        case AsymptoteKind::CSmall: return "c-small";
        case AsymptoteKind::CLarge: return "c-large";
        case AsymptoteKind::DLarge: return "d-large";
        case AsymptoteKind::Niwa: return "niwa";
    }
    return "unknown";
}

double asymptote_eval(const AsymptoteModel& model, double arg) {
    model.validate();
    require_positive_argument(arg);
    switch (model.kind) {
        case AsymptoteKind::CSmall:
            return c_small_constant() * std::pow(arg, -2.0 / 3.0) * std::exp(-kDecay * arg);
        case AsymptoteKind::CLarge:
            return c_large_constant() * std::pow(arg, -1.5) * std::exp(-kDecay * arg);
        case AsymptoteKind::DLarge:
            return d_large_constant(model) * std::pow(d_large_z(model), -arg) * std::pow(arg, -1.5);
        case AsymptoteKind::Niwa: {
            const double s = arg / model.n_p;
            return std::exp(-s * (1.0 - std::exp(-s) / 2.0)) / arg;
        }
    }
    return 0.0;
}

double log10_asymptote(const AsymptoteModel& model, double arg) {
    model.validate();
    require_positive_argument(arg);
    const double log10e = std::numbers::log10e;
    switch (model.kind) {
        case AsymptoteKind::CSmall:
            return std::log10(c_small_constant()) - kDecay * arg * log10e -
                   (2.0 / 3.0) * std::log10(arg);
        case AsymptoteKind::CLarge:
            return std::log10(c_large_constant()) - kDecay * arg * log10e - 1.5 * std::log10(arg);
        case AsymptoteKind::DLarge: {
            const double log10z = std::log1p(4.0 * model.h / (27.0 * model.m1)) * log10e;
            return std::log10(d_large_constant(model)) - arg * log10z - 1.5 * std::log10(arg);
        }
        case AsymptoteKind::Niwa: {
            const double s = arg / model.n_p;
            return -std::log10(arg) - s * (1.0 - std::exp(-s) / 2.0) * log10e;
        }
    }
    return 0.0;
}

double log10_density_asymptote(const AsymptoteModel& model, double x) {
    if (model.kind != AsymptoteKind::DLarge) {
        return log10_asymptote(model, x);
    }
    require_positive_argument(x);
    return log10_asymptote(model, x / model.h) - std::log10(model.h);
}

double asymptote_gap_log10(double h, double m1, double x) {
    return log10_density_asymptote(AsymptoteModel::d_large(h, m1), x) -
           log10_asymptote(AsymptoteModel::c_large(), x);
}

std::vector<double> gamma_profile(const Distribution& f) {
    const double h = f.grid().h();
    std::vector<double> gamma(f.values().begin(), f.values().end());
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        gamma[k] *= std::exp(kDecay * static_cast<double>(k + 1) * h);
    }
    return gamma;
}

MonotonicityReport complete_monotonicity_check(std::span<const double> values, int max_order) {
    if (max_order < 1) {
        throw ValidationError("monotonicity order must be at least 1");
    }
    double scale = 0.0;
    for (double v : values) {
        scale = std::max(scale, std::abs(v));
    }
    const double tol = -1e-12 * scale;

    MonotonicityReport report;
    std::vector<double> diff(values.begin(), values.end());
    for (int k = 1; k <= max_order; ++k) {
        if (diff.size() < 2) {
            // No differences of this order exist; the condition holds vacuously.
            report.order_satisfied = k;
            continue;
        }
        for (std::size_t n = 0; n + 1 < diff.size(); ++n) {
            diff[n] = diff[n + 1] - diff[n];
        }
        diff.pop_back();
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t n = 0; n < diff.size(); ++n) {
            if (sign * diff[n] < tol) {
                report.first_violation = std::make_pair(k, n + 1);
                return report;
            }
        }
        report.order_satisfied = k;
    }
    return report;
}

std::vector<double> relative_distance(const Distribution& f_t, const Distribution& f_inf,
                                      std::span<const std::size_t> indices) {
    if (!(f_t.grid() == f_inf.grid())) {
        throw ValidationError("relative distance needs distributions on the same grid");
    }
    std::vector<double> mu;
    mu.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i < 1 || i > f_inf.size()) {
            throw ValidationError("index " + std::to_string(i) + " outside the grid");
        }
        const double ref = f_inf[i - 1];
        if (!(ref > 0.0)) {
            throw ValidationError("equilibrium vanishes at index " + std::to_string(i));
        }
        mu.push_back(std::abs(f_t[i - 1] - ref) / ref);
    }
    return mu;
}

double convergence_rate(double mu1, double mu2, double t1, double t2) {
    if (!(mu1 > 0.0) || !(mu2 > 0.0)) {
        throw ValidationError("relative distances must be positive");
    }
    if (!(t2 > t1)) {
        throw ValidationError("convergence rate needs t2 > t1");
    }
    return std::log(mu1 / mu2) / (t2 - t1);
}

RateTable rate_table(const Trajectory& trajectory, const Distribution& f_inf,
                     std::span<const double> sizes, std::span<const double> times) {
    RateTable table;
    table.sizes.assign(sizes.begin(), sizes.end());
    table.times.assign(times.begin(), times.end());

    std::vector<std::size_t> indices;
    for (double x : sizes) {
        indices.push_back(f_inf.grid().index_of(x));
    }
    table.mu.assign(sizes.size(), std::vector<double>(times.size(), 0.0));
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto mu = relative_distance(trajectory.at(times[k]).f, f_inf, indices);
        for (std::size_t s = 0; s < sizes.size(); ++s) {
            table.mu[s][k] = mu[s];
        }
    }
    table.delta.assign(sizes.size(), {});
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        for (std::size_t k = 0; k + 1 < times.size(); ++k) {
            const double a = table.mu[s][k];
            const double b = table.mu[s][k + 1];
            if (a > 0.0 && b > 0.0) {
                table.delta[s].push_back(convergence_rate(a, b, times[k], times[k + 1]));
            } else {
                table.delta[s].push_back(std::nullopt);
            }
        }
    }
    return table;
}

std::vector<RefinementRow> grid_refinement_study(double m1, std::span<const double> h_list, double L,
                                                 std::span<const double> x_points,
                                                 const RecursionOptions& options) {
    for (std::size_t k = 1; k < h_list.size(); ++k) {
        if (!(h_list[k] < h_list[k - 1])) {
            throw ValidationError("grid spacings must be listed in descending order");
        }
    }
    const AsymptoteModel c_large = AsymptoteModel::c_large();
    std::vector<RefinementRow> rows;
    for (double h : h_list) {
        const Grid grid = Grid::from_length(h, L);
        const EquilibriumSequence seq = equilibrium_for_mass(m1, h, grid.N(), options);
        for (double x : x_points) {
            const std::size_t i = grid.index_of(x);
            const double density = seq.values[i - 1] / h;
            const double log_c = log10_asymptote(c_large, x);
            const double log_d = log10_density_asymptote(AsymptoteModel::d_large(h, m1), x);
            const double log_f = std::log10(density);
            rows.push_back(RefinementRow{h, x, log_f, log_c, log_d, std::abs(log_f - log_c),
                                         std::abs(log_d - log_c)});
        }
    }
    return rows;
}

SlopeFit loglog_slope(const Distribution& f, double x_min, double x_max) {
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    std::size_t n = 0;
    const Grid& grid = f.grid();
    for (std::size_t i = 1; i <= grid.N(); ++i) {
        const double x = grid.x(i);
        if (x < x_min || x > x_max || !(f[i - 1] > 0.0)) {
            continue;
        }
        const double lx = std::log10(x);
        const double ly = std::log10(f[i - 1]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) {
        throw ValidationError("slope fit needs at least two positive points in the window");
    }
    const double dn = static_cast<double>(n);
    const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    return SlopeFit{slope, (sy - slope * sx) / dn, n};
}

}  // namespace coagfrag
