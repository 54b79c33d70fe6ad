#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coagfrag/evolution.hpp"
#include "coagfrag/grid.hpp"
#include "coagfrag/recursive.hpp"

namespace coagfrag {

enum class AsymptoteKind {
    CSmall,  ///< (1/(3 Gamma(4/3))) x^{-2/3} e^{-4x/27}, continuous equilibrium as x -> 0
    CLarge,  ///< (9/(16 Gamma(3/2))) x^{-3/2} e^{-4x/27}, continuous equilibrium as x -> inf
    DLarge,  ///< C z^{-n} n^{-3/2}, z = 1 + 4h/(27 m1), C = (9/8) sqrt(m1 z / (h pi))
    Niwa,    ///< N^{-1} exp[-(N/N_P)(1 - e^{-N/N_P}/2)], unnormalized
};

struct AsymptoteModel {
    AsymptoteKind kind = AsymptoteKind::CLarge;
    double m1 = 1.0;   ///< DLarge only
    double h = 1.0;    ///< DLarge only
    double n_p = 1.0;  ///< Niwa only

    static AsymptoteModel c_small() { return {AsymptoteKind::CSmall}; }
    static AsymptoteModel c_large() { return {AsymptoteKind::CLarge}; }
    static AsymptoteModel d_large(double h, double m1) { return {AsymptoteKind::DLarge, m1, h}; }
    static AsymptoteModel niwa(double n_p) { return {AsymptoteKind::Niwa, 1.0, 1.0, n_p}; }

    void validate() const;
};

AsymptoteKind parse_asymptote_kind(const std::string& name);
std::string to_string(AsymptoteKind kind);

/// Direct evaluation. The argument is the size x, except for DLarge where it is the
/// sequence index n (the result is then on the f_n^h scale).
double asymptote_eval(const AsymptoteModel& model, double arg);

/// log10 of asymptote_eval, computed in log space (finite far past double underflow).
double log10_asymptote(const AsymptoteModel& model, double arg);

/// log10 of the asymptote as a density at size x. Identical to log10_asymptote except
/// for DLarge, which is evaluated at n = x/h and divided by h.
double log10_density_asymptote(const AsymptoteModel& model, double x);

/// log10 DLarge density minus log10 CLarge at size x; tends to 0 as h -> 0 at fixed x.
double asymptote_gap_log10(double h, double m1, double x);

/// gamma_i = f_i exp(4 i h / 27): the completely monotone factor of an equilibrium.
std::vector<double> gamma_profile(const Distribution& f);

struct MonotonicityReport {
    int order_satisfied = 0;
    /// (order, 1-based index) of the first sign violation.
    std::optional<std::pair<int, std::size_t>> first_violation;
};

/// Checks (-1)^k (Delta^k f)_n >= -1e-12 max|f| for k = 1..max_order, with
/// (Delta f)_n = f_{n+1} - f_n.
MonotonicityReport complete_monotonicity_check(std::span<const double> values, int max_order);

/// mu_i = |f_t,i - f_inf,i| / f_inf,i at 1-based indices.
std::vector<double> relative_distance(const Distribution& f_t, const Distribution& f_inf,
                                      std::span<const std::size_t> indices);

/// delta = ln(mu1/mu2) / (t2 - t1).
double convergence_rate(double mu1, double mu2, double t1, double t2);

struct RateTable {
    std::vector<double> sizes;
    std::vector<double> times;
    /// mu[s][k]: relative distance at sizes[s], times[k].
    std::vector<std::vector<double>> mu;
    /// delta[s][k]: rate between times[k] and times[k+1]; empty where a mu is 0.
    std::vector<std::vector<std::optional<double>>> delta;
};

RateTable rate_table(const Trajectory& trajectory, const Distribution& f_inf,
                     std::span<const double> sizes, std::span<const double> times);

struct RefinementRow {
    double h;
    double x;
    double log10_density;   ///< recursive equilibrium, f_i^h / h at i = x/h
    double log10_c_large;
    double log10_d_large;   ///< density form of the discrete asymptote
    double density_gap;     ///< |log10_density - log10_c_large|
    double asymptote_gap;   ///< |log10_d_large - log10_c_large|
};

/// Recursive equilibria for each h (descending, each dividing L) compared with the
/// continuous large-size asymptote at the requested sizes (all within (0, L]).
std::vector<RefinementRow> grid_refinement_study(double m1, std::span<const double> h_list, double L,
                                                 std::span<const double> x_points,
                                                 const RecursionOptions& options = {});

struct SlopeFit {
    double slope;
    double intercept;
    std::size_t points;
};

/// Least-squares line through (log10 x_i, log10 f_i) for grid points with x in [x_min, x_max].
SlopeFit loglog_slope(const Distribution& f, double x_min, double x_max);

}  // namespace coagfrag
