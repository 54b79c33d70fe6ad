#pragma once

// Discrete coagulation/fragmentation operators of the truncated, grid-discretized model
// with constant coagulation rate and fragmentation rate 2/(i+j+1) (p = q = 1):
//
//   df_i/dt = h sum_{j<i} f_{i-j} f_j - 2h f_i sum_{j<=N-i} f_j      (coagulation, Q_C)
//             - f_i + 2 sum_{j>=i} f_j/(j+1)                          (fragmentation, Q_F)
//
// Indices are 1-based in every formula; storage is 0-based (values[i-1] = f_i).

#include <span>
#include <vector>

#include "coagfrag/grid.hpp"

namespace coagfrag {

namespace kernels {

double moment(std::span<const double> f, double h, int k, MassConvention convention);

std::vector<double> coagulation(std::span<const double> f, double h);
std::vector<double> fragmentation(std::span<const double> f);
std::vector<double> full_rhs(std::span<const double> f, double h);

/// (Sf)_i = f_i - 2 sum_{j>=i} f_j/(j+1); equals -fragmentation(f).
std::vector<double> apply_S(std::span<const double> f);

/// (p(f,g))_i = h sum_{j<i} f_j g_{i-j} - f_i h sum_{j<=N-i} g_j - g_i h sum_{j<=N-i} f_j.
std::vector<double> bilinear_p(std::span<const double> f, std::span<const double> g, double h);

/// Reverse cumulative sum R_i = sum_{j=i}^{N} f_j/(j+1), accumulated from j = N downwards.
std::vector<double> fragmentation_tail(std::span<const double> f);

/// Prefix sums P[k] = sum_{j=1}^{k} f_j with P[0] = 0 (length N+1).
std::vector<double> prefix_sums(std::span<const double> f);

}  // namespace kernels

template <GridFunction F>
double moment(const F& f, int k, MassConvention convention) {
    return kernels::moment(f.values(), f.grid().h(), k, convention);
}

template <GridFunction F>
RateVector coagulation_rhs(const F& f) {
    return RateVector(f.grid(), kernels::coagulation(f.values(), f.grid().h()));
}

template <GridFunction F>
RateVector fragmentation_rhs(const F& f) {
    return RateVector(f.grid(), kernels::fragmentation(f.values()));
}

template <GridFunction F>
RateVector full_rhs(const F& f) {
    return RateVector(f.grid(), kernels::full_rhs(f.values(), f.grid().h()));
}

template <GridFunction F>
RateVector apply_S(const F& f) {
    return RateVector(f.grid(), kernels::apply_S(f.values()));
}

void require_same_grid(const Grid& a, const Grid& b);

template <GridFunction F, GridFunction G>
RateVector apply_p(const F& f, const G& g) {
    require_same_grid(f.grid(), g.grid());
    return RateVector(f.grid(), kernels::bilinear_p(f.values(), g.values(), f.grid().h()));
}

/// A normalized solution mapped to general parameters (p, q, m1).
struct RescaledSolution {
    Distribution f;
    double size_scale;       ///< x_general = size_scale * x_normalized
    double amplitude_scale;  ///< f_general = amplitude_scale * f_normalized
    double time_scale;       ///< t_normalized = time_scale * t_general; metadata only
};

/// Map a p = q = m1 = 1 solution to parameters (rates.p, rates.q, m1).
/// f_{p,q}(x) = p^2/(m1 q^2) f_{1,1}(p x / (m1 q)), so the grid spacing becomes h m1 q / p.
RescaledSolution rescale_solution(const Distribution& f, const ModelRates& rates, double m1);

/// Inverse of rescale_solution: bring a (p, q, m1) solution back to the normalized frame.
RescaledSolution normalize_solution(const Distribution& f, const ModelRates& rates, double m1);

}  // namespace coagfrag
