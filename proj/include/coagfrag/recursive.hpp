#pragma once

// Exact equilibrium of the discrete model by forward recursion.
//
// Given the number m0 in (0,1):
//   b_1     = (m0 - m0^2) / 2
//   f_i     = (2 b_i + sum_{j<i} f_j f_{i-j}) / (1 + 2 m0)
//   b_{i+1} = b_i - f_i / (i + 1)
// The sequence is forward-closed: f_1..f_M do not depend on M.

#include <cstddef>
#include <optional>
#include <vector>

#include "coagfrag/grid.hpp"

namespace coagfrag {

enum class RecursionPrecision {
    Double,
    /// 113-bit significand. b_i is tracked by subtraction from b_1 ~ 0.1, so double
    /// precision bottoms out near |f_i| ~ 1e-17; quad pushes that to ~1e-35.
    Quad,
};

struct RecursionOptions {
    RecursionPrecision precision = RecursionPrecision::Double;
    /// Compare the subtraction-tracked b_i with a backward re-sum of its definition.
    bool monitor_cancellation = false;
};

struct EquilibriumSequence {
    double h = 1.0;
    double m0 = 0.0;
    /// Mass implied by the mass-number relation, h m0 / (1 - m0)^3.
    double m1 = 0.0;
    /// f_1..f_M (values[i-1] = f_i^h).
    std::vector<double> values;
    /// b_1..b_{M+1}; b.back() is the tail value left after the last term.
    std::vector<double> b;
    /// First 1-based index where the tracked b_i and sum_{j=i}^{M} f_j/(j+1) disagree by more
    /// than 1e-8 relative. The re-sum drops the tail beyond M, so indices close to M also
    /// flag; take M well past the range of interest. Only filled when monitoring was requested.
    std::optional<std::size_t> cancellation_onset;

    std::size_t size() const noexcept { return values.size(); }
    double tail_b() const noexcept { return b.empty() ? 0.0 : b.back(); }

    /// Embed the first N terms as a distribution f_i = f_i^h / h on a grid of spacing h.
    Distribution as_density(std::size_t N) const;
};

/// Unique root m0 in (0,1) of m0/(1-m0)^3 = m1/h, by 60 bisection steps.
double solve_m0(double m1, double h);

/// m1 = h m0 / (1 - m0)^3.
double mass_from_m0(double m0, double h);

EquilibriumSequence equilibrium_sequence(double m0, double h, std::size_t M,
                                         const RecursionOptions& options = {});

/// Convenience: solve_m0 followed by the recursion.
EquilibriumSequence equilibrium_for_mass(double m1, double h, std::size_t M,
                                         const RecursionOptions& options = {});

/// sum_i (ih)^k f_i^h (k = 0: number, k = 1: mass).
double moment(const EquilibriumSequence& seq, int k);

struct SmallSizeIndicator {
    double f1_exact;    ///< m0 (1 - m0) / (1 + 2 m0)
    double f1_leading;  ///< (1/3) (h/m1)^{1/3}
};

SmallSizeIndicator small_size_indicator(double h, double m1);

}  // namespace coagfrag
